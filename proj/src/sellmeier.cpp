#include "spdc/sellmeier.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "spdc/constants.hpp"

namespace spdc {

double IndexFormula::n_squared(double lambda_um, double temp_c) const {
  const double f = (temp_c - t_ref) * (temp_c + t_sum);
  const double lam2 = lambda_um * lambda_um;
  double n2 = constant + constant_t * f + lambda_sq * lam2;
  for (const auto& p : poles) {
    const double center = p.center + p.center_t * f;
    n2 += (p.numerator + p.numerator_t * f) / (lam2 - center * center);
  }
  return n2;
}

void SellmeierSet::check_range(double lambda_um, double temp_c) const {
  std::ostringstream msg;
  if (lambda_um < wavelength_range_um[0] || lambda_um > wavelength_range_um[1]) {
    msg << "wavelength " << lambda_um << " um outside validity ["
        << wavelength_range_um[0] << ", " << wavelength_range_um[1] << "] um of set '"
        << name << "'";
    throw std::out_of_range(msg.str());
  }
  if (temp_c < temperature_range_c[0] || temp_c > temperature_range_c[1]) {
    msg << "temperature " << temp_c << " C outside validity ["
        << temperature_range_c[0] << ", " << temperature_range_c[1] << "] C of set '"
        << name << "'";
    throw std::out_of_range(msg.str());
  }
}

double refractive_index(double lambda_um, double temp_c, Polarization pol,
                        const SellmeierSet& set) {
  set.check_range(lambda_um, temp_c);
  const IndexFormula& formula =
      (pol == Polarization::ordinary) ? set.ordinary : set.extraordinary;
  const double n2 = formula.n_squared(lambda_um, temp_c);
  if (!(n2 > 1.0)) {
    throw std::domain_error("sellmeier evaluation gave non-physical n^2 = " +
                            std::to_string(n2));
  }
  return std::sqrt(n2);
}

double angle_dependent_index(double lambda_um, double temp_c,
                             double theta_from_axis_rad, const SellmeierSet& set) {
  if (theta_from_axis_rad < 0.0 || theta_from_axis_rad > kPi / 2.0 + 1e-12) {
    throw std::out_of_range("theta_from_axis must lie in [0, pi/2]");
  }
  const double ne = refractive_index(lambda_um, temp_c, Polarization::extraordinary, set);
  const double no = refractive_index(lambda_um, temp_c, Polarization::ordinary, set);
  const double s = std::sin(theta_from_axis_rad);
  const double c = std::cos(theta_from_axis_rad);
  return 1.0 / std::sqrt(s * s / (ne * ne) + c * c / (no * no));
}

double wavevector(double lambda_um, double temp_c, Polarization pol,
                  const SellmeierSet& set) {
  return kTwoPi * refractive_index(lambda_um, temp_c, pol, set) / lambda_um;
}

namespace {

void formula_to_json(nlohmann::json& j, const IndexFormula& f) {
  j = nlohmann::json{{"constant", f.constant},
                     {"constant_t", f.constant_t},
                     {"lambda_sq", f.lambda_sq},
                     {"t_ref", f.t_ref},
                     {"t_sum", f.t_sum}};
  nlohmann::json poles = nlohmann::json::array();
  for (const auto& p : f.poles) {
    poles.push_back({{"numerator", p.numerator},
                     {"numerator_t", p.numerator_t},
                     {"center", p.center},
                     {"center_t", p.center_t}});
  }
  j["poles"] = poles;
}

IndexFormula formula_from_json(const nlohmann::json& j) {
  IndexFormula f;
  f.constant = j.at("constant").get<double>();
  f.constant_t = j.value("constant_t", 0.0);
  f.lambda_sq = j.value("lambda_sq", 0.0);
  f.t_ref = j.value("t_ref", 24.5);
  f.t_sum = j.value("t_sum", 570.82);
  for (const auto& pj : j.at("poles")) {
    SellmeierPole p;
    p.numerator = pj.at("numerator").get<double>();
    p.numerator_t = pj.value("numerator_t", 0.0);
    p.center = pj.at("center").get<double>();
    p.center_t = pj.value("center_t", 0.0);
    f.poles.push_back(p);
  }
  return f;
}

}  // namespace

void to_json(nlohmann::json& j, const SellmeierSet& set) {
  j = nlohmann::json{{"name", set.name},
                     {"source", set.source},
                     {"valid_wavelength_um", set.wavelength_range_um},
                     {"valid_temperature_c", set.temperature_range_c}};
  nlohmann::json coeff;
  formula_to_json(coeff["ordinary"], set.ordinary);
  formula_to_json(coeff["extraordinary"], set.extraordinary);
  j["coefficients"] = coeff;
}

void from_json(const nlohmann::json& j, SellmeierSet& set) {
  set.name = j.at("name").get<std::string>();
  set.source = j.at("source").get<std::string>();
  set.wavelength_range_um = j.at("valid_wavelength_um").get<std::array<double, 2>>();
  set.temperature_range_c = j.at("valid_temperature_c").get<std::array<double, 2>>();
  const auto& coeff = j.at("coefficients");
  set.ordinary = formula_from_json(coeff.at("ordinary"));
  set.extraordinary = formula_from_json(coeff.at("extraordinary"));
}

SellmeierSet load_sellmeier_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sellmeier file: " + path);
  nlohmann::json j;
  in >> j;
  return j.get<SellmeierSet>();
}

const SellmeierSet& congruent_linbo3() {
  static const SellmeierSet set = [] {
    // Same content as data/lithium_niobate_sellmeier.json.
    const char* text = R"JSON({
      "name": "congruent_linbo3",
      "source": "n_e: D. H. Jundt, Opt. Lett. 22, 1553 (1997); n_o: G. J. Edwards and M. Lawrence, Opt. Quantum Electron. 16, 373 (1984)",
      "valid_wavelength_um": [0.4, 5.0],
      "valid_temperature_c": [20.0, 250.0],
      "coefficients": {
        "extraordinary": {
          "constant": 5.35583, "constant_t": 4.629e-7, "lambda_sq": -1.5334e-2,
          "t_ref": 24.5, "t_sum": 570.82,
          "poles": [
            {"numerator": 0.100473, "numerator_t": 3.862e-8, "center": 0.20692, "center_t": -0.89e-8},
            {"numerator": 100.0, "numerator_t": 2.657e-5, "center": 11.34927, "center_t": 0.0}
          ]
        },
        "ordinary": {
          "constant": 4.9048, "constant_t": 2.1429e-8, "lambda_sq": -0.027153,
          "t_ref": 24.5, "t_sum": 570.5,
          "poles": [
            {"numerator": 0.11775, "numerator_t": 2.2314e-8, "center": 0.21802, "center_t": -2.9671e-8}
          ]
        }
      }
    })JSON";
    return nlohmann::json::parse(text).get<SellmeierSet>();
  }();
  return set;
}

}  // namespace spdc
