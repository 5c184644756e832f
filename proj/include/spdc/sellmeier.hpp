#pragma once

#include <array>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace spdc {

enum class Polarization { ordinary, extraordinary };

// One resonance term of a temperature-dependent Sellmeier expansion.
struct SellmeierPole {
  double numerator = 0.0;
  double numerator_t = 0.0;  // coefficient of f(T) added to the numerator
  double center = 0.0;       // pole position, um
  double center_t = 0.0;     // coefficient of f(T) added to the pole position
};

// n^2(lambda, T) = constant + constant_t*f
//                + sum_j (num_j + num_t_j*f) / (lambda^2 - (center_j + center_t_j*f)^2)
//                + lambda_sq * lambda^2
// with f(T) = (T - t_ref)(T + t_sum), T in deg C, lambda in um. This covers the
// published congruent-LiNbO3 parametrizations for both polarizations without
// inventing any thermo-optic model of our own.
struct IndexFormula {
  double constant = 0.0;
  double constant_t = 0.0;
  double lambda_sq = 0.0;
  std::vector<SellmeierPole> poles;
  double t_ref = 24.5;
  double t_sum = 570.82;

  double n_squared(double lambda_um, double temp_c) const;
};

struct SellmeierSet {
  std::string name;
  std::string source;  // citation for the coefficient vintage
  std::array<double, 2> wavelength_range_um{0.0, 0.0};
  std::array<double, 2> temperature_range_c{0.0, 0.0};
  IndexFormula ordinary;
  IndexFormula extraordinary;

  void check_range(double lambda_um, double temp_c) const;  // throws std::out_of_range
};

// Principal refractive index. lambda in um, T in deg C.
double refractive_index(double lambda_um, double temp_c, Polarization pol,
                        const SellmeierSet& set);

// Extraordinary-wave index for propagation at theta_from_axis from the optic
// axis, from the uniaxial index ellipsoid:
//   n(theta) = [sin^2(theta)/n_e^2 + cos^2(theta)/n_o^2]^(-1/2)
double angle_dependent_index(double lambda_um, double temp_c,
                             double theta_from_axis_rad, const SellmeierSet& set);

// k = 2 pi n / lambda in rad/um.
double wavevector(double lambda_um, double temp_c, Polarization pol,
                  const SellmeierSet& set);

void to_json(nlohmann::json& j, const SellmeierSet& set);
void from_json(const nlohmann::json& j, SellmeierSet& set);

SellmeierSet load_sellmeier_file(const std::string& path);

// Built-in coefficient set for congruent lithium niobate (Jundt 1997 n_e,
// Edwards & Lawrence 1984 n_o); identical to data/lithium_niobate_sellmeier.json.
const SellmeierSet& congruent_linbo3();

}  // namespace spdc
