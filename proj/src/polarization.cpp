#include "spdc/polarization.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "spdc/constants.hpp"
#include "spdc/fit.hpp"
#include "spdc/scan.hpp"

namespace spdc {

namespace {

using Eigen::Matrix2cd;
using Eigen::Matrix4cd;
using Eigen::Vector2cd;
using Eigen::Vector4cd;

Matrix4cd kron(const Matrix2cd& a, const Matrix2cd& b) {
  Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

BiphotonState pure_state(const Vector4cd& psi) {
  const double norm = psi.norm();
  if (norm < 1e-150) throw std::invalid_argument("degenerate zero-amplitude state");
  const Vector4cd u = psi / norm;
  BiphotonState s;
  s.rho = u * u.adjoint();
  return s;
}

// Transmitted-polarization projector of the analyzer at setting theta. The
// balanced reference orientation sits at 45 deg in the lab H/V basis.
Matrix2cd analyzer_projector(double theta) {
  const double a = kPi / 4.0 + theta;
  Vector2cd p(std::cos(a), std::sin(a));
  return p * p.adjoint();
}

}  // namespace

double BiphotonState::trace_error() const {
  return std::fabs(rho.trace().real() - 1.0) + std::fabs(rho.trace().imag());
}

double BiphotonState::hermiticity_error() const {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double BiphotonState::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix4cd> es(0.5 * (rho + rho.adjoint()));
  return es.eigenvalues().minCoeff();
}

bool BiphotonState::is_physical(double tol) const {
  return hermiticity_error() < 1e-12 && trace_error() < 1e-12 &&
         min_eigenvalue() > -tol;
}

BiphotonState dual_pump_state(std::complex<double> pair_amp_path1,
                              std::complex<double> pair_amp_path2) {
  Vector4cd psi = Vector4cd::Zero();
  psi(0) = pair_amp_path1;  // HH
  psi(3) = pair_amp_path2;  // VV
  return pure_state(psi);
}

BiphotonState singlet_family_state(double phi, double balance) {
  if (balance < 0.0 || balance > 1.0)
    throw std::invalid_argument("balance must lie in [0, 1]");
  Vector4cd psi = Vector4cd::Zero();
  psi(1) = std::sqrt(balance);  // HV
  psi(2) = -std::exp(std::complex<double>(0.0, phi)) * std::sqrt(1.0 - balance);  // VH
  return pure_state(psi);
}

BiphotonState apply_local_rotation(const BiphotonState& state, Arm arm,
                                   double waveplate_angle) {
  const double c = std::cos(2.0 * waveplate_angle);
  const double s = std::sin(2.0 * waveplate_angle);
  Matrix2cd hwp;
  hwp << c, s, s, -c;
  const Matrix2cd eye = Matrix2cd::Identity();
  const Matrix4cd u = (arm == Arm::signal) ? kron(hwp, eye) : kron(eye, hwp);
  BiphotonState out;
  out.rho = u * state.rho * u.adjoint();
  return out;
}

double coincidence_probability(const BiphotonState& state,
                               const AnalyzerSetting& analyzers) {
  const Matrix4cd proj =
      kron(analyzer_projector(analyzers.theta_signal),
           analyzer_projector(analyzers.theta_idler));
  const double p = (state.rho * proj).trace().real();
  return std::clamp(p, 0.0, 1.0);
}

std::array<double, 4> four_outcome_probabilities(const BiphotonState& state,
                                                 const AnalyzerSetting& analyzers) {
  const double ts = analyzers.theta_signal;
  const double ti = analyzers.theta_idler;
  const double orth = kPi / 2.0;
  return {coincidence_probability(state, {ts, ti}),
          coincidence_probability(state, {ts, ti + orth}),
          coincidence_probability(state, {ts + orth, ti}),
          coincidence_probability(state, {ts + orth, ti + orth})};
}

BiphotonState werner_mix(const BiphotonState& state, double v) {
  if (v < 0.0 || v > 1.0) throw std::invalid_argument("werner parameter v must lie in [0, 1]");
  BiphotonState out;
  out.rho = v * state.rho + (1.0 - v) * 0.25 * Eigen::Matrix4cd::Identity();
  return out;
}

namespace {

double correlator(const BiphotonState& state, double x, double y) {
  const auto p = four_outcome_probabilities(state, {x, y});
  const double sum = p[0] + p[1] + p[2] + p[3];
  if (sum < 1e-12)
    throw std::domain_error("degenerate analyzer settings: zero four-outcome sum");
  return (p[0] + p[3] - p[1] - p[2]) / sum;
}

}  // namespace

ChshResult chsh_S(const BiphotonState& state, double a, double a_prime, double b,
                  double b_prime) {
  ChshResult r;
  r.correlators = {correlator(state, a, b), correlator(state, a, b_prime),
                   correlator(state, a_prime, b), correlator(state, a_prime, b_prime)};
  r.S = std::fabs(r.correlators[0] - r.correlators[1]) +
        std::fabs(r.correlators[2] + r.correlators[3]);
  return r;
}

double fringe_visibility(const ScanResult& scan) {
  if (scan.points.size() < 5)
    throw std::domain_error("fringe fit needs at least 5 points");
  std::vector<double> xs, ys;
  xs.reserve(scan.points.size());
  ys.reserve(scan.points.size());
  for (const auto& p : scan.points) {
    xs.push_back(p.setting);
    ys.push_back(p.value);
  }
  const SinusoidFit fit = fit_sinusoid(xs, ys);
  if (fit.offset <= 0.0)
    throw std::domain_error("malformed scan: non-positive fitted fringe offset");
  return std::min(1.0, std::fabs(fit.amplitude) / fit.offset);
}

void to_json(nlohmann::json& j, const BiphotonState& state) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < 4; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < 4; ++k)
      row.push_back({state.rho(i, k).real(), state.rho(i, k).imag()});
    rows.push_back(row);
  }
  j = nlohmann::json{{"basis", "HH,HV,VH,VV"}, {"density_matrix", rows}};
}

void from_json(const nlohmann::json& j, BiphotonState& state) {
  const auto& rows = j.at("density_matrix");
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      const auto& cell = rows.at(i).at(k);
      state.rho(i, k) = {cell.at(0).get<double>(), cell.at(1).get<double>()};
    }
}

}  // namespace spdc
