#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

namespace spdc {

struct ScanResult;

// Two-qubit polarization density operator in the basis {HH, HV, VH, VV}
// (signal x idler).
struct BiphotonState {
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();

  double trace_error() const;
  double hermiticity_error() const;
  double min_eigenvalue() const;
  bool is_physical(double tol = 1e-10) const;
};

enum class Arm { signal, idler };

// Analyzer angles, measured from the balanced orientation that transmits equal
// light from the two pumping directions (45 deg from horizontal in the lab
// frame). Each analyzer is a half-wave plate followed by a horizontally
// transmitting polarizer, so settings are pi-periodic.
struct AnalyzerSetting {
  double theta_signal = 0.0;
  double theta_idler = 0.0;
};

// Pure state a|HH> + b|VV> from the two coherently pumped down-converter
// amplitudes; normalized internally.
BiphotonState dual_pump_state(std::complex<double> pair_amp_path1,
                              std::complex<double> pair_amp_path2);

// sqrt(balance)|HV> - e^{i phi} sqrt(1-balance)|VH>, normalized. balance = 1/2
// gives the singlet at phi = 0 and the triplet at phi = pi.
BiphotonState singlet_family_state(double phi, double balance = 0.5);

// Conjugation by the half-wave-plate Jones matrix on one arm.
BiphotonState apply_local_rotation(const BiphotonState& state, Arm arm,
                                   double waveplate_angle);

// Tr[rho P(theta_S) x P(theta_I)] with P projecting onto the transmitted
// linear polarization of the analyzer at that setting.
double coincidence_probability(const BiphotonState& state,
                               const AnalyzerSetting& analyzers);

// {pass-pass, pass-fail, fail-pass, fail-fail} outcome probabilities at the
// given setting; sums to 1 for any physical state.
std::array<double, 4> four_outcome_probabilities(const BiphotonState& state,
                                                 const AnalyzerSetting& analyzers);

// v rho + (1 - v) I/4.
BiphotonState werner_mix(const BiphotonState& state, double v);

struct ChshResult {
  double S = 0.0;
  std::array<double, 4> correlators{};  // E(a,b), E(a,b'), E(a',b), E(a',b')
};

// CHSH statistic from analytic coincidence probabilities. Each correlator is
// (P++ + P-- - P+- - P-+) normalized by the four-outcome sum.
ChshResult chsh_S(const BiphotonState& state, double a, double a_prime, double b,
                  double b_prime);

// Fringe visibility (max-min)/(max+min) of a least-squares sinusoid fitted to
// the scan; raw extrema are never used. Throws std::domain_error on a
// non-positive fitted offset.
double fringe_visibility(const ScanResult& scan);

void to_json(nlohmann::json& j, const BiphotonState& state);
void from_json(const nlohmann::json& j, BiphotonState& state);

}  // namespace spdc
