#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "spdc/config.hpp"
#include "spdc/scan.hpp"

namespace spdc {

// Raw coincidence counts plus the displaced-window background estimate for the
// same bins. Background subtraction is always an explicit step on top.
struct CountScan {
  ScanResult counts;
  ScanResult accidentals;
};

ScanResult subtract_background(const CountScan& scan);

// Coincidence rate vs relative phase phi with crossed analyzers; the state
// sweeps through the singlet at phi = 0 and the triplet at phi = pi.
CountScan pzt_fringe_experiment(const ExperimentConfig& cfg,
                                const std::vector<double>& phis, double bin_time_ms,
                                std::uint64_t seed);

enum class ScanState { automatic, singlet, triplet, converter_h, converter_v };

// Coincidence rate vs idler analyzer angle at fixed signal analyzer angle.
// With 'automatic', theta_s = -pi/4 or +pi/4 selects the corresponding
// single-down-converter product state, anything else the singlet.
CountScan analyzer_scan_experiment(const ExperimentConfig& cfg,
                                   const std::vector<double>& theta_i,
                                   double theta_s, ScanState state,
                                   std::uint64_t seed);

struct ChshRun {
  double S = 0.0;
  double sigma_S = 0.0;
  std::array<double, 4> correlators{};
  std::array<double, 4> correlator_sigmas{};
  // Per correlator: counts at (x,y), (x_perp,y_perp), (x,y_perp), (x_perp,y).
  std::array<std::array<double, 4>, 4> counts{};
  std::array<std::array<double, 4>, 4> accidentals{};
  double duration_per_setting_s = 0.0;
  double werner_v = 1.0;
};

// Sixteen coincidence measurements at equal integration time, chosen so the
// mean coincidence count per setting matches counts_per_setting; correlators
// and S from background-subtracted counts with Poisson error propagation.
ChshRun chsh_experiment(const ExperimentConfig& cfg,
                        const std::array<double, 4>& angles,
                        double counts_per_setting, std::uint64_t seed,
                        double werner_v_override = -1.0);

// Visibility vs mirror displacement; the envelope width encodes the pair
// bandwidth set by phase matching and the configured filters.
ScanResult bandwidth_scan_experiment(const ExperimentConfig& cfg,
                                     double half_range_mm, int points);

// Pair bandwidth implied by the config: pm_bandwidth at the operating
// temperature combined with the configured filters.
double config_pair_bandwidth_ghz(const ExperimentConfig& cfg);

void to_json(nlohmann::json& j, const ChshRun& run);

}  // namespace spdc
