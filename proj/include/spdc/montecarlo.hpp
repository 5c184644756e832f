#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include <nlohmann/json_fwd.hpp>

#include "spdc/polarization.hpp"
#include "spdc/timetags.hpp"

namespace spdc {

struct DetectorModel {
  enum class Mode { free_running_trigger, gated };

  double quantum_efficiency = 1.0;
  double dark_count_prob_per_gate = 0.0;
  double gate_duration_ns = 20.0;
  Mode mode = Mode::gated;

  void validate() const;
};

// Loss chain from the crystal to the fiber-coupled, detected rates.
// signal_path_efficiency covers propagation and fiber coupling of the signal;
// filter_transmission is the additional narrowband-filter factor (transmission
// times spectral acceptance); idler_path_efficiency is conditioned on the
// signal being fiber-coupled. idler_unconditional_efficiency is the coupling
// probability for idlers whose conjugate signal was lost, which feeds the
// accidental background.
struct RateBudget {
  double pump_power_mw = 1.0;
  double pair_rate_per_s_per_mw = 2.0e7;
  double signal_path_efficiency = 2.55e-3;
  double idler_path_efficiency = 0.475;
  double filter_transmission = 1.0;
  double idler_unconditional_efficiency = 0.0;

  void validate() const;
};

// State and analyzer settings applied per generated pair. Without this the
// simulation models single-pass operation with no analyzers in the paths.
struct PolarizationSetup {
  BiphotonState state;
  AnalyzerSetting analyzers;
};

// Analytic per-event probabilities and rates implied by a configuration;
// the Monte Carlo below realizes exactly these numbers.
struct CoincidenceExpectation {
  double pair_rate_per_s = 0.0;           // at pump power, at the crystal
  double signal_event_rate_per_s = 0.0;   // detected triggers incl. trigger darks
  double conjugate_click_prob = 0.0;      // idler click from the same pair, per trigger
  double background_click_rate_per_s = 0.0;  // uncorrelated idler clicks in live gates
  double background_prob_per_window = 0.0;   // darks + accidentals in one window
  double coincidence_prob_per_trigger = 0.0; // >= 1 click in the nominal window
  double coincidence_rate_per_s = 0.0;
};

CoincidenceExpectation expected_rates(const RateBudget& budget,
                                      const DetectorModel& signal_detector,
                                      const DetectorModel& idler_detector,
                                      const std::optional<PolarizationSetup>& setup,
                                      double coincidence_window_ns);

// Event-level simulation: pairs as a Poisson process, per-pair four-outcome
// analyzer draw, per-arm losses, signal triggers opening idler gates centered
// on the nominal coincidence window, gated dark counts and uncorrelated-photon
// background injected per gate. Bit-reproducible from the seed.
std::pair<TimeTagStream, TimeTagStream> simulate_timetags(
    const RateBudget& budget, const DetectorModel& signal_detector,
    const DetectorModel& idler_detector,
    const std::optional<PolarizationSetup>& setup, double duration_s,
    std::uint64_t seed, double coincidence_window_ns = 4.0);

// Signal tags with at least one idler tag in [t + offset, t + offset + window];
// greedy earliest pairing, each idler tag matched at most once.
std::uint64_t count_coincidences(const TimeTagStream& signal,
                                 const TimeTagStream& idler, double window_ns,
                                 double offset_ns = 0.0);

// Background estimate from a window displaced beyond the true coincidence
// peak; requires offset > window.
std::uint64_t accidental_estimate(const TimeTagStream& signal,
                                  const TimeTagStream& idler, double window_ns,
                                  double offset_ns);

struct ConditionalProbability {
  double value = 0.0;
  bool clamped = false;  // negative numerator clamped to zero
};

// (coincidences - accidentals) / signal_singles, optionally corrected by the
// idler detector efficiency.
ConditionalProbability conditional_probability(std::uint64_t coincidences,
                                               std::uint64_t accidentals,
                                               std::uint64_t signal_singles,
                                               double detector_efficiency = 1.0);

// Analytic (non-stochastic) loss-chain report. Per-mW numbers are quoted for
// the narrowband single-pass configuration conventions.
struct RateReport {
  double pump_power_mw = 0.0;
  double pair_rate_per_s_per_mw = 0.0;
  double signal_in_fiber_unfiltered_per_s_per_mw = 0.0;  // detector-corrected singles
  double signal_in_fiber_per_s_per_mw = 0.0;
  double detected_signal_per_s_per_mw = 0.0;
  double conditional_probability = 0.0;        // background-subtracted
  double raw_conditional_probability = 0.0;    // incl. per-window background
  double coincidence_per_s_per_mw = 0.0;
  double inferred_pair_flux_per_s_per_mw = 0.0;
  double accidental_prob_per_window = 0.0;     // at the configured pump power
  double idler_path_efficiency_implied = 0.0;  // conditional / detector QE
};

RateReport rate_budget_report(const RateBudget& budget,
                              const DetectorModel& signal_detector,
                              const DetectorModel& idler_detector,
                              double coincidence_window_ns = 4.0);

void to_json(nlohmann::json& j, const RateReport& r);
void to_json(nlohmann::json& j, const DetectorModel& d);
void from_json(const nlohmann::json& j, DetectorModel& d);
void to_json(nlohmann::json& j, const RateBudget& b);
void from_json(const nlohmann::json& j, RateBudget& b);

}  // namespace spdc
