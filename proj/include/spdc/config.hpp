#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spdc/montecarlo.hpp"
#include "spdc/phasematch.hpp"
#include "spdc/spectral.hpp"

namespace spdc {

// Werner parameters of the polarization noise model. The two-converter scans
// carry the spectral-distinguishability penalty; the single-converter scans
// are limited only by analyzer quality, hence their own (larger) parameters.
struct StateNoise {
  double v_pzt = 0.93;
  double v_analyzer = 0.94;
  double v_single_h = 0.996008;
  double v_single_v = 0.960784;
  double v_chsh = 0.9214;
};

struct ChshPlan {
  std::array<double, 4> angles{0.0, 0.7853981633974483, 0.39269908169872414,
                               1.1780972450961724};  // a, a', b, b'
  double counts_per_setting = 5755.0;
  double pump_power_mw = 4.4;
};

struct FringePlan {
  double pump_power_mw = 80.0;
  double bin_time_ms = 20.0;
  bool subtract_background = true;
};

struct PolscanPlan {
  double pump_power_mw = 80.0;
  double dwell_ms = 200.0;
};

struct ExperimentConfig {
  std::string name;
  std::uint64_t seed = 1;
  double temperature_c = 183.6;  // operating point, the collinear anchor
  CrystalSpec crystal;
  RateBudget budget;
  std::optional<RateBudget> budget_no_if;
  DetectorModel detector_signal;
  DetectorModel detector_idler;
  double coincidence_window_ns = 4.0;
  double accidental_offset_ns = 6.0;
  StateNoise noise;
  std::vector<SpectralFilter> filters;
  ChshPlan chsh;
  FringePlan fringe;
  PolscanPlan polscan;
  bool analytic = false;  // infinite-statistics mode: expected values, no sampling

  nlohmann::json raw;  // original document, hashed into every artifact

  std::string config_hash() const;
  void validate() const;
};

// Loads a config JSON; a "sellmeier_file" entry is resolved relative to the
// config's directory, otherwise the built-in congruent LiNbO3 set is used.
ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(const nlohmann::json& j,
                                         const std::string& base_dir = ".");

// FNV-1a 64 over a canonical (sorted-key) serialization.
std::string fnv1a_hex(const std::string& text);

}  // namespace spdc
