#include "spdc/experiments.hpp"

#include <cmath>
#include <stdexcept>

#include "spdc/constants.hpp"
#include "spdc/rng.hpp"

namespace spdc {

namespace {

struct BinOutcome {
  double counts = 0.0;
  double accidentals = 0.0;
};

// One coincidence measurement at fixed state/analyzers: Monte Carlo streams
// plus displaced-window background estimate, or the analytic expectations in
// infinite-statistics mode.
BinOutcome measure_bin(const ExperimentConfig& cfg, const RateBudget& budget,
                       const PolarizationSetup& setup, double duration_s,
                       std::uint64_t seed) {
  BinOutcome out;
  if (cfg.analytic) {
    const auto e = expected_rates(budget, cfg.detector_signal, cfg.detector_idler,
                                  setup, cfg.coincidence_window_ns);
    out.counts = e.coincidence_rate_per_s * duration_s;
    out.accidentals =
        e.signal_event_rate_per_s * duration_s * e.background_prob_per_window;
    return out;
  }
  const auto streams =
      simulate_timetags(budget, cfg.detector_signal, cfg.detector_idler, setup,
                        duration_s, seed, cfg.coincidence_window_ns);
  out.counts = static_cast<double>(count_coincidences(
      streams.first, streams.second, cfg.coincidence_window_ns, 0.0));
  out.accidentals = static_cast<double>(
      accidental_estimate(streams.first, streams.second, cfg.coincidence_window_ns,
                          cfg.accidental_offset_ns));
  return out;
}

ScanResult make_scan(std::string kind, std::string setting_unit,
                     const ExperimentConfig& cfg, std::uint64_t seed) {
  ScanResult scan;
  scan.kind = std::move(kind);
  scan.setting_unit = std::move(setting_unit);
  scan.value_unit = "counts";
  scan.metadata["config_hash"] = cfg.config_hash();
  scan.metadata["seed"] = seed;
  scan.metadata["mode"] = cfg.analytic ? "analytic" : "poisson";
  return scan;
}

}  // namespace

ScanResult subtract_background(const CountScan& scan) {
  if (scan.counts.points.size() != scan.accidentals.points.size())
    throw std::invalid_argument("count and accidental scans differ in length");
  ScanResult out = scan.counts;
  out.kind += "_subtracted";
  for (size_t i = 0; i < out.points.size(); ++i) {
    const double c = scan.counts.points[i].value;
    const double a = scan.accidentals.points[i].value;
    out.points[i].value = c - a;
    out.points[i].uncertainty = std::sqrt(c + a);
  }
  return out;
}

CountScan pzt_fringe_experiment(const ExperimentConfig& cfg,
                                const std::vector<double>& phis, double bin_time_ms,
                                std::uint64_t seed) {
  RateBudget budget = cfg.budget;
  budget.pump_power_mw = cfg.fringe.pump_power_mw;
  const double bin_s = bin_time_ms * 1e-3;

  CountScan result{make_scan("pzt_fringe", "rad", cfg, seed),
                   make_scan("pzt_fringe_accidentals", "rad", cfg, seed)};
  result.counts.metadata["bin_time_ms"] = bin_time_ms;
  for (size_t i = 0; i < phis.size(); ++i) {
    PolarizationSetup setup;
    setup.state = werner_mix(singlet_family_state(phis[i]), cfg.noise.v_pzt);
    setup.analyzers = {0.0, kPi / 2.0};  // crossed
    const BinOutcome bin =
        measure_bin(cfg, budget, setup, bin_s, mix_seed(seed, i));
    result.counts.points.push_back(
        {phis[i], bin.counts, std::sqrt(std::max(bin.counts, 0.0))});
    result.accidentals.points.push_back(
        {phis[i], bin.accidentals, std::sqrt(std::max(bin.accidentals, 0.0))});
  }
  return result;
}

CountScan analyzer_scan_experiment(const ExperimentConfig& cfg,
                                   const std::vector<double>& theta_i,
                                   double theta_s, ScanState state,
                                   std::uint64_t seed) {
  if (state == ScanState::automatic) {
    const double tol = 1e-9;
    if (std::fabs(theta_s + kPi / 4.0) < tol) state = ScanState::converter_h;
    else if (std::fabs(theta_s - kPi / 4.0) < tol) state = ScanState::converter_v;
    else state = ScanState::singlet;
  }
  BiphotonState rho;
  const char* label = "";
  switch (state) {
    case ScanState::singlet:
      rho = werner_mix(singlet_family_state(0.0), cfg.noise.v_analyzer);
      label = "singlet";
      break;
    case ScanState::triplet:
      rho = werner_mix(singlet_family_state(kPi), cfg.noise.v_analyzer);
      label = "triplet";
      break;
    case ScanState::converter_h:
      rho = werner_mix(singlet_family_state(0.0, 1.0), cfg.noise.v_single_h);
      label = "converter_h";
      break;
    case ScanState::converter_v:
      rho = werner_mix(singlet_family_state(0.0, 0.0), cfg.noise.v_single_v);
      label = "converter_v";
      break;
    case ScanState::automatic:
      break;
  }

  RateBudget budget = cfg.budget;
  budget.pump_power_mw = cfg.polscan.pump_power_mw;
  const double dwell_s = cfg.polscan.dwell_ms * 1e-3;

  CountScan result{make_scan("analyzer_scan", "rad", cfg, seed),
                   make_scan("analyzer_scan_accidentals", "rad", cfg, seed)};
  result.counts.metadata["theta_s_rad"] = theta_s;
  result.counts.metadata["state"] = label;
  for (size_t i = 0; i < theta_i.size(); ++i) {
    PolarizationSetup setup{rho, {theta_s, theta_i[i]}};
    const BinOutcome bin =
        measure_bin(cfg, budget, setup, dwell_s, mix_seed(seed, i));
    result.counts.points.push_back(
        {theta_i[i], bin.counts, std::sqrt(std::max(bin.counts, 0.0))});
    result.accidentals.points.push_back(
        {theta_i[i], bin.accidentals, std::sqrt(std::max(bin.accidentals, 0.0))});
  }
  return result;
}

ChshRun chsh_experiment(const ExperimentConfig& cfg,
                        const std::array<double, 4>& angles,
                        double counts_per_setting, std::uint64_t seed,
                        double werner_v_override) {
  if (!(counts_per_setting > 0.0))
    throw std::invalid_argument("counts_per_setting must be positive");
  const double v = (werner_v_override >= 0.0) ? werner_v_override : cfg.noise.v_chsh;
  ChshRun run;
  run.werner_v = v;
  const BiphotonState rho = werner_mix(singlet_family_state(0.0), v);

  RateBudget budget = cfg.budget;
  budget.pump_power_mw = cfg.chsh.pump_power_mw;

  const double a = angles[0], ap = angles[1], b = angles[2], bp = angles[3];
  const std::array<std::pair<double, double>, 4> pairs{
      {{a, b}, {a, bp}, {ap, b}, {ap, bp}}};
  const double orth = kPi / 2.0;

  // Equal integration time per setting, fixed by the mean expected rate.
  double mean_rate = 0.0;
  for (const auto& [x, y] : pairs) {
    for (const auto& [ts, ti] :
         {std::pair{x, y}, {x + orth, y + orth}, {x, y + orth}, {x + orth, y}}) {
      PolarizationSetup setup{rho, {ts, ti}};
      mean_rate += expected_rates(budget, cfg.detector_signal, cfg.detector_idler,
                                  setup, cfg.coincidence_window_ns)
                       .coincidence_rate_per_s;
    }
  }
  mean_rate /= 16.0;
  if (!(mean_rate > 0.0)) throw std::domain_error("zero expected coincidence rate");
  run.duration_per_setting_s = counts_per_setting / mean_rate;

  double var_S = 0.0;
  for (int i = 0; i < 4; ++i) {
    const auto [x, y] = pairs[i];
    // order: (x,y), (x_perp,y_perp), (x,y_perp), (x_perp,y)
    const std::array<std::pair<double, double>, 4> settings{
        {{x, y}, {x + orth, y + orth}, {x, y + orth}, {x + orth, y}}};
    std::array<double, 4> n{}, acc{};
    for (int k = 0; k < 4; ++k) {
      PolarizationSetup setup{rho, {settings[k].first, settings[k].second}};
      const BinOutcome bin =
          measure_bin(cfg, budget, setup, run.duration_per_setting_s,
                      mix_seed(seed, static_cast<std::uint64_t>(4 * i + k)));
      n[k] = bin.counts - bin.accidentals;
      run.counts[i][k] = bin.counts;
      run.accidentals[i][k] = bin.accidentals;
      acc[k] = bin.accidentals;
    }
    const double total = n[0] + n[1] + n[2] + n[3];
    if (!(total > 0.0))
      throw std::domain_error("insufficient statistics: zero counts for a correlator");
    const double e = (n[0] + n[1] - n[2] - n[3]) / total;
    run.correlators[i] = e;
    double var_e = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double sign = (k < 2) ? 1.0 : -1.0;
      const double deriv = (sign - e) / total;
      const double var_nk = run.counts[i][k] + acc[k];  // subtraction adds variance
      var_e += deriv * deriv * var_nk;
    }
    run.correlator_sigmas[i] = std::sqrt(var_e);
    var_S += var_e;
  }
  run.S = std::fabs(run.correlators[0] - run.correlators[1]) +
          std::fabs(run.correlators[2] + run.correlators[3]);
  run.sigma_S = std::sqrt(var_S);
  return run;
}

double config_pair_bandwidth_ghz(const ExperimentConfig& cfg) {
  const double pm = pm_bandwidth(cfg.temperature_c, cfg.crystal);
  return effective_pair_bandwidth(pm, cfg.filters);
}

ScanResult bandwidth_scan_experiment(const ExperimentConfig& cfg,
                                     double half_range_mm, int points) {
  if (points < 9) throw std::invalid_argument("bandwidth scan needs >= 9 points");
  const double bandwidth = config_pair_bandwidth_ghz(cfg);
  ScanResult scan;
  scan.kind = "visibility_vs_displacement";
  scan.setting_unit = "mm";
  scan.value_unit = "visibility";
  scan.metadata["config_hash"] = cfg.config_hash();
  scan.metadata["seed"] = cfg.seed;
  scan.metadata["pair_bandwidth_ghz"] = bandwidth;
  for (int i = 0; i < points; ++i) {
    const double x = -half_range_mm + 2.0 * half_range_mm * i / (points - 1);
    scan.points.push_back({x, overlap_visibility(x, bandwidth), 0.0});
  }
  return scan;
}

void to_json(nlohmann::json& j, const ChshRun& run) {
  j = nlohmann::json{{"S", run.S},
                     {"sigma_S", run.sigma_S},
                     {"correlators", run.correlators},
                     {"correlator_sigmas", run.correlator_sigmas},
                     {"counts", run.counts},
                     {"accidentals", run.accidentals},
                     {"duration_per_setting_s", run.duration_per_setting_s},
                     {"werner_v", run.werner_v},
                     {"violation_sigmas",
                      run.sigma_S > 0.0 ? (run.S - 2.0) / run.sigma_S : 0.0}};
}

}  // namespace spdc
