// spdc-lab: command-line front end mapping each experiment to a reproducible
// CSV/JSON artifact. Every output embeds the config hash and seed.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "spdc/config.hpp"
#include "spdc/constants.hpp"
#include "spdc/experiments.hpp"
#include "spdc/montecarlo.hpp"
#include "spdc/phasematch.hpp"
#include "spdc/polarization.hpp"
#include "spdc/spectral.hpp"
#include "spdc/timetags.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
};

spdc::ExperimentConfig load(const CommonOpts& opts) {
  auto cfg = spdc::load_experiment_config(opts.config_path);
  if (opts.seed) {
    cfg.seed = *opts.seed;
  } else if (const char* env = std::getenv("SPDC_LAB_SEED")) {
    cfg.seed = std::strtoull(env, nullptr, 10);
  }
  fs::create_directories(opts.out_dir);
  return cfg;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  out << j.dump(2) << "\n";
  std::cout << "wrote " << path.string() << "\n";
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "experiment config JSON")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_option("--seed", opts.seed, "seed override (also env SPDC_LAB_SEED)");
}

json stamp(const spdc::ExperimentConfig& cfg) {
  return json{{"config_hash", cfg.config_hash()}, {"seed", cfg.seed}};
}

int cmd_phasematch(const CommonOpts& opts, double t_lo, double t_hi, double step) {
  auto cfg = load(opts);
  spdc::ScanResult table;  // reused purely for CSV row formatting
  std::ofstream out(fs::path(opts.out_dir) / "phasematch.csv");
  out << "# kind: collinear_phasematch\n";
  out << "# columns: temperature_c,lambda_cpm_nm,tuning_ghz_per_c,bandwidth_ghz,error\n";
  out << "# units: C,nm,GHz/C,GHz,-\n";
  out << "# config_hash: " << cfg.config_hash() << "\n";
  out << "# seed: " << cfg.seed << "\n";
  char buf[256];
  const double h = 0.25;  // finite-difference half step for the tuning slope
  for (double t = t_lo; t <= t_hi + 1e-9; t += step) {
    try {
      const double lam = spdc::collinear_pm_wavelength(t, cfg.crystal);
      const double lam_m = spdc::collinear_pm_wavelength(t - h, cfg.crystal);
      const double lam_p = spdc::collinear_pm_wavelength(t + h, cfg.crystal);
      const double slope =
          (spdc::frequency_ghz(lam_p) - spdc::frequency_ghz(lam_m)) / (2.0 * h);
      const double bw = spdc::pm_bandwidth(t, cfg.crystal);
      std::snprintf(buf, sizeof(buf), "%.7g,%.10g,%.7g,%.7g,\n", t, lam, slope, bw);
      out << buf;
    } catch (const std::exception& e) {
      std::snprintf(buf, sizeof(buf), "%.7g,,,,\"%s\"\n", t, e.what());
      out << buf;
    }
  }
  std::cout << "wrote " << (fs::path(opts.out_dir) / "phasematch.csv").string() << "\n";
  return 0;
}

int cmd_rings(const CommonOpts& opts, std::vector<double> temps, double center,
              double fwhm, int pixels, double half_angle) {
  auto cfg = load(opts);
  if (temps.empty()) {
    std::cout << "no temperatures requested; nothing to do\n";
    return 0;
  }
  for (double t : temps) {
    const auto img = spdc::ring_image(t, center, fwhm, {pixels, half_angle}, cfg.crystal);
    char name[64];
    std::snprintf(name, sizeof(name), "ring_T%.3f.txt", t);
    spdc::write_ring_image((fs::path(opts.out_dir) / name).string(), img, stamp(cfg));
    std::cout << "wrote " << (fs::path(opts.out_dir) / name).string() << "\n";
  }
  return 0;
}

int cmd_fringe(const CommonOpts& opts, double sweep_lo, double sweep_hi, int n,
               double bin_ms, bool no_subtract) {
  auto cfg = load(opts);
  if (bin_ms <= 0.0) bin_ms = cfg.fringe.bin_time_ms;
  std::vector<double> phis(n);
  for (int i = 0; i < n; ++i)
    phis[i] = sweep_lo + (sweep_hi - sweep_lo) * i / (n - 1);
  const auto scan = spdc::pzt_fringe_experiment(cfg, phis, bin_ms, cfg.seed);
  spdc::write_scan_csv((fs::path(opts.out_dir) / "fringe.csv").string(), scan.counts);
  spdc::write_scan_csv((fs::path(opts.out_dir) / "fringe_accidentals.csv").string(),
                       scan.accidentals);
  const bool subtract = cfg.fringe.subtract_background && !no_subtract;
  const auto fitted = subtract ? spdc::subtract_background(scan) : scan.counts;
  const double vis = spdc::fringe_visibility(fitted);
  write_json(fs::path(opts.out_dir) / "fringe.json",
             json{{"visibility", vis},
                  {"background_subtracted", subtract},
                  {"bin_time_ms", bin_ms},
                  {"config_hash", cfg.config_hash()},
                  {"seed", cfg.seed}});
  std::cout << "wrote " << (fs::path(opts.out_dir) / "fringe.csv").string()
            << "  visibility " << vis << "\n";
  return 0;
}

int cmd_polscan(const CommonOpts& opts, double theta_s, const std::string& state_name,
                int n, bool no_subtract) {
  auto cfg = load(opts);
  spdc::ScanState state = spdc::ScanState::automatic;
  if (state_name == "singlet") state = spdc::ScanState::singlet;
  else if (state_name == "triplet") state = spdc::ScanState::triplet;
  else if (state_name == "upper") state = spdc::ScanState::converter_v;
  else if (state_name == "lower") state = spdc::ScanState::converter_h;
  else if (state_name != "auto")
    throw CLI::ValidationError("--state must be auto|singlet|triplet|upper|lower");

  std::vector<double> thetas(n);
  for (int i = 0; i < n; ++i)
    thetas[i] = -spdc::kPi / 2.0 + spdc::kPi * 1.5 * i / (n - 1);  // 3/4 turn
  const auto scan = spdc::analyzer_scan_experiment(cfg, thetas, theta_s, state, cfg.seed);
  spdc::write_scan_csv((fs::path(opts.out_dir) / "polscan.csv").string(), scan.counts);
  const auto fitted = no_subtract ? scan.counts : spdc::subtract_background(scan);
  const double vis = spdc::fringe_visibility(fitted);
  write_json(fs::path(opts.out_dir) / "polscan.json",
             json{{"visibility", vis},
                  {"theta_s_rad", theta_s},
                  {"state", scan.counts.metadata["state"]},
                  {"background_subtracted", !no_subtract},
                  {"config_hash", cfg.config_hash()},
                  {"seed", cfg.seed}});
  std::cout << "visibility " << vis << "\n";
  return 0;
}

int cmd_chsh(const CommonOpts& opts, std::vector<double> angles, double counts,
             bool ideal) {
  auto cfg = load(opts);
  std::array<double, 4> a = cfg.chsh.angles;
  if (!angles.empty()) {
    if (angles.size() != 4)
      throw CLI::ValidationError("--angles needs exactly four values");
    std::copy(angles.begin(), angles.end(), a.begin());
  }
  if (counts <= 0.0) counts = cfg.chsh.counts_per_setting;
  const double v = ideal ? 1.0 : -1.0;
  const auto run = spdc::chsh_experiment(cfg, a, counts, cfg.seed, v);
  json j = run;
  j["angles_rad"] = a;
  j["config_hash"] = cfg.config_hash();
  j["seed"] = cfg.seed;
  write_json(fs::path(opts.out_dir) / "chsh.json", j);
  std::cout << "S = " << run.S << " +- " << run.sigma_S << "\n";
  return 0;
}

int cmd_bandwidth(const CommonOpts& opts, double half_range, int points) {
  auto cfg = load(opts);
  const auto scan = spdc::bandwidth_scan_experiment(cfg, half_range, points);
  spdc::write_scan_csv((fs::path(opts.out_dir) / "bandwidth_scan.csv").string(), scan);
  const auto inf = spdc::bandwidth_from_scan(scan);
  write_json(fs::path(opts.out_dir) / "bandwidth.json",
             json{{"bandwidth_ghz", inf.bandwidth_ghz},
                  {"pulse_width_ps", inf.pulse_width_ps},
                  {"half_visibility_width_mm", inf.half_visibility_width_mm},
                  {"configured_pair_bandwidth_ghz", scan.metadata["pair_bandwidth_ghz"]},
                  {"config_hash", cfg.config_hash()},
                  {"seed", cfg.seed}});
  std::cout << "bandwidth " << inf.bandwidth_ghz << " GHz, half-visibility width "
            << inf.half_visibility_width_mm << " mm\n";
  return 0;
}

int cmd_budget(const CommonOpts& opts) {
  auto cfg = load(opts);
  json j;
  j["narrowband"] = spdc::rate_budget_report(cfg.budget, cfg.detector_signal,
                                             cfg.detector_idler,
                                             cfg.coincidence_window_ns);
  if (cfg.budget_no_if) {
    j["no_filter"] = spdc::rate_budget_report(*cfg.budget_no_if, cfg.detector_signal,
                                              cfg.detector_idler,
                                              cfg.coincidence_window_ns);
  }
  j["config_hash"] = cfg.config_hash();
  j["seed"] = cfg.seed;
  write_json(fs::path(opts.out_dir) / "budget.json", j);
  return 0;
}

int cmd_tags(const CommonOpts& opts, double duration_s) {
  auto cfg = load(opts);
  const auto streams = spdc::simulate_timetags(
      cfg.budget, cfg.detector_signal, cfg.detector_idler, std::nullopt, duration_s,
      cfg.seed, cfg.coincidence_window_ns);
  const auto path = fs::path(opts.out_dir) / "tags.bin";
  json header = stamp(cfg);
  header["pump_power_mw"] = cfg.budget.pump_power_mw;
  spdc::write_timetags(path.string(), streams.first, streams.second, header);
  const auto coinc = spdc::count_coincidences(streams.first, streams.second,
                                              cfg.coincidence_window_ns);
  const auto acc = spdc::accidental_estimate(streams.first, streams.second,
                                             cfg.coincidence_window_ns,
                                             cfg.accidental_offset_ns);
  write_json(fs::path(opts.out_dir) / "tags_counts.json",
             json{{"signal_singles", streams.first.tags_ps.size()},
                  {"idler_singles", streams.second.tags_ps.size()},
                  {"coincidences", coinc},
                  {"accidentals", acc},
                  {"duration_s", duration_s},
                  {"config_hash", cfg.config_hash()},
                  {"seed", cfg.seed}});
  return 0;
}

int cmd_calibrate(const CommonOpts& opts, double anchor_temp, double anchor_nm) {
  auto cfg = load(opts);
  const double delta =
      spdc::calibrate_delta_period(cfg.crystal, anchor_temp, anchor_nm);
  spdc::CrystalSpec calibrated = cfg.crystal;
  calibrated.calibration_delta_period_um = delta;
  write_json(fs::path(opts.out_dir) / "calibration.json",
             json{{"calibration_delta_period_um", delta},
                  {"anchor_temperature_c", anchor_temp},
                  {"anchor_signal_nm", anchor_nm},
                  {"check_lambda_cpm_nm",
                   spdc::collinear_pm_wavelength(anchor_temp, calibrated)},
                  {"config_hash", cfg.config_hash()}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bidirectionally pumped PPLN entangled-pair source simulator"};
  app.require_subcommand(1);

  CommonOpts opts;
  double t_lo = 173.6, t_hi = 193.6, step = 0.5;
  std::vector<double> temps{177.6, 180.6, 183.6};
  double filter_center = 795.0, filter_fwhm = 1.0;
  int pixels = 201;
  double half_angle = 25.0;
  double sweep_lo = -spdc::kPi, sweep_hi = 3.0 * spdc::kPi;
  int fringe_points = 81;
  double bin_ms = 0.0;
  bool no_subtract = false;
  double theta_s = 0.0;
  std::string state_name = "auto";
  int polscan_points = 49;
  std::vector<double> chsh_angles;
  double chsh_counts = 0.0;
  bool chsh_ideal = false;
  double bw_half_range = 6.0;
  int bw_points = 121;
  double tags_duration = 10.0;
  double anchor_temp = 183.6, anchor_nm = 795.0;

  auto* pm = app.add_subcommand("phasematch",
                                "collinear wavelength, tuning slope, bandwidth vs T");
  add_common(pm, opts);
  pm->add_option("--temp-lo", t_lo, "range start, C");
  pm->add_option("--temp-hi", t_hi, "range end, C");
  pm->add_option("--step", step, "temperature step, C");

  auto* rg = app.add_subcommand("rings", "far-field emission images");
  add_common(rg, opts);
  rg->add_option("--temps", temps, "crystal temperatures, C");
  rg->add_option("--filter-center", filter_center, "bandpass center, nm");
  rg->add_option("--filter-fwhm", filter_fwhm, "bandpass width, nm");
  rg->add_option("--pixels", pixels, "pixels per side (odd)");
  rg->add_option("--half-angle", half_angle, "field of view half-angle, mrad");

  auto* fr = app.add_subcommand("fringe", "coincidences vs pump-phase sweep");
  add_common(fr, opts);
  fr->add_option("--sweep-lo", sweep_lo, "phase start, rad");
  fr->add_option("--sweep-hi", sweep_hi, "phase end, rad");
  fr->add_option("--points", fringe_points, "sweep points");
  fr->add_option("--bin-ms", bin_ms, "bin time, ms (default from config)");
  fr->add_flag("--no-subtract", no_subtract, "skip background subtraction");

  auto* ps = app.add_subcommand("polscan", "coincidences vs idler analyzer angle");
  add_common(ps, opts);
  ps->add_option("--theta-s", theta_s, "signal analyzer angle, rad");
  ps->add_option("--state", state_name, "auto|singlet|triplet|upper|lower");
  ps->add_option("--points", polscan_points, "sweep points");
  ps->add_flag("--no-subtract", no_subtract, "skip background subtraction");

  auto* ch = app.add_subcommand("chsh", "sixteen-setting Bell test");
  add_common(ch, opts);
  ch->add_option("--angles", chsh_angles, "a a' b b' in rad")->expected(0, 4);
  ch->add_option("--counts-per-setting", chsh_counts, "target mean coincidences");
  ch->add_flag("--ideal", chsh_ideal, "noise-free state (v = 1)");

  auto* bw = app.add_subcommand("bandwidth", "visibility vs path offset scan");
  add_common(bw, opts);
  bw->add_option("--scan-range", bw_half_range, "half range, mm");
  bw->add_option("--points", bw_points, "scan points");

  auto* bu = app.add_subcommand("budget", "analytic rate/loss report");
  add_common(bu, opts);

  auto* tg = app.add_subcommand("tags", "raw time-tag stream file");
  add_common(tg, opts);
  tg->add_option("--duration", tags_duration, "simulated time, s");

  auto* ca = app.add_subcommand("calibrate", "fit the grating-period correction");
  add_common(ca, opts);
  ca->add_option("--anchor-temp", anchor_temp, "collinear temperature, C");
  ca->add_option("--anchor-nm", anchor_nm, "collinear signal wavelength, nm");

  CLI11_PARSE(app, argc, argv);

  try {
    if (pm->parsed()) return cmd_phasematch(opts, t_lo, t_hi, step);
    if (rg->parsed())
      return cmd_rings(opts, temps, filter_center, filter_fwhm, pixels, half_angle);
    if (fr->parsed())
      return cmd_fringe(opts, sweep_lo, sweep_hi, fringe_points, bin_ms, no_subtract);
    if (ps->parsed())
      return cmd_polscan(opts, theta_s, state_name, polscan_points, no_subtract);
    if (ch->parsed()) return cmd_chsh(opts, chsh_angles, chsh_counts, chsh_ideal);
    if (bw->parsed()) return cmd_bandwidth(opts, bw_half_range, bw_points);
    if (bu->parsed()) return cmd_budget(opts);
    if (tg->parsed()) return cmd_tags(opts, tags_duration);
    if (ca->parsed()) return cmd_calibrate(opts, anchor_temp, anchor_nm);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
