#include "spdc/config.hpp"

#include <fstream>
#include <stdexcept>

namespace spdc {

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string ExperimentConfig::config_hash() const {
  // nlohmann::json orders keys lexicographically, so dump() is canonical.
  return fnv1a_hex(raw.dump());
}

void ExperimentConfig::validate() const {
  crystal.validate();
  budget.validate();
  if (budget_no_if) budget_no_if->validate();
  detector_signal.validate();
  detector_idler.validate();
  if (!(coincidence_window_ns > 0.0))
    throw std::invalid_argument("coincidence window must be positive");
  if (!(accidental_offset_ns > coincidence_window_ns))
    throw std::invalid_argument("accidental offset must exceed the window");
  for (const auto& f : filters) f.validate();
  for (double v : {noise.v_pzt, noise.v_analyzer, noise.v_single_h, noise.v_single_v,
                   noise.v_chsh}) {
    if (v < 0.0 || v > 1.0)
      throw std::invalid_argument("werner parameters must lie in [0, 1]");
  }
}

namespace {

std::string dirname_of(const std::string& path) {
  const auto slash = path.find_last_of("/\\");
  return (slash == std::string::npos) ? std::string(".") : path.substr(0, slash);
}

}  // namespace

ExperimentConfig parse_experiment_config(const nlohmann::json& j,
                                         const std::string& base_dir) {
  ExperimentConfig cfg;
  cfg.raw = j;
  cfg.name = j.value("name", "experiment");
  if (!j.contains("seed"))
    throw std::invalid_argument("config must declare a seed; no silent nondeterminism");
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.temperature_c = j.value("temperature_c", 183.6);

  if (j.contains("crystal")) cfg.crystal = j.at("crystal").get<CrystalSpec>();
  if (j.contains("sellmeier")) {
    cfg.crystal.sellmeier = j.at("sellmeier").get<SellmeierSet>();
  } else if (j.contains("sellmeier_file")) {
    cfg.crystal.sellmeier =
        load_sellmeier_file(base_dir + "/" + j.at("sellmeier_file").get<std::string>());
  } else {
    cfg.crystal.sellmeier = congruent_linbo3();
  }

  if (j.contains("budget")) cfg.budget = j.at("budget").get<RateBudget>();
  if (j.contains("budget_no_if"))
    cfg.budget_no_if = j.at("budget_no_if").get<RateBudget>();
  if (j.contains("detectors")) {
    const auto& d = j.at("detectors");
    cfg.detector_signal = d.at("signal").get<DetectorModel>();
    cfg.detector_idler = d.at("idler").get<DetectorModel>();
  }
  cfg.coincidence_window_ns = j.value("coincidence_window_ns", 4.0);
  cfg.accidental_offset_ns = j.value("accidental_offset_ns", 6.0);

  if (j.contains("state_noise")) {
    const auto& n = j.at("state_noise");
    cfg.noise.v_pzt = n.value("werner_v_pzt", cfg.noise.v_pzt);
    cfg.noise.v_analyzer = n.value("werner_v_analyzer", cfg.noise.v_analyzer);
    cfg.noise.v_single_h = n.value("werner_v_single_h", cfg.noise.v_single_h);
    cfg.noise.v_single_v = n.value("werner_v_single_v", cfg.noise.v_single_v);
    cfg.noise.v_chsh = n.value("werner_v_chsh", cfg.noise.v_chsh);
  }
  if (j.contains("filters")) {
    cfg.filters = j.at("filters").get<std::vector<SpectralFilter>>();
  }
  if (j.contains("chsh")) {
    const auto& c = j.at("chsh");
    if (c.contains("angles_rad"))
      cfg.chsh.angles = c.at("angles_rad").get<std::array<double, 4>>();
    cfg.chsh.counts_per_setting =
        c.value("counts_per_setting", cfg.chsh.counts_per_setting);
    cfg.chsh.pump_power_mw = c.value("pump_power_mw", cfg.chsh.pump_power_mw);
  }
  if (j.contains("fringe")) {
    const auto& f = j.at("fringe");
    cfg.fringe.pump_power_mw = f.value("pump_power_mw", cfg.fringe.pump_power_mw);
    cfg.fringe.bin_time_ms = f.value("bin_time_ms", cfg.fringe.bin_time_ms);
    cfg.fringe.subtract_background =
        f.value("subtract_background", cfg.fringe.subtract_background);
  }
  if (j.contains("polscan")) {
    const auto& p = j.at("polscan");
    cfg.polscan.pump_power_mw = p.value("pump_power_mw", cfg.polscan.pump_power_mw);
    cfg.polscan.dwell_ms = p.value("dwell_ms", cfg.polscan.dwell_ms);
  }
  cfg.analytic = j.value("analytic", false);
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  nlohmann::json j;
  in >> j;
  return parse_experiment_config(j, dirname_of(path));
}

}  // namespace spdc
