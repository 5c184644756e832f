#include "spdc/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "spdc/rng.hpp"

namespace spdc {

namespace {

void check_prob(double p, const char* what) {
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

struct ChainProbs {
  double p_pass_signal = 1.0;   // signal passes its analyzer
  double p_conj_given_signal = 1.0;  // idler passes its analyzer given signal passed
  double p_idler_background = 0.0;   // idler analyzer pass x unconditional arrival
};

ChainProbs chain_probs(const RateBudget& b, const DetectorModel& sig,
                       const std::optional<PolarizationSetup>& setup) {
  double p_pp = 1.0, p_pf = 0.0, p_fp = 0.0;
  if (setup) {
    const auto p = four_outcome_probabilities(setup->state, setup->analyzers);
    p_pp = p[0];
    p_pf = p[1];
    p_fp = p[2];
  }
  ChainProbs out;
  out.p_pass_signal = p_pp + p_pf;
  out.p_conj_given_signal = (out.p_pass_signal > 0.0) ? p_pp / out.p_pass_signal : 0.0;
  const double eta_sf = b.signal_path_efficiency * b.filter_transmission;
  // Idler-in-fiber probability for pairs that never trigger: the conjugate
  // coupling applies when the signal reached the fiber but went undetected,
  // the unconditional coupling otherwise.
  out.p_idler_background =
      p_pp * (eta_sf * (1.0 - sig.quantum_efficiency) * b.idler_path_efficiency +
              (1.0 - eta_sf) * b.idler_unconditional_efficiency) +
      p_fp * b.idler_unconditional_efficiency;
  return out;
}

}  // namespace

void DetectorModel::validate() const {
  check_prob(quantum_efficiency, "quantum efficiency");
  check_prob(dark_count_prob_per_gate, "dark count probability");
  if (mode == Mode::gated && !(gate_duration_ns > 0.0))
    throw std::invalid_argument("gated detector needs a positive gate duration");
}

void RateBudget::validate() const {
  check_prob(signal_path_efficiency, "signal path efficiency");
  check_prob(idler_path_efficiency, "idler path efficiency");
  check_prob(filter_transmission, "filter transmission");
  check_prob(idler_unconditional_efficiency, "idler unconditional efficiency");
  if (pump_power_mw < 0.0) throw std::invalid_argument("pump power must be >= 0");
  if (pair_rate_per_s_per_mw < 0.0)
    throw std::invalid_argument("pair rate must be >= 0");
}

CoincidenceExpectation expected_rates(const RateBudget& budget,
                                      const DetectorModel& signal_detector,
                                      const DetectorModel& idler_detector,
                                      const std::optional<PolarizationSetup>& setup,
                                      double coincidence_window_ns) {
  budget.validate();
  signal_detector.validate();
  idler_detector.validate();
  const ChainProbs chain = chain_probs(budget, signal_detector, setup);
  const double eta_sf = budget.signal_path_efficiency * budget.filter_transmission;

  CoincidenceExpectation e;
  e.pair_rate_per_s = budget.pump_power_mw * budget.pair_rate_per_s_per_mw;
  const double trigger_rate =
      e.pair_rate_per_s * chain.p_pass_signal * eta_sf * signal_detector.quantum_efficiency;
  const double trigger_dark_rate =
      (signal_detector.mode == DetectorModel::Mode::free_running_trigger &&
       signal_detector.dark_count_prob_per_gate > 0.0)
          ? signal_detector.dark_count_prob_per_gate /
                (signal_detector.gate_duration_ns * 1e-9)
          : 0.0;
  e.signal_event_rate_per_s = trigger_rate + trigger_dark_rate;
  const double real_fraction =
      (e.signal_event_rate_per_s > 0.0) ? trigger_rate / e.signal_event_rate_per_s : 0.0;
  e.conjugate_click_prob = real_fraction * chain.p_conj_given_signal *
                           budget.idler_path_efficiency *
                           idler_detector.quantum_efficiency;
  e.background_click_rate_per_s = e.pair_rate_per_s * chain.p_idler_background *
                                  idler_detector.quantum_efficiency;
  const double window_s = coincidence_window_ns * 1e-9;
  const double dark_in_window =
      idler_detector.dark_count_prob_per_gate *
      (coincidence_window_ns / idler_detector.gate_duration_ns);
  e.background_prob_per_window =
      dark_in_window + e.background_click_rate_per_s * window_s;
  e.coincidence_prob_per_trigger =
      1.0 - (1.0 - e.conjugate_click_prob) * (1.0 - e.background_prob_per_window);
  e.coincidence_rate_per_s = e.signal_event_rate_per_s * e.coincidence_prob_per_trigger;
  return e;
}

std::pair<TimeTagStream, TimeTagStream> simulate_timetags(
    const RateBudget& budget, const DetectorModel& signal_detector,
    const DetectorModel& idler_detector,
    const std::optional<PolarizationSetup>& setup, double duration_s,
    std::uint64_t seed, double coincidence_window_ns) {
  if (duration_s < 0.0 || duration_s > 3600.0)
    throw std::invalid_argument("duration must lie in [0, 3600] s");
  if (idler_detector.gate_duration_ns < coincidence_window_ns)
    throw std::invalid_argument(
        "idler gate must be at least as long as the coincidence window");
  const CoincidenceExpectation e = expected_rates(
      budget, signal_detector, idler_detector, setup, coincidence_window_ns);
  // Model validity: expected events per 1-ps resolution bin must stay below 1.
  if (e.pair_rate_per_s * 1e-12 >= 1.0 || e.signal_event_rate_per_s * 1e-12 >= 1.0)
    throw std::invalid_argument(
        "configured rates exceed one expected event per time-resolution bin");

  const ChainProbs chain = chain_probs(budget, signal_detector, setup);
  const double p_conj_click = chain.p_conj_given_signal *
                              budget.idler_path_efficiency *
                              idler_detector.quantum_efficiency;
  const double real_fraction =
      (e.signal_event_rate_per_s > 0.0)
          ? (e.signal_event_rate_per_s -
             (signal_detector.mode == DetectorModel::Mode::free_running_trigger &&
                      signal_detector.dark_count_prob_per_gate > 0.0
                  ? signal_detector.dark_count_prob_per_gate /
                        (signal_detector.gate_duration_ns * 1e-9)
                  : 0.0)) /
                e.signal_event_rate_per_s
          : 0.0;

  const double duration_ps = duration_s * 1e12;
  const double gate_ps = idler_detector.gate_duration_ns * 1e3;
  const double window_ps = coincidence_window_ns * 1e3;
  const double bg_rate_per_ps = e.background_click_rate_per_s * 1e-12;

  TimeTagStream signal;
  signal.channel = Channel::signal;
  signal.duration_s = duration_s;
  signal.seed = seed;
  TimeTagStream idler;
  idler.channel = Channel::idler;
  idler.duration_s = duration_s;
  idler.seed = seed;

  Rng rng(seed);
  if (e.signal_event_rate_per_s > 0.0) {
    const double mean_gap_ps = 1e12 / e.signal_event_rate_per_s;
    double t = rng.exponential(mean_gap_ps);
    while (t < duration_ps) {
      const auto tag = static_cast<std::uint64_t>(std::llround(t));
      signal.tags_ps.push_back(tag);
      const bool is_real = rng.bernoulli(real_fraction);
      if (is_real && rng.bernoulli(p_conj_click)) idler.tags_ps.push_back(tag);

      // Gate centered on the nominal coincidence window [t, t + w].
      const double gate_lo = std::max(0.0, t + 0.5 * window_ps - 0.5 * gate_ps);
      const double gate_hi = std::min(duration_ps, t + 0.5 * window_ps + 0.5 * gate_ps);
      const double live_ps = gate_hi - gate_lo;
      if (live_ps > 0.0) {
        const double scale = live_ps / gate_ps;
        const std::uint64_t n_dark =
            rng.poisson(idler_detector.dark_count_prob_per_gate * scale);
        for (std::uint64_t k = 0; k < n_dark; ++k)
          idler.tags_ps.push_back(
              static_cast<std::uint64_t>(std::llround(rng.uniform_in(gate_lo, gate_hi))));
        const std::uint64_t n_bg = rng.poisson(bg_rate_per_ps * live_ps);
        for (std::uint64_t k = 0; k < n_bg; ++k)
          idler.tags_ps.push_back(
              static_cast<std::uint64_t>(std::llround(rng.uniform_in(gate_lo, gate_hi))));
      }
      t += rng.exponential(mean_gap_ps);
    }
  }
  std::sort(idler.tags_ps.begin(), idler.tags_ps.end());
  return {std::move(signal), std::move(idler)};
}

std::uint64_t count_coincidences(const TimeTagStream& signal,
                                 const TimeTagStream& idler, double window_ns,
                                 double offset_ns) {
  if (!(window_ns > 0.0)) throw std::invalid_argument("window must be positive");
  const auto window_ps = static_cast<std::int64_t>(std::llround(window_ns * 1e3));
  const auto offset_ps = static_cast<std::int64_t>(std::llround(offset_ns * 1e3));
  std::uint64_t count = 0;
  size_t j = 0;
  for (const std::uint64_t s : signal.tags_ps) {
    const std::int64_t lo = static_cast<std::int64_t>(s) + offset_ps;
    const std::int64_t hi = lo + window_ps;
    while (j < idler.tags_ps.size() &&
           static_cast<std::int64_t>(idler.tags_ps[j]) < lo)
      ++j;
    if (j < idler.tags_ps.size() &&
        static_cast<std::int64_t>(idler.tags_ps[j]) <= hi) {
      ++count;
      ++j;  // each idler tag pairs at most once
    }
  }
  return count;
}

std::uint64_t accidental_estimate(const TimeTagStream& signal,
                                  const TimeTagStream& idler, double window_ns,
                                  double offset_ns) {
  if (!(offset_ns > window_ns))
    throw std::invalid_argument(
        "accidental window offset must exceed the coincidence window");
  return count_coincidences(signal, idler, window_ns, offset_ns);
}

ConditionalProbability conditional_probability(std::uint64_t coincidences,
                                               std::uint64_t accidentals,
                                               std::uint64_t signal_singles,
                                               double detector_efficiency) {
  if (signal_singles == 0) throw std::invalid_argument("no signal singles");
  if (!(detector_efficiency > 0.0) || detector_efficiency > 1.0)
    throw std::invalid_argument("detector efficiency must lie in (0, 1]");
  ConditionalProbability out;
  if (accidentals > coincidences) {
    out.value = 0.0;
    out.clamped = true;  // statistical fluctuation drove the numerator negative
    return out;
  }
  out.value = static_cast<double>(coincidences - accidentals) /
              static_cast<double>(signal_singles) / detector_efficiency;
  return out;
}

RateReport rate_budget_report(const RateBudget& budget,
                              const DetectorModel& signal_detector,
                              const DetectorModel& idler_detector,
                              double coincidence_window_ns) {
  const CoincidenceExpectation e = expected_rates(
      budget, signal_detector, idler_detector, std::nullopt, coincidence_window_ns);
  RateReport r;
  r.pump_power_mw = budget.pump_power_mw;
  r.pair_rate_per_s_per_mw = budget.pair_rate_per_s_per_mw;
  r.signal_in_fiber_unfiltered_per_s_per_mw =
      budget.pair_rate_per_s_per_mw * budget.signal_path_efficiency;
  r.signal_in_fiber_per_s_per_mw =
      r.signal_in_fiber_unfiltered_per_s_per_mw * budget.filter_transmission;
  r.detected_signal_per_s_per_mw =
      r.signal_in_fiber_per_s_per_mw * signal_detector.quantum_efficiency;
  r.conditional_probability =
      budget.idler_path_efficiency * idler_detector.quantum_efficiency;
  r.accidental_prob_per_window = e.background_prob_per_window;
  r.raw_conditional_probability =
      r.conditional_probability + e.background_prob_per_window;
  r.coincidence_per_s_per_mw =
      r.detected_signal_per_s_per_mw * r.conditional_probability;
  r.inferred_pair_flux_per_s_per_mw =
      r.signal_in_fiber_per_s_per_mw * budget.idler_path_efficiency;
  r.idler_path_efficiency_implied =
      r.conditional_probability / idler_detector.quantum_efficiency;
  return r;
}

void to_json(nlohmann::json& j, const RateReport& r) {
  j = nlohmann::json{
      {"pump_power_mw", r.pump_power_mw},
      {"pair_rate_per_s_per_mw", r.pair_rate_per_s_per_mw},
      {"signal_in_fiber_unfiltered_per_s_per_mw", r.signal_in_fiber_unfiltered_per_s_per_mw},
      {"signal_in_fiber_per_s_per_mw", r.signal_in_fiber_per_s_per_mw},
      {"detected_signal_per_s_per_mw", r.detected_signal_per_s_per_mw},
      {"conditional_probability", r.conditional_probability},
      {"raw_conditional_probability", r.raw_conditional_probability},
      {"coincidence_per_s_per_mw", r.coincidence_per_s_per_mw},
      {"inferred_pair_flux_per_s_per_mw", r.inferred_pair_flux_per_s_per_mw},
      {"accidental_prob_per_window", r.accidental_prob_per_window},
      {"idler_path_efficiency_implied", r.idler_path_efficiency_implied}};
}

void to_json(nlohmann::json& j, const DetectorModel& d) {
  j = nlohmann::json{
      {"quantum_efficiency", d.quantum_efficiency},
      {"dark_count_prob_per_gate", d.dark_count_prob_per_gate},
      {"gate_duration_ns", d.gate_duration_ns},
      {"mode", d.mode == DetectorModel::Mode::gated ? "gated" : "free_running_trigger"}};
}

void from_json(const nlohmann::json& j, DetectorModel& d) {
  d.quantum_efficiency = j.at("quantum_efficiency").get<double>();
  d.dark_count_prob_per_gate = j.value("dark_count_prob_per_gate", 0.0);
  d.gate_duration_ns = j.value("gate_duration_ns", 20.0);
  const std::string mode = j.value("mode", "gated");
  d.mode = (mode == "free_running_trigger") ? DetectorModel::Mode::free_running_trigger
                                            : DetectorModel::Mode::gated;
}

void to_json(nlohmann::json& j, const RateBudget& b) {
  j = nlohmann::json{{"pump_power_mw", b.pump_power_mw},
                     {"pair_rate_per_s_per_mw", b.pair_rate_per_s_per_mw},
                     {"signal_path_efficiency", b.signal_path_efficiency},
                     {"idler_path_efficiency", b.idler_path_efficiency},
                     {"filter_transmission", b.filter_transmission},
                     {"idler_unconditional_efficiency", b.idler_unconditional_efficiency}};
}

void from_json(const nlohmann::json& j, RateBudget& b) {
  b.pump_power_mw = j.value("pump_power_mw", 1.0);
  b.pair_rate_per_s_per_mw = j.at("pair_rate_per_s_per_mw").get<double>();
  b.signal_path_efficiency = j.at("signal_path_efficiency").get<double>();
  b.idler_path_efficiency = j.at("idler_path_efficiency").get<double>();
  b.filter_transmission = j.value("filter_transmission", 1.0);
  b.idler_unconditional_efficiency = j.value("idler_unconditional_efficiency", 0.0);
}

}  // namespace spdc
