#include "spdc/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "spdc/constants.hpp"
#include "spdc/fit.hpp"
#include "spdc/scan.hpp"

namespace spdc {

double SpectralFilter::fwhm_ghz() const {
  if (unit == Unit::ghz) return fwhm;
  // dnu = c dlambda / lambda^2
  return kSpeedOfLightNmPerNs * fwhm / (center_nm * center_nm);
}

void SpectralFilter::validate() const {
  if (!(fwhm > 0.0)) throw std::invalid_argument("filter fwhm must be positive");
  if (!(peak_transmission > 0.0) || peak_transmission > 1.0)
    throw std::invalid_argument("filter peak transmission must lie in (0, 1]");
}

double effective_pair_bandwidth(double pm_fwhm_ghz,
                                const std::vector<SpectralFilter>& filters) {
  double inv_sq = 0.0;
  double rect_cap = std::numeric_limits<double>::infinity();
  bool any = false;
  if (std::isfinite(pm_fwhm_ghz) && pm_fwhm_ghz > 0.0) {
    inv_sq += 1.0 / (pm_fwhm_ghz * pm_fwhm_ghz);
    any = true;
  }
  for (const auto& f : filters) {
    f.validate();
    const double b = f.fwhm_ghz();
    if (f.shape == SpectralFilter::Shape::rectangular) {
      rect_cap = std::min(rect_cap, b);
    } else {
      inv_sq += 1.0 / (b * b);
    }
    any = true;
  }
  if (!any)
    throw std::domain_error(
        "unbounded pair bandwidth: no filters and no finite phase-matching width");
  double b = (inv_sq > 0.0) ? 1.0 / std::sqrt(inv_sq)
                            : std::numeric_limits<double>::infinity();
  b = std::min(b, rect_cap);
  if (!std::isfinite(b))
    throw std::domain_error("unbounded pair bandwidth: only infinite elements");
  return b;
}

double pair_pulse_width_ps(double bandwidth_ghz) {
  if (!(bandwidth_ghz > 0.0))
    throw std::invalid_argument("bandwidth must be positive");
  return 1e3 * kGaussianTbp / bandwidth_ghz;  // GHz -> ps
}

double overlap_visibility(double path_offset_mm, double pair_bandwidth_ghz) {
  const double width_ps = kOverlapWidthRatio * pair_pulse_width_ps(pair_bandwidth_ghz);
  const double sigma_t = width_ps / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  const double tau = path_offset_mm / kSpeedOfLightMmPerPs;
  return std::exp(-tau * tau / (2.0 * sigma_t * sigma_t));
}

BandwidthInference bandwidth_from_scan(const ScanResult& scan) {
  scan.validate();
  std::vector<double> xs, ys;
  for (const auto& p : scan.points) {
    xs.push_back(p.setting);
    ys.push_back(p.value);
  }
  GaussianFit fit;
  try {
    fit = fit_gaussian(xs, ys);
  } catch (const std::exception& e) {
    throw std::domain_error(std::string("bandwidth fit failed: ") + e.what());
  }
  const double half_width = fit.sigma * std::sqrt(2.0 * std::log(2.0));
  if (fit.center - half_width < xs.front() || fit.center + half_width > xs.back())
    throw std::domain_error(
        "scan does not extend beyond half visibility on both sides of the peak");

  BandwidthInference out;
  out.half_visibility_width_mm = 2.0 * half_width;
  const double width_ps = out.half_visibility_width_mm / kSpeedOfLightMmPerPs;
  out.pulse_width_ps = width_ps / kOverlapWidthRatio;
  out.bandwidth_ghz = 1e3 * kGaussianTbp / out.pulse_width_ps;
  out.fit_rms_residual = fit.rms_residual;
  out.peak_visibility = fit.amplitude;
  return out;
}

namespace {

std::string unit_name(SpectralFilter::Unit u) {
  return u == SpectralFilter::Unit::nm ? "nm" : "GHz";
}
std::string shape_name(SpectralFilter::Shape s) {
  return s == SpectralFilter::Shape::gaussian ? "gaussian" : "rectangular";
}

}  // namespace

void to_json(nlohmann::json& j, const SpectralFilter& f) {
  j = nlohmann::json{{"center_nm", f.center_nm},       {"fwhm", f.fwhm},
                     {"unit", unit_name(f.unit)},      {"shape", shape_name(f.shape)},
                     {"peak_transmission", f.peak_transmission}, {"role", f.role}};
}

void from_json(const nlohmann::json& j, SpectralFilter& f) {
  f.center_nm = j.value("center_nm", 795.0);
  f.fwhm = j.at("fwhm").get<double>();
  const std::string unit = j.value("unit", "nm");
  f.unit = (unit == "GHz" || unit == "ghz") ? SpectralFilter::Unit::ghz
                                            : SpectralFilter::Unit::nm;
  const std::string shape = j.value("shape", "gaussian");
  f.shape = (shape == "rectangular") ? SpectralFilter::Shape::rectangular
                                     : SpectralFilter::Shape::gaussian;
  f.peak_transmission = j.value("peak_transmission", 1.0);
  f.role = j.value("role", std::string{});
}

}  // namespace spdc
