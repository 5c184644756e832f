#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace spdc {

struct ScanResult;

struct SpectralFilter {
  enum class Unit { nm, ghz };
  enum class Shape { gaussian, rectangular };

  double center_nm = 795.0;
  double fwhm = 1.0;
  Unit unit = Unit::nm;
  Shape shape = Shape::gaussian;
  double peak_transmission = 1.0;
  std::string role;  // free-text label ("interference", "fiber_mode", ...)

  double fwhm_ghz() const;  // nm widths converted at the filter center
  void validate() const;
};

// Bandwidth of the transmitted pair spectrum: the sinc^2 phase-matching
// envelope is treated as a Gaussian of equal FWHM and combined with all
// Gaussian filters by inverse quadrature, 1/B^2 = sum 1/B_i^2. Rectangular
// filters cap the result at their own width. pm_fwhm_ghz <= 0 or non-finite
// means "no phase-matching limit".
double effective_pair_bandwidth(double pm_fwhm_ghz,
                                const std::vector<SpectralFilter>& filters);

// FWHM duration of a transform-limited Gaussian pulse of the given spectral
// FWHM (time-bandwidth product 2 ln2 / pi).
double pair_pulse_width_ps(double bandwidth_ghz);

// Ratio of the half-visibility full width of the two-photon interference
// envelope to the pair pulse width. Pinned to the published operating point of
// this source, 3.4 mm of path offset at half visibility for a 50 GHz pair:
// 11.3412 ps / 8.8254 ps. Plain wavepacket-overlap models bracket this value
// (sqrt(2) for intensity overlap, 2 for amplitude overlap) without hitting it.
inline constexpr double kOverlapWidthRatio = 1.2850577183476428;

// Gaussian visibility envelope vs path-length offset between the two
// down-converter arms; V(0) = 1, even in the offset.
double overlap_visibility(double path_offset_mm, double pair_bandwidth_ghz);

struct BandwidthInference {
  double bandwidth_ghz = 0.0;
  double pulse_width_ps = 0.0;
  double half_visibility_width_mm = 0.0;  // full width at half of peak visibility
  double fit_rms_residual = 0.0;
  double peak_visibility = 0.0;
};

// Inverse of overlap_visibility: fits a Gaussian envelope to a visibility vs
// mirror-displacement scan (mm) and reports the pair bandwidth and pulse width.
// Requires data beyond half visibility on both sides of the peak.
BandwidthInference bandwidth_from_scan(const ScanResult& scan);

void to_json(nlohmann::json& j, const SpectralFilter& f);
void from_json(const nlohmann::json& j, SpectralFilter& f);

}  // namespace spdc
