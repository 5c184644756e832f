#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "spdc/sellmeier.hpp"

namespace spdc {

// Emission plane relative to the crystal axes: tilting in y keeps the
// wavevector perpendicular to the optic axis (pure n_e), tilting in z picks up
// the angle-dependent extraordinary index.
enum class Plane { y, z };

struct CrystalSpec {
  double length_mm = 20.0;
  double thickness_mm = 0.5;  // informational only
  double grating_period_um = 21.6;
  int qpm_order = 3;
  double pump_wavelength_nm = 532.0;
  // Small fitted correction to the poled period absorbing coefficient-vintage
  // and duty-cycle uncertainty; see calibrate_delta_period().
  double calibration_delta_period_um = 0.0;
  SellmeierSet sellmeier;

  double effective_period_um() const {
    return grating_period_um + calibration_delta_period_um;
  }
  double grating_wavevector() const;  // m * 2 pi / effective period, rad/um
  void validate() const;              // throws std::invalid_argument
};

struct PhaseMatchPoint {
  double signal_wavelength_nm = 0.0;
  double idler_wavelength_nm = 0.0;
  double temperature_c = 0.0;
  double delta_k = 0.0;  // longitudinal residual, rad/um
  double signal_angle_internal_mrad = 0.0;
  double signal_angle_external_mrad = 0.0;
  double idler_angle_internal_mrad = 0.0;
  double idler_angle_external_mrad = 0.0;
  Plane plane = Plane::y;

  double energy_residual(double pump_wavelength_nm) const;  // relative
  double transverse_residual(double temp_c, const CrystalSpec& crystal) const;  // rad/um
};

// Idler wavelength conjugate to the signal under energy conservation.
double conjugate_idler_nm(double pump_nm, double signal_nm);

// Collinear QPM mismatch dk = k_p - k_s - k_i - m 2pi/Lambda_eff, all waves
// extraordinary, in rad/um. Negative below the collinear wavelength.
double qpm_mismatch(double signal_nm, double temp_c, const CrystalSpec& crystal);

// Signal wavelength with zero collinear mismatch, searched in
// [window_lo_nm, window_hi_nm]. Throws std::domain_error when no bracket exists.
double collinear_pm_wavelength(double temp_c, const CrystalSpec& crystal,
                               double window_lo_nm = 750.0,
                               double window_hi_nm = 850.0);

// Fits calibration_delta_period_um such that
// collinear_pm_wavelength(anchor_temp) == anchor_signal exactly.
double calibrate_delta_period(const CrystalSpec& crystal, double anchor_temp_c,
                              double anchor_signal_nm);

// Noncollinear solve: energy conservation + longitudinal QPM + transverse
// momentum conservation, full trigonometric form. Signal wavelengths above the
// collinear point are not phase-matchable and throw std::domain_error.
PhaseMatchPoint emission_angles(double signal_nm, double temp_c,
                                const CrystalSpec& crystal, Plane plane);

// Collinear sinc^2(dk L / 2) envelope, 1 at the collinear wavelength.
double spectral_density(double signal_nm, double temp_c, const CrystalSpec& crystal);

// FWHM of spectral_density in signal optical frequency, GHz.
double pm_bandwidth(double temp_c, const CrystalSpec& crystal);

struct RingGrid {
  int n = 201;                  // pixels per side (odd keeps a center pixel)
  double half_angle_mrad = 25;  // external-angle field of view
};

struct RingImage {
  RingGrid grid;
  double temperature_c = 0.0;
  double filter_center_nm = 0.0;
  double filter_fwhm_nm = 0.0;
  std::vector<double> intensity;  // row-major n x n, relative scale

  double& at(int iy, int iz) { return intensity[static_cast<size_t>(iy) * grid.n + iz]; }
  double at(int iy, int iz) const { return intensity[static_cast<size_t>(iy) * grid.n + iz]; }
  double pixel_angle_mrad(int i) const;  // angle of pixel index along either axis
  double total() const;
};

// Far-field intensity map of the signal emission through a rectangular
// bandpass filter, on an external-angle grid (y horizontal, z vertical).
RingImage ring_image(double temp_c, double filter_center_nm, double filter_fwhm_nm,
                     const RingGrid& grid, const CrystalSpec& crystal,
                     int passband_samples = 41);

// Matrix file with a one-line JSON header followed by whitespace-separated rows.
void write_ring_image(const std::string& path, const RingImage& image,
                      const nlohmann::json& header_extra);

void to_json(nlohmann::json& j, const CrystalSpec& c);
void from_json(const nlohmann::json& j, CrystalSpec& c);  // sellmeier left untouched

}  // namespace spdc
