#include "spdc/phasematch.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "spdc/constants.hpp"
#include "spdc/rootfind.hpp"

namespace spdc {

namespace {

double sinc(double x) {
  if (std::fabs(x) < 1e-6) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

// k of an extraordinary wave tilted by `tilt` radians away from the pump axis
// within the given plane. In the y plane the wavevector stays perpendicular to
// the optic axis; in the z plane the index follows the index ellipsoid.
double k_tilted(double lambda_um, double temp_c, double tilt, Plane plane,
                const SellmeierSet& set) {
  double n;
  if (plane == Plane::y || tilt == 0.0) {
    n = refractive_index(lambda_um, temp_c, Polarization::extraordinary, set);
  } else {
    n = angle_dependent_index(lambda_um, temp_c, kPi / 2.0 - std::fabs(tilt), set);
  }
  return kTwoPi * n / lambda_um;
}

}  // namespace

double CrystalSpec::grating_wavevector() const {
  return qpm_order * kTwoPi / effective_period_um();
}

void CrystalSpec::validate() const {
  if (length_mm <= 0.0) throw std::invalid_argument("crystal length must be positive");
  if (grating_period_um <= 0.0)
    throw std::invalid_argument("grating period must be positive");
  if (qpm_order < 1 || qpm_order % 2 == 0)
    throw std::invalid_argument("QPM order must be an odd positive integer");
  if (std::fabs(calibration_delta_period_um) >= 0.1)
    throw std::invalid_argument(
        "calibration_delta_period must stay below 0.1 um; got " +
        std::to_string(calibration_delta_period_um));
  if (pump_wavelength_nm <= 0.0)
    throw std::invalid_argument("pump wavelength must be positive");
}

double conjugate_idler_nm(double pump_nm, double signal_nm) {
  if (signal_nm <= pump_nm)
    throw std::invalid_argument("signal wavelength must exceed the pump wavelength");
  return 1.0 / (1.0 / pump_nm - 1.0 / signal_nm);
}

double PhaseMatchPoint::energy_residual(double pump_wavelength_nm) const {
  const double lhs = 1.0 / pump_wavelength_nm;
  const double rhs = 1.0 / signal_wavelength_nm + 1.0 / idler_wavelength_nm;
  return std::fabs(lhs - rhs) / lhs;
}

double PhaseMatchPoint::transverse_residual(double temp_c,
                                            const CrystalSpec& crystal) const {
  const double ts = signal_angle_internal_mrad * 1e-3;
  const double ti = idler_angle_internal_mrad * 1e-3;
  const double ks = k_tilted(signal_wavelength_nm * 1e-3, temp_c, ts, plane,
                             crystal.sellmeier);
  const double ki = k_tilted(idler_wavelength_nm * 1e-3, temp_c, ti, plane,
                             crystal.sellmeier);
  return std::fabs(ks * std::sin(ts) - ki * std::sin(ti));
}

double qpm_mismatch(double signal_nm, double temp_c, const CrystalSpec& crystal) {
  const double lp = crystal.pump_wavelength_nm * 1e-3;
  const double ls = signal_nm * 1e-3;
  const double li = conjugate_idler_nm(crystal.pump_wavelength_nm, signal_nm) * 1e-3;
  const auto& set = crystal.sellmeier;
  const double kp = wavevector(lp, temp_c, Polarization::extraordinary, set);
  const double ks = wavevector(ls, temp_c, Polarization::extraordinary, set);
  const double ki = wavevector(li, temp_c, Polarization::extraordinary, set);
  return kp - ks - ki - crystal.grating_wavevector();
}

double collinear_pm_wavelength(double temp_c, const CrystalSpec& crystal,
                               double window_lo_nm, double window_hi_nm) {
  auto f = [&](double ls) { return qpm_mismatch(ls, temp_c, crystal); };
  const double f_lo = f(window_lo_nm);
  const double f_hi = f(window_hi_nm);
  if (std::signbit(f_lo) == std::signbit(f_hi)) {
    std::ostringstream msg;
    msg << "no collinear phase matching in window [" << window_lo_nm << ", "
        << window_hi_nm << "] nm at T = " << temp_c << " C (mismatch " << f_lo
        << " / " << f_hi << " rad/um)";
    throw std::domain_error(msg.str());
  }
  return solve_bracketed(f, window_lo_nm, window_hi_nm, 1e-12, 1e-12);
}

double calibrate_delta_period(const CrystalSpec& crystal, double anchor_temp_c,
                              double anchor_signal_nm) {
  auto f = [&](double delta) {
    CrystalSpec c = crystal;
    c.calibration_delta_period_um = delta;
    return collinear_pm_wavelength(anchor_temp_c, c) - anchor_signal_nm;
  };
  return solve_bracketed(f, -0.09, 0.09, 1e-10, 1e-13);
}

PhaseMatchPoint emission_angles(double signal_nm, double temp_c,
                                const CrystalSpec& crystal, Plane plane) {
  const double ls = signal_nm * 1e-3;
  const double idler_nm = conjugate_idler_nm(crystal.pump_wavelength_nm, signal_nm);
  const double li = idler_nm * 1e-3;
  const auto& set = crystal.sellmeier;
  const double kp = wavevector(crystal.pump_wavelength_nm * 1e-3, temp_c,
                               Polarization::extraordinary, set);
  const double kg = crystal.grating_wavevector();

  // Idler tilt satisfying transverse momentum conservation for a given signal
  // tilt. In the z plane k_i depends on the tilt itself; the fixed point
  // converges in a handful of iterations since n varies weakly with angle.
  auto idler_tilt = [&](double ks_sin) {
    double ti = std::asin(ks_sin / k_tilted(li, temp_c, 0.0, plane, set));
    for (int i = 0; i < 40; ++i) {
      const double next = std::asin(ks_sin / k_tilted(li, temp_c, ti, plane, set));
      if (std::fabs(next - ti) < 1e-16) return next;
      ti = next;
    }
    return ti;
  };

  auto longitudinal = [&](double ts) {
    const double ks = k_tilted(ls, temp_c, ts, plane, set);
    const double ti = (ts == 0.0) ? 0.0 : idler_tilt(ks * std::sin(ts));
    const double ki = k_tilted(li, temp_c, ti, plane, set);
    return ks * std::cos(ts) + ki * std::cos(ti) + kg - kp;
  };

  PhaseMatchPoint point;
  point.signal_wavelength_nm = signal_nm;
  point.idler_wavelength_nm = idler_nm;
  point.temperature_c = temp_c;
  point.plane = plane;

  const double g0 = longitudinal(0.0);
  // g decreases with tilt, so a noncollinear solution needs g(0) > 0, i.e. a
  // negative collinear mismatch. Wavelengths above the collinear point are out.
  if (g0 < -1e-12) {
    std::ostringstream msg;
    msg << "signal " << signal_nm << " nm is not phase-matchable at T = " << temp_c
        << " C (collinear point " << collinear_pm_wavelength(temp_c, crystal)
        << " nm); emission vanishes above it";
    throw std::domain_error(msg.str());
  }

  double ts = 0.0;
  if (g0 > 1e-12) {
    double hi = 5e-3;
    while (longitudinal(hi) > 0.0) {
      hi *= 2.0;
      if (hi > 0.3)
        throw std::domain_error("emission angle search exceeded 0.3 rad");
    }
    ts = solve_bracketed(longitudinal, 0.0, hi, 1e-12, 1e-15);
  }

  const double ks = k_tilted(ls, temp_c, ts, plane, set);
  const double ti = (ts == 0.0) ? 0.0 : idler_tilt(ks * std::sin(ts));
  const double ki = k_tilted(li, temp_c, ti, plane, set);
  point.delta_k = longitudinal(ts);
  point.signal_angle_internal_mrad = ts * 1e3;
  point.idler_angle_internal_mrad = ti * 1e3;
  // Tangential wavevector continuity across the exit face: sin(ext) = n sin(int).
  const double ns = ks * ls / kTwoPi;
  const double ni = ki * li / kTwoPi;
  point.signal_angle_external_mrad = std::asin(ns * std::sin(ts)) * 1e3;
  point.idler_angle_external_mrad = std::asin(ni * std::sin(ti)) * 1e3;
  return point;
}

double spectral_density(double signal_nm, double temp_c, const CrystalSpec& crystal) {
  const double dk = qpm_mismatch(signal_nm, temp_c, crystal);
  const double x = dk * crystal.length_mm * 1e3 / 2.0;
  const double s = sinc(x);
  return s * s;
}

double pm_bandwidth(double temp_c, const CrystalSpec& crystal) {
  const double lc = collinear_pm_wavelength(temp_c, crystal);
  const double half_l = crystal.length_mm * 1e3 / 2.0;
  auto arg = [&](double ls) { return qpm_mismatch(ls, temp_c, crystal) * half_l; };

  double width = 2.0;  // nm, grown until the half-power points are bracketed
  while (arg(lc - width) > -kSincSqHalfPowerArg || arg(lc + width) < kSincSqHalfPowerArg) {
    width *= 2.0;
    if (width > 64.0)
      throw std::domain_error("pm_bandwidth: half-power points out of search range");
  }
  const double lo = solve_bracketed(
      [&](double ls) { return arg(ls) + kSincSqHalfPowerArg; }, lc - width, lc, 1e-13);
  const double hi = solve_bracketed(
      [&](double ls) { return arg(ls) - kSincSqHalfPowerArg; }, lc, lc + width, 1e-13);
  return frequency_ghz(lo) - frequency_ghz(hi);
}

double RingImage::pixel_angle_mrad(int i) const {
  const double pitch = 2.0 * grid.half_angle_mrad / (grid.n - 1);
  return -grid.half_angle_mrad + pitch * i;
}

double RingImage::total() const {
  double sum = 0.0;
  for (double v : intensity) sum += v;
  return sum;
}

RingImage ring_image(double temp_c, double filter_center_nm, double filter_fwhm_nm,
                     const RingGrid& grid, const CrystalSpec& crystal,
                     int passband_samples) {
  if (grid.n < 3 || grid.n % 2 == 0)
    throw std::invalid_argument("ring grid needs an odd pixel count >= 3");
  if (passband_samples < 3) passband_samples = 3;
  const auto& set = crystal.sellmeier;
  const double lp = crystal.pump_wavelength_nm * 1e-3;
  const double kp = wavevector(lp, temp_c, Polarization::extraordinary, set);
  const double kg = crystal.grating_wavevector();
  const double half_l = crystal.length_mm * 1e3 / 2.0;

  RingImage img;
  img.grid = grid;
  img.temperature_c = temp_c;
  img.filter_center_nm = filter_center_nm;
  img.filter_fwhm_nm = filter_fwhm_nm;
  img.intensity.assign(static_cast<size_t>(grid.n) * grid.n, 0.0);

  // Extraordinary-wave index for a wavevector tilted by rho from the pump axis
  // at azimuth phi (measured from y toward z): cos(angle to optic axis) =
  // sin(rho) sin(phi).
  auto n_eff = [&](double lambda_um, double sin_rho, double sin_phi) {
    const double cos_oa = sin_rho * sin_phi;
    const double theta_oa = std::acos(std::clamp(std::fabs(cos_oa), 0.0, 1.0));
    return angle_dependent_index(lambda_um, temp_c, theta_oa, set);
  };

  struct Sample {
    double ls, li, ne_s, no_s, ne_i, no_i;
  };
  std::vector<Sample> samples(passband_samples);
  for (int m = 0; m < passband_samples; ++m) {
    const double frac = (passband_samples == 1)
                            ? 0.5
                            : static_cast<double>(m) / (passband_samples - 1);
    const double ls_nm = filter_center_nm + filter_fwhm_nm * (frac - 0.5);
    Sample s;
    s.ls = ls_nm * 1e-3;
    s.li = conjugate_idler_nm(crystal.pump_wavelength_nm, ls_nm) * 1e-3;
    s.ne_s = refractive_index(s.ls, temp_c, Polarization::extraordinary, set);
    s.no_s = refractive_index(s.ls, temp_c, Polarization::ordinary, set);
    s.ne_i = refractive_index(s.li, temp_c, Polarization::extraordinary, set);
    s.no_i = refractive_index(s.li, temp_c, Polarization::ordinary, set);
    samples[m] = s;
  }

  auto ellipsoid = [](double ne, double no, double cos_oa) {
    const double c2 = cos_oa * cos_oa;
    return 1.0 / std::sqrt((1.0 - c2) / (ne * ne) + c2 / (no * no));
  };

  for (int iy = 0; iy < grid.n; ++iy) {
    const double ay = img.pixel_angle_mrad(iy) * 1e-3;
    for (int iz = 0; iz < grid.n; ++iz) {
      const double az = img.pixel_angle_mrad(iz) * 1e-3;
      const double rho_ext = std::hypot(ay, az);
      const double sin_ext = std::sin(rho_ext);
      const double sin_phi = (rho_ext > 0.0) ? az / rho_ext : 0.0;
      double acc = 0.0;
      for (const auto& s : samples) {
        // internal signal tilt from tangential continuity, fixed point on n
        double sin_s = sin_ext / s.ne_s;
        for (int it = 0; it < 6; ++it) {
          const double n = ellipsoid(s.ne_s, s.no_s, sin_s * sin_phi);
          sin_s = sin_ext / n;
        }
        const double ns = ellipsoid(s.ne_s, s.no_s, sin_s * sin_phi);
        const double ks = kTwoPi * ns / s.ls;
        const double kst = ks * sin_s;  // transverse component
        // idler tilt from transverse conservation, same fixed-point scheme
        double sin_i = kst / (kTwoPi * s.ne_i / s.li);
        for (int it = 0; it < 6; ++it) {
          const double n = ellipsoid(s.ne_i, s.no_i, sin_i * sin_phi);
          sin_i = kst / (kTwoPi * n / s.li);
        }
        if (sin_i >= 1.0) continue;
        const double ni = ellipsoid(s.ne_i, s.no_i, sin_i * sin_phi);
        const double ki = kTwoPi * ni / s.li;
        const double dk = kp - ks * std::sqrt(1.0 - sin_s * sin_s) -
                          ki * std::sqrt(1.0 - sin_i * sin_i) - kg;
        const double x = dk * half_l;
        const double sc = sinc(x);
        acc += sc * sc;
      }
      img.at(iy, iz) = acc / passband_samples;
    }
  }
  return img;
}

void write_ring_image(const std::string& path, const RingImage& image,
                      const nlohmann::json& header_extra) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  nlohmann::json header = header_extra;
  header["n"] = image.grid.n;
  header["half_angle_mrad"] = image.grid.half_angle_mrad;
  header["temperature_c"] = image.temperature_c;
  header["filter_center_nm"] = image.filter_center_nm;
  header["filter_fwhm_nm"] = image.filter_fwhm_nm;
  out << header.dump() << "\n";
  out.precision(9);
  for (int iy = 0; iy < image.grid.n; ++iy) {
    for (int iz = 0; iz < image.grid.n; ++iz) {
      if (iz) out << ' ';
      out << image.at(iy, iz);
    }
    out << '\n';
  }
}

void to_json(nlohmann::json& j, const CrystalSpec& c) {
  j = nlohmann::json{{"length_mm", c.length_mm},
                     {"thickness_mm", c.thickness_mm},
                     {"grating_period_um", c.grating_period_um},
                     {"qpm_order", c.qpm_order},
                     {"pump_wavelength_nm", c.pump_wavelength_nm},
                     {"calibration_delta_period_um", c.calibration_delta_period_um}};
}

void from_json(const nlohmann::json& j, CrystalSpec& c) {
  c.length_mm = j.value("length_mm", 20.0);
  c.thickness_mm = j.value("thickness_mm", 0.5);
  c.grating_period_um = j.value("grating_period_um", 21.6);
  c.qpm_order = j.value("qpm_order", 3);
  c.pump_wavelength_nm = j.value("pump_wavelength_nm", 532.0);
  c.calibration_delta_period_um = j.value("calibration_delta_period_um", 0.0);
}

}  // namespace spdc
