#pragma once

namespace spdc {

// Speed of light in the unit systems used throughout: wavelengths in nm/um,
// times in ps/ns, frequencies in GHz/THz.
inline constexpr double kSpeedOfLightUmPerPs = 299.792458;
inline constexpr double kSpeedOfLightMmPerPs = 0.299792458;
inline constexpr double kSpeedOfLightNmPerNs = 2.99792458e8;  // nu[GHz] = this / lambda[nm]

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// Root of sin^2(x)/x^2 = 1/2, the half-power argument of a sinc^2 envelope.
inline constexpr double kSincSqHalfPowerArg = 1.3915573767632827;

// Gaussian time-bandwidth product: dt_FWHM * dnu_FWHM = 2 ln2 / pi.
inline constexpr double kGaussianTbp = 0.44127120030530324;

inline double frequency_ghz(double wavelength_nm) {
  return kSpeedOfLightNmPerNs / wavelength_nm;
}

}  // namespace spdc
