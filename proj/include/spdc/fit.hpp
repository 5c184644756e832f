#pragma once

#include <vector>

namespace spdc {

// c0 + c1 cos(omega x + x0)
struct SinusoidFit {
  double offset = 0.0;
  double amplitude = 0.0;
  double omega = 0.0;
  double phase = 0.0;
  double rms_residual = 0.0;
};

// Least-squares sinusoid: coarse frequency scan with a linear solve per
// candidate, then golden-section refinement of omega. Deterministic.
SinusoidFit fit_sinusoid(const std::vector<double>& xs, const std::vector<double>& ys);

// a exp(-(x - x0)^2 / (2 sigma^2))
struct GaussianFit {
  double amplitude = 0.0;
  double center = 0.0;
  double sigma = 0.0;
  double rms_residual = 0.0;
};

// Log-domain weighted quadratic seed plus Gauss-Newton polish. Throws
// std::domain_error when the data cannot support a Gaussian shape.
GaussianFit fit_gaussian(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace spdc
