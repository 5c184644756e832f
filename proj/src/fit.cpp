#include "spdc/fit.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "spdc/constants.hpp"

namespace spdc {

namespace {

struct LinearSinusoid {
  double c0, a, b, rss;
};

// Best (c0, a, b) for y ~ c0 + a cos(w x) + b sin(w x) at fixed w.
LinearSinusoid solve_at_omega(const std::vector<double>& xs,
                              const std::vector<double>& ys, double w) {
  const int n = static_cast<int>(xs.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = std::cos(w * xs[i]);
    design(i, 2) = std::sin(w * xs[i]);
    rhs(i) = ys[i];
  }
  Eigen::Vector3d beta = (design.transpose() * design)
                             .ldlt()
                             .solve(design.transpose() * rhs);
  const double rss = (design * beta - rhs).squaredNorm();
  return {beta(0), beta(1), beta(2), rss};
}

}  // namespace

SinusoidFit fit_sinusoid(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 5)
    throw std::invalid_argument("sinusoid fit needs at least 5 samples");
  const double span = xs.back() - xs.front();
  if (!(span > 0.0)) throw std::invalid_argument("sinusoid fit needs monotone settings");

  // Coarse scan from half a cycle to the pseudo-Nyquist limit over the span.
  const int n_candidates = 600;
  const double w_lo = kPi / span;
  const double w_hi = kPi * static_cast<double>(xs.size() - 1) / span;
  double best_w = w_lo, best_rss = std::numeric_limits<double>::max();
  for (int i = 0; i < n_candidates; ++i) {
    const double w = w_lo + (w_hi - w_lo) * i / (n_candidates - 1);
    const double rss = solve_at_omega(xs, ys, w).rss;
    if (rss < best_rss) {
      best_rss = rss;
      best_w = w;
    }
  }
  // Golden-section refinement around the winning candidate.
  const double step = (w_hi - w_lo) / (n_candidates - 1);
  double lo = std::max(w_lo, best_w - 2.0 * step);
  double hi = std::min(w_hi, best_w + 2.0 * step);
  const double gr = 0.6180339887498949;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = solve_at_omega(xs, ys, x1).rss, f2 = solve_at_omega(xs, ys, x2).rss;
  for (int i = 0; i < 80; ++i) {
    if (f1 < f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = solve_at_omega(xs, ys, x1).rss;
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = solve_at_omega(xs, ys, x2).rss;
    }
  }
  const double w = 0.5 * (lo + hi);
  const LinearSinusoid sol = solve_at_omega(xs, ys, w);
  SinusoidFit fit;
  fit.omega = w;
  fit.offset = sol.c0;
  fit.amplitude = std::hypot(sol.a, sol.b);
  fit.phase = std::atan2(-sol.b, sol.a);
  fit.rms_residual = std::sqrt(sol.rss / xs.size());
  return fit;
}

GaussianFit fit_gaussian(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 5)
    throw std::invalid_argument("gaussian fit needs at least 5 samples");
  double peak = 0.0;
  for (double y : ys) peak = std::max(peak, y);
  if (!(peak > 0.0)) throw std::domain_error("gaussian fit: no positive samples");

  // Quadratic in log space, weighted by y^2 so the wings do not dominate.
  Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
  Eigen::Vector3d atb = Eigen::Vector3d::Zero();
  int used = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (ys[i] < 0.05 * peak) continue;
    const double w = ys[i] * ys[i];
    const Eigen::Vector3d row(1.0, xs[i], xs[i] * xs[i]);
    ata += w * row * row.transpose();
    atb += w * row * std::log(ys[i]);
    ++used;
  }
  if (used < 5) throw std::domain_error("gaussian fit: too few usable samples");
  const Eigen::Vector3d c = ata.ldlt().solve(atb);
  if (!(c(2) < 0.0)) throw std::domain_error("gaussian fit: non-concave log profile");

  GaussianFit fit;
  fit.sigma = std::sqrt(-0.5 / c(2));
  fit.center = -0.5 * c(1) / c(2);
  fit.amplitude = std::exp(c(0) - 0.25 * c(1) * c(1) / c(2));

  // A few Gauss-Newton steps in the direct domain.
  for (int iter = 0; iter < 5; ++iter) {
    Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
    Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
    for (size_t i = 0; i < xs.size(); ++i) {
      const double u = (xs[i] - fit.center) / fit.sigma;
      const double g = std::exp(-0.5 * u * u);
      const double model = fit.amplitude * g;
      const double r = ys[i] - model;
      Eigen::Vector3d jrow(g, model * u / fit.sigma, model * u * u / fit.sigma);
      jtj += jrow * jrow.transpose();
      jtr += jrow * r;
    }
    const Eigen::Vector3d delta = jtj.ldlt().solve(jtr);
    fit.amplitude += delta(0);
    fit.center += delta(1);
    fit.sigma += delta(2);
    if (!(fit.sigma > 0.0) || !std::isfinite(fit.sigma))
      throw std::domain_error("gaussian fit diverged");
  }
  double rss = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double u = (xs[i] - fit.center) / fit.sigma;
    const double r = ys[i] - fit.amplitude * std::exp(-0.5 * u * u);
    rss += r * r;
  }
  fit.rms_residual = std::sqrt(rss / xs.size());
  return fit;
}

}  // namespace spdc
