#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace spdc {

// Bracketed bisection refined by secant steps. The secant update is taken
// whenever it lands strictly inside the current bracket, otherwise the step
// falls back to bisection, so convergence is guaranteed for any continuous f
// with f(lo)*f(hi) <= 0.
template <typename F>
double solve_bracketed(F&& f, double lo, double hi, double f_tol,
                       double x_tol = 1e-15, int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi)) {
    throw std::domain_error("solve_bracketed: no sign change in [" +
                            std::to_string(lo) + ", " + std::to_string(hi) +
                            "]; f = " + std::to_string(flo) + ", " +
                            std::to_string(fhi));
  }
  double x = lo, fx = flo;
  for (int i = 0; i < max_iter; ++i) {
    double step = hi - lo;
    double x_secant = (fhi != flo) ? (lo * fhi - hi * flo) / (fhi - flo) : lo + 0.5 * step;
    double margin = 0.01 * step;
    x = (x_secant > lo + margin && x_secant < hi - margin) ? x_secant : lo + 0.5 * step;
    fx = f(x);
    if (std::fabs(fx) <= f_tol || 0.5 * (hi - lo) <= x_tol) return x;
    if (std::signbit(fx) == std::signbit(flo)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
  }
  return x;
}

}  // namespace spdc
