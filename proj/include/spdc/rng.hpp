#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace spdc {

// splitmix64; used to derive independent per-scan-point seeds so that
// parallel or reordered evaluation of scan points cannot change results.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// mt19937_64 with hand-rolled variate transforms. The standard engine is
// bit-portable; std::*_distribution is not, and seed determinism of the
// simulated streams is a contract here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // uniform in (lo, hi]
  double uniform_in(double lo, double hi) { return hi - (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  // exponential waiting time with the given mean (> 0)
  double exponential(double mean) { return -mean * std::log1p(-uniform()); }

  // Inversion by sequential search; exact and portable. All means used by the
  // simulator are per-gate expectations well below one.
  std::uint64_t poisson(double mean) {
    if (mean < 0.0) throw std::invalid_argument("poisson: negative mean");
    if (mean == 0.0) return 0;
    if (mean > 50.0) throw std::invalid_argument("poisson: mean too large for per-gate sampler");
    double p = std::exp(-mean);
    double cdf = p;
    const double u = uniform();
    std::uint64_t k = 0;
    while (u > cdf && k < 4096) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
    }
    return k;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace spdc
