#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace qnd {

// Seeded sampler with fully specified output. mt19937_64 is pinned by the
// standard; the variate transforms below are spelled out here instead of
// using std::*_distribution, whose algorithms are implementation-defined.
// Identical seeds therefore give identical streams on every platform.
class SeededSampler {
 public:
  explicit SeededSampler(std::uint64_t seed) : rng_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  }

  double uniform_in(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller; the spare variate is cached so draws come in a fixed order.
  double normal(double sigma = 1.0) {
    if (have_spare_) {
      have_spare_ = false;
      return sigma * spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return sigma * r * std::cos(a);
  }

  // Inverse-CDF draw from the Cauchy law with scale sigma.
  double cauchy(double sigma) {
    double u = uniform();
    while (u == 0.5) u = uniform();
    return sigma * std::tan(M_PI * (u - 0.5));
  }

  // Uniform integer in [lo, hi] by rejection-free scaling (bias is < 2^-53
  // for the small ranges used here).
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform() * static_cast<double>(hi - lo + 1));
  }

 private:
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace qnd
