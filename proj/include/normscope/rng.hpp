#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "vector.hpp"

namespace normscope {

/// Seeded generator used by every randomized operation.
///
/// Raw bits come from SplitMix64, doubles take the top 53 bits and normals
/// use Box-Muller. A (seed, call sequence) pair yields identical values on
/// every platform and standard library.
class Rng {
public:
  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next_u64() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  Vector normal_vector(std::size_t dim) {
    Vector v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = normal();
    return v;
  }

  /// Independent stream for sub-task `index` (restart, subspace, ...).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) noexcept {
    Rng r(seed ^ (0xD1B54A32D192ED03ull * (index + 1)));
    return r.next_u64();
  }

private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace normscope
