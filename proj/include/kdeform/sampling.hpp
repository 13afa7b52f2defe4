#pragma once

#include "kdeform/geometry.hpp"

#include <cstdint>
#include <random>
#include <string_view>

namespace kdeform {

/// Mixed absolute/relative comparison: |a - b| <= atol + rtol * max(|a|, |b|).
struct Tolerance {
  double atol = 1e-7;
  double rtol = 1e-7;

  [[nodiscard]] bool close(double a, double b) const;
};

inline constexpr Tolerance kFirstOrderTolerance{1e-7, 1e-7};
inline constexpr Tolerance kSecondOrderTolerance{1e-5, 1e-5};

/// |a - b| / max(1, |a|, |b|).
double scaled_error(double a, double b);

/// Stable per-label seed derived from a run seed (FNV-1a over the label, then splitmix64).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);

/// Seeded sampler. Doubles are built from the top 53 bits of mt19937_64, so a
/// seed reproduces the same stream on every platform.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  double uniform();
  double uniform(double lo, double hi);
  /// Components uniform in [-1, 1].
  Vec coefficients(int n);
  /// Uniform in the geometry's sample box, rejected against its domain.
  Point point_in(const GeometrySpec& geom, int max_tries = 100000);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace kdeform
