#include "kdeform/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace kdeform {

bool Tolerance::close(double a, double b) const {
  return std::abs(a - b) <= atol + rtol * std::max(std::abs(a), std::abs(b));
}

double scaled_error(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : label) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t z = seed ^ h;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Sampler::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Sampler::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

Vec Sampler::coefficients(int n) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = uniform(-1.0, 1.0);
  return v;
}

Point Sampler::point_in(const GeometrySpec& geom, int max_tries) {
  const Box& box = geom.sample_box;
  Point p(geom.dim);
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    for (int i = 0; i < geom.dim; ++i) p(i) = uniform(box.lower(i), box.upper(i));
    if (geom.in_domain(p)) return p;
  }
  throw DomainError("sampler found no domain point in the sample box of " + geom.name);
}

}  // namespace kdeform
