#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "projlie/errors.hpp"
#include "projlie/geometry.hpp"

namespace projlie {

// Halton points in base 2/3 with a seeded Cranley-Patterson rotation, mapped
// into the domain box and filtered by the domain predicate.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : seed_(seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    shift_[0] = u(rng);
    shift_[1] = u(rng);
  }

  static double radical_inverse(std::uint64_t i, unsigned base) {
    double inv = 1.0 / base, f = inv, r = 0.0;
    while (i > 0) {
      r += f * static_cast<double>(i % base);
      i /= base;
      f *= inv;
    }
    return r;
  }

  std::vector<Point> points(const Domain& d, std::size_t n, std::size_t max_tries = 200000) const {
    std::vector<Point> out;
    out.reserve(n);
    for (std::uint64_t i = 1; out.size() < n; ++i) {
      if (i > max_tries)
        throw DomainError("sampler found only " + std::to_string(out.size()) + " admissible points of " +
                          std::to_string(n));
      const double u = std::fmod(radical_inverse(i, 2) + shift_[0], 1.0);
      const double w = std::fmod(radical_inverse(i, 3) + shift_[1], 1.0);
      const Point p{d.x_min + u * (d.x_max - d.x_min), d.y_min + w * (d.y_max - d.y_min)};
      if (d.contains(p)) out.push_back(p);
    }
    return out;
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  double shift_[2];
};

// n equally spaced y values spanning the domain box, endpoints included,
// keeping those for which some x of the box is admissible. For quantities
// that depend on y alone.
inline std::vector<double> uniform_y_grid(const Domain& d, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    const double y = n == 1 ? 0.5 * (d.y_min + d.y_max) : d.y_min + (d.y_max - d.y_min) * i / (n - 1);
    for (int k = 0; k <= 8; ++k) {
      if (d.contains({d.x_min + (d.x_max - d.x_min) * k / 8, y})) {
        out.push_back(y);
        break;
      }
    }
  }
  return out;
}

}  // namespace projlie
