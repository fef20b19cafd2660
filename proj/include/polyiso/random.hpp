#pragma once

#include <cstdint>
#include <random>

#include "polyiso/numerics.hpp"

namespace polyiso {

/// Seeded generator with platform-independent output: mt19937_64 is fully
/// specified by the standard and the conversions below avoid the
/// implementation-defined std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream seed for trial `stream` under `master` (splitmix64).
  static std::uint64_t derive(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(next() % n); }

  Vec3 in_cube(double half_width = 1.0) {
    return {uniform(-half_width, half_width), uniform(-half_width, half_width), uniform(-half_width, half_width)};
  }

  Vec3 unit_vector() {
    for (;;) {
      const Vec3 v = in_cube();
      const double n = v.norm();
      if (n > 1e-3 && n <= 1.0) return v / n;
    }
  }

  Mat3 rotation() {
    // Unit quaternion from four uniform coordinates in the ball.
    for (;;) {
      Eigen::Vector4d q(uniform(-1, 1), uniform(-1, 1), uniform(-1, 1), uniform(-1, 1));
      const double n = q.norm();
      if (n > 1e-3 && n <= 1.0) return Eigen::Quaterniond(q / n).toRotationMatrix();
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace polyiso
