#pragma once

// Hand-rolled generators for the property tests. Every generator takes the
// Rng explicitly so that a failing case is reproduced by its seed alone.

#include <Eigen/Dense>
#include <doctest.h>

#include <cstdint>

#include "oracle/rational_elimination.hpp"
#include "polyiso/random.hpp"
#include "polyiso/sample_polygon.hpp"

namespace testgen {

using polyiso::Rng;

inline constexpr std::uint64_t kMasterSeed = 20261019;

/// rows x cols with rank exactly r almost surely: a product of Gaussians-ish factors.
inline Eigen::MatrixXd low_rank(Rng& rng, int rows, int cols, int r) {
  Eigen::MatrixXd a(rows, r), b(r, cols);
  for (int i = 0; i < a.size(); ++i) a.data()[i] = rng.uniform(-1, 1);
  for (int i = 0; i < b.size(); ++i) b.data()[i] = rng.uniform(-1, 1);
  return a * b;
}

/// Small-integer matrix with its exact rational copy.
struct IntegerMatrix {
  Eigen::MatrixXd real;
  oracle::RationalMatrix exact;
};

inline IntegerMatrix integer_low_rank(Rng& rng, int rows, int cols, int r) {
  Eigen::MatrixXi a(rows, r), b(r, cols);
  for (int i = 0; i < a.size(); ++i) a.data()[i] = static_cast<int>(rng.index(7)) - 3;
  for (int i = 0; i < b.size(); ++i) b.data()[i] = static_cast<int>(rng.index(7)) - 3;
  const Eigen::MatrixXi m = a * b;
  IntegerMatrix out{m.cast<double>(), {}};
  for (int i = 0; i < rows; ++i) {
    std::vector<oracle::Rational> row;
    for (int j = 0; j < cols; ++j) row.emplace_back(m(i, j));
    out.exact.push_back(std::move(row));
  }
  return out;
}

/// Lengths in [0.5, 2] with no edge as long as the rest together.
inline polyiso::SamplePolygon nondegenerate_polygon(Rng& rng, int k) {
  for (;;) {
    Eigen::VectorXd l(k);
    for (int i = 0; i < k; ++i) l(i) = rng.uniform(0.5, 2.0);
    polyiso::SamplePolygon P(l);
    if (2.0 * l.maxCoeff() < l.sum() * (1.0 - 1e-3)) return P;
  }
}

inline oracle::RationalMatrix exact_copy(const Eigen::MatrixXd& m) {
  // Only for matrices whose entries are exactly representable small dyadics.
  oracle::RationalMatrix out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<oracle::Rational> row;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      const long scaled = static_cast<long>(v * 1024.0);
      REQUIRE_MESSAGE(static_cast<double>(scaled) == v * 1024.0, "entry not a multiple of 1/1024");
      row.emplace_back(oracle::Rational(scaled) / 1024);
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace testgen
