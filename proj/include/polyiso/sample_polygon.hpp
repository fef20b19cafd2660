#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <utility>

#include "polyiso/errors.hpp"

namespace polyiso {

/// A closed 1-complex with k cyclically ordered edges and a positive length
/// on each one.
class SamplePolygon {
 public:
  SamplePolygon() = default;

  explicit SamplePolygon(Eigen::VectorXd lengths) : lengths_(std::move(lengths)) {
    if (lengths_.size() < 1) throw InvalidLengths("a sample polygon needs at least one edge");
    for (Eigen::Index i = 0; i < lengths_.size(); ++i) {
      if (!(lengths_(i) > 0.0) || !std::isfinite(lengths_(i)))
        throw InvalidLengths("edge length must be positive and finite", {static_cast<int>(i)});
    }
  }

  Eigen::Index size() const { return lengths_.size(); }
  double length(Eigen::Index i) const { return lengths_(i); }
  const Eigen::VectorXd& lengths() const { return lengths_; }

  /// True when some edge is at least as long as all the others together;
  /// such a polygon has at most one realization up to isometry.
  bool degenerate() const {
    const double total = lengths_.sum();
    return 2.0 * lengths_.maxCoeff() >= total;
  }

 private:
  Eigen::VectorXd lengths_;
};

}  // namespace polyiso
