#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <string>

#include "polyiso/numerics.hpp"
#include "polyiso/random.hpp"
#include "polyiso/sample_polygon.hpp"

namespace polyiso {

/// Element of so(3), stored as its antisymmetric matrix.
class SkewGenerator {
 public:
  SkewGenerator() : a_(Mat3::Zero()) {}

  static SkewGenerator from_axis(const Vec3& axis) { return SkewGenerator(cross_matrix(axis)); }

  /// Throws InconsistentData unless `a + a^T` vanishes within `tol * |a|`.
  static SkewGenerator from_matrix(const Mat3& a, double tol = 1e-12) {
    if (skew_defect(a) > tol * std::max(1.0, a.cwiseAbs().maxCoeff()))
      throw InconsistentData("matrix is not antisymmetric");
    return SkewGenerator(0.5 * (a - a.transpose()));
  }

  const Mat3& matrix() const { return a_; }
  Vec3 axis() const { return {a_(2, 1), a_(0, 2), a_(1, 0)}; }
  Vec3 operator()(const Vec3& v) const { return a_ * v; }

  /// a applied to every row of an edge-vector map.
  EdgeVectorsd apply(const EdgeVectorsd& p) const { return p * a_.transpose(); }

 private:
  explicit SkewGenerator(const Mat3& a) : a_(a) {}
  Mat3 a_;
};

/// Defects of the length equations <p_i, p_i> = l_i^2 and of the closure
/// sum_i p_i = 0.
template <typename Scalar>
struct PolygonResidual {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> length_defects;  // <p_i,p_i> - l_i^2
  Vector3<Scalar> closure_defect;
  Scalar max_relative_length_defect = 0;  // max_i |defect_i| / l_i^2
  Scalar relative_closure_defect = 0;     // |closure| / sum_i l_i
  bool accepted = false;
};

/// Relative tolerance of the PolygonPoint / PolygonTangent invariants.
inline constexpr double kPointTolerance = 1e-10;

template <typename Derived>
PolygonResidual<typename Derived::Scalar> residual(const SamplePolygon& P, const Eigen::MatrixBase<Derived>& p,
                                                    double tol = kPointTolerance) {
  using Scalar = typename Derived::Scalar;
  if (p.rows() != P.size() || p.cols() != 3) throw SizeMismatch("polygon point must have one 3-vector per edge");
  PolygonResidual<Scalar> r;
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> l = P.lengths().template cast<Scalar>();
  r.length_defects = p.rowwise().squaredNorm() - l.cwiseProduct(l);
  r.closure_defect = p.colwise().sum().transpose();
  r.max_relative_length_defect = r.length_defects.cwiseAbs().cwiseQuotient(l.cwiseProduct(l)).maxCoeff();
  r.relative_closure_defect = r.closure_defect.norm() / l.sum();
  r.accepted = r.max_relative_length_defect <= Scalar(tol) && r.relative_closure_defect <= Scalar(tol);
  return r;
}

/// Linearized equations at p: row i is p_i in block i (the factor 2 of the
/// derivative is dropped), followed by three closure rows.
template <typename Derived>
MatrixX<typename Derived::Scalar> tangent_jacobian(const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index k = p.rows();
  MatrixX<Scalar> J = MatrixX<Scalar>::Zero(k + 3, 3 * k);
  for (Eigen::Index i = 0; i < k; ++i) {
    J.block(i, 3 * i, 1, 3) = p.row(i);
    J.block(k, 3 * i, 3, 3).setIdentity();
  }
  return J;
}

/// Defects of the tangent equations <t_i, p_i> = 0 and sum_i t_i = 0, relative
/// to |t| |p|.
template <typename DerivedP, typename DerivedT>
typename DerivedP::Scalar tangent_defect(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedT>& t) {
  using Scalar = typename DerivedP::Scalar;
  if (p.rows() != t.rows() || t.cols() != 3) throw SizeMismatch("tangent must have one 3-vector per edge");
  const Scalar scale = std::max(t.norm() * p.norm(), std::numeric_limits<Scalar>::min());
  const Scalar ortho = (p.cwiseProduct(t)).rowwise().sum().cwiseAbs().maxCoeff();
  const Scalar closure = t.colwise().sum().norm();
  return std::max(ortho / scale, closure / std::max(t.norm(), std::numeric_limits<Scalar>::min()));
}

/// Per-edge summands det[t_j, t'_j, p_j] / l_j^2 of the skew form omega_p(t, t').
template <typename DP, typename DT, typename DU>
Eigen::Matrix<typename DP::Scalar, Eigen::Dynamic, 1> omega_summands(const SamplePolygon& P,
                                                                     const Eigen::MatrixBase<DP>& p,
                                                                     const Eigen::MatrixBase<DT>& t,
                                                                     const Eigen::MatrixBase<DU>& u) {
  using Scalar = typename DP::Scalar;
  const Eigen::Index k = P.size();
  if (p.rows() != k || t.rows() != k || u.rows() != k || p.cols() != 3 || t.cols() != 3 || u.cols() != 3)
    throw SizeMismatch("omega: point and tangents must have one 3-vector per polygon edge");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> s(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const Vector3<Scalar> tj = t.row(j).transpose(), uj = u.row(j).transpose(), pj = p.row(j).transpose();
    const Scalar l = static_cast<Scalar>(P.length(j));
    s(j) = triple_product(tj, uj, pj) / (l * l);
  }
  return s;
}

template <typename DP, typename DT, typename DU>
typename DP::Scalar omega(const SamplePolygon& P, const Eigen::MatrixBase<DP>& p, const Eigen::MatrixBase<DT>& t,
                          const Eigen::MatrixBase<DU>& u) {
  return omega_summands(P, p, t, u).sum();
}

/// Images a(p) of the three standard generators of so(3).
template <typename Derived>
std::array<EdgeVectors<typename Derived::Scalar>, 3> so3_orbit_tangents(const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  std::array<EdgeVectors<Scalar>, 3> out;
  for (int axis = 0; axis < 3; ++axis) out[axis] = p * so3_generator<Scalar>(axis).transpose();
  return out;
}

/// Orbit tangents as the columns of a 3k x 3 matrix in flattened layout.
template <typename Derived>
MatrixX<typename Derived::Scalar> orbit_matrix(const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  const auto orbit = so3_orbit_tangents(p);
  MatrixX<Scalar> m(3 * p.rows(), 3);
  for (int axis = 0; axis < 3; ++axis) m.col(axis) = flatten(orbit[axis]);
  return m;
}

/// Collinear configurations (rank of the edge vectors <= 1) are exactly the
/// singular points of the polygon space.
template <typename Derived>
bool is_singular(const Eigen::MatrixBase<Derived>& p, const Tolerance& tol = {}) {
  return numerical_rank(p.transpose(), tol) <= 1;
}

/// Throws DegeneratePolygon when one edge is at least the sum of the others.
void require_nondegenerate(const SamplePolygon& P);

/// Orthonormal basis (columns, flattened layout) of the tangent space at p.
/// Throws DegeneratePolygon, SizeMismatch, or InconsistentData when p is off
/// the polygon space.
MatrixX<double> tangent_basis(const SamplePolygon& P, const EdgeVectorsd& p, const Tolerance& tol = {});

/// Gram matrix omega(b_i, b_j) over the columns of a flattened basis.
MatrixX<double> omega_gram(const SamplePolygon& P, const EdgeVectorsd& p, const MatrixX<double>& basis);

struct OmegaKernelReport {
  Eigen::Index tangent_dim = 0;
  Eigen::Index kernel_dim = 0;
  Eigen::Index expected_kernel_dim = 0;  // 3 at smooth points, 2 at singular ones
  bool singular = false;
  double max_orbit_pairing = 0;   // max |omega(b, o)| over basis b and unit orbit tangents o
  double max_orbit_residual = 0;  // distance of unit orbit tangents from ker omega
  bool pass = false;
};

/// Computes ker omega on the tangent space at p and checks that it is the
/// tangent space of the SO(3) orbit.
OmegaKernelReport omega_kernel_check(const SamplePolygon& P, const EdgeVectorsd& p, const Tolerance& tol = {},
                                     double orbit_tol = 1e-9);

/// Random point of the polygon space: random directions scaled by the
/// lengths, then minimum-norm Newton (Lagrange) corrections onto the
/// closure and length equations. Throws SamplingFailed after repeated
/// non-convergence.
EdgeVectorsd sample_polygon_point(const SamplePolygon& P, Rng& rng, int max_iterations = 100, int max_attempts = 50);

/// Projects `start` onto the polygon space with minimum-norm Newton steps.
/// Returns false if not converged within `max_iterations`.
bool project_polygon_point(const SamplePolygon& P, EdgeVectorsd& p, int max_iterations = 100, double tol = 1e-13);

}  // namespace polyiso
