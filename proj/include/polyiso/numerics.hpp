#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "polyiso/errors.hpp"

namespace polyiso {

/// Thresholding rule shared by every rank statement in the library.
///
/// A singular value counts as nonzero when it exceeds
/// `max(rows, cols) * sigma_max * rel_eps + abs_eps`.
struct Tolerance {
  double rel_eps = 1e-9;
  double abs_eps = 1e-12;

  static Tolerance tight() { return {1e-12, 1e-14}; }
};

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// One 3-vector per row. Row-major so that the flattened view
/// (x0, y0, z0, x1, ...) is a plain `Map` over the storage.
template <typename Scalar>
using EdgeVectors = Eigen::Matrix<Scalar, Eigen::Dynamic, 3, Eigen::RowMajor>;

using Vec3 = Vector3<double>;
using Mat3 = Matrix3<double>;
using EdgeVectorsd = EdgeVectors<double>;

template <typename Scalar>
Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> flatten(const EdgeVectors<Scalar>& v) {
  return {v.data(), v.size()};
}

template <typename Derived>
EdgeVectors<typename Derived::Scalar> unflatten(const Eigen::MatrixBase<Derived>& flat) {
  using Scalar = typename Derived::Scalar;
  if (flat.size() % 3 != 0) throw SizeMismatch("flattened edge vectors must have length divisible by 3");
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> copy = flat;
  return Eigen::Map<const EdgeVectors<Scalar>>(copy.data(), copy.size() / 3, 3);
}

namespace detail {

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m) {
  if (!m.allFinite()) throw InvalidMatrix("matrix has non-finite entries");
}

template <typename Scalar>
Scalar rank_threshold(Scalar sigma_max, Eigen::Index rows, Eigen::Index cols, const Tolerance& tol) {
  return static_cast<Scalar>(std::max(rows, cols)) * sigma_max * static_cast<Scalar>(tol.rel_eps) +
         static_cast<Scalar>(tol.abs_eps);
}

template <typename Scalar, typename Vec>
Eigen::Index count_above(const Vec& sigma, Eigen::Index rows, Eigen::Index cols, const Tolerance& tol) {
  if (sigma.size() == 0) return 0;
  const Scalar cut = rank_threshold<Scalar>(sigma(0), rows, cols, tol);
  Eigen::Index r = 0;
  while (r < sigma.size() && sigma(r) > cut) ++r;
  return r;
}

}  // namespace detail

/// Number of singular values above the tolerance threshold.
template <typename Derived>
Eigen::Index numerical_rank(const Eigen::MatrixBase<Derived>& m, const Tolerance& tol = {}) {
  using Scalar = typename Derived::Scalar;
  detail::require_finite(m);
  if (m.rows() == 0 || m.cols() == 0) return 0;
  const MatrixX<Scalar> a = m;
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(a);
  return detail::count_above<Scalar>(svd.singularValues(), a.rows(), a.cols(), tol);
}

/// Orthonormal basis of the right null space at the thresholded rank, one
/// basis vector per column. An empty (cols x 0) matrix means a trivial kernel.
template <typename Derived>
MatrixX<typename Derived::Scalar> kernel_basis(const Eigen::MatrixBase<Derived>& m, const Tolerance& tol = {}) {
  using Scalar = typename Derived::Scalar;
  detail::require_finite(m);
  const Eigen::Index n = m.cols();
  if (m.rows() == 0) return MatrixX<Scalar>::Identity(n, n);
  if (n == 0) return MatrixX<Scalar>(0, 0);
  const MatrixX<Scalar> a = m;
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(a, Eigen::ComputeFullV);
  const Eigen::Index r = detail::count_above<Scalar>(svd.singularValues(), a.rows(), a.cols(), tol);
  return svd.matrixV().rightCols(n - r);
}

/// Orthonormal basis of the column space at the thresholded rank.
template <typename Derived>
MatrixX<typename Derived::Scalar> range_basis(const Eigen::MatrixBase<Derived>& m, const Tolerance& tol = {}) {
  using Scalar = typename Derived::Scalar;
  detail::require_finite(m);
  if (m.rows() == 0 || m.cols() == 0) return MatrixX<Scalar>(m.rows(), 0);
  const MatrixX<Scalar> a = m;
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(a, Eigen::ComputeThinU);
  const Eigen::Index r = detail::count_above<Scalar>(svd.singularValues(), a.rows(), a.cols(), tol);
  return svd.matrixU().leftCols(r);
}

/// Minimum-norm least-squares solution of `m x = b`.
template <typename DerivedA, typename DerivedB>
MatrixX<typename DerivedA::Scalar> least_squares(const Eigen::MatrixBase<DerivedA>& m,
                                                 const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  detail::require_finite(m);
  detail::require_finite(b);
  if (m.rows() != b.rows()) throw SizeMismatch("least_squares: row counts differ");
  const MatrixX<Scalar> a = m;
  return a.completeOrthogonalDecomposition().solve(b);
}

/// det[a b c], the volume of the parallelepiped spanned by the columns.
template <typename A, typename B, typename C>
typename A::Scalar triple_product(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b,
                                  const Eigen::MatrixBase<C>& c) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(A, 3);
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(B, 3);
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(C, 3);
  return a.dot(b.cross(c));
}

/// The antisymmetric matrix `[v]x` with `[v]x w = v x w`.
template <typename Derived>
Matrix3<typename Derived::Scalar> cross_matrix(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  Matrix3<Scalar> a;
  a << Scalar(0), -v(2), v(1),
       v(2), Scalar(0), -v(0),
       -v(1), v(0), Scalar(0);
  return a;
}

/// Standard basis of so(3): infinitesimal rotation about axis `i`.
template <typename Scalar = double>
Matrix3<Scalar> so3_generator(int axis) {
  return cross_matrix(Vector3<Scalar>::Unit(axis));
}

/// Largest |a + a^T| entry; zero for an exact element of so(3).
template <typename Derived>
typename Derived::Scalar skew_defect(const Eigen::MatrixBase<Derived>& a) {
  return (a + a.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace polyiso
