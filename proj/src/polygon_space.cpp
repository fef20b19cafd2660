#include "polyiso/polygon_space.hpp"

#include <cmath>

namespace polyiso {

void require_nondegenerate(const SamplePolygon& P) {
  if (P.degenerate())
    throw DegeneratePolygon("one edge is at least as long as all the others together; "
                            "the moduli space has at most one point");
}

MatrixX<double> tangent_basis(const SamplePolygon& P, const EdgeVectorsd& p, const Tolerance& tol) {
  require_nondegenerate(P);
  if (!residual(P, p).accepted) throw InconsistentData("point does not satisfy the polygon equations");
  return kernel_basis(tangent_jacobian(p), tol);
}

MatrixX<double> omega_gram(const SamplePolygon& P, const EdgeVectorsd& p, const MatrixX<double>& basis) {
  const Eigen::Index d = basis.cols();
  std::vector<EdgeVectorsd> vs;
  vs.reserve(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) vs.push_back(unflatten(basis.col(i)));
  MatrixX<double> G = MatrixX<double>::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i + 1; j < d; ++j) {
      G(i, j) = omega(P, p, vs[static_cast<std::size_t>(i)], vs[static_cast<std::size_t>(j)]);
      G(j, i) = -G(i, j);
    }
  return G;
}

OmegaKernelReport omega_kernel_check(const SamplePolygon& P, const EdgeVectorsd& p, const Tolerance& tol,
                                     double orbit_tol) {
  OmegaKernelReport r;
  const MatrixX<double> B = tangent_basis(P, p, tol);
  r.tangent_dim = B.cols();
  r.singular = is_singular(p, tol);
  r.expected_kernel_dim = r.singular ? 2 : 3;

  const MatrixX<double> G = omega_gram(P, p, B);
  const MatrixX<double> K = kernel_basis(G, tol);
  r.kernel_dim = K.cols();
  const MatrixX<double> kernel_vectors = B * K;  // orthonormal columns

  const auto orbit = so3_orbit_tangents(p);
  for (const auto& o : orbit) {
    const double n = o.norm();
    if (n <= tol.abs_eps) continue;  // rotation about the axis of a collinear point
    const EdgeVectorsd unit = o / n;
    for (Eigen::Index i = 0; i < B.cols(); ++i)
      r.max_orbit_pairing = std::max(r.max_orbit_pairing, std::abs(omega(P, p, unflatten(B.col(i)), unit)));
    const Eigen::VectorXd v = flatten(unit);
    const Eigen::VectorXd off = v - kernel_vectors * (kernel_vectors.transpose() * v);
    r.max_orbit_residual = std::max(r.max_orbit_residual, off.norm());
  }
  r.pass = r.kernel_dim == r.expected_kernel_dim && r.max_orbit_residual <= orbit_tol &&
           r.max_orbit_pairing <= orbit_tol;
  return r;
}

bool project_polygon_point(const SamplePolygon& P, EdgeVectorsd& p, int max_iterations, double tol) {
  const Eigen::Index k = P.size();
  for (int it = 0; it <= max_iterations; ++it) {
    const auto r = residual(P, p, tol);
    if (r.accepted) return true;
    if (it == max_iterations || !p.allFinite()) break;
    Eigen::VectorXd c(k + 3);
    c.head(k) = r.length_defects;
    c.tail(3) = r.closure_defect;
    MatrixX<double> J = tangent_jacobian(p);
    J.topRows(k) *= 2.0;
    const Eigen::VectorXd step = J.completeOrthogonalDecomposition().solve(c);
    p -= unflatten(step);
  }
  return false;
}

EdgeVectorsd sample_polygon_point(const SamplePolygon& P, Rng& rng, int max_iterations, int max_attempts) {
  require_nondegenerate(P);
  const Eigen::Index k = P.size();
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    EdgeVectorsd p(k, 3);
    for (Eigen::Index i = 0; i < k; ++i) p.row(i) = P.length(i) * rng.unit_vector().transpose();
    if (project_polygon_point(P, p, max_iterations, 1e-13)) return p;
  }
  throw SamplingFailed("Lagrange projection did not converge for any starting configuration");
}

}  // namespace polyiso
