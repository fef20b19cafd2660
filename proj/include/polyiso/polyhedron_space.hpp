#pragma once

#include <utility>
#include <vector>

#include "polyiso/numerics.hpp"
#include "polyiso/polygon_space.hpp"
#include "polyiso/surface.hpp"

namespace polyiso {

/// Edge vectors q(e), one row per unoriented edge in the order of
/// `GraphSurface::edges()`, each taken along its declared direction tail -> head.
/// q(-e) = -q(e) holds by construction.
using PolyhedronPoint = EdgeVectorsd;
using PolyhedronTangent = EdgeVectorsd;

/// Vertex positions, one row per vertex in the order of `GraphSurface::vertices()`.
using VertexPositions = EdgeVectorsd;

/// q(e) for an oriented edge.
Vec3 edge_vector(const GraphSurface& s, const EdgeVectorsd& q, OrientedEdge e);

struct PolyhedronResidual {
  Eigen::VectorXd length_defects;    // |q(e)|^2 - l(e)^2, per edge
  Eigen::VectorXd triangle_defects;  // |q(e1) + q(e2) + q(e3)|, per triangle
  Eigen::VectorXd cycle_defects;     // |sum_e h_e q(e)|, per H_1 generator
  double flip_defect = 0;            // zero by representation
  double max_relative_length_defect = 0;
  double max_relative_closure_defect = 0;  // triangles and cycles, relative to the summed lengths
  bool accepted = false;
};

PolyhedronResidual residual(const MetricSurface& s, const PolyhedronPoint& q, double tol = kPointTolerance);

/// q(e) = x(head) - x(tail).
PolyhedronPoint edge_vectors(const GraphSurface& s, const VertexPositions& x);

/// Edge lengths |x(head) - x(tail)|.
EdgeLengths induced_lengths(const GraphSurface& s, const VertexPositions& x);

/// Integrates q along a breadth-first spanning forest starting with `base_vertex`
/// at the origin. Throws InconsistentCycles if a non-tree edge disagrees with
/// the integrated positions by more than `tol` times the summed lengths.
VertexPositions reconstruct(const GraphSurface& s, const PolyhedronPoint& q, int base_vertex, double tol = 1e-9);

/// Linearized constraints at q over the 3|E| edge-vector coordinates: one row
/// per length equation (factor 2 dropped), three per triangle, three per H_1
/// generator.
Eigen::MatrixXd polyhedron_jacobian(const GraphSurface& s, const PolyhedronPoint& q);

/// Orthonormal basis (columns, flattened layout) of the tangent space at q.
/// Throws InconsistentData when q fails the residual check.
Eigen::MatrixXd tangent_basis(const MetricSurface& s, const PolyhedronPoint& q, const Tolerance& tol = {});

/// q o delta, the boundary polygon point.
EdgeVectorsd boundary_point(const GraphSurface& s, const PolyhedronPoint& q);

/// s o delta. Linear, so it applies equally to points and tangents.
EdgeVectorsd d_delta(const GraphSurface& s, const PolyhedronTangent& t);

/// Matrix of d_delta in flattened layout: 3|F| x 3|E|.
Eigen::MatrixXd delta_matrix(const GraphSurface& s);

/// The generator a in so(3) with a(p_j) = t_j for a closed non-collinear
/// triangle p_1 + p_2 + p_3 = 0 and an infinitesimal deformation t of it.
/// Throws CollinearTriangle, or InconsistentData if the data is not a
/// triangle tangent within `tol`. Defects are measured relative to the
/// larger of max |t_j| and `tangent_scale`.
SkewGenerator fit_rotation(const Vec3& p1, const Vec3& p2, const Vec3& p3, const Vec3& t1, const Vec3& t2,
                           const Vec3& t3, double tol = 1e-9, double tangent_scale = 0);

/// Restriction of (q, s) from s_big to the edges of `collapsed`, which must be
/// a subcomplex sharing edge ids.
std::pair<PolyhedronPoint, PolyhedronTangent> collapse_restrict(const GraphSurface& s_big,
                                                                const GraphSurface& collapsed,
                                                                const PolyhedronPoint& q,
                                                                const PolyhedronTangent& t);

/// t - a o q with a fitted on the triangle of the collapse site at
/// `walk_position`; the result vanishes on that triangle's edges.
/// `tangent_scale` is forwarded to fit_rotation.
PolyhedronTangent gauge_normalize(const GraphSurface& s, const PolyhedronPoint& q, const PolyhedronTangent& t,
                                  std::size_t walk_position, double tangent_scale = 0);

struct IsotropyOptions {
  Tolerance tol;
  double rel_threshold = 1e-8;  // pass iff max |M| <= rel_threshold * max(largest summand, 1e-12)
  bool allow_nonorientable = false;
  bool verify_collapse_chain = false;
};

struct IsotropyReport {
  Eigen::Index tangent_dim = 0;
  Eigen::MatrixXd gram;       // M_ij = omega(d_delta b_i, d_delta b_j)
  double max_omega = 0;       // max |M_ij|
  double max_summand = 0;     // largest single summand seen
  double threshold = 0;
  bool pass = false;

  bool chain_checked = false;
  std::size_t chain_steps = 0;
  double max_gauge_shift = 0;     // |omega before - omega after| gauge normalization
  double max_termwise_gap = 0;    // surviving summands, S against collapsed S'
  double max_replaced_summand = 0;
  bool chain_pass = true;
};

/// Gram matrix of the pulled-back form on the tangent space at q, and
/// optionally the termwise collapse-chain comparison. Throws NotOrientable on
/// non-orientable input unless allowed.
IsotropyReport isotropy_audit(const MetricSurface& s, const PolyhedronPoint& q, const IsotropyOptions& opt = {});

}  // namespace polyiso
