#include "polyiso/rigidity.hpp"

#include <set>

namespace polyiso {

namespace {

void require_positions(const GraphSurface& s, const VertexPositions& x) {
  if (x.rows() != static_cast<Eigen::Index>(s.vertices().size()))
    throw SizeMismatch("one position per vertex is required");
  detail::require_finite(x);
}

MetricSurface realize(const GraphSurface& s, const VertexPositions& x) {
  return MetricSurface(s, induced_lengths(s, x));
}

}  // namespace

Eigen::MatrixXd rigidity_matrix(const GraphSurface& s, const VertexPositions& x) {
  require_positions(s, x);
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(s.edges().size()), 3 * x.rows());
  for (std::size_t i = 0; i < s.edges().size(); ++i) {
    const Edge& e = s.edges()[i];
    const auto u = static_cast<Eigen::Index>(s.vertex_index(e.tail));
    const auto v = static_cast<Eigen::Index>(s.vertex_index(e.head));
    const Eigen::RowVector3d d = x.row(u) - x.row(v);
    R.block(static_cast<Eigen::Index>(i), 3 * u, 1, 3) = d;
    R.block(static_cast<Eigen::Index>(i), 3 * v, 1, 3) = -d;
  }
  return R;
}

Eigen::MatrixXd trivial_motions(const VertexPositions& x) {
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(3 * x.rows(), 6);
  for (Eigen::Index v = 0; v < x.rows(); ++v)
    for (int axis = 0; axis < 3; ++axis) {
      T(3 * v + axis, axis) = 1.0;
      T.block(3 * v, 3 + axis, 3, 1) = Vec3::Unit(axis).cross(x.row(v).transpose());
    }
  return T;
}

Eigen::Index trivial_motion_dim(const VertexPositions& x, const Tolerance& tol) {
  return numerical_rank(trivial_motions(x), tol);
}

RigidityReport infinitesimal_rigidity(const GraphSurface& s, const VertexPositions& x, const Tolerance& tol) {
  if (s.vertices().size() < 3) throw TooFewVertices("rigidity needs at least three vertices");
  require_positions(s, x);
  RigidityReport r;
  r.kernel_dim = 3 * x.rows() - numerical_rank(rigidity_matrix(s, x), tol);
  r.trivial_dim = trivial_motion_dim(x, tol);
  r.rigid = r.kernel_dim == r.trivial_dim;
  return r;
}

BoundaryRigidity boundary_rigid(const GraphSurface& s, const VertexPositions& x, const Tolerance& tol) {
  require_positions(s, x);
  BoundaryRigidity r;
  ConeClosure cone;
  try {
    cone = cone_close(s);
    r.cone_available = true;
  } catch (const DegenerateBoundary&) {
    if (s.closed()) throw NotADisk("closed surface has no boundary");
  }
  const MetricSurface ms = realize(s, x);
  const PolyhedronPoint q = edge_vectors(s, x);
  const Eigen::MatrixXd T = tangent_basis(ms, q, tol);
  r.tangent_dim = T.cols();
  r.delta_rank = numerical_rank(delta_matrix(s) * T, tol);
  r.direct = r.delta_rank == r.tangent_dim;
  if (r.cone_available) {
    const RigidityReport cr = infinitesimal_rigidity(cone.closed, x, tol);
    r.cone_kernel_dim = cr.kernel_dim;
    r.cone = cr.rigid;
  }
  return r;
}

DeltaRank delta_image_rank(const GraphSurface& s, const VertexPositions& x, const Tolerance& tol) {
  require_positions(s, x);
  if (s.closed()) throw NotADisk("closed surface has no boundary");
  DeltaRank r;
  std::set<std::size_t> boundary;
  for (auto g : s.boundary_walk()) {
    boundary.insert(s.vertex_index(s.tail(g)));
    boundary.insert(s.vertex_index(s.head(g)));
  }
  r.boundary_vertices = static_cast<Eigen::Index>(boundary.size());
  const Eigen::MatrixXd K = kernel_basis(rigidity_matrix(s, x), tol);
  Eigen::MatrixXd restricted(3 * r.boundary_vertices, K.cols());
  Eigen::Index row = 0;
  for (std::size_t v : boundary) {
    restricted.middleRows(row, 3) = K.middleRows(3 * static_cast<Eigen::Index>(v), 3);
    row += 3;
  }
  r.vertex_level = numerical_rank(restricted, tol);

  const MetricSurface ms = realize(s, x);
  const PolyhedronPoint q = edge_vectors(s, x);
  const Eigen::MatrixXd T = tangent_basis(ms, q, tol);
  r.tangent_dim = T.cols();
  const Eigen::Index image = numerical_rank(delta_matrix(s) * T, tol);
  r.mod_orbit = image - numerical_rank(orbit_matrix(boundary_point(s, q)), tol);
  return r;
}

LagrangianReport lagrangian_audit(const GraphSurface& s, const VertexPositions& x, const IsotropyOptions& opt) {
  require_positions(s, x);
  if (s.closed()) throw NotADisk("closed surface has no boundary");
  const Eigen::Index k = static_cast<Eigen::Index>(s.boundary_walk().size());
  if (k < 3) throw DegenerateBoundary("boundary has fewer than three edges");
  const PolyhedronPoint q = edge_vectors(s, x);
  if (is_singular(boundary_point(s, q), opt.tol))
    throw SingularBoundary("boundary polygon is collinear; its moduli space is singular there");
  LagrangianReport r;
  r.boundary_edges = k;
  r.moduli_dim = 2 * k - 6;
  r.rank = delta_image_rank(s, x, opt.tol);
  r.isotropy = isotropy_audit(realize(s, x), q, opt);
  r.half_dimensional = 2 * r.rank.mod_orbit == r.moduli_dim;
  r.pass = r.half_dimensional && r.isotropy.pass && (!r.isotropy.chain_checked || r.isotropy.chain_pass);
  return r;
}

}  // namespace polyiso
