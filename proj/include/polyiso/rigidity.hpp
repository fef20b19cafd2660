#pragma once

#include "polyiso/numerics.hpp"
#include "polyiso/polyhedron_space.hpp"
#include "polyiso/surface.hpp"

namespace polyiso {

/// Jacobian of the squared-length map without its factor 2: the row of edge
/// (u, v) holds x_u - x_v in u's block and x_v - x_u in v's block.
Eigen::MatrixXd rigidity_matrix(const GraphSurface& s, const VertexPositions& x);

/// Translations and rotation fields x -> e_i x x, as the columns of a 3|V| x 6 matrix.
Eigen::MatrixXd trivial_motions(const VertexPositions& x);

/// Dimension of the span of the trivial motions: 6 unless the points are collinear.
Eigen::Index trivial_motion_dim(const VertexPositions& x, const Tolerance& tol = {});

struct RigidityReport {
  Eigen::Index kernel_dim = 0;
  Eigen::Index trivial_dim = 0;
  bool rigid = false;
};

/// Kernel of the rigidity matrix against the trivial motions. Throws
/// TooFewVertices below three vertices.
RigidityReport infinitesimal_rigidity(const GraphSurface& s, const VertexPositions& x, const Tolerance& tol = {});

inline bool infinitesimally_rigid(const GraphSurface& s, const VertexPositions& x, const Tolerance& tol = {}) {
  return infinitesimal_rigidity(s, x, tol).rigid;
}

struct BoundaryRigidity {
  Eigen::Index tangent_dim = 0;
  Eigen::Index delta_rank = 0;      // rank of d_delta on the tangent space
  bool direct = false;              // d_delta injective on the tangent space
  bool cone_available = false;      // cone_close found an apex
  Eigen::Index cone_kernel_dim = 0;
  bool cone = false;                // closed cone infinitesimally rigid
};

/// Both certificates of boundary rigidity for a disk realized at x. Throws
/// NotADisk.
BoundaryRigidity boundary_rigid(const GraphSurface& s, const VertexPositions& x, const Tolerance& tol = {});

struct DeltaRank {
  Eigen::Index vertex_level = 0;  // rank of the boundary-vertex restriction on ker R
  Eigen::Index mod_orbit = 0;     // rank of d_delta on the tangent space minus the orbit rank
  Eigen::Index tangent_dim = 0;   // edge-vector model
  Eigen::Index boundary_vertices = 0;
};

DeltaRank delta_image_rank(const GraphSurface& s, const VertexPositions& x, const Tolerance& tol = {});

struct LagrangianReport {
  Eigen::Index boundary_edges = 0;  // |F|
  Eigen::Index moduli_dim = 0;      // 2|F| - 6
  DeltaRank rank;
  IsotropyReport isotropy;
  bool half_dimensional = false;
  bool pass = false;
};

/// Rank of d_delta modulo the orbit against half the moduli dimension, plus
/// the isotropy audit. Throws SingularBoundary at a collinear boundary polygon.
LagrangianReport lagrangian_audit(const GraphSurface& s, const VertexPositions& x, const IsotropyOptions& opt = {});

}  // namespace polyiso
