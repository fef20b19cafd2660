#pragma once

#include <array>
#include <optional>
#include <vector>

#include "polyiso/polyhedron_space.hpp"
#include "polyiso/random.hpp"
#include "polyiso/surface.hpp"

namespace polyiso {

/// Oriented triangles as vertex cycles (x, y, z) over vertices 0 .. n-1; the
/// cycle runs x -> y -> z -> x.
using TriangleList = std::vector<std::array<int, 3>>;

/// Graph-surface of a coherently oriented triangle list. Vertex i gets id
/// i + 1; each unordered pair {a < b} becomes an edge a+1 -> b+1, numbered in
/// order of first appearance.
GraphSurface surface_from_triangles(const TriangleList& triangles);

namespace fixtures {

GraphSurface single_triangle();
GraphSurface tetrahedron_minus_face();
/// Square a b c d on four vertices with walk abcdabcd.
GraphSurface rp2_square();
/// Star with three edges; every edge is walked once in each direction.
GraphSurface thickened_tree();
/// Three parallel edges between two vertices, walked as 1 -2 3 -1 2 -3.
GraphSurface theta_graph();

/// The embedding q and tangents s1, s2 of the projective-plane square, all
/// lengths 1, edge order a b c d.
struct Rp2Data {
  GraphSurface surface;
  EdgeLengths lengths;
  PolyhedronPoint q;
  PolyhedronTangent s1;
  PolyhedronTangent s2;
};
Rp2Data rp2_data();

}  // namespace fixtures

/// A combinatorial disk under construction: triangles plus the boundary
/// cycle of vertices in walk order.
struct DiskComplex {
  TriangleList triangles;
  std::vector<int> ring;
  int vertex_count = 0;

  static DiskComplex triangle();
  bool adjacent(int a, int b) const;
  /// Glue a triangle with a new vertex onto the boundary edge ring[i] -> ring[i+1].
  DiskComplex grow(std::size_t i) const;
  /// Whether ring[i], ring[i+1], ring[i+2] can be closed by a new edge.
  bool can_close_ear(std::size_t i) const;
  /// Fill the angle at ring[i+1] with a triangle and a new edge ring[i] -> ring[i+2].
  DiskComplex close_ear(std::size_t i) const;
};

struct DiskOptions {
  int max_triangles = 20;
  double ear_probability = 0.35;
  double collinear_tol = 1e-6;  // reject triangles with |a x b| <= tol |a| |b|
};

struct DiskSample {
  GraphSurface surface;
  VertexPositions positions;  // uniform in [-1, 1]^3
};

/// Seeded random triangulated disk with 1 .. max_triangles triangles whose
/// cone closure exists.
DiskSample random_disk(Rng& rng, const DiskOptions& opt = {});

/// Canonical form of a connected oriented triangle list up to relabelling and
/// global orientation reversal.
std::vector<int> canonical_code(const TriangleList& triangles);

/// All triangulated disks with at most `max_triangles` triangles, one per
/// isomorphism class, in order of triangle count then canonical code.
std::vector<DiskComplex> enumerate_disks(int max_triangles);

/// A realization with every edge of length 1: equilateral triangles glued at
/// random dihedral angles, then Gauss-Newton onto |x_u - x_v| = 1. Empty if no
/// attempt converges.
std::optional<VertexPositions> realize_unit(const GraphSurface& s, Rng& rng, int attempts = 20);

}  // namespace polyiso
