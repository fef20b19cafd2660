#pragma once

#include <Eigen/Dense>

#include <array>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "polyiso/errors.hpp"
#include "polyiso/sample_polygon.hpp"

namespace polyiso {

/// An edge id together with a direction. `+id` runs tail -> head as declared,
/// `-id` runs head -> tail.
class OrientedEdge {
 public:
  constexpr OrientedEdge() = default;
  constexpr OrientedEdge(int id, bool forward) : id_(id), forward_(forward) {}

  static OrientedEdge from_signed(int signed_id) {
    if (signed_id == 0) throw BadIncidence("edge reference 0 has no orientation");
    return {signed_id > 0 ? signed_id : -signed_id, signed_id > 0};
  }

  constexpr int id() const { return id_; }
  constexpr bool forward() const { return forward_; }
  constexpr int sign() const { return forward_ ? 1 : -1; }
  constexpr int signed_id() const { return forward_ ? id_ : -id_; }
  constexpr OrientedEdge flipped() const { return {id_, !forward_}; }
  constexpr OrientedEdge operator-() const { return flipped(); }

  friend constexpr auto operator<=>(const OrientedEdge&, const OrientedEdge&) = default;

 private:
  int id_ = 0;
  bool forward_ = true;
};

struct Edge {
  int id = 0;
  int tail = 0;
  int head = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Ordered boundary (e1, e2, e3) of a triangle, a closed walk.
using Triangle = std::array<OrientedEdge, 3>;

/// Unvalidated description of a graph-surface, as read from a file.
struct SurfaceData {
  std::vector<int> vertices;
  std::vector<Edge> edges;
  std::vector<Triangle> triangles;
  std::optional<std::vector<OrientedEdge>> boundary_walk;
};

struct Diagnostics {
  std::size_t vertices = 0;
  std::size_t edges = 0;      // unoriented
  std::size_t triangles = 0;
  std::size_t walk = 0;       // |F|
  bool counting_identity = false;  // 3|T| == 2|E| - |F|
  bool orientable = false;
  long euler_characteristic = 0;   // |V| - |E| + |T|
};

/// Checks every structural invariant of `data` and, when the walk is absent,
/// derives it from the triangles. Throws BrokenWalk or BadIncidence.
Diagnostics validate(const SurfaceData& data);

/// Boundary walk of a triangulated surface with boundary: edges lying on
/// exactly one triangle, chained by pivoting around their shared vertices.
/// Walk edges keep the direction they have in their triangle.
std::vector<OrientedEdge> derive_boundary_walk(const SurfaceData& data);

/// A validated graph-surface: vertices, edges (sorted by id), triangles and
/// the cyclic boundary walk g_1 ... g_k. Immutable once built.
class GraphSurface {
 public:
  GraphSurface() = default;
  explicit GraphSurface(SurfaceData data);

  const std::vector<int>& vertices() const { return data_.vertices; }
  const std::vector<Edge>& edges() const { return data_.edges; }
  const std::vector<Triangle>& triangles() const { return data_.triangles; }
  const std::vector<OrientedEdge>& boundary_walk() const { return *data_.boundary_walk; }
  const SurfaceData& data() const { return data_; }
  const Diagnostics& diagnostics() const { return diag_; }

  bool orientable() const { return diag_.orientable; }
  bool closed() const { return boundary_walk().empty(); }

  std::size_t edge_index(int id) const;
  std::size_t vertex_index(int vertex) const;
  bool has_edge(int id) const { return edge_pos_.count(id) != 0; }
  const Edge& edge(int id) const { return data_.edges[edge_index(id)]; }

  int tail(OrientedEdge e) const;
  int head(OrientedEdge e) const;

  /// Triangles containing the unoriented edge `id`.
  std::vector<std::size_t> triangles_on(int id) const;

 private:
  SurfaceData data_;
  Diagnostics diag_;
  std::map<int, std::size_t> edge_pos_;
  std::map<int, std::size_t> vertex_pos_;
};

Diagnostics validate(const GraphSurface& s);

/// Edge lengths indexed like `GraphSurface::edges()`.
using EdgeLengths = Eigen::VectorXd;

/// A graph-surface with a length on each edge satisfying the three strict
/// triangle inequalities on every triangle.
class MetricSurface {
 public:
  MetricSurface() = default;
  MetricSurface(GraphSurface surface, EdgeLengths lengths);

  const GraphSurface& surface() const { return surface_; }
  const EdgeLengths& lengths() const { return lengths_; }
  double length(int id) const { return lengths_(static_cast<Eigen::Index>(surface_.edge_index(id))); }

 private:
  GraphSurface surface_;
  EdgeLengths lengths_;
};

/// The sample polygon bounding D, with the combinatorial boundary map
/// delta: f_i -> g_i. Repeats in `delta` are expected.
struct BoundaryPolygon {
  SamplePolygon polygon;
  std::vector<OrientedEdge> delta;
};

BoundaryPolygon boundary_polygon(const GraphSurface& s, const EdgeLengths& lengths);
BoundaryPolygon boundary_polygon(const MetricSurface& s);

/// Triangle t with boundary edge g_i, written as the oriented boundary
/// (g_i, e, e') of t.
struct CollapseSite {
  std::size_t walk_position = 0;
  std::size_t triangle = 0;
  OrientedEdge g;
  OrientedEdge e;
  OrientedEdge e_prime;
};

/// Throws NotBoundaryTriangle if the walk edge at `walk_position` lies on no triangle.
CollapseSite collapse_site(const GraphSurface& s, std::size_t walk_position);

/// Walk positions whose edge lies on a triangle, in walk order.
std::vector<std::size_t> collapsible_positions(const GraphSurface& s);

/// Removes the triangle at g_i together with the interior of g_i and rewrites
/// the walk g_1 ... g_i ... g_k as g_1 ... (-e')(-e) ... g_k.
GraphSurface collapse(const GraphSurface& s, std::size_t walk_position);

/// Sphere-type closure of a disk: an apex on the boundary, |F|-3 diagonals to
/// the non-adjacent boundary vertices and |F|-2 fan triangles filling D.
struct ConeClosure {
  GraphSurface closed;
  int apex = 0;
  std::vector<int> diagonals;  // ids of the added edges
};

ConeClosure cone_close(const GraphSurface& s);

/// Generators of H_1(S) as signed incidence vectors over edge indices:
/// spanning-tree fundamental cycles that are independent modulo the
/// triangle boundaries.
std::vector<Eigen::VectorXi> h1_generators(const GraphSurface& s);

/// Signed incidence vector of the triangle boundary.
Eigen::VectorXi triangle_chain(const GraphSurface& s, const Triangle& t);

}  // namespace polyiso
