#include "polyiso/surface.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <string>
#include <utility>

namespace polyiso {

namespace {

struct Lookup {
  std::map<int, std::size_t> edge_pos;
  std::map<int, std::size_t> vertex_pos;
  const SurfaceData* data = nullptr;

  explicit Lookup(const SurfaceData& d) : data(&d) {
    for (std::size_t i = 0; i < d.vertices.size(); ++i) {
      if (!vertex_pos.emplace(d.vertices[i], i).second)
        throw BadIncidence("duplicate vertex id " + std::to_string(d.vertices[i]), {d.vertices[i]});
    }
    for (std::size_t i = 0; i < d.edges.size(); ++i) {
      const Edge& e = d.edges[i];
      if (e.id < 1) throw BadIncidence("edge ids must be positive integers", {e.id});
      if (!edge_pos.emplace(e.id, i).second)
        throw BadIncidence("duplicate edge id " + std::to_string(e.id), {e.id});
      if (!vertex_pos.count(e.tail) || !vertex_pos.count(e.head))
        throw BadIncidence("edge " + std::to_string(e.id) + " has an endpoint outside the vertex set", {e.id});
      if (e.tail == e.head) throw BadIncidence("edge " + std::to_string(e.id) + " is a loop", {e.id});
    }
  }

  const Edge& edge(int id) const {
    auto it = edge_pos.find(id);
    if (it == edge_pos.end()) throw BadIncidence("reference to unknown edge " + std::to_string(id), {id});
    return data->edges[it->second];
  }
  int tail(OrientedEdge e) const { return e.forward() ? edge(e.id()).tail : edge(e.id()).head; }
  int head(OrientedEdge e) const { return e.forward() ? edge(e.id()).head : edge(e.id()).tail; }
};

std::vector<int> ids_of(const std::vector<OrientedEdge>& es) {
  std::vector<int> out;
  out.reserve(es.size());
  for (auto e : es) out.push_back(e.signed_id());
  return out;
}

void check_triangles(const Lookup& lk, const SurfaceData& d) {
  for (std::size_t t = 0; t < d.triangles.size(); ++t) {
    const Triangle& tri = d.triangles[t];
    std::vector<OrientedEdge> slots(tri.begin(), tri.end());
    for (auto e : tri) lk.edge(e.id());
    if (tri[0].id() == tri[1].id() || tri[1].id() == tri[2].id() || tri[0].id() == tri[2].id())
      throw BadIncidence("triangle " + std::to_string(t) + " repeats an edge", ids_of(slots));
    for (int j = 0; j < 3; ++j) {
      if (lk.head(tri[j]) != lk.tail(tri[(j + 1) % 3]))
        throw BrokenWalk("triangle " + std::to_string(t) + " does not close", ids_of(slots));
    }
  }
}

void check_walk_chain(const Lookup& lk, const std::vector<OrientedEdge>& walk) {
  for (std::size_t i = 0; i < walk.size(); ++i) {
    const OrientedEdge a = walk[i];
    const OrientedEdge b = walk[(i + 1) % walk.size()];
    lk.edge(a.id());
    if (lk.head(a) != lk.tail(b))
      throw BrokenWalk("boundary walk breaks between slots " + std::to_string(i) + " and " +
                           std::to_string((i + 1) % walk.size()),
                       {a.signed_id(), b.signed_id()});
  }
}

// Occurrences of each unoriented edge: (owner, sign). Owner is a triangle
// index, or `walk_owner` for a walk slot.
using Occurrences = std::map<int, std::vector<std::pair<std::size_t, int>>>;

Occurrences occurrences(const SurfaceData& d, const std::vector<OrientedEdge>& walk) {
  Occurrences occ;
  for (const Edge& e : d.edges) occ[e.id];
  for (std::size_t t = 0; t < d.triangles.size(); ++t)
    for (auto e : d.triangles[t]) occ[e.id()].emplace_back(t, e.sign());
  const std::size_t walk_owner = d.triangles.size();
  for (auto e : walk) occ[e.id()].emplace_back(walk_owner, e.sign());
  return occ;
}

// Attempts a consistent orientation of all triangles together with the disk
// bounded by the walk. Walk edges agree in direction with their triangle;
// two triangle slots or two walk slots of one edge must be opposite.
bool propagate_orientation(const SurfaceData& d, const Occurrences& occ) {
  const std::size_t n = d.triangles.size() + 1;
  const std::size_t walk_owner = d.triangles.size();
  std::vector<std::vector<std::pair<std::size_t, int>>> adj(n);
  for (const auto& [id, list] : occ) {
    if (list.size() != 2) continue;
    const auto [a, sa] = list[0];
    const auto [b, sb] = list[1];
    const bool mixed = (a == walk_owner) != (b == walk_owner);
    const int parity = mixed ? sa * sb : -sa * sb;  // sigma_a = parity * sigma_b
    if (a == b) {
      if (parity != 1) return false;
      continue;
    }
    adj[a].emplace_back(b, parity);
    adj[b].emplace_back(a, parity);
  }
  std::vector<int> sigma(n, 0);
  for (std::size_t root = 0; root < n; ++root) {
    if (sigma[root] != 0) continue;
    sigma[root] = 1;
    std::deque<std::size_t> queue{root};
    while (!queue.empty()) {
      const std::size_t a = queue.front();
      queue.pop_front();
      for (auto [b, parity] : adj[a]) {
        const int want = parity * sigma[a];
        if (sigma[b] == 0) {
          sigma[b] = want;
          queue.push_back(b);
        } else if (sigma[b] != want) {
          return false;
        }
      }
    }
  }
  return true;
}

void check_connected(const Lookup& lk, const SurfaceData& d) {
  if (d.vertices.empty()) throw BadIncidence("a graph-surface needs at least one edge");
  std::vector<std::vector<std::size_t>> adj(d.vertices.size());
  for (const Edge& e : d.edges) {
    const std::size_t a = lk.vertex_pos.at(e.tail), b = lk.vertex_pos.at(e.head);
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<bool> seen(d.vertices.size(), false);
  std::deque<std::size_t> queue{0};
  seen[0] = true;
  while (!queue.empty()) {
    const std::size_t a = queue.front();
    queue.pop_front();
    for (auto b : adj[a])
      if (!seen[b]) {
        seen[b] = true;
        queue.push_back(b);
      }
  }
  std::vector<int> missing;
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) missing.push_back(d.vertices[i]);
  if (!missing.empty()) throw BadIncidence("1-skeleton is disconnected or has isolated vertices", missing);
}

}  // namespace

std::vector<OrientedEdge> derive_boundary_walk(const SurfaceData& d) {
  const Lookup lk(d);
  check_triangles(lk, d);

  std::map<int, std::vector<std::size_t>> on;  // edge id -> triangles
  for (const Edge& e : d.edges) on[e.id];
  for (std::size_t t = 0; t < d.triangles.size(); ++t)
    for (auto e : d.triangles[t]) on[e.id()].push_back(t);

  std::vector<int> boundary;
  for (const auto& [id, tris] : on) {
    if (tris.empty())
      throw BadIncidence("edge " + std::to_string(id) + " lies on no triangle; the boundary walk must be supplied",
                         {id});
    if (tris.size() > 2) throw BadIncidence("edge " + std::to_string(id) + " lies on more than two triangles", {id});
    if (tris.size() == 1) boundary.push_back(id);
  }
  if (boundary.empty()) return {};

  // Triangle t read with orientation sigma.
  auto oriented = [&](std::size_t t, int sigma) {
    const Triangle& tri = d.triangles[t];
    if (sigma > 0) return tri;
    return Triangle{-tri[2], -tri[1], -tri[0]};
  };
  auto slot_of = [](const Triangle& tri, int id) {
    for (int j = 0; j < 3; ++j)
      if (tri[j].id() == id) return j;
    return -1;
  };

  const int start_id = boundary.front();
  std::size_t t = on[start_id].front();
  int sigma = 1;
  OrientedEdge g = d.triangles[t][slot_of(d.triangles[t], start_id)];
  const OrientedEdge start = g;

  std::vector<OrientedEdge> walk;
  const std::size_t limit = 2 * boundary.size() + 2;
  do {
    walk.push_back(g);
    if (walk.size() > limit) throw BrokenWalk("boundary walk does not close", {start.signed_id()});
    Triangle tri = oriented(t, sigma);
    OrientedEdge x = tri[(slot_of(tri, g.id()) + 1) % 3];
    std::size_t pivots = 0;
    while (on[x.id()].size() == 2) {
      if (++pivots > d.triangles.size() + 1)
        throw BrokenWalk("pivot around vertex does not reach the boundary", {x.signed_id()});
      const auto& pair = on[x.id()];
      const std::size_t other = pair[0] == t ? pair[1] : pair[0];
      const int stored = d.triangles[other][slot_of(d.triangles[other], x.id())].sign();
      // Orient `other` so that it traverses x backwards.
      sigma = (stored == x.sign()) ? -1 : 1;
      t = other;
      tri = oriented(t, sigma);
      x = tri[(slot_of(tri, x.id()) + 1) % 3];
    }
    g = x;
  } while (g != start);

  if (walk.size() != boundary.size()) {
    std::set<int> visited;
    for (auto e : walk) visited.insert(e.id());
    std::vector<int> rest;
    for (int id : boundary)
      if (!visited.count(id)) rest.push_back(id);
    throw BrokenWalk("boundary splits into several cycles; a graph-surface has exactly one", rest);
  }
  return walk;
}

Diagnostics validate(const SurfaceData& d) {
  const Lookup lk(d);
  check_triangles(lk, d);
  const std::vector<OrientedEdge> walk = d.boundary_walk ? *d.boundary_walk : derive_boundary_walk(d);
  check_walk_chain(lk, walk);

  const Occurrences occ = occurrences(d, walk);
  std::vector<int> bad;
  for (const auto& [id, list] : occ)
    if (list.size() != 2) bad.push_back(id);
  if (!bad.empty())
    throw BadIncidence("each edge must appear exactly twice across triangle and walk slots", bad);
  check_connected(lk, d);

  Diagnostics diag;
  diag.vertices = d.vertices.size();
  diag.edges = d.edges.size();
  diag.triangles = d.triangles.size();
  diag.walk = walk.size();
  diag.counting_identity = 3 * diag.triangles + diag.walk == 2 * diag.edges;
  diag.orientable = propagate_orientation(d, occ);
  diag.euler_characteristic = static_cast<long>(diag.vertices) - static_cast<long>(diag.edges) +
                              static_cast<long>(diag.triangles);

  if (diag.orientable) {
    // A walk edge off every triangle must be traversed once in each direction.
    const std::size_t walk_owner = d.triangles.size();
    for (const auto& [id, list] : occ) {
      if (list[0].first == walk_owner && list[1].first == walk_owner && list[0].second == list[1].second)
        throw BadIncidence("orientable surface traverses edge twice in the same direction", {id});
    }
  }
  return diag;
}

GraphSurface::GraphSurface(SurfaceData data) : data_(std::move(data)) {
  std::sort(data_.vertices.begin(), data_.vertices.end());
  std::sort(data_.edges.begin(), data_.edges.end(), [](const Edge& a, const Edge& b) { return a.id < b.id; });
  if (!data_.boundary_walk) data_.boundary_walk = derive_boundary_walk(data_);
  diag_ = polyiso::validate(data_);
  for (std::size_t i = 0; i < data_.edges.size(); ++i) edge_pos_[data_.edges[i].id] = i;
  for (std::size_t i = 0; i < data_.vertices.size(); ++i) vertex_pos_[data_.vertices[i]] = i;
}

std::size_t GraphSurface::edge_index(int id) const {
  auto it = edge_pos_.find(id);
  if (it == edge_pos_.end()) throw BadIncidence("unknown edge " + std::to_string(id), {id});
  return it->second;
}

std::size_t GraphSurface::vertex_index(int vertex) const {
  auto it = vertex_pos_.find(vertex);
  if (it == vertex_pos_.end()) throw BadIncidence("unknown vertex " + std::to_string(vertex), {vertex});
  return it->second;
}

int GraphSurface::tail(OrientedEdge e) const {
  const Edge& ed = edge(e.id());
  return e.forward() ? ed.tail : ed.head;
}

int GraphSurface::head(OrientedEdge e) const {
  const Edge& ed = edge(e.id());
  return e.forward() ? ed.head : ed.tail;
}

std::vector<std::size_t> GraphSurface::triangles_on(int id) const {
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < data_.triangles.size(); ++t)
    for (auto e : data_.triangles[t])
      if (e.id() == id) out.push_back(t);
  return out;
}

Diagnostics validate(const GraphSurface& s) { return validate(s.data()); }

MetricSurface::MetricSurface(GraphSurface surface, EdgeLengths lengths)
    : surface_(std::move(surface)), lengths_(std::move(lengths)) {
  if (lengths_.size() != static_cast<Eigen::Index>(surface_.edges().size()))
    throw SizeMismatch("one length per unoriented edge is required");
  for (std::size_t i = 0; i < surface_.edges().size(); ++i) {
    const double l = lengths_(static_cast<Eigen::Index>(i));
    if (!(l > 0.0) || !std::isfinite(l))
      throw InvalidLengths("edge length must be positive and finite", {surface_.edges()[i].id});
  }
  for (const Triangle& t : surface_.triangles()) {
    const double a = length(t[0].id()), b = length(t[1].id()), c = length(t[2].id());
    if (!(a + b > c && b + c > a && c + a > b))
      throw InvalidLengths("triangle violates a strict triangle inequality",
                           {t[0].signed_id(), t[1].signed_id(), t[2].signed_id()});
  }
}

BoundaryPolygon boundary_polygon(const GraphSurface& s, const EdgeLengths& lengths) {
  if (lengths.size() != static_cast<Eigen::Index>(s.edges().size()))
    throw SizeMismatch("one length per unoriented edge is required");
  const auto& walk = s.boundary_walk();
  if (walk.empty()) throw DegenerateBoundary("closed surface has no boundary polygon");
  Eigen::VectorXd l(static_cast<Eigen::Index>(walk.size()));
  for (std::size_t i = 0; i < walk.size(); ++i)
    l(static_cast<Eigen::Index>(i)) = lengths(static_cast<Eigen::Index>(s.edge_index(walk[i].id())));
  return {SamplePolygon(std::move(l)), walk};
}

BoundaryPolygon boundary_polygon(const MetricSurface& s) { return boundary_polygon(s.surface(), s.lengths()); }

CollapseSite collapse_site(const GraphSurface& s, std::size_t pos) {
  const auto& walk = s.boundary_walk();
  if (pos >= walk.size()) throw NotBoundaryTriangle("walk position out of range", {static_cast<int>(pos)});
  const OrientedEdge g = walk[pos];
  const auto tris = s.triangles_on(g.id());
  if (tris.size() != 1)
    throw NotBoundaryTriangle("boundary edge " + std::to_string(g.signed_id()) + " lies on no triangle",
                              {g.signed_id()});
  const Triangle& tri = s.triangles()[tris.front()];
  Triangle o = tri;
  int j = 0;
  while (o[j].id() != g.id()) ++j;
  if (o[j] != g) {
    o = Triangle{-tri[2], -tri[1], -tri[0]};
    j = 2 - j;
  }
  return {pos, tris.front(), o[j], o[(j + 1) % 3], o[(j + 2) % 3]};
}

std::vector<std::size_t> collapsible_positions(const GraphSurface& s) {
  std::vector<std::size_t> out;
  const auto& walk = s.boundary_walk();
  for (std::size_t i = 0; i < walk.size(); ++i)
    if (!s.triangles_on(walk[i].id()).empty()) out.push_back(i);
  return out;
}

GraphSurface collapse(const GraphSurface& s, std::size_t pos) {
  const CollapseSite site = collapse_site(s, pos);
  SurfaceData d = s.data();
  d.triangles.erase(d.triangles.begin() + static_cast<std::ptrdiff_t>(site.triangle));
  d.edges.erase(std::find_if(d.edges.begin(), d.edges.end(), [&](const Edge& e) { return e.id == site.g.id(); }));
  std::vector<OrientedEdge> walk;
  const auto& old = s.boundary_walk();
  walk.reserve(old.size() + 1);
  walk.insert(walk.end(), old.begin(), old.begin() + static_cast<std::ptrdiff_t>(pos));
  walk.push_back(-site.e_prime);
  walk.push_back(-site.e);
  walk.insert(walk.end(), old.begin() + static_cast<std::ptrdiff_t>(pos) + 1, old.end());
  d.boundary_walk = std::move(walk);
  return GraphSurface(std::move(d));
}

ConeClosure cone_close(const GraphSurface& s) {
  const auto& walk = s.boundary_walk();
  const std::size_t k = walk.size();
  if (k < 3) throw DegenerateBoundary("cone closure needs at least three boundary edges", {static_cast<int>(k)});
  for (auto g : walk)
    if (s.triangles_on(g.id()).size() != 1)
      throw NotADisk("boundary edge " + std::to_string(g.signed_id()) + " is not on exactly one triangle",
                     {g.signed_id()});
  std::vector<int> ring;
  for (auto g : walk) ring.push_back(s.tail(g));
  if (std::set<int>(ring.begin(), ring.end()).size() != k)
    throw NotADisk("boundary walk revisits a vertex", ring);
  if (!h1_generators(s).empty()) throw NotADisk("surface has nontrivial first homology");

  std::set<std::pair<int, int>> adjacent;
  for (const Edge& e : s.edges()) {
    adjacent.emplace(e.tail, e.head);
    adjacent.emplace(e.head, e.tail);
  }
  // First boundary vertex whose fan does not duplicate an existing chord.
  std::size_t apex_pos = k;
  for (std::size_t a = 0; a < k && apex_pos == k; ++a) {
    bool clash = false;
    for (std::size_t j = 2; j + 1 < k && !clash; ++j) clash = adjacent.count({ring[a], ring[(a + j) % k]}) != 0;
    if (!clash) apex_pos = a;
  }
  if (apex_pos == k)
    throw DegenerateBoundary("every boundary vertex already has a chord to a non-adjacent boundary vertex");

  std::vector<OrientedEdge> r(k);
  std::vector<int> u(k);
  for (std::size_t j = 0; j < k; ++j) {
    r[j] = walk[(apex_pos + j) % k];
    u[j] = ring[(apex_pos + j) % k];
  }

  SurfaceData d = s.data();
  int next_id = 0;
  for (const Edge& e : d.edges) next_id = std::max(next_id, e.id);
  ++next_id;
  std::vector<int> diag(k, 0);  // diag[j]: edge u0 -> u_j
  ConeClosure out;
  out.apex = u[0];
  for (std::size_t j = 2; j + 1 < k; ++j) {
    diag[j] = next_id++;
    d.edges.push_back({diag[j], u[0], u[j]});
    out.diagonals.push_back(diag[j]);
  }
  for (std::size_t j = 1; j + 1 < k; ++j) {
    const OrientedEdge side_a = (j == 1) ? r[0] : OrientedEdge(diag[j], true);
    const OrientedEdge side_b = r[j];
    const OrientedEdge side_c = (j + 1 == k - 1) ? r[k - 1] : OrientedEdge(diag[j + 1], false);
    // Fan triangles run against the walk so the closed surface is coherently oriented.
    d.triangles.push_back(Triangle{-side_c, -side_b, -side_a});
  }
  d.boundary_walk = std::vector<OrientedEdge>{};
  out.closed = GraphSurface(std::move(d));
  return out;
}

Eigen::VectorXi triangle_chain(const GraphSurface& s, const Triangle& t) {
  Eigen::VectorXi h = Eigen::VectorXi::Zero(static_cast<Eigen::Index>(s.edges().size()));
  for (auto e : t) h(static_cast<Eigen::Index>(s.edge_index(e.id()))) += e.sign();
  return h;
}

std::vector<Eigen::VectorXi> h1_generators(const GraphSurface& s) {
  const std::size_t nv = s.vertices().size();
  const Eigen::Index ne = static_cast<Eigen::Index>(s.edges().size());

  // BFS spanning tree; path[v] is the chain of the tree path v -> root.
  std::vector<std::vector<std::pair<std::size_t, OrientedEdge>>> adj(nv);
  for (const Edge& e : s.edges()) {
    adj[s.vertex_index(e.tail)].emplace_back(s.vertex_index(e.head), OrientedEdge(e.id, true));
    adj[s.vertex_index(e.head)].emplace_back(s.vertex_index(e.tail), OrientedEdge(e.id, false));
  }
  std::vector<Eigen::VectorXi> path(nv);
  std::vector<bool> seen(nv, false);
  std::vector<bool> tree_edge(static_cast<std::size_t>(ne), false);
  std::deque<std::size_t> queue{0};
  seen[0] = true;
  path[0] = Eigen::VectorXi::Zero(ne);
  while (!queue.empty()) {
    const std::size_t a = queue.front();
    queue.pop_front();
    for (auto [b, e] : adj[a]) {
      if (seen[b]) continue;
      seen[b] = true;
      tree_edge[s.edge_index(e.id())] = true;
      path[b] = path[a];
      // e runs a -> b, so b -> a traverses -e.
      path[b](static_cast<Eigen::Index>(s.edge_index(e.id()))) -= e.sign();
      queue.push_back(b);
    }
  }

  // Orthonormal basis of the span accepted so far, starting from the triangle boundaries.
  std::vector<Eigen::VectorXd> basis;
  auto absorb = [&](const Eigen::VectorXi& chain) {
    Eigen::VectorXd v = chain.cast<double>();
    const double scale = v.norm();
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) v -= q.dot(v) * q;
    if (v.norm() <= 1e-9 * std::max(scale, 1.0)) return false;
    basis.push_back(v.normalized());
    return true;
  };
  for (const Triangle& t : s.triangles()) absorb(triangle_chain(s, t));

  std::vector<Eigen::VectorXi> gens;
  for (const Edge& e : s.edges()) {
    const std::size_t idx = s.edge_index(e.id);
    if (tree_edge[idx]) continue;
    Eigen::VectorXi cycle = path[s.vertex_index(e.head)] - path[s.vertex_index(e.tail)];
    cycle(static_cast<Eigen::Index>(idx)) += 1;
    if (absorb(cycle)) gens.push_back(cycle);
  }
  return gens;
}

}  // namespace polyiso
