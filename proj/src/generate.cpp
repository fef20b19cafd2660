#include "polyiso/generate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <set>

#include "polyiso/rigidity.hpp"

namespace polyiso {

GraphSurface surface_from_triangles(const TriangleList& triangles) {
  SurfaceData d;
  int n = 0;
  for (const auto& t : triangles)
    for (int v : t) n = std::max(n, v + 1);
  for (int v = 0; v < n; ++v) d.vertices.push_back(v + 1);
  std::map<std::pair<int, int>, int> id_of;
  auto oriented = [&](int x, int y) {
    const auto key = std::minmax(x, y);
    auto it = id_of.find(key);
    if (it == id_of.end()) {
      const int id = static_cast<int>(id_of.size()) + 1;
      it = id_of.emplace(key, id).first;
      d.edges.push_back({id, key.first + 1, key.second + 1});
    }
    return OrientedEdge(it->second, x < y);
  };
  for (const auto& t : triangles) d.triangles.push_back({oriented(t[0], t[1]), oriented(t[1], t[2]), oriented(t[2], t[0])});
  return GraphSurface(std::move(d));
}

namespace fixtures {

namespace {

OrientedEdge oe(int signed_id) { return OrientedEdge::from_signed(signed_id); }

SurfaceData graph(std::vector<int> vertices, std::vector<Edge> edges, std::vector<int> walk) {
  SurfaceData d;
  d.vertices = std::move(vertices);
  d.edges = std::move(edges);
  std::vector<OrientedEdge> w;
  for (int g : walk) w.push_back(oe(g));
  d.boundary_walk = std::move(w);
  return d;
}

}  // namespace

GraphSurface single_triangle() { return surface_from_triangles({{0, 1, 2}}); }

GraphSurface tetrahedron_minus_face() { return surface_from_triangles({{0, 1, 3}, {1, 2, 3}, {2, 0, 3}}); }

GraphSurface rp2_square() {
  return GraphSurface(graph({1, 2, 3, 4}, {{1, 1, 2}, {2, 2, 3}, {3, 3, 4}, {4, 4, 1}}, {1, 2, 3, 4, 1, 2, 3, 4}));
}

GraphSurface thickened_tree() {
  return GraphSurface(graph({1, 2, 3, 4}, {{1, 1, 2}, {2, 2, 3}, {3, 2, 4}}, {1, 2, -2, 3, -3, -1}));
}

GraphSurface theta_graph() {
  return GraphSurface(graph({1, 2}, {{1, 1, 2}, {2, 1, 2}, {3, 1, 2}}, {1, -2, 3, -1, 2, -3}));
}

Rp2Data rp2_data() {
  Rp2Data r{rp2_square(), Eigen::VectorXd::Ones(4), PolyhedronPoint(4, 3), PolyhedronTangent(4, 3),
            PolyhedronTangent(4, 3)};
  r.q << 0, -1, 0,
         1, 0, 0,
         0, 1, 0,
         -1, 0, 0;
  r.s1 << -1, 0, 0,
          0, 0, 0,
          1, 0, 0,
          0, 0, 0;
  r.s2 << 0, 0, 1,
          0, 0, -1,
          0, 0, 1,
          0, 0, -1;
  return r;
}

}  // namespace fixtures

DiskComplex DiskComplex::triangle() { return {{{0, 1, 2}}, {0, 1, 2}, 3}; }

bool DiskComplex::adjacent(int a, int b) const {
  for (const auto& t : triangles)
    for (int j = 0; j < 3; ++j)
      if ((t[j] == a && t[(j + 1) % 3] == b) || (t[j] == b && t[(j + 1) % 3] == a)) return true;
  return false;
}

DiskComplex DiskComplex::grow(std::size_t i) const {
  const std::size_t k = ring.size();
  const int u = ring[i % k], v = ring[(i + 1) % k], w = vertex_count;
  DiskComplex out = *this;
  out.triangles.push_back({v, u, w});
  out.ring.insert(out.ring.begin() + static_cast<std::ptrdiff_t>(i % k) + 1, w);
  ++out.vertex_count;
  return out;
}

bool DiskComplex::can_close_ear(std::size_t i) const {
  const std::size_t k = ring.size();
  return k > 3 && !adjacent(ring[i % k], ring[(i + 2) % k]);
}

DiskComplex DiskComplex::close_ear(std::size_t i) const {
  const std::size_t k = ring.size();
  const int u = ring[i % k], v = ring[(i + 1) % k], w = ring[(i + 2) % k];
  DiskComplex out = *this;
  out.triangles.push_back({w, v, u});
  out.ring.erase(out.ring.begin() + static_cast<std::ptrdiff_t>((i + 1) % k));
  return out;
}

namespace {

bool collinear(const Vec3& a, const Vec3& b, const Vec3& c, double tol) {
  const Vec3 x = b - a, y = c - a;
  return x.cross(y).norm() <= tol * x.norm() * y.norm();
}

Vec3 row(const std::vector<Vec3>& x, int v) { return x[static_cast<std::size_t>(v)]; }

}  // namespace

DiskSample random_disk(Rng& rng, const DiskOptions& opt) {
  for (;;) {
    const int target = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(std::max(opt.max_triangles, 1))));
    DiskComplex d = DiskComplex::triangle();
    std::vector<Vec3> x;
    do {
      x = {rng.in_cube(), rng.in_cube(), rng.in_cube()};
    } while (collinear(x[0], x[1], x[2], opt.collinear_tol));

    while (static_cast<int>(d.triangles.size()) < target) {
      const std::size_t i = rng.index(d.ring.size());
      if (rng.uniform() < opt.ear_probability && d.can_close_ear(i)) {
        const std::size_t k = d.ring.size();
        if (collinear(row(x, d.ring[i]), row(x, d.ring[(i + 1) % k]), row(x, d.ring[(i + 2) % k]), opt.collinear_tol))
          continue;
        d = d.close_ear(i);
      } else {
        const std::size_t k = d.ring.size();
        Vec3 w;
        do {
          w = rng.in_cube();
        } while (collinear(row(x, d.ring[i]), row(x, d.ring[(i + 1) % k]), w, opt.collinear_tol));
        x.push_back(w);
        d = d.grow(i);
      }
    }
    GraphSurface s = surface_from_triangles(d.triangles);
    try {
      cone_close(s);
    } catch (const DegenerateBoundary&) {
      continue;
    }
    VertexPositions pos(static_cast<Eigen::Index>(x.size()), 3);
    for (std::size_t v = 0; v < x.size(); ++v) pos.row(static_cast<Eigen::Index>(v)) = x[v].transpose();
    return {std::move(s), std::move(pos)};
  }
}

namespace {

// Breadth-first relabelling from the oriented start cycle (a, b, c).
std::vector<int> code_from(const TriangleList& tris, const std::map<std::pair<int, int>, std::size_t>& owner,
                           std::size_t start, int rotation) {
  std::map<int, int> label;
  auto name = [&](int v) {
    auto it = label.find(v);
    if (it == label.end()) it = label.emplace(v, static_cast<int>(label.size())).first;
    return it->second;
  };
  std::vector<bool> seen(tris.size(), false);
  std::vector<std::array<int, 3>> out;
  // Each entry: triangle and its cycle rotated to begin with the entry edge.
  std::deque<std::pair<std::size_t, int>> queue{{start, rotation}};
  seen[start] = true;
  while (!queue.empty()) {
    const auto [t, r] = queue.front();
    queue.pop_front();
    const int x = tris[t][static_cast<std::size_t>(r)], y = tris[t][static_cast<std::size_t>((r + 1) % 3)],
              z = tris[t][static_cast<std::size_t>((r + 2) % 3)];
    std::array<int, 3> c{name(x), name(y), name(z)};
    std::rotate(c.begin(), std::min_element(c.begin(), c.end()), c.end());
    out.push_back(c);
    for (auto [p, q] : {std::pair{x, y}, std::pair{y, z}, std::pair{z, x}}) {
      auto it = owner.find({q, p});
      if (it == owner.end() || seen[it->second]) continue;
      seen[it->second] = true;
      const auto& n = tris[it->second];
      int nr = 0;
      while (n[static_cast<std::size_t>(nr)] != q) ++nr;
      queue.emplace_back(it->second, nr);
    }
  }
  std::sort(out.begin(), out.end());
  std::vector<int> flat;
  for (const auto& c : out) flat.insert(flat.end(), c.begin(), c.end());
  return flat;
}

}  // namespace

std::vector<int> canonical_code(const TriangleList& triangles) {
  std::vector<int> best;
  for (int reversed = 0; reversed < 2; ++reversed) {
    TriangleList tris = triangles;
    if (reversed)
      for (auto& t : tris) std::swap(t[1], t[2]);
    std::map<std::pair<int, int>, std::size_t> owner;
    for (std::size_t t = 0; t < tris.size(); ++t)
      for (int j = 0; j < 3; ++j) owner[{tris[t][static_cast<std::size_t>(j)], tris[t][static_cast<std::size_t>((j + 1) % 3)]}] = t;
    for (std::size_t t = 0; t < tris.size(); ++t)
      for (int r = 0; r < 3; ++r) {
        auto c = code_from(tris, owner, t, r);
        if (best.empty() || c < best) best = std::move(c);
      }
  }
  return best;
}

std::vector<DiskComplex> enumerate_disks(int max_triangles) {
  std::vector<DiskComplex> all;
  if (max_triangles < 1) return all;
  std::vector<DiskComplex> level{DiskComplex::triangle()};
  for (int n = 1;; ++n) {
    all.insert(all.end(), level.begin(), level.end());
    if (n == max_triangles) break;
    std::map<std::vector<int>, DiskComplex> next;
    for (const auto& d : level)
      for (std::size_t i = 0; i < d.ring.size(); ++i) {
        DiskComplex g = d.grow(i);
        next.try_emplace(canonical_code(g.triangles), std::move(g));
        if (d.can_close_ear(i)) {
          DiskComplex e = d.close_ear(i);
          next.try_emplace(canonical_code(e.triangles), std::move(e));
        }
      }
    level.clear();
    for (auto& [code, d] : next) level.push_back(std::move(d));
  }
  return all;
}

namespace {

bool project_unit(const GraphSurface& s, VertexPositions& x) {
  const Eigen::Index ne = static_cast<Eigen::Index>(s.edges().size());
  for (int it = 0; it <= 100; ++it) {
    const Eigen::VectorXd f = edge_vectors(s, x).rowwise().squaredNorm() - Eigen::VectorXd::Ones(ne);
    if (f.cwiseAbs().maxCoeff() <= 1e-12) return true;
    if (it == 100 || !x.allFinite()) break;
    const Eigen::MatrixXd J = 2.0 * rigidity_matrix(s, x);
    const Eigen::VectorXd step = J.completeOrthogonalDecomposition().solve(f);
    x -= unflatten(step);
  }
  return false;
}

}  // namespace

std::optional<VertexPositions> realize_unit(const GraphSurface& s, Rng& rng, int attempts) {
  const auto& tris = s.triangles();
  if (tris.empty()) return std::nullopt;
  std::vector<std::array<std::size_t, 3>> cycles;
  for (const Triangle& t : tris)
    cycles.push_back({s.vertex_index(s.tail(t[0])), s.vertex_index(s.tail(t[1])), s.vertex_index(s.tail(t[2]))});
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> on_edge;
  for (std::size_t t = 0; t < cycles.size(); ++t)
    for (int j = 0; j < 3; ++j) on_edge[std::minmax(cycles[t][static_cast<std::size_t>(j)], cycles[t][static_cast<std::size_t>((j + 1) % 3)])].push_back(t);

  const Eigen::Index nv = static_cast<Eigen::Index>(s.vertices().size());
  for (int a = 0; a < attempts; ++a) {
    VertexPositions x = VertexPositions::Zero(nv, 3);
    std::vector<bool> placed(static_cast<std::size_t>(nv), false);
    std::vector<bool> done(cycles.size(), false);
    const auto& c0 = cycles[0];
    x.row(static_cast<Eigen::Index>(c0[1])) << 1, 0, 0;
    x.row(static_cast<Eigen::Index>(c0[2])) << 0.5, std::sqrt(3.0) / 2, 0;
    for (auto v : c0) placed[v] = true;
    done[0] = true;
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
      const std::size_t t = queue.front();
      queue.pop_front();
      const auto& c = cycles[t];
      for (int j = 0; j < 3; ++j) {
        const std::size_t u = c[static_cast<std::size_t>(j)], v = c[static_cast<std::size_t>((j + 1) % 3)];
        for (std::size_t n : on_edge[std::minmax(u, v)]) {
          if (done[n]) continue;
          done[n] = true;
          queue.push_back(n);
          std::size_t w = 0;
          for (auto z : cycles[n])
            if (z != u && z != v) w = z;
          if (placed[w]) continue;
          const Vec3 xu = x.row(static_cast<Eigen::Index>(u)).transpose(), xv = x.row(static_cast<Eigen::Index>(v)).transpose();
          const Vec3 axis = (xv - xu).normalized();
          Vec3 n1 = axis.unitOrthogonal();
          const Vec3 n2 = axis.cross(n1);
          const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
          const Vec3 xw = 0.5 * (xu + xv) + (std::sqrt(3.0) / 2) * (xv - xu).norm() *
                                                (std::cos(theta) * n1 + std::sin(theta) * n2);
          x.row(static_cast<Eigen::Index>(w)) = xw.transpose();
          placed[w] = true;
        }
      }
    }
    if (project_unit(s, x)) return x;
  }
  return std::nullopt;
}

}  // namespace polyiso
