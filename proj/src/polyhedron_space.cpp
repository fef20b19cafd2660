#include "polyiso/polyhedron_space.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <string>

namespace polyiso {

namespace {

Eigen::Index idx(const GraphSurface& s, int id) { return static_cast<Eigen::Index>(s.edge_index(id)); }

void require_shape(const GraphSurface& s, const EdgeVectorsd& q, const char* what) {
  if (q.rows() != static_cast<Eigen::Index>(s.edges().size()))
    throw SizeMismatch(std::string(what) + " must have one 3-vector per unoriented edge");
}

Vec3 chain_sum(const EdgeVectorsd& q, const Eigen::VectorXi& h) {
  Vec3 v = Vec3::Zero();
  for (Eigen::Index i = 0; i < h.size(); ++i)
    if (h(i) != 0) v += static_cast<double>(h(i)) * q.row(i).transpose();
  return v;
}

}  // namespace

Vec3 edge_vector(const GraphSurface& s, const EdgeVectorsd& q, OrientedEdge e) {
  return static_cast<double>(e.sign()) * q.row(idx(s, e.id())).transpose();
}

PolyhedronResidual residual(const MetricSurface& ms, const PolyhedronPoint& q, double tol) {
  const GraphSurface& s = ms.surface();
  require_shape(s, q, "polyhedron point");
  PolyhedronResidual r;
  const Eigen::VectorXd& l = ms.lengths();
  r.length_defects = q.rowwise().squaredNorm() - l.cwiseProduct(l);
  r.max_relative_length_defect =
      l.size() ? r.length_defects.cwiseAbs().cwiseQuotient(l.cwiseProduct(l)).maxCoeff() : 0.0;

  const auto& tris = s.triangles();
  r.triangle_defects.resize(static_cast<Eigen::Index>(tris.size()));
  for (std::size_t t = 0; t < tris.size(); ++t) {
    Vec3 v = Vec3::Zero();
    for (auto e : tris[t]) v += edge_vector(s, q, e);
    r.triangle_defects(static_cast<Eigen::Index>(t)) = v.norm();
  }
  const auto gens = h1_generators(s);
  r.cycle_defects.resize(static_cast<Eigen::Index>(gens.size()));
  for (std::size_t g = 0; g < gens.size(); ++g)
    r.cycle_defects(static_cast<Eigen::Index>(g)) = chain_sum(q, gens[g]).norm();

  const double scale = std::max(l.sum(), std::numeric_limits<double>::min());
  double closure = 0;
  if (r.triangle_defects.size()) closure = std::max(closure, r.triangle_defects.maxCoeff());
  if (r.cycle_defects.size()) closure = std::max(closure, r.cycle_defects.maxCoeff());
  r.max_relative_closure_defect = closure / scale;
  r.accepted = q.allFinite() && r.max_relative_length_defect <= tol && r.max_relative_closure_defect <= tol;
  return r;
}

PolyhedronPoint edge_vectors(const GraphSurface& s, const VertexPositions& x) {
  if (x.rows() != static_cast<Eigen::Index>(s.vertices().size()))
    throw SizeMismatch("one position per vertex is required");
  PolyhedronPoint q(static_cast<Eigen::Index>(s.edges().size()), 3);
  for (std::size_t i = 0; i < s.edges().size(); ++i) {
    const Edge& e = s.edges()[i];
    q.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(s.vertex_index(e.head))) -
                                          x.row(static_cast<Eigen::Index>(s.vertex_index(e.tail)));
  }
  return q;
}

EdgeLengths induced_lengths(const GraphSurface& s, const VertexPositions& x) {
  return edge_vectors(s, x).rowwise().norm();
}

VertexPositions reconstruct(const GraphSurface& s, const PolyhedronPoint& q, int base_vertex, double tol) {
  require_shape(s, q, "polyhedron point");
  const std::size_t nv = s.vertices().size();
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(nv);  // (neighbour, edge index)
  for (std::size_t i = 0; i < s.edges().size(); ++i) {
    const Edge& e = s.edges()[i];
    adj[s.vertex_index(e.tail)].emplace_back(s.vertex_index(e.head), i);
    adj[s.vertex_index(e.head)].emplace_back(s.vertex_index(e.tail), i);
  }
  VertexPositions x = VertexPositions::Zero(static_cast<Eigen::Index>(nv), 3);
  std::vector<bool> seen(nv, false);
  const double scale = std::max(q.rowwise().norm().sum(), 1.0);

  auto run_from = [&](std::size_t root) {
    seen[root] = true;
    std::deque<std::size_t> queue{root};
    while (!queue.empty()) {
      const std::size_t a = queue.front();
      queue.pop_front();
      for (auto [b, ei] : adj[a]) {
        const Edge& e = s.edges()[ei];
        const double sign = (s.vertex_index(e.tail) == a) ? 1.0 : -1.0;
        const Eigen::RowVector3d xb = x.row(static_cast<Eigen::Index>(a)) + sign * q.row(static_cast<Eigen::Index>(ei));
        if (!seen[b]) {
          seen[b] = true;
          x.row(static_cast<Eigen::Index>(b)) = xb;
          queue.push_back(b);
        } else if ((x.row(static_cast<Eigen::Index>(b)) - xb).norm() > tol * scale) {
          throw InconsistentCycles("edge " + std::to_string(e.id) + " closes a cycle with nonzero sum", {e.id});
        }
      }
    }
  };
  run_from(s.vertex_index(base_vertex));
  // Further components, each anchored at the origin.
  for (std::size_t v = 0; v < nv; ++v)
    if (!seen[v]) run_from(v);
  return x;
}

Eigen::MatrixXd polyhedron_jacobian(const GraphSurface& s, const PolyhedronPoint& q) {
  require_shape(s, q, "polyhedron point");
  const Eigen::Index ne = static_cast<Eigen::Index>(s.edges().size());
  const auto gens = h1_generators(s);
  const Eigen::Index nt = static_cast<Eigen::Index>(s.triangles().size());
  const Eigen::Index ng = static_cast<Eigen::Index>(gens.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(ne + 3 * nt + 3 * ng, 3 * ne);
  for (Eigen::Index i = 0; i < ne; ++i) J.block(i, 3 * i, 1, 3) = q.row(i);
  Eigen::Index row = ne;
  for (const Triangle& t : s.triangles()) {
    for (auto e : t) J.block(row, 3 * idx(s, e.id()), 3, 3) += e.sign() * Eigen::Matrix3d::Identity();
    row += 3;
  }
  for (const auto& h : gens) {
    for (Eigen::Index i = 0; i < ne; ++i)
      if (h(i) != 0) J.block(row, 3 * i, 3, 3) = h(i) * Eigen::Matrix3d::Identity();
    row += 3;
  }
  return J;
}

Eigen::MatrixXd tangent_basis(const MetricSurface& s, const PolyhedronPoint& q, const Tolerance& tol) {
  if (!residual(s, q).accepted) throw InconsistentData("edge vectors do not satisfy the polyhedron equations");
  return kernel_basis(polyhedron_jacobian(s.surface(), q), tol);
}

EdgeVectorsd boundary_point(const GraphSurface& s, const PolyhedronPoint& q) { return d_delta(s, q); }

EdgeVectorsd d_delta(const GraphSurface& s, const PolyhedronTangent& t) {
  require_shape(s, t, "edge-vector map");
  const auto& walk = s.boundary_walk();
  EdgeVectorsd out(static_cast<Eigen::Index>(walk.size()), 3);
  for (std::size_t i = 0; i < walk.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = edge_vector(s, t, walk[i]).transpose();
  return out;
}

Eigen::MatrixXd delta_matrix(const GraphSurface& s) {
  const auto& walk = s.boundary_walk();
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(3 * static_cast<Eigen::Index>(walk.size()),
                                            3 * static_cast<Eigen::Index>(s.edges().size()));
  for (std::size_t i = 0; i < walk.size(); ++i)
    D.block(3 * static_cast<Eigen::Index>(i), 3 * idx(s, walk[i].id()), 3, 3) =
        walk[i].sign() * Eigen::Matrix3d::Identity();
  return D;
}

SkewGenerator fit_rotation(const Vec3& p1, const Vec3& p2, const Vec3& p3, const Vec3& t1, const Vec3& t2,
                           const Vec3& t3, double tol, double tangent_scale) {
  const double sp = std::max({p1.norm(), p2.norm(), p3.norm()});
  if (!(sp > 0) || !std::isfinite(sp)) throw CollinearTriangle("triangle has no extent");
  if ((p1 + p2 + p3).norm() > tol * sp) throw InconsistentData("triangle edge vectors do not close up");
  const Vec3 n = p1.cross(p2);
  if (n.norm() <= 1e-10 * p1.norm() * p2.norm()) throw CollinearTriangle("triangle is collinear");

  if (std::max({t1.norm(), t2.norm(), t3.norm()}) == 0) return SkewGenerator{};
  const double st = std::max({t1.norm(), t2.norm(), t3.norm(), tangent_scale});
  if ((t1 + t2 + t3).norm() > tol * st) throw InconsistentData("tangent does not preserve the triangle closure");
  for (auto [p, t] : {std::pair{p1, t1}, std::pair{p2, t2}, std::pair{p3, t3}})
    if (std::abs(p.dot(t)) > tol * st * sp) throw InconsistentData("tangent changes an edge length");

  // a is prescribed on p1, p2; on the normal, a(n) = w with <w, p_j> = -<n, t_j> and <w, n> = 0.
  Mat3 basis;
  basis << p1, p2, n;
  const Eigen::ColPivHouseholderQR<Mat3> qr(basis.transpose());
  const Vec3 w = qr.solve(Vec3(-n.dot(t1), -n.dot(t2), 0.0));
  Mat3 image;
  image << t1, t2, w;
  const Mat3 a = image * basis.inverse();
  return SkewGenerator::from_matrix(0.5 * (a - a.transpose()), 1.0);
}

std::pair<PolyhedronPoint, PolyhedronTangent> collapse_restrict(const GraphSurface& s_big,
                                                                const GraphSurface& collapsed,
                                                                const PolyhedronPoint& q,
                                                                const PolyhedronTangent& t) {
  require_shape(s_big, q, "polyhedron point");
  require_shape(s_big, t, "polyhedron tangent");
  const Eigen::Index ne = static_cast<Eigen::Index>(collapsed.edges().size());
  PolyhedronPoint q2(ne, 3);
  PolyhedronTangent t2(ne, 3);
  for (Eigen::Index i = 0; i < ne; ++i) {
    const Edge& e = collapsed.edges()[static_cast<std::size_t>(i)];
    if (!s_big.has_edge(e.id) || s_big.edge(e.id) != e)
      throw InconsistentData("edge " + std::to_string(e.id) + " is not an edge of the larger surface", {e.id});
    q2.row(i) = q.row(idx(s_big, e.id));
    t2.row(i) = t.row(idx(s_big, e.id));
  }
  return {std::move(q2), std::move(t2)};
}

PolyhedronTangent gauge_normalize(const GraphSurface& s, const PolyhedronPoint& q, const PolyhedronTangent& t,
                                  std::size_t walk_position, double tangent_scale) {
  require_shape(s, q, "polyhedron point");
  require_shape(s, t, "polyhedron tangent");
  const CollapseSite site = collapse_site(s, walk_position);
  const SkewGenerator a =
      fit_rotation(edge_vector(s, q, site.g), edge_vector(s, q, site.e), edge_vector(s, q, site.e_prime),
                   edge_vector(s, t, site.g), edge_vector(s, t, site.e), edge_vector(s, t, site.e_prime), 1e-9,
                   std::max(tangent_scale, t.rowwise().norm().maxCoeff()));
  return t - a.apply(q);
}

namespace {

struct ChainResult {
  std::size_t steps = 0;
  double gauge_shift = 0;
  double termwise_gap = 0;
  double replaced = 0;
  double max_summand = 0;
};

EdgeLengths lengths_by_id(const GraphSurface& s, const std::map<int, double>& by_id) {
  EdgeLengths l(static_cast<Eigen::Index>(s.edges().size()));
  for (std::size_t i = 0; i < s.edges().size(); ++i) l(static_cast<Eigen::Index>(i)) = by_id.at(s.edges()[i].id);
  return l;
}

// Collapses the first collapsible triangle until none is left, gauge-normalizing
// every tangent on the collapsed triangle first and comparing omega summands.
ChainResult collapse_chain(const MetricSurface& ms, const PolyhedronPoint& q0, std::vector<PolyhedronTangent> ts) {
  ChainResult r;
  std::map<int, double> by_id;
  for (const Edge& e : ms.surface().edges()) by_id[e.id] = ms.length(e.id);

  GraphSurface cur = ms.surface();
  PolyhedronPoint q = q0;
  // Tangents that gauge away to rounding noise are judged against the original scale.
  double scale = 0;
  for (const auto& t : ts) scale = std::max(scale, t.rowwise().norm().maxCoeff());
  for (;;) {
    const auto positions = collapsible_positions(cur);
    if (positions.empty()) break;
    const std::size_t pos = positions.front();
    const SamplePolygon P = boundary_polygon(cur, lengths_by_id(cur, by_id)).polygon;
    const EdgeVectorsd p = boundary_point(cur, q);

    std::vector<PolyhedronTangent> gauged;
    gauged.reserve(ts.size());
    for (const auto& t : ts) gauged.push_back(gauge_normalize(cur, q, t, pos, scale));

    const GraphSurface next = collapse(cur, pos);
    const SamplePolygon P2 = boundary_polygon(next, lengths_by_id(next, by_id)).polygon;
    std::vector<PolyhedronTangent> restricted;
    PolyhedronPoint q2;
    for (const auto& g : gauged) {
      auto [qq, gg] = collapse_restrict(cur, next, q, g);
      q2 = std::move(qq);
      restricted.push_back(std::move(gg));
    }
    if (ts.empty()) q2 = collapse_restrict(cur, next, q, q).first;
    const EdgeVectorsd p2 = boundary_point(next, q2);

    const Eigen::Index k = P.size();
    for (std::size_t i = 0; i < ts.size(); ++i)
      for (std::size_t j = i + 1; j < ts.size(); ++j) {
        const Eigen::VectorXd raw = omega_summands(P, p, d_delta(cur, ts[i]), d_delta(cur, ts[j]));
        const Eigen::VectorXd before = omega_summands(P, p, d_delta(cur, gauged[i]), d_delta(cur, gauged[j]));
        const Eigen::VectorXd after =
            omega_summands(P2, p2, d_delta(next, restricted[i]), d_delta(next, restricted[j]));
        r.max_summand = std::max({r.max_summand, raw.cwiseAbs().maxCoeff(), before.cwiseAbs().maxCoeff()});
        r.gauge_shift = std::max(r.gauge_shift, std::abs(raw.sum() - before.sum()));
        const auto ip = static_cast<Eigen::Index>(pos);
        r.replaced = std::max({r.replaced, std::abs(before(ip)), std::abs(after(ip)), std::abs(after(ip + 1))});
        for (Eigen::Index m = 0; m < k; ++m) {
          if (m == ip) continue;
          const Eigen::Index m2 = m < ip ? m : m + 1;
          r.termwise_gap = std::max(r.termwise_gap, std::abs(before(m) - after(m2)));
        }
      }
    cur = next;
    q = std::move(q2);
    ts = std::move(restricted);
    ++r.steps;
  }
  return r;
}

}  // namespace

IsotropyReport isotropy_audit(const MetricSurface& ms, const PolyhedronPoint& q, const IsotropyOptions& opt) {
  const GraphSurface& s = ms.surface();
  if (!s.orientable() && !opt.allow_nonorientable)
    throw NotOrientable("surface is not orientable; the pulled-back form need not vanish there");
  IsotropyReport r;
  const Eigen::MatrixXd B = tangent_basis(ms, q, opt.tol);
  r.tangent_dim = B.cols();
  const SamplePolygon P = boundary_polygon(ms).polygon;
  const EdgeVectorsd p = boundary_point(s, q);

  std::vector<PolyhedronTangent> ts;
  std::vector<EdgeVectorsd> images;
  for (Eigen::Index i = 0; i < B.cols(); ++i) {
    ts.push_back(unflatten(B.col(i)));
    images.push_back(d_delta(s, ts.back()));
  }
  r.gram = Eigen::MatrixXd::Zero(B.cols(), B.cols());
  for (Eigen::Index i = 0; i < B.cols(); ++i)
    for (Eigen::Index j = i + 1; j < B.cols(); ++j) {
      const Eigen::VectorXd terms =
          omega_summands(P, p, images[static_cast<std::size_t>(i)], images[static_cast<std::size_t>(j)]);
      r.max_summand = std::max(r.max_summand, terms.cwiseAbs().maxCoeff());
      r.gram(i, j) = terms.sum();
      r.gram(j, i) = -r.gram(i, j);
    }
  r.max_omega = r.gram.size() ? r.gram.cwiseAbs().maxCoeff() : 0.0;
  r.threshold = opt.rel_threshold * std::max(r.max_summand, 1e-12);
  r.pass = r.max_omega <= r.threshold;

  if (opt.verify_collapse_chain) {
    const ChainResult c = collapse_chain(ms, q, std::move(ts));
    r.chain_checked = true;
    r.chain_steps = c.steps;
    r.max_gauge_shift = c.gauge_shift;
    r.max_termwise_gap = c.termwise_gap;
    r.max_replaced_summand = c.replaced;
    const double cut = opt.rel_threshold * std::max({c.max_summand, r.max_summand, 1e-12});
    r.chain_pass = c.gauge_shift <= cut && c.termwise_gap <= cut && c.replaced <= cut;
  }
  return r;
}

}  // namespace polyiso
