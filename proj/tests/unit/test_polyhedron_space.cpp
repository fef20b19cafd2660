#include <doctest.h>

#include "helpers.hpp"
#include "polyiso/generate.hpp"
#include "polyiso/polyhedron_space.hpp"

using namespace polyiso;

namespace {

PolyhedronPoint flat_unit_triangle_q() {
  // Edges of the single triangle fixture: 1: 1->2, 2: 2->3, 3: 1->3.
  const double h = std::sqrt(3.0) / 2;
  PolyhedronPoint q(3, 3);
  q << 1, 0, 0, -0.5, h, 0, 0.5, h, 0;
  return q;
}

Eigen::VectorXd coefficients(Rng& rng, Eigen::Index n) {
  Eigen::VectorXd c(n);
  for (Eigen::Index i = 0; i < n; ++i) c(i) = rng.uniform(-1, 1);
  return c;
}

struct Sampled {
  MetricSurface ms;
  PolyhedronPoint q;
  VertexPositions x;
};

Sampled sampled_disk(Rng& rng, int max_triangles = 20) {
  DiskOptions opt;
  opt.max_triangles = max_triangles;
  auto d = random_disk(rng, opt);
  const auto q = edge_vectors(d.surface, d.positions);
  return {MetricSurface(d.surface, induced_lengths(d.surface, d.positions)), q, d.positions};
}

}  // namespace

TEST_CASE("flat unit triangle satisfies the polyhedron equations") {
  const auto s = fixtures::single_triangle();
  const MetricSurface ms(s, EdgeLengths::Ones(3));
  const auto r = residual(ms, flat_unit_triangle_q());
  CHECK(r.accepted);
  CHECK(r.triangle_defects(0) < 1e-15);
  CHECK(r.flip_defect == 0.0);
}

TEST_CASE("a triangle closure violation is reported at its size") {
  const auto s = fixtures::single_triangle();
  PolyhedronPoint q = flat_unit_triangle_q();
  q(0, 0) += 1e-3;
  const auto r = residual(MetricSurface(s, q.rowwise().norm()), q);
  CHECK(r.triangle_defects(0) == doctest::Approx(1e-3).epsilon(1e-9));
  CHECK(!r.accepted);
}

TEST_CASE("projective plane data") {
  const auto d = fixtures::rp2_data();
  const MetricSurface ms(d.surface, d.lengths);
  const auto r = residual(ms, d.q);
  CHECK(r.accepted);
  REQUIRE(r.cycle_defects.size() == 1);
  CHECK(r.cycle_defects(0) == 0.0);

  const auto x = reconstruct(d.surface, d.q, 1);
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(x.row(i).norm() <= std::sqrt(2.0) + 1e-15);
  CHECK((x.row(2) - x.row(0)).norm() == doctest::Approx(std::sqrt(2.0)));

  const auto B = tangent_basis(ms, d.q);
  for (const auto* t : {&d.s1, &d.s2}) {
    const Eigen::VectorXd v = flatten(*t);
    CHECK((v - B * (B.transpose() * v)).norm() < 1e-12);
  }

  const auto bq = boundary_point(d.surface, d.q);
  CHECK(bq.rows() == 8);
  CHECK(bq.topRows(4) == d.q);
  CHECK(bq.bottomRows(4) == d.q);
}

TEST_CASE("reconstruct the single triangle") {
  const auto s = fixtures::single_triangle();
  const auto q = flat_unit_triangle_q();
  const auto x = reconstruct(s, q, 1);
  CHECK(x.row(0).norm() == 0.0);
  CHECK((x.row(1) - q.row(0)).norm() < 1e-15);
  CHECK((x.row(2) - q.row(0) - q.row(1)).norm() < 1e-15);
}

TEST_CASE("inconsistent cycles are refused with the closing edge") {
  const auto s = fixtures::single_triangle();
  PolyhedronPoint q = flat_unit_triangle_q();
  q(2, 1) += 0.1;
  CHECK_THROWS_AS(reconstruct(s, q, 1), InconsistentCycles);
}

TEST_CASE("positions round trip through edge vectors up to translation") {
  Rng rng(testgen::kMasterSeed + 30);
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = random_disk(rng);
    const auto q = edge_vectors(d.surface, d.positions);
    const int base = d.surface.vertices()[rng.index(d.surface.vertices().size())];
    const auto x = reconstruct(d.surface, q, base);
    const Eigen::RowVector3d shift = d.positions.row(static_cast<Eigen::Index>(d.surface.vertex_index(base)));
    CHECK((x.rowwise() + shift - d.positions).norm() < 1e-12);
  }
}

TEST_CASE("single flat triangle has only orbit tangents") {
  const auto s = fixtures::single_triangle();
  const auto q = flat_unit_triangle_q();
  const auto B = tangent_basis(MetricSurface(s, EdgeLengths::Ones(3)), q);
  CHECK(B.cols() == 3);
  const auto O = orbit_matrix(q);
  CHECK((O - B * (B.transpose() * O)).norm() < 1e-12);
}

TEST_CASE("generic disks have tangent dimension equal to the boundary length") {
  Rng rng(testgen::kMasterSeed + 31);
  for (int trial = 0; trial < 60; ++trial) {
    const auto d = sampled_disk(rng);
    CAPTURE(trial);
    CHECK(tangent_basis(d.ms, d.q).cols() ==
          static_cast<Eigen::Index>(d.ms.surface().boundary_walk().size()));
  }
}

TEST_CASE("tangent basis rejects a point off the space") {
  const auto s = fixtures::single_triangle();
  CHECK_THROWS_AS(tangent_basis(MetricSurface(s, EdgeLengths::Constant(3, 2.0)), flat_unit_triangle_q()),
                  InconsistentData);
}

TEST_CASE("the boundary map sends tangents to polygon tangents") {
  Rng rng(testgen::kMasterSeed + 32);
  for (int trial = 0; trial < 40; ++trial) {
    const auto d = sampled_disk(rng);
    const auto& s = d.ms.surface();
    const auto B = tangent_basis(d.ms, d.q);
    const auto t = unflatten(B * coefficients(rng, B.cols()));
    const auto p = boundary_point(s, d.q);
    const auto bp = boundary_polygon(d.ms);
    CHECK(residual(bp.polygon, p).accepted);
    CHECK(tangent_defect(p, d_delta(s, t)) < 1e-12);
    CHECK((flatten(d_delta(s, t)) - delta_matrix(s) * flatten(t)).norm() < 1e-14);
  }
}

TEST_CASE("fit_rotation on the basic examples") {
  const Vec3 p1(1, 0, 0), p2(0, 1, 0), p3(-1, -1, 0), z = Vec3::Zero();
  CHECK(fit_rotation(p1, p2, p3, z, z, z).matrix().norm() == 0.0);
  const auto a0 = SkewGenerator::from_axis(Vec3::UnitZ());
  const auto a = fit_rotation(p1, p2, p3, a0(p1), a0(p2), a0(p3));
  CHECK((a.matrix() - a0.matrix()).norm() < 1e-15);
}

TEST_CASE("fit_rotation recovers random generators") {
  Rng rng(testgen::kMasterSeed + 33);
  for (int trial = 0; trial < 500; ++trial) {
    const Vec3 p1 = rng.in_cube(), p2 = rng.in_cube();
    if (p1.cross(p2).norm() < 1e-2 * p1.norm() * p2.norm()) continue;
    const Vec3 p3 = -p1 - p2;
    const auto a0 = SkewGenerator::from_axis(rng.in_cube());
    const auto a = fit_rotation(p1, p2, p3, a0(p1), a0(p2), a0(p3));
    CHECK((a.matrix() - a0.matrix()).norm() <= 1e-10 * a0.matrix().norm());
  }
}

TEST_CASE("fit_rotation refuses collinear and non-rigid data") {
  const Vec3 p1(1, 0, 0), p2(2, 0, 0), p3(-3, 0, 0), z = Vec3::Zero();
  CHECK_THROWS_AS(fit_rotation(p1, p2, p3, z, z, z), CollinearTriangle);
  const Vec3 q1(1, 0, 0), q2(0, 1, 0), q3(-1, -1, 0);
  // Stretching q1 is not a rigid motion.
  CHECK_THROWS_AS(fit_rotation(q1, q2, q3, Vec3(1, 0, 0), z, Vec3(-1, 0, 0)), InconsistentData);
  // Not closed.
  CHECK_THROWS_AS(fit_rotation(q1, q2, q3, Vec3(0, 1, 0), z, z), InconsistentData);
}

TEST_CASE("collapse restriction of the tetrahedron minus a face") {
  const auto s = fixtures::tetrahedron_minus_face();
  Rng rng(testgen::kMasterSeed + 34);
  VertexPositions x(4, 3);
  for (int i = 0; i < 4; ++i) x.row(i) = rng.in_cube().transpose();
  const auto q = edge_vectors(s, x);
  const MetricSurface ms(s, induced_lengths(s, x));
  const auto B = tangent_basis(ms, q);
  const auto t = unflatten(B * coefficients(rng, B.cols()));
  const auto c = collapse(s, 0);
  const auto [q2, t2] = collapse_restrict(s, c, q, t);
  CHECK(q2.rows() == 5);
  const MetricSurface mc(c, q2.rowwise().norm());
  CHECK(residual(mc, q2).accepted);
  const auto B2 = tangent_basis(mc, q2);
  const Eigen::VectorXd v = flatten(t2);
  CHECK((v - B2 * (B2.transpose() * v)).norm() < 1e-12);
}

TEST_CASE("restricted pairs stay valid over random collapses") {
  Rng rng(testgen::kMasterSeed + 35);
  for (int trial = 0; trial < 30; ++trial) {
    const auto d = sampled_disk(rng, 10);
    const auto& s = d.ms.surface();
    const auto B = tangent_basis(d.ms, d.q);
    const auto t = unflatten(B * coefficients(rng, B.cols()));
    const auto pos = collapsible_positions(s);
    const auto c = collapse(s, pos[rng.index(pos.size())]);
    const auto [q2, t2] = collapse_restrict(s, c, d.q, t);
    const MetricSurface mc(c, q2.rowwise().norm());
    CHECK(residual(mc, q2).accepted);
    const auto B2 = tangent_basis(mc, q2);
    const Eigen::VectorXd v = flatten(t2);
    CHECK((v - B2 * (B2.transpose() * v)).norm() < 1e-11 * std::max(1.0, v.norm()));
  }
}

TEST_CASE("gauge normalization") {
  Rng rng(testgen::kMasterSeed + 36);
  for (int trial = 0; trial < 40; ++trial) {
    const auto d = sampled_disk(rng);
    const auto& s = d.ms.surface();
    const auto pos = collapsible_positions(s);
    const auto wp = pos[rng.index(pos.size())];
    const auto site = collapse_site(s, wp);

    // Orbit tangents are gauged away entirely.
    const auto a0 = SkewGenerator::from_axis(rng.in_cube());
    const auto gone = gauge_normalize(s, d.q, a0.apply(d.q), wp);
    CHECK(gone.norm() < 1e-12 * std::max(1.0, d.q.norm()));

    // A generic tangent vanishes on the collapse triangle afterwards.
    const auto B = tangent_basis(d.ms, d.q);
    const auto t = unflatten(B * coefficients(rng, B.cols()));
    const auto g = gauge_normalize(s, d.q, t, wp);
    for (auto e : {site.g, site.e, site.e_prime}) CHECK(edge_vector(s, g, e).norm() < 1e-9);

    // Already normalized tangents are unchanged.
    const auto again = gauge_normalize(s, d.q, g, wp, t.rowwise().norm().maxCoeff());
    CHECK((again - g).norm() < 1e-9 * std::max(1.0, t.norm()));
  }
}

TEST_CASE("triangle-free orientable graph-surfaces pull omega back to zero") {
  Rng rng(testgen::kMasterSeed + 37);
  for (const auto& s : {fixtures::thickened_tree(), fixtures::theta_graph()}) {
    for (int trial = 0; trial < 10; ++trial) {
      PolyhedronPoint q(static_cast<Eigen::Index>(s.edges().size()), 3);
      for (Eigen::Index i = 0; i < q.rows(); ++i) q.row(i) = rng.in_cube().transpose();
      // Theta edges all join the same two vertices; close the two cycles.
      if (s.edges().size() == 3 && h1_generators(s).size() == 2) q.row(1) = q.row(2) = q.row(0);
      const MetricSurface ms(s, q.rowwise().norm());
      const auto r = isotropy_audit(ms, q);
      CHECK(r.pass);
      CHECK(r.max_omega < 1e-14);
    }
  }
}

TEST_CASE("isotropy on random disks with the collapse chain") {
  Rng rng(testgen::kMasterSeed + 38);
  IsotropyOptions opt;
  opt.verify_collapse_chain = true;
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = sampled_disk(rng, 12);
    const auto r = isotropy_audit(d.ms, d.q, opt);
    CAPTURE(trial);
    CHECK(r.pass);
    CHECK(r.chain_checked);
    CHECK(r.chain_pass);
    CHECK(r.chain_steps == d.ms.surface().triangles().size());
    CHECK(r.tangent_dim == static_cast<Eigen::Index>(d.ms.surface().boundary_walk().size()));
  }
}

TEST_CASE("isotropy refuses the projective plane unless overridden") {
  const auto d = fixtures::rp2_data();
  const MetricSurface ms(d.surface, d.lengths);
  CHECK_THROWS_AS(isotropy_audit(ms, d.q), NotOrientable);
  IsotropyOptions opt;
  opt.allow_nonorientable = true;
  const auto r = isotropy_audit(ms, d.q, opt);
  CHECK(!r.pass);
  CHECK(r.max_omega > 1.0);
}

TEST_CASE("projective plane pairing agrees with exact arithmetic") {
  // Each summand det[s1(f_j), s2(f_j), q(f_j)] with unit lengths, summed exactly.
  const auto d = fixtures::rp2_data();
  const auto p = boundary_point(d.surface, d.q);
  const auto t = d_delta(d.surface, d.s1), u = d_delta(d.surface, d.s2);
  using R = oracle::Rational;
  auto col = [](const EdgeVectorsd& m, Eigen::Index j) {
    return std::vector<R>{R(static_cast<long>(m(j, 0))), R(static_cast<long>(m(j, 1))), R(static_cast<long>(m(j, 2)))};
  };
  R exact = 0;
  for (Eigen::Index j = 0; j < p.rows(); ++j) exact += oracle::det3(col(t, j), col(u, j), col(p, j));
  const auto bp = boundary_polygon(d.surface, d.lengths);
  const double value = omega(bp.polygon, p, t, u);
  CHECK(exact == R(-4));
  CHECK(value == -4.0);
  CHECK(omega(bp.polygon, p, u, t) == 4.0);
}
