// Acceptance gate: one PASS/FAIL line per criterion. Tolerances, seeds and
// time limits are pinned here and nowhere else.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "polyiso/audits.hpp"
#include "polyiso/generate.hpp"
#include "polyiso/polygon_space.hpp"
#include "polyiso/polyhedron_space.hpp"
#include "polyiso/rigidity.hpp"

using namespace polyiso;

namespace {

constexpr std::uint64_t kSeed = 20261019;

constexpr double kGoldenValue = 4.0;
constexpr double kGoldenTol = 1e-12;
constexpr double kOrbitResidualTol = 1e-9;
constexpr double kIsotropyRelTol = 1e-8;
constexpr double kRotationRelTol = 1e-10;

constexpr int kPolygonTrials = 100;
constexpr int kKernelTrials = 100;
constexpr int kIsotropyTrials = 50;
constexpr int kChainTrials = 50;
constexpr int kDiskTrials = 100;
constexpr int kMaxTriangles = 20;
constexpr int kRotationTrials = 1000;
constexpr int kDomeMaxTriangles = 8;

struct Outcome {
  bool pass = false;
  std::string detail;  // one line for the summary
  std::string report;  // everything that must be reproducible
};

struct Criterion {
  int number;
  const char* name;
  double time_limit;  // seconds, 0 when the criterion sets none
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

SamplePolygon random_lengths(Rng& rng, int k) {
  for (;;) {
    Eigen::VectorXd l(k);
    for (int i = 0; i < k; ++i) l(i) = rng.uniform(0.5, 2.0);
    if (2.0 * l.maxCoeff() < 0.999 * l.sum()) return SamplePolygon(l);
  }
}

// A collinear closed k-gon along a random direction with random lengths.
std::pair<SamplePolygon, EdgeVectorsd> collinear_polygon(Rng& rng, int k) {
  const Vec3 u = rng.unit_vector();
  for (;;) {
    Eigen::VectorXd l(k), sign(k);
    double sum = 0;
    for (int i = 0; i + 1 < k; ++i) {
      l(i) = rng.uniform(0.5, 2.0);
      sign(i) = (i % 2 == 0) ? 1.0 : -1.0;
      sum += sign(i) * l(i);
    }
    if (std::abs(sum) < 0.25) continue;
    l(k - 1) = std::abs(sum);
    sign(k - 1) = sum > 0 ? -1.0 : 1.0;
    SamplePolygon P(l);
    if (P.degenerate()) continue;
    EdgeVectorsd p(k, 3);
    for (int i = 0; i < k; ++i) p.row(i) = sign(i) * l(i) * u.transpose();
    return {P, p};
  }
}

Outcome golden_value() {
  const auto d = fixtures::rp2_data();
  const auto bp = boundary_polygon(d.surface, d.lengths);
  const auto p = boundary_point(d.surface, d.q);
  const double v = omega(bp.polygon, p, d_delta(d.surface, d.s1), d_delta(d.surface, d.s2));
  Outcome o;
  o.pass = std::abs(v - kGoldenValue) <= kGoldenTol;
  o.detail = "omega(s1 o delta, s2 o delta) = " + fmt("%.17g", v) + ", expected " + fmt("%g", kGoldenValue);
  o.report = o.detail;
  return o;
}

Outcome polygon_dimensions() {
  Outcome o{true, "", ""};
  std::ostringstream rep;
  int smooth_bad = 0, singular_bad = 0;
  for (int i = 0; i < kPolygonTrials; ++i) {
    Rng rng(Rng::derive(kSeed, static_cast<std::uint64_t>(i)));
    const int k = 4 + i % 9;
    const auto P = random_lengths(rng, k);
    const auto p = sample_polygon_point(P, rng);
    const auto dim = tangent_basis(P, p).cols();
    const bool ok = !is_singular(p) && dim == 2 * k - 3;
    smooth_bad += !ok;
    rep << "smooth k=" << k << " dim=" << dim << (ok ? "" : " BAD") << "\n";
  }
  for (int k = 4; k <= 12; ++k) {
    Rng rng(Rng::derive(kSeed + 1, static_cast<std::uint64_t>(k)));
    const auto [P, p] = collinear_polygon(rng, k);
    const auto dim = tangent_basis(P, p).cols();
    const bool ok = is_singular(p) && dim == 2 * k - 2;
    singular_bad += !ok;
    rep << "collinear k=" << k << " dim=" << dim << (ok ? "" : " BAD") << "\n";
  }
  o.pass = smooth_bad == 0 && singular_bad == 0;
  o.detail = std::to_string(kPolygonTrials) + " random k-gons (k=4..12) at 2k-3, " + std::to_string(smooth_bad) +
             " off; collinear k=4..12 at 2k-2, " + std::to_string(singular_bad) + " off";
  o.report = rep.str();
  return o;
}

Outcome omega_kernel() {
  std::ostringstream rep;
  int failures = 0;
  double worst = 0;
  for (int i = 0; i < kKernelTrials; ++i) {
    Rng rng(Rng::derive(kSeed + 2, static_cast<std::uint64_t>(i)));
    const int k = 4 + i % 9;
    SamplePolygon P;
    EdgeVectorsd p;
    if (i % 4 == 3) {
      std::tie(P, p) = collinear_polygon(rng, k);
    } else {
      P = random_lengths(rng, k);
      p = sample_polygon_point(P, rng);
    }
    const auto r = omega_kernel_check(P, p, {}, kOrbitResidualTol);
    failures += !r.pass;
    worst = std::max(worst, r.max_orbit_residual);
    rep << "k=" << k << (r.singular ? " singular" : " smooth") << " kernel=" << r.kernel_dim
        << " residual=" << fmt("%.3e", r.max_orbit_residual) << (r.pass ? "" : " FAIL") << "\n";
  }
  Outcome o;
  o.pass = failures == 0;
  o.detail = std::to_string(kKernelTrials) + " trials, " + std::to_string(failures) +
             " failures, worst orbit residual " + fmt("%.2e", worst) + " (limit " + fmt("%.0e", kOrbitResidualTol) +
             ")";
  o.report = rep.str();
  return o;
}

RunConfig audit_config(int trials) {
  RunConfig cfg;
  cfg.seed = kSeed;
  cfg.trials = trials;
  cfg.max_triangles = kMaxTriangles;
  return cfg;
}

Outcome isotropy() {
  const auto rep = audit_isotropy(audit_config(kIsotropyTrials));
  double worst = 0;
  for (const auto& t : rep.trials) worst = std::max(worst, t.max_omega / std::max(t.threshold / kIsotropyRelTol, 1e-300));
  Outcome o;
  o.pass = rep.pass && rep.trials.size() == static_cast<std::size_t>(kIsotropyTrials) && rep.skipped == 0;
  o.detail = std::to_string(rep.trials.size()) + " disks, " + std::to_string(rep.failed) +
             " failures, worst max|omega|/largest summand " + fmt("%.2e", worst);
  o.report = format_json(rep);
  return o;
}

Outcome collapse_chain() {
  auto cfg = audit_config(kChainTrials);
  cfg.verify_collapse_chain = true;
  const auto rep = audit_isotropy(cfg);
  double worst = 0;
  for (const auto& t : rep.trials) worst = std::max(worst, t.chain_gap);
  Outcome o;
  o.pass = rep.pass && rep.skipped == 0;
  o.detail = std::to_string(rep.trials.size()) + " full collapse sequences, " + std::to_string(rep.failed) +
             " failures, worst absolute gap " + fmt("%.2e", worst);
  o.report = format_json(rep);
  return o;
}

bool counting(const GraphSurface& s) {
  return 3 * s.triangles().size() == 2 * s.edges().size() - s.boundary_walk().size();
}

Outcome counting_identity() {
  std::size_t checked = 0, bad = 0;
  auto check = [&](const GraphSurface& s) {
    ++checked;
    bad += !counting(s);
  };
  for (const auto& s : {fixtures::single_triangle(), fixtures::tetrahedron_minus_face(), fixtures::rp2_square(),
                        fixtures::thickened_tree(), fixtures::theta_graph()})
    check(s);
  for (int i = 0; i < kDiskTrials; ++i) {
    Rng rng(Rng::derive(kSeed + 3, static_cast<std::uint64_t>(i)));
    DiskOptions opt;
    opt.max_triangles = kMaxTriangles;
    GraphSurface s = random_disk(rng, opt).surface;
    check(s);
    check(cone_close(s).closed);
    while (!s.triangles().empty()) {
      s = collapse(s, collapsible_positions(s).front());
      check(s);
    }
  }
  for (const auto& d : enumerate_disks(kDomeMaxTriangles)) check(surface_from_triangles(d.triangles));
  Outcome o;
  o.pass = bad == 0;
  o.detail = std::to_string(checked) + " surfaces (fixtures, random disks, cone closures, collapse steps, "
             "enumerated disks), " + std::to_string(bad) + " violations";
  o.report = o.detail;
  return o;
}

struct DiskRow {
  Eigen::Index boundary, vertex_level, mod_orbit, cone_kernel;
  bool cone_rigid, direct;
};

std::vector<DiskRow> disk_rows() {
  std::vector<DiskRow> rows;
  for (int i = 0; i < kDiskTrials; ++i) {
    Rng rng(Rng::derive(kSeed + 4, static_cast<std::uint64_t>(i)));
    DiskOptions opt;
    opt.max_triangles = kMaxTriangles;
    const auto d = random_disk(rng, opt);
    const auto dr = delta_image_rank(d.surface, d.positions);
    const auto br = boundary_rigid(d.surface, d.positions);
    rows.push_back({static_cast<Eigen::Index>(d.surface.boundary_walk().size()), dr.vertex_level, dr.mod_orbit,
                    br.cone_kernel_dim, br.cone, br.direct});
  }
  return rows;
}

Outcome rank_counts() {
  std::ostringstream rep;
  int bad = 0;
  for (const auto& r : disk_rows()) {
    const bool ok = r.vertex_level == r.boundary + 3 && r.mod_orbit == r.boundary - 3 && 2 * r.mod_orbit == 2 * r.boundary - 6;
    bad += !ok;
    rep << "|F|=" << r.boundary << " vertex=" << r.vertex_level << " mod_orbit=" << r.mod_orbit << (ok ? "" : " FAIL")
        << "\n";
  }
  Outcome o;
  o.pass = bad == 0;
  o.detail = std::to_string(kDiskTrials) + " disks, " + std::to_string(bad) + " failures of |F|+3 and |F|-3";
  o.report = rep.str();
  return o;
}

Outcome cone_rigidity() {
  std::ostringstream rep;
  int not_rigid = 0, violations = 0;
  for (const auto& r : disk_rows()) {
    const bool rigid = r.cone_rigid && r.cone_kernel == 6;
    not_rigid += !rigid;
    violations += r.cone_rigid && !r.direct;
    rep << "|F|=" << r.boundary << " cone_kernel=" << r.cone_kernel << " direct=" << r.direct << "\n";
  }
  Outcome o;
  o.pass = not_rigid == 0 && violations == 0;
  o.detail = std::to_string(kDiskTrials) + " cone closures, " + std::to_string(not_rigid) +
             " with kernel != 6, " + std::to_string(violations) + " violations of cone => boundary rigid";
  o.report = rep.str();
  return o;
}

Outcome rotation_roundtrip() {
  Rng rng(Rng::derive(kSeed + 5, 0));
  double worst = 0;
  int generated = 0;
  while (generated < kRotationTrials) {
    const Vec3 p1 = rng.in_cube(), p2 = rng.in_cube();
    if (p1.cross(p2).norm() <= 1e-3 * p1.norm() * p2.norm()) continue;
    const Vec3 p3 = -p1 - p2;
    const auto a0 = SkewGenerator::from_axis(rng.in_cube());
    const auto a = fit_rotation(p1, p2, p3, a0(p1), a0(p2), a0(p3));
    worst = std::max(worst, (a.matrix() - a0.matrix()).norm() / a0.matrix().norm());
    ++generated;
  }
  Outcome o;
  o.pass = worst <= kRotationRelTol;
  o.detail = std::to_string(generated) + " generators, worst relative error " + fmt("%.2e", worst) + " (limit " +
             fmt("%.0e", kRotationRelTol) + ")";
  o.report = o.detail;
  return o;
}

Outcome dome_audit() {
  auto cfg = audit_config(1);
  cfg.max_triangles = kDomeMaxTriangles;
  const auto rep = audit_domes(cfg);
  Outcome o;
  o.pass = rep.pass;
  o.detail = std::to_string(rep.trials.size()) + " disks with <= " + std::to_string(kDomeMaxTriangles) +
             " triangles, " + std::to_string(rep.trials.size() - rep.skipped) + " realized, " +
             std::to_string(rep.failed) + " over the |F|-3 bound";
  o.report = format_json(rep);
  return o;
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "golden value on the projective plane square", 1.0, golden_value},
      {2, "polygon tangent dimensions", 10.0, polygon_dimensions},
      {3, "kernel of omega is the orbit", 0.0, omega_kernel},
      {4, "isotropy on random disks", 60.0, isotropy},
      {5, "collapse-chain consistency", 0.0, collapse_chain},
      {6, "counting identity", 0.0, counting_identity},
      {7, "rank counts of the boundary map", 0.0, rank_counts},
      {8, "cone rigidity", 0.0, cone_rigidity},
      {9, "triangle rigidity round trip", 0.0, rotation_roundtrip},
      {10, "dome audit", 300.0, dome_audit},
  };
  return all;
}

bool run(const Criterion& c) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.run();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("error: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = c.time_limit <= 0 || secs < c.time_limit;
  const bool pass = o.pass && in_time;
  std::printf("criterion %2d %s: %s | %s | %.2f s%s\n", c.number, pass ? "PASS" : "FAIL", c.name, o.detail.c_str(),
              secs, c.time_limit > 0 ? (in_time ? " (within limit)" : " (OVER LIMIT)") : "");
  std::fflush(stdout);
  return pass;
}

bool determinism(const Criterion& c) {
  std::string a, b;
  try {
    a = c.run().report;
    b = c.run().report;
  } catch (const std::exception& e) {
    std::printf("determinism %2d FAIL: error: %s\n", c.number, e.what());
    return false;
  }
  const bool same = a == b && !a.empty();
  std::printf("determinism %2d %s: %zu report bytes\n", c.number, same ? "PASS" : "FAIL", a.size());
  return same;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  bool check_determinism = false;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--criterion") && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else if (!std::strcmp(argv[i], "--determinism")) {
      check_determinism = true;
    } else {
      std::fprintf(stderr, "usage: acceptance [--criterion N] [--determinism]\n");
      return 2;
    }
  }
  bool all = true;
  bool found = false;
  for (const auto& c : criteria()) {
    if (only && c.number != only) continue;
    found = true;
    all = (check_determinism ? determinism(c) : run(c)) && all;
  }
  if (!found) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  return all ? 0 : 1;
}
