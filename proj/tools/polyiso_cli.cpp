#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "polyiso/audits.hpp"
#include "polyiso/generate.hpp"
#include "polyiso/io.hpp"
#include "polyiso/polyhedron_space.hpp"
#include "polyiso/rigidity.hpp"

using namespace polyiso;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitError = 2;

struct Common {
  RunConfig cfg;
  bool json = false;
  std::string output;
  bool random = false;
  std::string surface;
  std::string realization;
  bool rp2 = false;
  std::size_t position = 0;
};

void add_run_flags(CLI::App* app, Common& c, int default_max_triangles) {
  c.cfg.max_triangles = default_max_triangles;
  app->add_option("--seed", c.cfg.seed, "master seed")->envname("POLYISO_SEED")->capture_default_str();
  app->add_option("--trials", c.cfg.trials, "number of random trials")
      ->envname("POLYISO_TRIALS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--tol", c.cfg.tol.rel_eps, "relative rank threshold")
      ->envname("POLYISO_TOL")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--max-triangles", c.cfg.max_triangles, "largest generated surface")
      ->envname("POLYISO_MAX_TRIANGLES")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_flag("--allow-nonorientable", c.cfg.allow_nonorientable, "audit non-orientable input anyway")
      ->envname("POLYISO_ALLOW_NONORIENTABLE");
  app->add_flag("--verify-collapse-chain", c.cfg.verify_collapse_chain, "compare omega termwise along collapses")
      ->envname("POLYISO_VERIFY_COLLAPSE_CHAIN");
  app->add_flag("--json", c.json, "machine-readable report")->envname("POLYISO_JSON");
  app->add_option("--output", c.output, "write the report to a file")->envname("POLYISO_OUTPUT");
}

void emit(const Common& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + c.output + "'");
  out << text;
}

int report(const Common& c, const AuditReport& r) {
  emit(c, c.json ? format_json(r) : format_text(r));
  return r.pass ? 0 : kExitFail;
}

std::string walk_names(const std::vector<OrientedEdge>& walk) {
  std::string s;
  for (std::size_t i = 0; i < walk.size(); ++i) s += (i ? " " : "") + std::to_string(walk[i].signed_id());
  return s;
}

int cmd_boundary(const Common& c) {
  const io::SurfaceDocument doc = io::read_surface(c.surface);
  const GraphSurface s(doc.data);
  const auto& walk = s.boundary_walk();
  std::ostringstream out;
  out << "k = " << walk.size() << "\n";
  out << "walk: " << walk_names(walk) << "\n";
  out << "orientable: " << (s.orientable() ? "yes" : "no") << "\n";
  std::map<int, std::vector<std::size_t>> slots;
  for (std::size_t i = 0; i < walk.size(); ++i) slots[walk[i].id()].push_back(i);
  out << "f_i  g_i  repeats\n";
  for (std::size_t i = 0; i < walk.size(); ++i) {
    std::string note;
    for (std::size_t j : slots[walk[i].id()]) {
      if (j == i) continue;
      note += (note.empty() ? "" : ", ") + std::string("f_") + std::to_string(j + 1) +
              (walk[j] == walk[i] ? " (same orientation)" : " (opposite orientation)");
    }
    char line[64];
    std::snprintf(line, sizeof line, "f_%-3zu %-4d ", i + 1, walk[i].signed_id());
    out << line << (note.empty() ? "-" : note) << "\n";
  }
  emit(c, out.str());
  return 0;
}

int cmd_collapse(const Common& c) {
  const io::SurfaceDocument doc = io::read_surface(c.surface);
  const GraphSurface s(doc.data);
  const GraphSurface t = collapse(s, c.position);
  std::optional<EdgeLengths> lengths;
  if (doc.lengths) {
    EdgeLengths l(static_cast<Eigen::Index>(t.edges().size()));
    for (std::size_t i = 0; i < t.edges().size(); ++i)
      l(static_cast<Eigen::Index>(i)) = (*doc.lengths)(static_cast<Eigen::Index>(s.edge_index(t.edges()[i].id)));
    lengths = std::move(l);
  }
  emit(c, io::serialize_surface(t, lengths));
  return 0;
}

int cmd_rp2(const Common& c) {
  const auto d = fixtures::rp2_data();
  const GraphSurface& s = d.surface;
  const SamplePolygon P = boundary_polygon(s, d.lengths).polygon;
  const EdgeVectorsd p = boundary_point(s, d.q);
  const Eigen::VectorXd terms = omega_summands(P, p, d_delta(s, d.s1), d_delta(s, d.s2));
  std::ostringstream out;
  out << "projective-plane square: walk " << walk_names(s.boundary_walk())
      << " (every edge repeated with the same orientation)\n";
  out << "orientable: " << (s.orientable() ? "yes" : "no") << "\n";
  out << "summands det[s1(f_j), s2(f_j), q(f_j)]:";
  for (Eigen::Index j = 0; j < terms.size(); ++j) out << " " << terms(j);
  out << "\n";
  out << "omega(s1 o delta, s2 o delta) = " << terms.sum() << "\n";
  out << "omega(s2 o delta, s1 o delta) = " << omega(P, p, d_delta(s, d.s2), d_delta(s, d.s1)) << "\n";
  const MetricSurface ms(s, d.lengths);
  try {
    isotropy_audit(ms, d.q);
  } catch (const NotOrientable& e) {
    out << "isotropy audit refused: " << e.what() << "\n";
  }
  IsotropyOptions opt;
  opt.allow_nonorientable = true;
  const IsotropyReport r = isotropy_audit(ms, d.q, opt);
  char line[160];
  std::snprintf(line, sizeof line, "with the refusal overridden: tangent_dim %ld, max |omega| %.3e, threshold %.3e\n",
                static_cast<long>(r.tangent_dim), r.max_omega, r.threshold);
  out << line << "pullback of omega is not null: " << (r.pass ? "no" : "yes") << "\n";
  emit(c, out.str());
  return kExitFail;
}

int cmd_isotropy(const Common& c) {
  if (c.rp2) return cmd_rp2(c);
  if (c.surface.empty()) return report(c, audit_isotropy(c.cfg));
  const io::SurfaceDocument doc = io::read_surface(c.surface);
  const GraphSurface s(doc.data);
  if (c.realization.empty()) throw ParseError("a surface file needs --realization");
  const io::Realization real = io::read_realization(s, c.realization);
  const PolyhedronPoint q = real.edge_vectors ? *real.edge_vectors : edge_vectors(s, *real.positions);
  const EdgeLengths l = doc.lengths ? *doc.lengths : EdgeLengths(q.rowwise().norm());
  return report(c, audit_isotropy(c.cfg, MetricSurface(s, l), q));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical audits of boundary maps of polyhedral surfaces into polygon spaces"};
  app.require_subcommand(1);
  Common files, iso, rig, lag, dome, demo;

  auto* boundary = app.add_subcommand("boundary", "boundary polygon and delta table of a surface file");
  boundary->add_option("surface", files.surface, "surface file")->required()->check(CLI::ExistingFile);
  boundary->add_option("--output", files.output, "write to a file");

  auto* collapse_cmd = app.add_subcommand("collapse", "collapse the triangle at a boundary walk position");
  collapse_cmd->add_option("surface", files.surface, "surface file")->required()->check(CLI::ExistingFile);
  collapse_cmd->add_option("--position", files.position, "0-based walk position")->capture_default_str();
  collapse_cmd->add_option("--output", files.output, "write to a file");

  auto* isotropy = app.add_subcommand("isotropy", "pullback of omega along the boundary map");
  isotropy->add_option("surface", iso.surface, "surface file (random disks when absent)")->check(CLI::ExistingFile);
  isotropy->add_option("--realization", iso.realization, "edge vectors or vertex positions")
      ->check(CLI::ExistingFile);
  isotropy->add_flag("--random", iso.random, "random disks (the default without a surface file)");
  isotropy->add_flag("--rp2-demo", iso.rp2, "the projective-plane counterexample");
  add_run_flags(isotropy, iso, 20);

  auto* rigidity = app.add_subcommand("rigidity", "boundary rigidity and rank counts on random disks");
  add_run_flags(rigidity, rig, 20);
  auto* lagrangian = app.add_subcommand("lagrangian", "half-dimensional isotropic image on random disks");
  add_run_flags(lagrangian, lag, 20);
  auto* domes = app.add_subcommand("dome-audit", "rank bound on every small unit-length dome");
  add_run_flags(domes, dome, 8);
  auto* rp2 = app.add_subcommand("rp2-demo", "the projective-plane counterexample");
  rp2->add_option("--output", demo.output, "write to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage errors share the error exit code; --help exits 0.
    return app.exit(e) == 0 ? 0 : kExitError;
  }

  try {
    if (boundary->parsed()) return cmd_boundary(files);
    if (collapse_cmd->parsed()) return cmd_collapse(files);
    if (isotropy->parsed()) {
      if (iso.random && !iso.surface.empty()) throw ParseError("--random and a surface file are exclusive");
      return cmd_isotropy(iso);
    }
    if (rp2->parsed()) return cmd_rp2(demo);
    if (rigidity->parsed()) return report(rig, audit_rigidity(rig.cfg));
    if (lagrangian->parsed()) return report(lag, audit_lagrangian(lag.cfg));
    if (domes->parsed()) return report(dome, audit_domes(dome.cfg));
  } catch (const Error& e) {
    std::cerr << "error: " << e.what();
    if (!e.offending().empty()) {
      std::cerr << " [";
      for (std::size_t i = 0; i < e.offending().size(); ++i) std::cerr << (i ? " " : "") << e.offending()[i];
      std::cerr << "]";
    }
    std::cerr << "\n";
    return kExitError;
  }
  return kExitError;
}
