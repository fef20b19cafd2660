#include "polyiso/audits.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "polyiso/generate.hpp"
#include "polyiso/io.hpp"
#include "polyiso/random.hpp"
#include "polyiso/rigidity.hpp"

namespace polyiso {

void RunConfig::check() const {
  if (trials < 1) throw InconsistentData("trials must be at least 1");
  if (max_triangles < 1) throw InconsistentData("max_triangles must be at least 1");
  if (!(tol.rel_eps > 0) || !(tol.abs_eps > 0)) throw InconsistentData("tolerances must be positive");
}

void AuditReport::add(TrialRecord r) {
  if (r.skipped) {
    ++skipped;
  } else if (!r.pass) {
    ++failed;
    pass = false;
  }
  trials.push_back(std::move(r));
}

namespace {

TrialRecord describe(const GraphSurface& s, std::uint64_t seed) {
  TrialRecord r;
  r.seed = seed;
  r.surface_hash = io::surface_hash(s);
  const Diagnostics& d = s.diagnostics();
  r.vertices = static_cast<long>(d.vertices);
  r.edges = static_cast<long>(d.edges);
  r.triangles = static_cast<long>(d.triangles);
  r.boundary = static_cast<long>(d.walk);
  r.counting_identity = d.counting_identity;
  return r;
}

IsotropyOptions isotropy_options(const RunConfig& cfg, const Tolerance& tol) {
  IsotropyOptions o;
  o.tol = tol;
  o.allow_nonorientable = cfg.allow_nonorientable;
  o.verify_collapse_chain = cfg.verify_collapse_chain;
  return o;
}

void fill_isotropy(TrialRecord& r, const IsotropyReport& iso) {
  r.tangent_dim = iso.tangent_dim;
  r.max_omega = iso.max_omega;
  r.threshold = iso.threshold;
  if (iso.chain_checked)
    r.chain_gap = std::max({iso.max_gauge_shift, iso.max_termwise_gap, iso.max_replaced_summand});
  r.pass = r.counting_identity && iso.pass && iso.chain_pass;
  if (!iso.chain_pass) r.note = "collapse chain mismatch";
}

TrialRecord isotropy_trial(const RunConfig& cfg, const MetricSurface& ms, const PolyhedronPoint& q,
                           std::uint64_t seed) {
  TrialRecord r = describe(ms.surface(), seed);
  try {
    fill_isotropy(r, isotropy_audit(ms, q, isotropy_options(cfg, cfg.tol)));
  } catch (const NotOrientable& e) {
    r.pass = false;
    r.note = e.what();
  }
  return r;
}

DiskSample sample_disk(const RunConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  DiskOptions opt;
  opt.max_triangles = cfg.max_triangles;
  return random_disk(rng, opt);
}

TrialRecord rigidity_trial(const DiskSample& d, std::uint64_t seed, const Tolerance& tol) {
  const GraphSurface& s = d.surface;
  TrialRecord r = describe(s, seed);
  const BoundaryRigidity br = boundary_rigid(s, d.positions, tol);
  const DeltaRank dr = delta_image_rank(s, d.positions, tol);
  const long f = r.boundary;
  const long h1 = static_cast<long>(h1_generators(s).size());
  r.tangent_dim = br.tangent_dim;
  r.delta_rank = dr.vertex_level;
  r.mod_orbit_rank = dr.mod_orbit;
  r.bound = f - 3;
  r.cert_direct = br.direct;
  r.cert_cone = br.cone;
  std::vector<std::string> bad;
  if (!r.counting_identity) bad.push_back("counting identity");
  if (br.tangent_dim < f - h1) bad.push_back("tangent below |F| - dim H1");
  if (br.cone && !br.direct) bad.push_back("cone rigid but not boundary rigid");
  if (!br.direct) bad.push_back("not boundary rigid");
  if (!br.cone) bad.push_back("cone closure flexible");
  if (dr.vertex_level != f + 3) bad.push_back("vertex-level rank != |F|+3");
  if (dr.mod_orbit != f - 3) bad.push_back("mod-orbit rank != |F|-3");
  if (br.direct && br.tangent_dim - 3 != dr.mod_orbit) bad.push_back("tangent dim - 3 != mod-orbit rank");
  r.pass = bad.empty();
  for (std::size_t i = 0; i < bad.size(); ++i) r.note += (i ? "; " : "") + bad[i];
  return r;
}

}  // namespace

AuditReport audit_isotropy(const RunConfig& cfg) {
  cfg.check();
  AuditReport rep;
  rep.audit = "isotropy";
  rep.config = cfg;
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t seed = Rng::derive(cfg.seed, static_cast<std::uint64_t>(t));
    const DiskSample d = sample_disk(cfg, seed);
    const MetricSurface ms(d.surface, induced_lengths(d.surface, d.positions));
    rep.add(isotropy_trial(cfg, ms, edge_vectors(d.surface, d.positions), seed));
  }
  return rep;
}

AuditReport audit_isotropy(const RunConfig& cfg, const MetricSurface& s, const PolyhedronPoint& q) {
  cfg.check();
  AuditReport rep;
  rep.audit = "isotropy";
  rep.config = cfg;
  rep.add(isotropy_trial(cfg, s, q, 0));
  return rep;
}

AuditReport audit_rigidity(const RunConfig& cfg) {
  cfg.check();
  AuditReport rep;
  rep.audit = "rigidity";
  rep.config = cfg;
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t seed = Rng::derive(cfg.seed, static_cast<std::uint64_t>(t));
    const DiskSample d = sample_disk(cfg, seed);
    TrialRecord r = rigidity_trial(d, seed, cfg.tol);
    if (!r.pass) {
      const std::string first = r.note;
      r = rigidity_trial(d, seed, Tolerance::tight());
      r.note = "re-examined at tight tolerance after: " + first + (r.note.empty() ? "" : "; still: " + r.note);
    }
    rep.add(std::move(r));
  }
  return rep;
}

AuditReport audit_lagrangian(const RunConfig& cfg) {
  cfg.check();
  AuditReport rep;
  rep.audit = "lagrangian";
  rep.config = cfg;
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t seed = Rng::derive(cfg.seed, static_cast<std::uint64_t>(t));
    const DiskSample d = sample_disk(cfg, seed);
    TrialRecord r = describe(d.surface, seed);
    try {
      const LagrangianReport lr = lagrangian_audit(d.surface, d.positions, isotropy_options(cfg, cfg.tol));
      fill_isotropy(r, lr.isotropy);
      r.delta_rank = lr.rank.vertex_level;
      r.mod_orbit_rank = lr.rank.mod_orbit;
      r.bound = lr.moduli_dim / 2;
      r.pass = r.pass && lr.half_dimensional;
      if (!lr.half_dimensional) r.note = "image is not half-dimensional";
    } catch (const SingularBoundary& e) {
      r.skipped = true;
      r.note = e.what();
    }
    rep.add(std::move(r));
  }
  return rep;
}

AuditReport audit_domes(const RunConfig& cfg) {
  cfg.check();
  AuditReport rep;
  rep.audit = "dome-audit";
  rep.config = cfg;
  const auto domes = enumerate_disks(cfg.max_triangles);
  for (std::size_t i = 0; i < domes.size(); ++i) {
    const std::uint64_t seed = Rng::derive(cfg.seed, i);
    const GraphSurface s = surface_from_triangles(domes[i].triangles);
    TrialRecord r = describe(s, seed);
    r.bound = r.boundary - 3;
    Rng rng(seed);
    const auto x = realize_unit(s, rng);
    if (!x) {
      r.skipped = true;
      r.note = "no unit realization found";
    } else if (is_singular(boundary_point(s, edge_vectors(s, *x)), cfg.tol)) {
      r.skipped = true;
      r.note = "boundary polygon is collinear";
    } else {
      const DeltaRank dr = delta_image_rank(s, *x, cfg.tol);
      r.tangent_dim = dr.tangent_dim;
      r.delta_rank = dr.vertex_level;
      r.mod_orbit_rank = dr.mod_orbit;
      r.pass = r.counting_identity && dr.mod_orbit <= r.bound;
      if (!r.pass) r.note = "mod-orbit rank exceeds |F| - 3";
    }
    rep.add(std::move(r));
  }
  return rep;
}

namespace {

std::string num(double v) {
  if (v < 0) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string num(long v) { return v < 0 ? "-" : std::to_string(v); }

std::string flag(int v) { return v < 0 ? "-" : (v ? "yes" : "no"); }

std::string hex(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

}  // namespace

std::string format_text(const AuditReport& r) {
  std::ostringstream out;
  const RunConfig& c = r.config;
  out << "audit " << r.audit << "  seed=" << c.seed << "  trials=" << r.trials.size() << "  tol=" << num(c.tol.rel_eps)
      << "/" << num(c.tol.abs_eps) << "  max_triangles=" << c.max_triangles << "\n";
  out << "seed                 surface_hash      |V| |E| |T| |F| tdim drank morb bound direct cone max_omega  threshold  "
         "chain_gap  status\n";
  for (const TrialRecord& t : r.trials) {
    char line[512];
    std::snprintf(line, sizeof line, "%-20" PRIu64 " %s %3s %3s %3s %3s %4s %5s %4s %5s %6s %4s %-10s %-10s %-10s %s",
                  t.seed, hex(t.surface_hash).c_str(), num(t.vertices).c_str(), num(t.edges).c_str(),
                  num(t.triangles).c_str(), num(t.boundary).c_str(), num(t.tangent_dim).c_str(),
                  num(t.delta_rank).c_str(), num(t.mod_orbit_rank).c_str(), num(t.bound).c_str(),
                  flag(t.cert_direct).c_str(), flag(t.cert_cone).c_str(), num(t.max_omega).c_str(),
                  num(t.threshold).c_str(), num(t.chain_gap).c_str(),
                  t.skipped ? "SKIP" : (t.pass ? "PASS" : "FAIL"));
    out << line;
    if (!t.note.empty()) out << "  # " << t.note;
    out << "\n";
  }
  out << "summary: " << r.trials.size() << " trials, " << r.skipped << " skipped, " << r.failed << " failed: "
      << (r.pass ? "PASS" : "FAIL") << "\n";
  return out.str();
}

std::string format_json(const AuditReport& r) {
  using json = nlohmann::ordered_json;
  json doc;
  doc["audit"] = r.audit;
  doc["seed"] = r.config.seed;
  doc["tol"] = {{"rel_eps", r.config.tol.rel_eps}, {"abs_eps", r.config.tol.abs_eps}};
  doc["max_triangles"] = r.config.max_triangles;
  json trials = json::array();
  auto opt_long = [](long v) { return v < 0 ? json(nullptr) : json(v); };
  auto opt_double = [](double v) { return v < 0 ? json(nullptr) : json(v); };
  auto opt_flag = [](int v) { return v < 0 ? json(nullptr) : json(v != 0); };
  for (const TrialRecord& t : r.trials) {
    json j;
    j["seed"] = t.seed;
    j["surface_hash"] = hex(t.surface_hash);
    j["V"] = opt_long(t.vertices);
    j["E"] = opt_long(t.edges);
    j["T"] = opt_long(t.triangles);
    j["F"] = opt_long(t.boundary);
    j["tangent_dim"] = opt_long(t.tangent_dim);
    j["delta_rank"] = opt_long(t.delta_rank);
    j["mod_orbit_rank"] = opt_long(t.mod_orbit_rank);
    j["bound"] = opt_long(t.bound);
    j["certificates"] = {{"direct", opt_flag(t.cert_direct)}, {"cone", opt_flag(t.cert_cone)}};
    j["max_omega"] = opt_double(t.max_omega);
    j["threshold"] = opt_double(t.threshold);
    j["chain_gap"] = opt_double(t.chain_gap);
    j["counting_identity"] = t.counting_identity;
    j["skipped"] = t.skipped;
    j["pass"] = t.pass;
    if (!t.note.empty()) j["note"] = t.note;
    trials.push_back(std::move(j));
  }
  doc["trials"] = std::move(trials);
  doc["skipped"] = r.skipped;
  doc["failed"] = r.failed;
  doc["pass"] = r.pass;
  return doc.dump(2) + "\n";
}

}  // namespace polyiso
