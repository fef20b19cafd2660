#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polyiso/numerics.hpp"
#include "polyiso/polyhedron_space.hpp"

namespace polyiso {

struct RunConfig {
  std::uint64_t seed = 1;
  int trials = 50;
  Tolerance tol;
  int max_triangles = 20;
  bool allow_nonorientable = false;
  bool verify_collapse_chain = false;

  /// Throws InconsistentData unless trials >= 1 and max_triangles >= 1.
  void check() const;
};

/// One row of a report. Fields that do not apply to an audit stay at -1.
struct TrialRecord {
  std::uint64_t seed = 0;  // per-trial seed, or 0 for file input
  std::uint64_t surface_hash = 0;
  long vertices = -1, edges = -1, triangles = -1, boundary = -1;
  long tangent_dim = -1;
  long delta_rank = -1;      // vertex level
  long mod_orbit_rank = -1;
  long bound = -1;           // expected or maximal mod-orbit rank
  int cert_direct = -1;      // boundary rigidity certificates, -1 when not computed
  int cert_cone = -1;
  double max_omega = -1;
  double threshold = -1;
  double chain_gap = -1;     // worst collapse-chain discrepancy, when checked
  bool counting_identity = false;
  bool skipped = false;
  bool pass = false;
  std::string note;
};

struct AuditReport {
  std::string audit;
  RunConfig config;
  std::vector<TrialRecord> trials;
  std::size_t skipped = 0;
  std::size_t failed = 0;
  bool pass = true;

  void add(TrialRecord r);
};

/// Isotropy of the boundary map over random vertex-sampled disks.
AuditReport audit_isotropy(const RunConfig& cfg);

/// Isotropy at a given realization of a given surface.
AuditReport audit_isotropy(const RunConfig& cfg, const MetricSurface& s, const PolyhedronPoint& q);

/// Boundary rigidity certificates, cone rigidity and rank counts over random disks.
AuditReport audit_rigidity(const RunConfig& cfg);

/// Half-dimensional image plus isotropy over random disks.
AuditReport audit_lagrangian(const RunConfig& cfg);

/// Every unit-length dome with at most cfg.max_triangles triangles: mod-orbit
/// rank of d_delta against |F| - 3.
AuditReport audit_domes(const RunConfig& cfg);

std::string format_text(const AuditReport& r);
std::string format_json(const AuditReport& r);

}  // namespace polyiso
