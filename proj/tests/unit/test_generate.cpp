#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "helpers.hpp"
#include "polyiso/generate.hpp"

using namespace polyiso;

TEST_CASE("triangle lists become coherently oriented surfaces") {
  const auto s = surface_from_triangles({{0, 1, 2}, {0, 2, 3}});
  CHECK(s.vertices().size() == 4);
  CHECK(s.edges().size() == 5);
  CHECK(s.boundary_walk().size() == 4);
  CHECK(s.orientable());
}

TEST_CASE("disk counts for the smallest sizes") {
  const auto disks = enumerate_disks(3);
  std::map<std::size_t, int> by_size;
  for (const auto& d : disks) ++by_size[d.triangles.size()];
  CHECK(by_size[1] == 1);
  CHECK(by_size[2] == 1);
  CHECK(by_size[3] == 2);  // the fan and the strip
}

TEST_CASE("enumerated disks are distinct valid disks") {
  const auto disks = enumerate_disks(6);
  std::set<std::vector<int>> codes;
  for (const auto& d : disks) {
    const auto s = surface_from_triangles(d.triangles);
    CHECK(s.diagnostics().euler_characteristic == 1);
    CHECK(s.diagnostics().counting_identity);
    CHECK(s.boundary_walk().size() == d.ring.size());
    CHECK(codes.insert(canonical_code(d.triangles)).second);
  }
}

TEST_CASE("canonical code ignores labels, rotation and global orientation") {
  Rng rng(testgen::kMasterSeed + 50);
  for (const auto& d : enumerate_disks(6)) {
    const auto code = canonical_code(d.triangles);
    std::vector<int> perm(static_cast<std::size_t>(d.vertex_count));
    for (int i = 0; i < d.vertex_count; ++i) perm[static_cast<std::size_t>(i)] = i;
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
    TriangleList relabelled;
    const bool reverse = rng.index(2) == 1;
    for (const auto& t : d.triangles) {
      std::array<int, 3> u{perm[static_cast<std::size_t>(t[0])], perm[static_cast<std::size_t>(t[1])],
                           perm[static_cast<std::size_t>(t[2])]};
      if (reverse) std::swap(u[1], u[2]);
      std::rotate(u.begin(), u.begin() + static_cast<long>(rng.index(3)), u.end());
      relabelled.push_back(u);
    }
    for (std::size_t i = relabelled.size(); i > 1; --i) std::swap(relabelled[i - 1], relabelled[rng.index(i)]);
    CHECK(canonical_code(relabelled) == code);
  }
}

TEST_CASE("random disks respect the size bound and are reproducible") {
  DiskOptions opt;
  opt.max_triangles = 7;
  Rng a(99), b(99);
  for (int trial = 0; trial < 30; ++trial) {
    const auto da = random_disk(a, opt), db = random_disk(b, opt);
    CHECK(da.surface.triangles().size() >= 1);
    CHECK(da.surface.triangles().size() <= 7);
    CHECK(da.positions == db.positions);
    CHECK(da.surface.data().triangles == db.surface.data().triangles);
  }
}

TEST_CASE("unit realizations have unit edges") {
  Rng rng(testgen::kMasterSeed + 51);
  int realized = 0;
  for (const auto& d : enumerate_disks(5)) {
    const auto s = surface_from_triangles(d.triangles);
    const auto x = realize_unit(s, rng);
    if (!x) continue;
    ++realized;
    CHECK((induced_lengths(s, *x).array() - 1.0).abs().maxCoeff() < 1e-12);
  }
  CHECK(realized > 0);
}

TEST_CASE("derived seeds are distinct per stream") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(Rng::derive(7, i));
  CHECK(seen.size() == 1000);
  Rng r(5);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}
