#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>

#include "simnp/spatial/voxel_grid.hpp"
#include "simnp/util/rng.hpp"

using namespace simnp;
using namespace simnp::spatial;

namespace {

std::vector<Vec3> random_cloud(Rng& rng, int n, double extent = 1.0) {
  std::vector<Vec3> pts(n);
  for (auto& p : pts)
    p = Vec3(rng.uniform(-extent, extent), rng.uniform(-extent, extent),
             rng.uniform(-extent, extent));
  return pts;
}

bool same_result(const NeighborSet& a, const NeighborSet& b) {
  if (a.indices != b.indices) return false;
  for (std::size_t i = 0; i < a.distances.size(); ++i)
    if (a.distances[i] != b.distances[i]) return false;
  return true;
}

}  // namespace

TEST_CASE("single point occupies one cell") {
  VoxelGrid grid({Vec3(0.3, -0.2, 0.9)}, 0.25);
  CHECK(grid.occupied_cells() == 1);
  auto ns = grid.query_knn(Vec3(0.3, -0.2, 0.9), 1);
  REQUIRE(ns.size() == 1);
  CHECK(ns.indices[0] == 0);
  CHECK(ns.distances[0] == 0.0);
}

TEST_CASE("coincident points land in one cell and tie-break by index") {
  std::vector<Vec3> pts(10, Vec3(0.1, 0.1, 0.1));
  VoxelGrid grid(pts, 0.2);
  CHECK(grid.occupied_cells() == 1);
  auto ns = grid.query_knn(Vec3(0.1, 0.1, 0.1), 4);
  REQUIRE(ns.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(ns.indices[i] == i);
    CHECK(ns.distances[i] == 0.0);
  }
}

TEST_CASE("occupancy counts sum to the point count") {
  Rng rng(1);
  auto pts = random_cloud(rng, 512);
  VoxelGrid grid(pts, 0.2);
  // every query at a point location must find that point
  for (int i = 0; i < 512; ++i) {
    auto ns = grid.query_knn(pts[i], 1);
    REQUIRE(ns.size() == 1);
    CHECK(ns.indices[0] == i);
  }
}

TEST_CASE("query farther than r from all points returns empty") {
  Rng rng(2);
  auto pts = random_cloud(rng, 64, 0.5);
  VoxelGrid grid(pts, 0.1);
  auto ns = grid.query_knn(Vec3(5, 5, 5), 8);
  CHECK(ns.empty());
}

TEST_CASE("non-positive radius is rejected") {
  CHECK_THROWS(VoxelGrid({Vec3()}, 0.0));
  CHECK_THROWS(VoxelGrid({Vec3()}, -1.0));
}

TEST_CASE("grid matches brute force on random clouds and queries") {
  Rng rng(42);
  NeighborSet got, want;
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 1 + static_cast<int>(rng.uniform_int(400));
    const double r = rng.uniform(0.05, 0.6);
    auto pts = random_cloud(rng, n);
    VoxelGrid grid(pts, r);
    for (int q = 0; q < 500; ++q) {
      const Vec3 x(rng.uniform(-1.3, 1.3), rng.uniform(-1.3, 1.3), rng.uniform(-1.3, 1.3));
      const int k = 1 + static_cast<int>(rng.uniform_int(12));
      grid.query_knn(x, k, got);
      brute_force_knn(pts, x, r, k, want);
      CHECK(same_result(got, want));
    }
  }
}

TEST_CASE("distance exactly r is inside") {
  std::vector<Vec3> pts{Vec3(0, 0, 0), Vec3(0.5, 0, 0)};
  VoxelGrid grid(pts, 0.5);
  auto ns = grid.query_knn(Vec3(1.0, 0, 0), 2);
  // point 1 sits exactly r away (inside); point 0 is 1.0 away (outside)
  REQUIRE(ns.size() == 1);
  CHECK(ns.indices[0] == 1);
  CHECK(ns.distances[0] == 0.5);
}

TEST_CASE("ties at equal distance break by ascending index") {
  std::vector<Vec3> pts{Vec3(0.3, 0, 0), Vec3(-0.3, 0, 0), Vec3(0, 0.3, 0)};
  VoxelGrid grid(pts, 1.0);
  auto ns = grid.query_knn(Vec3(0, 0, 0), 2);
  REQUIRE(ns.size() == 2);
  CHECK(ns.indices[0] == 0);
  CHECK(ns.indices[1] == 1);
}

TEST_CASE("batch query equals per-sample queries and flags empties") {
  Rng rng(7);
  auto pts = random_cloud(rng, 256, 0.8);
  VoxelGrid grid(pts, 0.15);
  std::vector<Vec3> xs;
  for (int i = 0; i < 2000; ++i)
    xs.emplace_back(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));

  std::vector<NeighborSet> batch;
  std::vector<std::uint8_t> valid;
  grid.query_batch(xs, 8, batch, valid, 2);
  NeighborSet single;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    grid.query_knn(xs[i], 8, single);
    CHECK(same_result(batch[i], single));
    CHECK(valid[i] == (single.empty() ? 0 : 1));
  }

  // identical results across thread counts
  std::vector<NeighborSet> batch1;
  std::vector<std::uint8_t> valid1;
  grid.query_batch(xs, 8, batch1, valid1, 1);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(same_result(batch[i], batch1[i]));
}

TEST_CASE("all samples far outside bounds are invalid") {
  Rng rng(9);
  auto pts = random_cloud(rng, 64, 0.5);
  VoxelGrid grid(pts, 0.1);
  std::vector<Vec3> xs(50, Vec3(10, 10, 10));
  std::vector<NeighborSet> batch;
  std::vector<std::uint8_t> valid;
  grid.query_batch(xs, 8, batch, valid);
  for (auto v : valid) CHECK(v == 0);
}

TEST_CASE("batch throughput benchmark") {
  Rng rng(123);
  auto pts = random_cloud(rng, 2048, 0.9);
  VoxelGrid grid(pts, 0.2);
  std::vector<Vec3> xs;
  for (int i = 0; i < 100000; ++i)
    xs.emplace_back(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
  std::vector<NeighborSet> batch;
  std::vector<std::uint8_t> valid;
  auto t0 = std::chrono::steady_clock::now();
  grid.query_batch(xs, 8, batch, valid, 2);
  auto t1 = std::chrono::steady_clock::now();
  const double secs = std::chrono::duration<double>(t1 - t0).count();
  std::printf("[bench] voxel-grid knn: %.0f queries/s (%zu samples, k=8)\n", xs.size() / secs,
              xs.size());
  CHECK(secs > 0.0);
}
