#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "simnp/util/geom.hpp"

namespace simnp::spatial {

// Result of a radius-bounded kNN query. Distances are Euclidean, ascending,
// ties broken by ascending point index. Distance exactly equal to the grid
// radius counts as inside.
struct NeighborSet {
  std::vector<std::int32_t> indices;
  std::vector<double> distances;

  bool empty() const { return indices.empty(); }
  std::size_t size() const { return indices.size(); }
  void clear() {
    indices.clear();
    distances.clear();
  }
};

// Uniform voxel grid over a point cloud with cell size equal to the query
// radius, so a 3x3x3 cell neighborhood always covers a radius-r ball.
// Immutable after build; concurrent queries are safe.
class VoxelGrid {
 public:
  VoxelGrid(const std::vector<Vec3>& points, double radius);

  // Exactly the k nearest points within the radius (fewer if fewer exist).
  void query_knn(const Vec3& x, int k, NeighborSet& out) const;
  NeighborSet query_knn(const Vec3& x, int k) const;

  // Per-sample queries; valid[i] is false when the neighborhood is empty so
  // callers can discard those samples before any network evaluation.
  void query_batch(const std::vector<Vec3>& xs, int k, std::vector<NeighborSet>& out,
                   std::vector<std::uint8_t>& valid, int threads = 1) const;

  double radius() const { return radius_; }
  std::size_t point_count() const { return points_.size(); }
  std::size_t occupied_cells() const { return cells_.size(); }

 private:
  struct CellRange {
    std::int32_t begin = 0;
    std::int32_t count = 0;
  };

  std::int64_t cell_coord(double v, double origin) const;
  static std::uint64_t cell_key(std::int64_t cx, std::int64_t cy, std::int64_t cz);

  std::vector<Vec3> points_;
  double radius_ = 0.0;
  Vec3 origin_;
  std::unordered_map<std::uint64_t, CellRange> cells_;
  std::vector<std::int32_t> cell_points_;  // CSR payload, ascending index per cell
};

// Brute-force oracle with identical semantics (inclusive radius, same order).
void brute_force_knn(const std::vector<Vec3>& points, const Vec3& x, double radius, int k,
                     NeighborSet& out);

}  // namespace simnp::spatial
