#include "simnp/spatial/voxel_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace simnp::spatial {

namespace {

// Bounded selection buffer: keeps the k best (dist2, index) pairs seen so
// far, ordered ascending. Insertion is O(k) with k small; no heap, no
// allocation beyond the caller's output.
struct TopK {
  std::pair<double, std::int32_t>* slots;
  int capacity;
  int count = 0;

  void offer(double d2, std::int32_t idx) {
    if (count == capacity && !better(d2, idx, slots[count - 1])) return;
    int pos = count < capacity ? count : capacity - 1;
    while (pos > 0 && better(d2, idx, slots[pos - 1])) {
      slots[pos] = slots[pos - 1];
      --pos;
    }
    slots[pos] = {d2, idx};
    if (count < capacity) ++count;
  }

  static bool better(double d2, std::int32_t idx, const std::pair<double, std::int32_t>& other) {
    if (d2 != other.first) return d2 < other.first;
    return idx < other.second;
  }
};

constexpr int kMaxStackK = 64;

}  // namespace

std::int64_t VoxelGrid::cell_coord(double v, double origin) const {
  return static_cast<std::int64_t>(std::floor((v - origin) / radius_));
}

std::uint64_t VoxelGrid::cell_key(std::int64_t cx, std::int64_t cy, std::int64_t cz) {
  // 21 bits per axis, offset to keep coordinates positive.
  const std::uint64_t bias = 1u << 20;
  return ((static_cast<std::uint64_t>(cx + bias) & 0x1FFFFF) << 42) |
         ((static_cast<std::uint64_t>(cy + bias) & 0x1FFFFF) << 21) |
         (static_cast<std::uint64_t>(cz + bias) & 0x1FFFFF);
}

VoxelGrid::VoxelGrid(const std::vector<Vec3>& points, double radius)
    : points_(points), radius_(radius) {
  if (radius <= 0.0) throw std::invalid_argument("VoxelGrid: radius must be positive");
  for (const Vec3& p : points_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
      throw std::invalid_argument("VoxelGrid: non-finite point");
  }
  origin_ = Vec3(0, 0, 0);
  if (!points_.empty()) {
    origin_ = points_[0];
    for (const Vec3& p : points_) {
      origin_.x = std::min(origin_.x, p.x);
      origin_.y = std::min(origin_.y, p.y);
      origin_.z = std::min(origin_.z, p.z);
    }
  }

  // Counting pass, then CSR fill in ascending point order so every cell's
  // index list is sorted.
  std::vector<std::uint64_t> keys(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const Vec3& p = points_[i];
    keys[i] = cell_key(cell_coord(p.x, origin_.x), cell_coord(p.y, origin_.y),
                       cell_coord(p.z, origin_.z));
    auto [it, inserted] = cells_.try_emplace(keys[i]);
    if (inserted) it->second.begin = -1;
    it->second.count += 1;
  }
  std::int32_t offset = 0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    auto& range = cells_[keys[i]];
    if (range.begin < 0) {
      range.begin = offset;
      offset += range.count;
    }
  }
  cell_points_.assign(points_.size(), 0);
  std::unordered_map<std::uint64_t, std::int32_t> cursor;
  cursor.reserve(cells_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const std::int32_t at = cells_[keys[i]].begin + cursor[keys[i]]++;
    cell_points_[at] = static_cast<std::int32_t>(i);
  }
}

void VoxelGrid::query_knn(const Vec3& x, int k, NeighborSet& out) const {
  out.clear();
  if (k < 1) throw std::invalid_argument("query_knn: k must be >= 1");
  if (points_.empty()) return;

  std::pair<double, std::int32_t> stack_slots[kMaxStackK];
  std::vector<std::pair<double, std::int32_t>> heap_slots;
  TopK top{stack_slots, std::min(k, kMaxStackK)};
  if (k > kMaxStackK) {
    heap_slots.resize(k);
    top = TopK{heap_slots.data(), k};
  }

  const double r2 = radius_ * radius_;
  const std::int64_t cx = cell_coord(x.x, origin_.x);
  const std::int64_t cy = cell_coord(x.y, origin_.y);
  const std::int64_t cz = cell_coord(x.z, origin_.z);
  for (std::int64_t dx = -1; dx <= 1; ++dx)
    for (std::int64_t dy = -1; dy <= 1; ++dy)
      for (std::int64_t dz = -1; dz <= 1; ++dz) {
        auto it = cells_.find(cell_key(cx + dx, cy + dy, cz + dz));
        if (it == cells_.end()) continue;
        const CellRange& range = it->second;
        for (std::int32_t e = 0; e < range.count; ++e) {
          const std::int32_t idx = cell_points_[range.begin + e];
          const Vec3 d = points_[idx] - x;
          const double d2 = norm2(d);
          if (d2 <= r2) top.offer(d2, idx);
        }
      }

  out.indices.reserve(top.count);
  out.distances.reserve(top.count);
  for (int i = 0; i < top.count; ++i) {
    out.indices.push_back(top.slots[i].second);
    out.distances.push_back(std::sqrt(top.slots[i].first));
  }
}

NeighborSet VoxelGrid::query_knn(const Vec3& x, int k) const {
  NeighborSet out;
  query_knn(x, k, out);
  return out;
}

void VoxelGrid::query_batch(const std::vector<Vec3>& xs, int k, std::vector<NeighborSet>& out,
                            std::vector<std::uint8_t>& valid, int threads) const {
  out.assign(xs.size(), {});
  valid.assign(xs.size(), 0);
  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      query_knn(xs[i], k, out[i]);
      valid[i] = out[i].empty() ? 0 : 1;
    }
  };
  if (threads <= 1 || xs.size() < 256) {
    worker(0, xs.size());
    return;
  }
  const std::size_t n = xs.size();
  const std::size_t chunk = (n + threads - 1) / threads;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    const std::size_t b = std::min(n, t * chunk), e = std::min(n, (t + 1) * chunk);
    if (b < e) pool.emplace_back(worker, b, e);
  }
  for (auto& th : pool) th.join();
}

void brute_force_knn(const std::vector<Vec3>& points, const Vec3& x, double radius, int k,
                     NeighborSet& out) {
  out.clear();
  const double r2 = radius * radius;
  std::vector<std::pair<double, std::int32_t>> hits;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double d2 = norm2(points[i] - x);
    if (d2 <= r2) hits.emplace_back(d2, static_cast<std::int32_t>(i));
  }
  std::sort(hits.begin(), hits.end());
  if (static_cast<int>(hits.size()) > k) hits.resize(k);
  for (auto& [d2, idx] : hits) {
    out.indices.push_back(idx);
    out.distances.push_back(std::sqrt(d2));
  }
}

}  // namespace simnp::spatial
