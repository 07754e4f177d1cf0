#pragma once

#include <string>
#include <vector>

#include "simnp/diff/tensor.hpp"
#include "simnp/util/geom.hpp"

namespace simnp::pc {

// Coherent point cloud in canonical space: index i refers to the same
// template surface location on every instance of the category.
struct PointCloud {
  std::vector<Vec3> pts;

  std::size_t size() const { return pts.size(); }
  bool empty() const { return pts.empty(); }
};

PointCloud from_tensor(const diff::Tensor& t);
diff::Tensor to_tensor(const PointCloud& pc, bool requires_grad = false);

// "SNPC" file: magic, version u32, N u32, reserved u32, then N*3 f32
// row-major little-endian.
void save_snpc(const std::string& path, const PointCloud& pc);
PointCloud load_snpc(const std::string& path);

}  // namespace simnp::pc
