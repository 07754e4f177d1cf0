#include "simnp/pc/pointcloud.hpp"

#include <stdexcept>

#include "simnp/util/binio.hpp"

namespace simnp::pc {

PointCloud from_tensor(const diff::Tensor& t) {
  if (t.rank() != 2 || t.cols() != 3) throw std::invalid_argument("from_tensor: expected (N,3)");
  PointCloud pc;
  pc.pts.resize(t.rows());
  for (diff::Index i = 0; i < t.rows(); ++i)
    pc.pts[i] = Vec3(t.at(i, 0), t.at(i, 1), t.at(i, 2));
  return pc;
}

diff::Tensor to_tensor(const PointCloud& pc, bool requires_grad) {
  std::vector<double> vals;
  vals.reserve(pc.size() * 3);
  for (const Vec3& p : pc.pts) {
    vals.push_back(p.x);
    vals.push_back(p.y);
    vals.push_back(p.z);
  }
  return diff::Tensor::from_data({static_cast<diff::Index>(pc.size()), 3}, std::move(vals),
                                 requires_grad);
}

void save_snpc(const std::string& path, const PointCloud& pc) {
  auto os = open_out(path);
  write_magic(os, "SNPC");
  write_u32(os, 1);
  write_u32(os, static_cast<std::uint32_t>(pc.size()));
  write_u32(os, 0);
  std::vector<float> f;
  f.reserve(pc.size() * 3);
  for (const Vec3& p : pc.pts) {
    f.push_back(static_cast<float>(p.x));
    f.push_back(static_cast<float>(p.y));
    f.push_back(static_cast<float>(p.z));
  }
  write_f32_array(os, f);
}

PointCloud load_snpc(const std::string& path) {
  auto is = open_in(path);
  expect_magic(is, "SNPC", path);
  const auto version = read_u32(is);
  if (version != 1) throw std::runtime_error(path + ": unsupported SNPC version");
  const auto n = read_u32(is);
  read_u32(is);  // reserved
  auto f = read_f32_array(is, static_cast<std::size_t>(n) * 3);
  PointCloud pc;
  pc.pts.resize(n);
  for (std::uint32_t i = 0; i < n; ++i)
    pc.pts[i] = Vec3(f[3 * i], f[3 * i + 1], f[3 * i + 2]);
  return pc;
}

}  // namespace simnp::pc
