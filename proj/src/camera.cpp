#include "simnp/render/camera.hpp"

#include <cmath>
#include <stdexcept>

namespace simnp::render {

Ray Camera::pixel_ray(int row, int col) const {
  return pixel_ray(col + 0.5, row + 0.5);
}

Ray Camera::pixel_ray(double px, double py) const {
  const Vec3 cam_dir((px - cx) / focal, (py - cy) / focal, 1.0);
  const Vec3 world_dir = rotation.transposed() * cam_dir;
  return {position, normalized(world_dir)};
}

std::optional<Camera::Projection> Camera::project(const Vec3& world) const {
  const Vec3 cam = rotation * (world - position);
  if (cam.z <= 1e-9) return std::nullopt;
  return Projection{focal * cam.x / cam.z + cx, focal * cam.y / cam.z + cy, norm(cam)};
}

Vec3 Camera::unproject(double px, double py, double ray_depth) const {
  const Ray r = pixel_ray(px, py);
  return r.origin + r.dir * ray_depth;
}

Camera look_at(const Vec3& position, const Vec3& target, double focal, int width, int height) {
  const Vec3 z = normalized(target - position);
  Vec3 up(0.0, 1.0, 0.0);
  if (std::abs(dot(up, z)) > 0.999) up = Vec3(0.0, 0.0, 1.0);
  // +y_cam points down in the image so that image-up matches world-up.
  const Vec3 up_proj = normalized(up - z * dot(up, z));
  const Vec3 y = -up_proj;
  const Vec3 x = cross(y, z);

  Camera cam;
  cam.position = position;
  cam.rotation = Mat3::from_rows(x, y, z);
  cam.focal = focal;
  cam.width = width;
  cam.height = height;
  cam.cx = width * 0.5;
  cam.cy = height * 0.5;
  return cam;
}

Vec3 sphere_position(double radius, double azimuth_rad, double elevation_rad) {
  const double ce = std::cos(elevation_rad);
  return Vec3(radius * ce * std::cos(azimuth_rad), radius * std::sin(elevation_rad),
              radius * ce * std::sin(azimuth_rad));
}

}  // namespace simnp::render
