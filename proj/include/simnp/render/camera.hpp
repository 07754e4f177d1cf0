#pragma once

#include <optional>
#include <vector>

#include "simnp/util/geom.hpp"

namespace simnp::render {

struct Ray {
  Vec3 origin;
  Vec3 dir;  // unit
};

// Pinhole camera. Camera frame: +z forward (toward the scene), +y down
// (row-increasing), +x right. `rotation` maps world to camera coordinates.
// Continuous pixel coordinates put pixel (row, col)'s center at
// (col + 0.5, row + 0.5).
struct Camera {
  Vec3 position;
  Mat3 rotation;  // world -> camera, rows are the camera axes in world space
  double focal = 0.0;
  double cx = 0.0, cy = 0.0;
  int width = 0, height = 0;

  Ray pixel_ray(int row, int col) const;
  Ray pixel_ray(double px, double py) const;  // continuous pixel coords

  // Projects a world point; returns nullopt when it is not in front of the
  // camera. Result is (px, py) in continuous pixel coordinates plus depth
  // (Euclidean distance from the camera center).
  struct Projection {
    double px, py, ray_depth;
  };
  std::optional<Projection> project(const Vec3& world) const;

  Vec3 unproject(double px, double py, double ray_depth) const;

  Vec3 forward_axis() const { return rotation.row(2); }
};

// z-axis toward `target`, image up aligned with world +y (projected out);
// falls back to world +z as up when the view direction is near-vertical.
Camera look_at(const Vec3& position, const Vec3& target, double focal, int width, int height);

// Object-centric placement on a sphere around the origin. Azimuth sweeps in
// the x-z plane from +x toward +z; elevation lifts toward +y.
Vec3 sphere_position(double radius, double azimuth_rad, double elevation_rad);

}  // namespace simnp::render
