#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "simnp/config.hpp"
#include "simnp/pc/pointcloud.hpp"
#include "simnp/render/camera.hpp"
#include "simnp/util/geom.hpp"
#include "simnp/util/image.hpp"
#include "simnp/util/rng.hpp"

namespace simnp::synth {

// A procedural object: a body box plus four attached primitives (two
// mirrored side pods, a fin, and a nose), exactly plane-symmetric across
// x = 0. Region colors are instance-random with a mirrored region layout,
// and a decal disk on the +x body face is duplicated at the mirrored
// location with the identical color.
struct ProceduralInstance {
  std::uint64_t seed = 0;

  // shape parameters
  Vec3 body_half;                    // body box half-extents
  Vec3 pod_center;                   // +x side pod; the -x pod is its mirror
  double pod_radius = 0.0;
  Vec3 fin_half;                     // fin box half-extents (centered on x=0)
  Vec3 fin_center;
  Vec3 nose_center;                  // on the plane, toward +z
  double nose_radius = 0.0;

  // albedo
  std::array<Vec3, 9> body_cells;    // 3x3 (y,z) grid of body colors
  Vec3 pod_color, fin_color, nose_color;
  Vec3 decal_color;
  double decal_y = 0.0, decal_z = 0.0, decal_radius = 0.0;

  // primitive ids: 0 body, 1 +x pod, 2 -x pod, 3 fin, 4 nose
  static constexpr int kNumPrims = 5;
  static int mirror_prim(int prim) { return prim == 1 ? 2 : (prim == 2 ? 1 : prim); }

  Vec3 albedo_at(int prim, const Vec3& p) const;
};

ProceduralInstance generate_instance(std::uint64_t seed);

struct RenderOutput {
  Image image;
  Mask mask;
  DepthMap depth;
};

// Analytic ray/primitive intersections, flat albedo, white background,
// nearest-hit depth as ray length. Deterministic.
RenderOutput reference_render(const ProceduralInstance& inst, const render::Camera& cam);

// Nearest hit for a single ray; prim = -1 when the ray misses.
struct Hit {
  double t = 0.0;
  int prim = -1;
  Vec3 point;
};
Hit intersect(const ProceduralInstance& inst, const render::Ray& ray);

// Fixed per-primitive surface lattice mapped through the instance's shape
// parameters. Index-coherent across instances; mirrored index pairs are
// exact reflections. N must be a multiple of 16.
pc::PointCloud sample_coherent_points(const ProceduralInstance& inst, int n);
// mirror_map[i] = index of the point mirrored across x = 0.
std::vector<std::int32_t> point_mirror_map(int n);
// Primitive owning each coherent point slot (for coherence tests).
std::vector<int> point_primitive_map(int n);

// On-disk dataset:
//   <root>/<instance_id>/{images/NNN.png, masks/NNN.png, depth/NNN.bin,
//                         cameras.json, points.snpc, meta.json}
// Train views are random sphere placements; a deterministic 24-view orbit
// follows them. meta.json records the orbit split into input-side (+x) and
// mirrored-side (-x) views plus the point mirror map.
void generate_dataset(const std::string& root, const RunConfig& cfg);

struct ViewRecord {
  render::Camera cam;
  bool is_orbit = false;
  double azimuth_deg = 0.0, elevation_deg = 0.0;
};

struct InstanceData {
  std::string id;
  std::string dir;
  std::uint64_t seed = 0;
  bool is_test = false;
  std::vector<ViewRecord> views;
  pc::PointCloud cloud;
  std::vector<std::int32_t> mirror_map;
  std::vector<int> input_side_views;     // orbit views with camera x > 0
  std::vector<int> mirrored_side_views;  // orbit views with camera x < 0
  int first_orbit_view = 0;

  Image load_image(int view) const;
  Mask load_mask(int view) const;
  DepthMap load_depth(int view) const;
};

std::vector<std::string> list_instances(const std::string& root);
InstanceData load_instance(const std::string& root, const std::string& id);

}  // namespace simnp::synth
