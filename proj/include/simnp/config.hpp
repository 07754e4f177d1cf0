#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace simnp {

// Flat run configuration. Every knob in the pipeline lives here; files are
// plain `key = value` lines with '#' comments, and CLI overrides win.
// Unknown keys are rejected.
struct RunConfig {
  // category model
  std::int64_t points_n = 128;      // neural points per instance
  std::int64_t embeddings_m = 128;  // embeddings per instance
  std::int64_t embed_dim = 16;      // embedding feature width
  std::int64_t shared_dim = 32;     // shared identity feature width
  bool shared_features = true;      // disable for the no-S ablation
  std::string attention = "direct"; // direct | kq | identity
  std::int64_t kq_dim = 32;         // key/query width in kq mode

  // point decoder
  std::int64_t latent_dim = 64;
  std::int64_t decoder_h1 = 128;
  std::int64_t decoder_h2 = 64;
  std::int64_t decoder_bottleneck = 32;

  // renderer
  std::int64_t knn_k = 8;
  double knn_radius = 0.2;
  std::int64_t samples_per_ray = 64;
  std::int64_t hidden_width = 64;
  std::int64_t kernel_depth = 3;
  std::int64_t radiance_depth = 3;
  std::int64_t density_depth = 2;
  double weight_eps = 1e-8;
  double background = 1.0;  // white
  bool stratified = true;   // stratified ray sampling during training

  // optimization
  std::int64_t train_iters = 20000;
  std::int64_t fit_iters = 1000;
  std::int64_t rays_per_batch = 512;
  double lr_params = 5e-4;
  double lr_embed = 1e-2;
  std::int64_t seed = 0;
  std::string precision = "f32";  // f32 | f64
  std::int64_t log_every = 100;
  std::int64_t snapshot_every = 250;

  // point-cloud stages
  std::int64_t pc_train_iters = 4000;
  std::int64_t pc_fit_iters = 400;
  double depth_weight = 1.0;

  // pose optimization
  std::int64_t pose_candidates = 8;
  std::int64_t pose_iters = 150;
  std::int64_t pose_z_iters = 150;
  std::int64_t pose_fit_iters = 300;

  // synthetic dataset
  std::int64_t data_instances = 40;
  std::int64_t data_test_instances = 10;
  std::int64_t data_views = 16;
  std::int64_t resolution = 64;
  double focal_scale = 0.85;  // focal length = focal_scale * resolution
  double sphere_radius = 2.5;
  std::int64_t orbit_views = 24;
  double orbit_elevation_deg = 20.0;

  std::int64_t threads = 0;  // 0 = hardware concurrency

  static RunConfig load(const std::string& path, const std::vector<std::string>& overrides = {});
  void apply_override(const std::string& key_eq_value);
  std::string dump() const;          // key = value lines, current values
  std::string json() const;          // for run reports
  std::uint64_t hash() const;        // stable hash of dump()
  void validate() const;

  double focal_px() const { return focal_scale * static_cast<double>(resolution); }
  int worker_threads() const;
};

}  // namespace simnp
