#include "simnp/config.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace simnp {

namespace {

struct KeyBinding {
  const char* name;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::vector<KeyBinding> bindings() {
  std::vector<KeyBinding> b;
  auto add_i = [&](const char* name, std::int64_t RunConfig::*member) {
    b.push_back({name, [member](const RunConfig& c) { return std::to_string(c.*member); },
                 [member, name](RunConfig& c, const std::string& v) {
                   std::size_t pos = 0;
                   c.*member = std::stoll(v, &pos);
                   if (pos != v.size()) throw std::invalid_argument(std::string(name) + ": bad integer");
                 }});
  };
  auto add_d = [&](const char* name, double RunConfig::*member) {
    b.push_back({name, [member](const RunConfig& c) { return fmt_double(c.*member); },
                 [member, name](RunConfig& c, const std::string& v) {
                   std::size_t pos = 0;
                   c.*member = std::stod(v, &pos);
                   if (pos != v.size()) throw std::invalid_argument(std::string(name) + ": bad number");
                 }});
  };
  auto add_b = [&](const char* name, bool RunConfig::*member) {
    b.push_back({name, [member](const RunConfig& c) { return (c.*member) ? "true" : "false"; },
                 [member, name](RunConfig& c, const std::string& v) {
                   if (v == "true" || v == "1") c.*member = true;
                   else if (v == "false" || v == "0") c.*member = false;
                   else throw std::invalid_argument(std::string(name) + ": expected true/false");
                 }});
  };
  auto add_s = [&](const char* name, std::string RunConfig::*member) {
    b.push_back({name, [member](const RunConfig& c) { return c.*member; },
                 [member](RunConfig& c, const std::string& v) { c.*member = v; }});
  };

  add_i("points_n", &RunConfig::points_n);
  add_i("embeddings_m", &RunConfig::embeddings_m);
  add_i("embed_dim", &RunConfig::embed_dim);
  add_i("shared_dim", &RunConfig::shared_dim);
  add_b("shared_features", &RunConfig::shared_features);
  add_s("attention", &RunConfig::attention);
  add_i("kq_dim", &RunConfig::kq_dim);
  add_i("latent_dim", &RunConfig::latent_dim);
  add_i("decoder_h1", &RunConfig::decoder_h1);
  add_i("decoder_h2", &RunConfig::decoder_h2);
  add_i("decoder_bottleneck", &RunConfig::decoder_bottleneck);
  add_i("knn_k", &RunConfig::knn_k);
  add_d("knn_radius", &RunConfig::knn_radius);
  add_i("samples_per_ray", &RunConfig::samples_per_ray);
  add_i("hidden_width", &RunConfig::hidden_width);
  add_i("kernel_depth", &RunConfig::kernel_depth);
  add_i("radiance_depth", &RunConfig::radiance_depth);
  add_i("density_depth", &RunConfig::density_depth);
  add_d("weight_eps", &RunConfig::weight_eps);
  add_d("background", &RunConfig::background);
  add_b("stratified", &RunConfig::stratified);
  add_i("train_iters", &RunConfig::train_iters);
  add_i("fit_iters", &RunConfig::fit_iters);
  add_i("rays_per_batch", &RunConfig::rays_per_batch);
  add_d("lr_params", &RunConfig::lr_params);
  add_d("lr_embed", &RunConfig::lr_embed);
  add_i("seed", &RunConfig::seed);
  add_s("precision", &RunConfig::precision);
  add_i("log_every", &RunConfig::log_every);
  add_i("snapshot_every", &RunConfig::snapshot_every);
  add_i("pc_train_iters", &RunConfig::pc_train_iters);
  add_i("pc_fit_iters", &RunConfig::pc_fit_iters);
  add_d("depth_weight", &RunConfig::depth_weight);
  add_i("pose_candidates", &RunConfig::pose_candidates);
  add_i("pose_iters", &RunConfig::pose_iters);
  add_i("pose_z_iters", &RunConfig::pose_z_iters);
  add_i("pose_fit_iters", &RunConfig::pose_fit_iters);
  add_i("data_instances", &RunConfig::data_instances);
  add_i("data_test_instances", &RunConfig::data_test_instances);
  add_i("data_views", &RunConfig::data_views);
  add_i("resolution", &RunConfig::resolution);
  add_d("focal_scale", &RunConfig::focal_scale);
  add_d("sphere_radius", &RunConfig::sphere_radius);
  add_i("orbit_views", &RunConfig::orbit_views);
  add_d("orbit_elevation_deg", &RunConfig::orbit_elevation_deg);
  add_i("threads", &RunConfig::threads);
  return b;
}

const std::vector<KeyBinding>& binding_table() {
  static const std::vector<KeyBinding> table = bindings();
  return table;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

void RunConfig::apply_override(const std::string& key_eq_value) {
  const auto eq = key_eq_value.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("config entry must be key=value: " + key_eq_value);
  const std::string key = trim(key_eq_value.substr(0, eq));
  const std::string value = trim(key_eq_value.substr(eq + 1));
  for (const auto& kb : binding_table()) {
    if (key == kb.name) {
      kb.set(*this, value);
      return;
    }
  }
  throw std::invalid_argument("unknown config key: " + key);
}

RunConfig RunConfig::load(const std::string& path, const std::vector<std::string>& overrides) {
  RunConfig cfg;
  if (!path.empty()) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file: " + path);
    std::string line;
    while (std::getline(is, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      cfg.apply_override(line);
    }
  }
  for (const auto& ov : overrides) cfg.apply_override(ov);
  cfg.validate();
  return cfg;
}

std::string RunConfig::dump() const {
  std::ostringstream os;
  for (const auto& kb : binding_table()) os << kb.name << " = " << kb.get(*this) << "\n";
  return os.str();
}

std::string RunConfig::json() const {
  nlohmann::json j;
  for (const auto& kb : binding_table()) j[kb.name] = kb.get(*this);
  return j.dump();
}

std::uint64_t RunConfig::hash() const {
  return std::hash<std::string>{}(dump());
}

void RunConfig::validate() const {
  auto positive = [](std::int64_t v, const char* name) {
    if (v <= 0) throw std::invalid_argument(std::string(name) + " must be positive");
  };
  positive(points_n, "points_n");
  positive(embeddings_m, "embeddings_m");
  positive(embed_dim, "embed_dim");
  positive(samples_per_ray, "samples_per_ray");
  positive(rays_per_batch, "rays_per_batch");
  positive(train_iters, "train_iters");
  positive(fit_iters, "fit_iters");
  positive(resolution, "resolution");
  positive(knn_k, "knn_k");
  if (knn_radius <= 0.0) throw std::invalid_argument("knn_radius must be positive");
  if (lr_params <= 0.0 || lr_embed <= 0.0) throw std::invalid_argument("learning rates must be positive");
  if (attention != "direct" && attention != "kq" && attention != "identity")
    throw std::invalid_argument("attention must be direct|kq|identity");
  if (precision != "f32" && precision != "f64")
    throw std::invalid_argument("precision must be f32|f64");
  if (attention == "identity" && points_n != embeddings_m)
    throw std::invalid_argument("identity attention requires points_n == embeddings_m");
  if (decoder_bottleneck >= 3 * points_n)
    throw std::invalid_argument("decoder_bottleneck must stay below 3*points_n");
}

int RunConfig::worker_threads() const {
  if (threads > 0) return static_cast<int>(threads);
  const char* env = std::getenv("SIMNP_THREADS");
  if (env != nullptr) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace simnp
