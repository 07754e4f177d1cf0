#include "simnp/synth/synth.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

namespace simnp::synth {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kPi = 3.141592653589793238462643383279;
constexpr double kGolden = 2.399963229728653;  // golden angle in radians

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t idx) {
  std::uint64_t h = seed * 0x9E3779B97F4A7C15ull + idx + 1;
  h ^= h >> 33;
  h *= 0xFF51AFD7ED558CCDull;
  h ^= h >> 33;
  return h;
}

Vec3 random_color(Rng& rng) {
  return Vec3(rng.uniform(0.08, 0.95), rng.uniform(0.08, 0.95), rng.uniform(0.08, 0.95));
}

// Ray / axis-aligned box intersection (slab method). Returns entry distance
// or a negative value on miss. The camera is assumed outside the box.
double ray_box(const render::Ray& ray, const Vec3& center, const Vec3& half) {
  double tmin = -std::numeric_limits<double>::infinity();
  double tmax = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    const double o = ray.origin[a] - center[a];
    const double d = ray.dir[a];
    if (std::abs(d) < 1e-15) {
      if (o < -half[a] || o > half[a]) return -1.0;
      continue;
    }
    const double inv = 1.0 / d;
    double t1 = (-half[a] - o) * inv;
    double t2 = (half[a] - o) * inv;
    if (t1 > t2) std::swap(t1, t2);
    tmin = std::max(tmin, t1);
    tmax = std::min(tmax, t2);
    if (tmin > tmax) return -1.0;
  }
  return tmin > 1e-9 ? tmin : -1.0;
}

double ray_sphere(const render::Ray& ray, const Vec3& center, double radius) {
  const Vec3 oc = ray.origin - center;
  const double b = dot(oc, ray.dir);
  const double c = norm2(oc) - radius * radius;
  const double disc = b * b - c;
  if (disc < 0.0) return -1.0;
  const double t = -b - std::sqrt(disc);
  return t > 1e-9 ? t : -1.0;
}

// Low-discrepancy points over the x > 0 half of a box surface, in local
// coordinates. Deterministic in (count); never touches the x = 0 plane.
std::vector<Vec3> half_box_lattice(int count, const Vec3& half) {
  std::vector<Vec3> pts;
  pts.reserve(count);
  // Cycle through face regions: +x face, then the x>0 halves of the four
  // side faces. The +x face receives every other slot.
  auto frac = [](double v) { return v - std::floor(v); };
  int kx = 0, ks = 0;
  for (int i = 0; i < count; ++i) {
    if (i % 2 == 0) {
      const int k = kx++;
      const double u = frac(0.5 + k * 0.6180339887498949);
      const double v = frac(0.25 + k * 0.7548776662466927);
      pts.emplace_back(half.x, (2.0 * u - 1.0) * half.y, (2.0 * v - 1.0) * half.z);
    } else {
      const int k = ks++;
      const double u = 0.05 + 0.9 * frac(0.5 + k * 0.6180339887498949);  // x in (0, hx)
      const double v = frac(0.33 + k * 0.7548776662466927);
      switch (k % 4) {
        case 0: pts.emplace_back(u * half.x, half.y, (2.0 * v - 1.0) * half.z); break;
        case 1: pts.emplace_back(u * half.x, -half.y, (2.0 * v - 1.0) * half.z); break;
        case 2: pts.emplace_back(u * half.x, (2.0 * v - 1.0) * half.y, half.z); break;
        default: pts.emplace_back(u * half.x, (2.0 * v - 1.0) * half.y, -half.z); break;
      }
    }
  }
  return pts;
}

// Fibonacci sphere directions.
std::vector<Vec3> sphere_dirs(int count) {
  std::vector<Vec3> dirs;
  dirs.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double y = 1.0 - 2.0 * (k + 0.5) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - y * y));
    const double a = k * kGolden;
    dirs.emplace_back(r * std::cos(a), y, r * std::sin(a));
  }
  return dirs;
}

// Directions strictly on the x > 0 hemisphere.
std::vector<Vec3> half_sphere_dirs(int count) {
  auto dirs = sphere_dirs(count);
  for (Vec3& d : dirs) {
    d.x = std::abs(d.x);
    if (d.x < 1e-6) d.x = 1e-6;
  }
  return dirs;
}

struct PairSlot {
  int prim;   // primitive of the +x side
  int kind;   // 0 body, 1 pod, 2 fin, 3 nose
  int index;  // index within the kind's lattice
};

// N/2 canonical pair slots; slot s yields point 2s (+x side) and its exact
// mirror at 2s+1.
std::vector<PairSlot> pair_slots(int n) {
  if (n < 16 || n % 16 != 0) throw std::invalid_argument("point count must be a multiple of 16");
  std::vector<PairSlot> slots;
  const int body_pairs = n / 4, pod_pairs = n / 8, fin_pairs = n / 16, nose_pairs = n / 16;
  for (int i = 0; i < body_pairs; ++i) slots.push_back({0, 0, i});
  for (int i = 0; i < pod_pairs; ++i) slots.push_back({1, 1, i});
  for (int i = 0; i < fin_pairs; ++i) slots.push_back({3, 2, i});
  for (int i = 0; i < nose_pairs; ++i) slots.push_back({4, 3, i});
  return slots;
}

}  // namespace

ProceduralInstance generate_instance(std::uint64_t seed) {
  Rng rng(seed);
  ProceduralInstance inst;
  inst.seed = seed;

  inst.body_half = Vec3(rng.uniform(0.30, 0.45), rng.uniform(0.18, 0.30), rng.uniform(0.35, 0.55));
  inst.pod_radius = rng.uniform(0.12, 0.22);
  inst.pod_center = Vec3(inst.body_half.x + rng.uniform(0.02, 0.12),
                         rng.uniform(-0.08, 0.12), rng.uniform(-0.20, 0.20));
  inst.fin_half = Vec3(rng.uniform(0.04, 0.09), rng.uniform(0.10, 0.22), rng.uniform(0.08, 0.18));
  inst.fin_center = Vec3(0.0, inst.body_half.y + inst.fin_half.y * 0.7,
                         rng.uniform(-0.30, -0.05));
  inst.nose_radius = rng.uniform(0.10, 0.18);
  inst.nose_center = Vec3(0.0, rng.uniform(-0.05, 0.10),
                          inst.body_half.z + inst.nose_radius * rng.uniform(0.3, 0.7));

  for (auto& c : inst.body_cells) c = random_color(rng);
  inst.pod_color = random_color(rng);
  inst.fin_color = random_color(rng);
  inst.nose_color = random_color(rng);
  inst.decal_color = random_color(rng);
  inst.decal_y = rng.uniform(-0.5, 0.5) * inst.body_half.y;
  inst.decal_z = rng.uniform(-0.5, 0.5) * inst.body_half.z;
  inst.decal_radius = rng.uniform(0.30, 0.50) * std::min(inst.body_half.y, inst.body_half.z);
  return inst;
}

Vec3 ProceduralInstance::albedo_at(int prim, const Vec3& p) const {
  switch (prim) {
    case 1:
    case 2: return pod_color;
    case 3: return fin_color;
    case 4: return nose_color;
    default: break;
  }
  // body: decal disk on the +/-x faces, else the mirrored (y,z) cell grid
  if (std::abs(p.x) >= body_half.x - 1e-9) {
    const double dy = p.y - decal_y, dz = p.z - decal_z;
    if (dy * dy + dz * dz <= decal_radius * decal_radius) return decal_color;
  }
  auto cell = [](double v, double half) {
    const double u = (v / half + 1.0) * 0.5;  // [0,1]
    int i = static_cast<int>(u * 3.0);
    return std::clamp(i, 0, 2);
  };
  return body_cells[3 * cell(p.y, body_half.y) + cell(p.z, body_half.z)];
}

Hit intersect(const ProceduralInstance& inst, const render::Ray& ray) {
  Hit best;
  best.t = std::numeric_limits<double>::infinity();
  auto consider = [&](double t, int prim) {
    if (t > 0.0 && t < best.t) {
      best.t = t;
      best.prim = prim;
    }
  };
  consider(ray_box(ray, Vec3(0, 0, 0), inst.body_half), 0);
  consider(ray_sphere(ray, inst.pod_center, inst.pod_radius), 1);
  const Vec3 mirrored_pod(-inst.pod_center.x, inst.pod_center.y, inst.pod_center.z);
  consider(ray_sphere(ray, mirrored_pod, inst.pod_radius), 2);
  consider(ray_box(ray, inst.fin_center, inst.fin_half), 3);
  consider(ray_sphere(ray, inst.nose_center, inst.nose_radius), 4);
  if (best.prim < 0) {
    best.t = 0.0;
    return best;
  }
  best.point = ray.origin + ray.dir * best.t;
  return best;
}

RenderOutput reference_render(const ProceduralInstance& inst, const render::Camera& cam) {
  RenderOutput out;
  out.image = Image(cam.width, cam.height, 1.0);  // white background
  out.mask = Mask(cam.width, cam.height);
  out.depth = DepthMap(cam.width, cam.height);
  for (int r = 0; r < cam.height; ++r) {
    for (int c = 0; c < cam.width; ++c) {
      const Hit hit = intersect(inst, cam.pixel_ray(r, c));
      if (hit.prim < 0) continue;
      const Vec3 color = inst.albedo_at(hit.prim, hit.point);
      out.image.at(r, c, 0) = color.x;
      out.image.at(r, c, 1) = color.y;
      out.image.at(r, c, 2) = color.z;
      out.mask.at(r, c) = 1;
      out.depth.at(r, c) = static_cast<float>(hit.t);
    }
  }
  return out;
}

pc::PointCloud sample_coherent_points(const ProceduralInstance& inst, int n) {
  const auto slots = pair_slots(n);
  const auto body = half_box_lattice(n / 4, inst.body_half);
  const auto pods = sphere_dirs(n / 8);
  const auto fin = half_box_lattice(n / 16, inst.fin_half);
  const auto nose = half_sphere_dirs(n / 16);

  pc::PointCloud cloud;
  cloud.pts.reserve(n);
  for (const PairSlot& s : slots) {
    Vec3 p;
    switch (s.kind) {
      case 0: p = body[s.index]; break;
      case 1: p = inst.pod_center + pods[s.index] * inst.pod_radius; break;
      case 2: p = inst.fin_center + fin[s.index]; break;
      default: p = inst.nose_center + nose[s.index] * inst.nose_radius; break;
    }
    cloud.pts.push_back(p);
    cloud.pts.emplace_back(-p.x, p.y, p.z);  // exact mirror partner
  }
  return cloud;
}

std::vector<std::int32_t> point_mirror_map(int n) {
  std::vector<std::int32_t> map(n);
  for (int s = 0; s < n / 2; ++s) {
    map[2 * s] = 2 * s + 1;
    map[2 * s + 1] = 2 * s;
  }
  return map;
}

std::vector<int> point_primitive_map(int n) {
  const auto slots = pair_slots(n);
  std::vector<int> prim(n);
  for (std::size_t s = 0; s < slots.size(); ++s) {
    prim[2 * s] = slots[s].prim;
    prim[2 * s + 1] = ProceduralInstance::mirror_prim(slots[s].prim);
  }
  return prim;
}

namespace {

std::string view_name(int idx) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%03d", idx);
  return buf;
}

json camera_to_json(const render::Camera& cam) {
  const Mat3 c2w = cam.rotation.transposed();
  std::vector<double> m(16, 0.0);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m[4 * r + c] = c2w(r, c);
    m[4 * r + 3] = cam.position[r];
  }
  m[15] = 1.0;
  return json{{"c2w", m},        {"focal", cam.focal}, {"cx", cam.cx},
              {"cy", cam.cy},    {"width", cam.width}, {"height", cam.height}};
}

render::Camera camera_from_json(const json& j) {
  render::Camera cam;
  const auto m = j.at("c2w").get<std::vector<double>>();
  if (m.size() != 16) throw std::runtime_error("cameras.json: c2w must have 16 entries");
  Mat3 c2w;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) c2w(r, c) = m[4 * r + c];
  cam.rotation = c2w.transposed();
  cam.position = Vec3(m[3], m[7], m[11]);
  cam.focal = j.at("focal").get<double>();
  cam.cx = j.at("cx").get<double>();
  cam.cy = j.at("cy").get<double>();
  cam.width = j.at("width").get<int>();
  cam.height = j.at("height").get<int>();
  return cam;
}

void write_instance(const std::string& root, const std::string& id, std::uint64_t inst_seed,
                    bool is_test, const RunConfig& cfg) {
  const fs::path dir = fs::path(root) / id;
  fs::create_directories(dir / "images");
  fs::create_directories(dir / "masks");
  fs::create_directories(dir / "depth");

  const ProceduralInstance inst = generate_instance(inst_seed);
  Rng view_rng(mix_seed(inst_seed, 0xC0FFEE));

  const int res = static_cast<int>(cfg.resolution);
  const double focal = cfg.focal_px();
  std::vector<ViewRecord> views;
  for (int v = 0; v < cfg.data_views; ++v) {
    const double az = view_rng.uniform(0.0, 2.0 * kPi);
    const double el = view_rng.uniform(-20.0, 60.0) * kPi / 180.0;
    ViewRecord rec;
    rec.cam = render::look_at(render::sphere_position(cfg.sphere_radius, az, el), Vec3(0, 0, 0),
                              focal, res, res);
    rec.azimuth_deg = az * 180.0 / kPi;
    rec.elevation_deg = el * 180.0 / kPi;
    views.push_back(rec);
  }
  std::vector<int> input_side, mirrored_side;
  for (int k = 0; k < cfg.orbit_views; ++k) {
    const double az = k * 2.0 * kPi / cfg.orbit_views;
    const double el = cfg.orbit_elevation_deg * kPi / 180.0;
    ViewRecord rec;
    rec.is_orbit = true;
    rec.cam = render::look_at(render::sphere_position(cfg.sphere_radius, az, el), Vec3(0, 0, 0),
                              focal, res, res);
    rec.azimuth_deg = az * 180.0 / kPi;
    rec.elevation_deg = cfg.orbit_elevation_deg;
    const int view_idx = static_cast<int>(views.size());
    if (rec.cam.position.x > 1e-9) input_side.push_back(view_idx);
    if (rec.cam.position.x < -1e-9) mirrored_side.push_back(view_idx);
    views.push_back(rec);
  }

  json cams_json;
  cams_json["views"] = json::array();
  for (std::size_t v = 0; v < views.size(); ++v) {
    const auto out = reference_render(inst, views[v].cam);
    write_png((dir / "images" / (view_name(v) + ".png")).string(), out.image);
    write_png_mask((dir / "masks" / (view_name(v) + ".png")).string(), out.mask);
    write_sndm((dir / "depth" / (view_name(v) + ".bin")).string(), out.depth);
    cams_json["views"].push_back(camera_to_json(views[v].cam));
  }
  {
    std::ofstream os(dir / "cameras.json");
    os << cams_json.dump(2) << "\n";
  }

  const auto cloud = sample_coherent_points(inst, static_cast<int>(cfg.points_n));
  pc::save_snpc((dir / "points.snpc").string(), cloud);

  json meta;
  meta["id"] = id;
  meta["seed"] = inst_seed;
  meta["is_test"] = is_test;
  meta["points"] = cfg.points_n;
  meta["train_views"] = cfg.data_views;
  meta["orbit_views"] = cfg.orbit_views;
  meta["first_orbit_view"] = cfg.data_views;
  meta["input_side_views"] = input_side;
  meta["mirrored_side_views"] = mirrored_side;
  meta["mirror_map"] = point_mirror_map(static_cast<int>(cfg.points_n));
  meta["canonical_bounds"] = 1.0;
  json vj = json::array();
  for (const auto& v : views)
    vj.push_back({{"azimuth_deg", v.azimuth_deg},
                  {"elevation_deg", v.elevation_deg},
                  {"is_orbit", v.is_orbit}});
  meta["views"] = vj;
  {
    std::ofstream os(dir / "meta.json");
    os << meta.dump(2) << "\n";
  }
}

}  // namespace

void generate_dataset(const std::string& root, const RunConfig& cfg) {
  fs::create_directories(root);
  struct Item {
    std::string id;
    std::uint64_t seed;
    bool is_test;
  };
  std::vector<Item> items;
  for (int i = 0; i < cfg.data_instances; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "train_%03d", i);
    items.push_back({buf, mix_seed(cfg.seed, i), false});
  }
  for (int i = 0; i < cfg.data_test_instances; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "test_%03d", i);
    items.push_back({buf, mix_seed(cfg.seed, 100000 + i), true});
  }

  const int threads = std::min<int>(cfg.worker_threads(), static_cast<int>(items.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= items.size()) break;
      write_instance(root, items[i].id, items[i].seed, items[i].is_test, cfg);
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  json root_meta;
  root_meta["instances"] = cfg.data_instances;
  root_meta["test_instances"] = cfg.data_test_instances;
  root_meta["seed"] = cfg.seed;
  root_meta["resolution"] = cfg.resolution;
  root_meta["config"] = json::parse(cfg.json());
  std::ofstream os(fs::path(root) / "dataset.json");
  os << root_meta.dump(2) << "\n";
}

std::vector<std::string> list_instances(const std::string& root) {
  std::vector<std::string> ids;
  for (const auto& e : fs::directory_iterator(root)) {
    if (e.is_directory()) ids.push_back(e.path().filename().string());
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

InstanceData load_instance(const std::string& root, const std::string& id) {
  InstanceData data;
  data.id = id;
  data.dir = (fs::path(root) / id).string();

  std::ifstream ms(fs::path(data.dir) / "meta.json");
  if (!ms) throw std::runtime_error("missing meta.json for instance " + id);
  json meta = json::parse(ms);
  data.seed = meta.at("seed").get<std::uint64_t>();
  data.is_test = meta.at("is_test").get<bool>();
  data.first_orbit_view = meta.at("first_orbit_view").get<int>();
  data.input_side_views = meta.at("input_side_views").get<std::vector<int>>();
  data.mirrored_side_views = meta.at("mirrored_side_views").get<std::vector<int>>();
  data.mirror_map = meta.at("mirror_map").get<std::vector<std::int32_t>>();

  std::ifstream cs(fs::path(data.dir) / "cameras.json");
  if (!cs) throw std::runtime_error("missing cameras.json for instance " + id);
  json cams = json::parse(cs);
  const auto& views_meta = meta.at("views");
  std::size_t vi = 0;
  for (const auto& vj : cams.at("views")) {
    ViewRecord rec;
    rec.cam = camera_from_json(vj);
    rec.is_orbit = views_meta.at(vi).at("is_orbit").get<bool>();
    rec.azimuth_deg = views_meta.at(vi).at("azimuth_deg").get<double>();
    rec.elevation_deg = views_meta.at(vi).at("elevation_deg").get<double>();
    data.views.push_back(rec);
    ++vi;
  }

  data.cloud = pc::load_snpc((fs::path(data.dir) / "points.snpc").string());
  return data;
}

Image InstanceData::load_image(int view) const {
  return read_png((fs::path(dir) / "images" / (view_name(view) + ".png")).string());
}

Mask InstanceData::load_mask(int view) const {
  return read_png_mask((fs::path(dir) / "masks" / (view_name(view) + ".png")).string());
}

DepthMap InstanceData::load_depth(int view) const {
  return read_sndm((fs::path(dir) / "depth" / (view_name(view) + ".bin")).string());
}

}  // namespace simnp::synth
