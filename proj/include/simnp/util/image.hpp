#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace simnp {

// RGB image with values in [0,1], row-major, top row first.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<double> rgb;  // 3 * width * height

  Image() = default;
  Image(int w, int h, double fill = 0.0) : width(w), height(h), rgb(3 * w * h, fill) {}

  double& at(int row, int col, int ch) { return rgb[3 * (row * width + col) + ch]; }
  double at(int row, int col, int ch) const { return rgb[3 * (row * width + col) + ch]; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

// Binary mask, 1 = foreground.
struct Mask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> fg;

  Mask() = default;
  Mask(int w, int h) : width(w), height(h), fg(w * h, 0) {}
  std::uint8_t& at(int row, int col) { return fg[row * width + col]; }
  std::uint8_t at(int row, int col) const { return fg[row * width + col]; }
  std::size_t count_fg() const;
};

// Ray-length depth map; 0 encodes "no hit" (the mask is authoritative).
struct DepthMap {
  int width = 0;
  int height = 0;
  std::vector<float> depth;

  DepthMap() = default;
  DepthMap(int w, int h) : width(w), height(h), depth(w * h, 0.0f) {}
  float& at(int row, int col) { return depth[row * width + col]; }
  float at(int row, int col) const { return depth[row * width + col]; }
};

// 8-bit PNG I/O.
void write_png(const std::string& path, const Image& img);
Image read_png(const std::string& path);
void write_png_mask(const std::string& path, const Mask& mask);
Mask read_png_mask(const std::string& path);

// 32-bit float image dump ("SNIM": magic, version u32, width u32, height u32,
// then 3*w*h little-endian floats).
void write_snim(const std::string& path, const Image& img);
Image read_snim(const std::string& path);

// Depth file ("SNDM": magic, version u32, width u32, height u32, w*h floats).
void write_sndm(const std::string& path, const DepthMap& d);
DepthMap read_sndm(const std::string& path);

}  // namespace simnp
