#include "simnp/util/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>

#include "simnp/util/binio.hpp"

namespace simnp {

namespace {

std::uint8_t to_byte(double v) {
  const double c = std::clamp(v, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::lround(c * 255.0));
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void write_png_bytes(const std::string& path, int w, int h, int channels,
                     const std::vector<std::uint8_t>& bytes) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw std::runtime_error("cannot open for writing: " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("libpng error while writing " + path);
  }
  png_init_io(png, fp.get());
  const int color = channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY;
  png_set_IHDR(png, info, w, h, 8, color, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_bytep> rows(h);
  for (int r = 0; r < h; ++r)
    rows[r] = const_cast<png_bytep>(bytes.data() + static_cast<std::size_t>(r) * w * channels);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void read_png_bytes(const std::string& path, int& w, int& h, std::vector<std::uint8_t>& rgb) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw std::runtime_error("cannot open for reading: " + path);
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("libpng error while reading " + path);
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);
  w = static_cast<int>(png_get_image_width(png, info));
  h = static_cast<int>(png_get_image_height(png, info));
  // normalize anything to 8-bit RGB
  png_set_expand(png);
  if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
  const auto color = png_get_color_type(png, info);
  if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);
  rgb.assign(static_cast<std::size_t>(w) * h * 3, 0);
  std::vector<png_bytep> rows(h);
  for (int r = 0; r < h; ++r) rows[r] = rgb.data() + static_cast<std::size_t>(r) * w * 3;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
}

}  // namespace

std::size_t Mask::count_fg() const {
  std::size_t n = 0;
  for (auto v : fg) n += v ? 1 : 0;
  return n;
}

void write_png(const std::string& path, const Image& img) {
  std::vector<std::uint8_t> bytes(img.pixel_count() * 3);
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = to_byte(img.rgb[i]);
  write_png_bytes(path, img.width, img.height, 3, bytes);
}

Image read_png(const std::string& path) {
  int w = 0, h = 0;
  std::vector<std::uint8_t> bytes;
  read_png_bytes(path, w, h, bytes);
  Image img(w, h);
  for (std::size_t i = 0; i < bytes.size(); ++i) img.rgb[i] = bytes[i] / 255.0;
  return img;
}

void write_png_mask(const std::string& path, const Mask& mask) {
  std::vector<std::uint8_t> bytes(mask.fg.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = mask.fg[i] ? 255 : 0;
  write_png_bytes(path, mask.width, mask.height, 1, bytes);
}

Mask read_png_mask(const std::string& path) {
  int w = 0, h = 0;
  std::vector<std::uint8_t> bytes;
  read_png_bytes(path, w, h, bytes);
  Mask mask(w, h);
  for (std::size_t i = 0; i < mask.fg.size(); ++i) mask.fg[i] = bytes[3 * i] >= 128 ? 1 : 0;
  return mask;
}

void write_snim(const std::string& path, const Image& img) {
  auto os = open_out(path);
  write_magic(os, "SNIM");
  write_u32(os, 1);
  write_u32(os, static_cast<std::uint32_t>(img.width));
  write_u32(os, static_cast<std::uint32_t>(img.height));
  std::vector<float> f(img.rgb.begin(), img.rgb.end());
  write_f32_array(os, f);
}

Image read_snim(const std::string& path) {
  auto is = open_in(path);
  expect_magic(is, "SNIM", path);
  const auto version = read_u32(is);
  if (version != 1) throw std::runtime_error(path + ": unsupported SNIM version");
  const int w = static_cast<int>(read_u32(is));
  const int h = static_cast<int>(read_u32(is));
  Image img(w, h);
  auto f = read_f32_array(is, static_cast<std::size_t>(w) * h * 3);
  for (std::size_t i = 0; i < f.size(); ++i) img.rgb[i] = f[i];
  return img;
}

void write_sndm(const std::string& path, const DepthMap& d) {
  auto os = open_out(path);
  write_magic(os, "SNDM");
  write_u32(os, 1);
  write_u32(os, static_cast<std::uint32_t>(d.width));
  write_u32(os, static_cast<std::uint32_t>(d.height));
  write_f32_array(os, d.depth);
}

DepthMap read_sndm(const std::string& path) {
  auto is = open_in(path);
  expect_magic(is, "SNDM", path);
  const auto version = read_u32(is);
  if (version != 1) throw std::runtime_error(path + ": unsupported SNDM version");
  const int w = static_cast<int>(read_u32(is));
  const int h = static_cast<int>(read_u32(is));
  DepthMap d(w, h);
  d.depth = read_f32_array(is, static_cast<std::size_t>(w) * h);
  return d;
}

}  // namespace simnp
