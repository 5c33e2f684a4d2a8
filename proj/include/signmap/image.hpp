#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace signmap {

struct GrayImage {
  int width = 0, height = 0;
  std::vector<uint8_t> pixels;

  GrayImage() = default;
  GrayImage(int w, int h, uint8_t fill = 0)
      : width(w), height(h), pixels(size_t(w) * h, fill) {}
  uint8_t at(int u, int v) const { return pixels[size_t(v) * width + u]; }
  uint8_t& at(int u, int v) { return pixels[size_t(v) * width + u]; }
  bool empty() const { return width <= 0 || height <= 0; }

  /// Bilinear sample at continuous pixel coordinates, edges clamped.
  double sample(double u, double v) const;
};

struct Image16 {
  int width = 0, height = 0;
  std::vector<uint16_t> pixels;

  Image16() = default;
  Image16(int w, int h) : width(w), height(h), pixels(size_t(w) * h, 0) {}
};

struct RgbImage {
  int width = 0, height = 0;
  std::vector<uint8_t> pixels;  // interleaved r,g,b

  RgbImage() = default;
  RgbImage(int w, int h, uint8_t r = 0, uint8_t g = 0, uint8_t b = 0);
  void set(int u, int v, uint8_t r, uint8_t g, uint8_t b);
};

// Binary netpbm I/O. 16-bit PGM data is big-endian per the format spec.
void write_pgm(const std::filesystem::path& path, const GrayImage& img);
void write_pgm(const std::filesystem::path& path, const Image16& img);
GrayImage read_pgm8(const std::filesystem::path& path);
Image16 read_pgm16(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const RgbImage& img);

}  // namespace signmap
