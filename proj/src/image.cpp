#include "signmap/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "signmap/error.hpp"

namespace signmap {

double GrayImage::sample(double u, double v) const {
  if (empty()) return 0.0;
  u = std::clamp(u, 0.0, double(width - 1));
  v = std::clamp(v, 0.0, double(height - 1));
  int u0 = int(std::floor(u)), v0 = int(std::floor(v));
  int u1 = std::min(u0 + 1, width - 1), v1 = std::min(v0 + 1, height - 1);
  double fu = u - u0, fv = v - v0;
  double top = at(u0, v0) * (1.0 - fu) + at(u1, v0) * fu;
  double bottom = at(u0, v1) * (1.0 - fu) + at(u1, v1) * fu;
  return top * (1.0 - fv) + bottom * fv;
}

RgbImage::RgbImage(int w, int h, uint8_t r, uint8_t g, uint8_t b)
    : width(w), height(h), pixels(size_t(w) * h * 3) {
  for (size_t i = 0; i < pixels.size(); i += 3) {
    pixels[i] = r;
    pixels[i + 1] = g;
    pixels[i + 2] = b;
  }
}

void RgbImage::set(int u, int v, uint8_t r, uint8_t g, uint8_t b) {
  if (u < 0 || v < 0 || u >= width || v >= height) return;
  size_t i = (size_t(v) * width + u) * 3;
  pixels[i] = r;
  pixels[i + 1] = g;
  pixels[i + 2] = b;
}

namespace {

void write_header(std::ofstream& out, const char* magic, int w, int h, int maxval) {
  out << magic << "\n" << w << " " << h << "\n" << maxval << "\n";
}

// Reads one whitespace-delimited token, skipping '#' comment lines.
std::string next_token(std::istream& in) {
  std::string tok;
  while (in) {
    int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
      continue;
    }
    if (std::isspace(c)) {
      in.get();
      continue;
    }
    break;
  }
  in >> tok;
  return tok;
}

struct PnmHeader {
  std::string magic;
  int width = 0, height = 0, maxval = 0;
};

PnmHeader read_header(std::ifstream& in, const std::filesystem::path& path) {
  PnmHeader h;
  h.magic = next_token(in);
  try {
    h.width = std::stoi(next_token(in));
    h.height = std::stoi(next_token(in));
    h.maxval = std::stoi(next_token(in));
  } catch (const std::exception&) {
    throw IoError("malformed PGM header: " + path.string());
  }
  in.get();  // single whitespace before raster
  if (h.width <= 0 || h.height <= 0)
    throw IoError("bad PGM dimensions: " + path.string());
  return h;
}

}  // namespace

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_header(out, "P5", img.width, img.height, 255);
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            std::streamsize(img.pixels.size()));
}

void write_pgm(const std::filesystem::path& path, const Image16& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_header(out, "P5", img.width, img.height, 65535);
  std::vector<uint8_t> buf(img.pixels.size() * 2);
  for (size_t i = 0; i < img.pixels.size(); ++i) {
    buf[2 * i] = uint8_t(img.pixels[i] >> 8);
    buf[2 * i + 1] = uint8_t(img.pixels[i] & 0xff);
  }
  out.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(buf.size()));
}

GrayImage read_pgm8(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  PnmHeader h = read_header(in, path);
  if (h.magic != "P5" || h.maxval != 255)
    throw IoError("expected 8-bit binary PGM: " + path.string());
  GrayImage img(h.width, h.height);
  in.read(reinterpret_cast<char*>(img.pixels.data()), std::streamsize(img.pixels.size()));
  if (!in) throw IoError("truncated PGM raster: " + path.string());
  return img;
}

Image16 read_pgm16(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  PnmHeader h = read_header(in, path);
  if (h.magic != "P5" || h.maxval != 65535)
    throw IoError("expected 16-bit binary PGM: " + path.string());
  Image16 img(h.width, h.height);
  std::vector<uint8_t> buf(img.pixels.size() * 2);
  in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(buf.size()));
  if (!in) throw IoError("truncated PGM raster: " + path.string());
  for (size_t i = 0; i < img.pixels.size(); ++i)
    img.pixels[i] = uint16_t((buf[2 * i] << 8) | buf[2 * i + 1]);
  return img;
}

void write_ppm(const std::filesystem::path& path, const RgbImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_header(out, "P6", img.width, img.height, 255);
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            std::streamsize(img.pixels.size()));
}

}  // namespace signmap
