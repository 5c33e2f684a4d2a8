#include "signmap/codec.hpp"

#include <cmath>

#include "signmap/error.hpp"

namespace signmap::codematrix {

namespace {

constexpr int kDataBits = 6;

int char_index(char c) {
  auto pos = kAlphabet.find(c);
  return pos == std::string_view::npos ? -1 : int(pos);
}

bool parity6(int value) {
  bool p = false;
  for (int b = 0; b < kDataBits; ++b) p ^= ((value >> b) & 1) != 0;
  return p;
}

constexpr uint8_t kInkThreshold = 128;

}  // namespace

CellGrid encode_line(std::string_view text) {
  CellGrid grid;
  grid.cols = int(text.size()) + 2;
  grid.cells.assign(size_t(kCellRows) * grid.cols, 0);
  for (int r = 0; r < kCellRows; ++r) {
    grid.set(r, 0, true);
    grid.set(r, grid.cols - 1, true);
  }
  for (int i = 0; i < int(text.size()); ++i) {
    int idx = char_index(text[size_t(i)]);
    if (idx < 0)
      throw InvalidSpec(std::string("code matrix cannot encode '") + text[size_t(i)] + "'");
    int col = i + 1;
    grid.set(0, col, true);  // marker row
    for (int b = 0; b < kDataBits; ++b)
      grid.set(1 + b, col, ((idx >> (kDataBits - 1 - b)) & 1) != 0);
    grid.set(kCellRows - 1, col, parity6(idx));
  }
  return grid;
}

std::string decode(const GrayImage& binary) {
  if (binary.empty()) return "";

  // Tight bounding box of ink.
  int x0 = binary.width, x1 = -1, y0 = binary.height, y1 = -1;
  for (int v = 0; v < binary.height; ++v) {
    for (int u = 0; u < binary.width; ++u) {
      if (binary.at(u, v) < kInkThreshold) {
        x0 = std::min(x0, u);
        x1 = std::max(x1, u);
        y0 = std::min(y0, v);
        y1 = std::max(y1, v);
      }
    }
  }
  if (x1 < 0) return "";

  double box_w = x1 - x0 + 1, box_h = y1 - y0 + 1;
  double cell = box_h / double(kCellRows);
  if (cell < 1.4) return "";  // too small to sample reliably
  int cols = int(std::lround(box_w / cell));
  if (cols < 2 || cols > 64) return "";
  double cell_w = box_w / cols;

  // A cell is read from the mean of a small window about its center.
  auto cell_dark = [&](int row, int col) {
    double cu = x0 + (col + 0.5) * cell_w;
    double cv = y0 + (row + 0.5) * cell;
    int hw = std::max(0, int(cell_w * 0.25));
    int hh = std::max(0, int(cell * 0.25));
    int dark = 0, total = 0;
    for (int dv = -hh; dv <= hh; ++dv) {
      for (int du = -hw; du <= hw; ++du) {
        int u = int(std::lround(cu)) + du;
        int v = int(std::lround(cv)) + dv;
        if (u < 0 || v < 0 || u >= binary.width || v >= binary.height) continue;
        ++total;
        if (binary.at(u, v) < kInkThreshold) ++dark;
      }
    }
    return total > 0 && dark * 2 > total;
  };

  for (int r = 0; r < kCellRows; ++r)
    if (!cell_dark(r, 0) || !cell_dark(r, cols - 1)) return "";

  std::string text;
  for (int c = 1; c + 1 < cols; ++c) {
    if (!cell_dark(0, c)) return "";  // marker row must be solid
    int value = 0;
    for (int b = 0; b < kDataBits; ++b)
      value = (value << 1) | (cell_dark(1 + b, c) ? 1 : 0);
    if (cell_dark(kCellRows - 1, c) != parity6(value)) return "";
    if (value >= int(kAlphabet.size())) return "";
    text += kAlphabet[size_t(value)];
  }
  return text;
}

std::vector<std::string> split_label_lines(std::string_view label) {
  std::vector<std::string> lines;
  std::string current;
  for (char c : label) {
    if (c == ' ') {
      if (!current.empty()) lines.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) lines.push_back(current);
  return lines;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& line : lines) {
    if (line.empty()) continue;
    if (!out.empty()) out += ' ';
    out += line;
  }
  return out;
}

}  // namespace signmap::codematrix
