#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "signmap/image.hpp"

namespace signmap::codematrix {

// Binary code-matrix glyphs: the simulator renders placard text as these
// instead of a glyph font, so the OCR plug point can be exercised without a
// text-recognition engine. One code row per text line.
//
// A row is a cell grid, 8 cells tall. First and last columns are solid black
// framing anchors. Each character is one column:
//   row 0      marker (always black)
//   rows 1..6  6-bit alphabet index, MSB on top
//   row 7      even-parity bit over the 6 data bits
inline constexpr std::string_view kAlphabet =
    "0123456789.ABCDEFGHIJKLMNOPQRSTUVWXYZ ";
inline constexpr int kCellRows = 8;

struct CellGrid {
  int cols = 0;
  std::vector<uint8_t> cells;  // row-major, kCellRows rows; 1 = black

  bool at(int row, int col) const { return cells[size_t(row) * cols + col] != 0; }
  void set(int row, int col, bool v) { cells[size_t(row) * cols + col] = v ? 1 : 0; }
};

/// Throws InvalidSpec when text contains a character outside the alphabet.
CellGrid encode_line(std::string_view text);

/// Reads one code row back out of a binarized image (dark = ink). Returns ""
/// whenever the framing, marker row, parity, or alphabet check fails —
/// thresholding that destroyed the pattern decodes to nothing, like a real
/// OCR engine handed an unreadable patch.
std::string decode(const GrayImage& binary);

/// Label text maps to code rows by splitting at spaces; lines join back with
/// single spaces.
std::vector<std::string> split_label_lines(std::string_view label);
std::string join_lines(const std::vector<std::string>& lines);

}  // namespace signmap::codematrix
