#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "signmap/image.hpp"
#include "signmap/placards.hpp"

namespace signmap {

/// Splits a rectified placard image into text-line boxes, top to bottom.
/// Plug point standing in for the scene-text line detector.
class LineSegmenter {
 public:
  virtual ~LineSegmenter() = default;
  virtual std::vector<PixelRect> segment(const GrayImage& rectified) const = 0;
};

/// Returns the whole image as a single line.
class NullLineSegmenter : public LineSegmenter {
 public:
  std::vector<PixelRect> segment(const GrayImage& rectified) const override;
};

/// Mock backend: finds dark horizontal bands by row projection. Matches the
/// simulator's code-row layout (rows separated by quiet gaps).
class ProjectionLineSegmenter : public LineSegmenter {
 public:
  std::vector<PixelRect> segment(const GrayImage& rectified) const override;
};

struct TranscribeContext {
  int keyframe_id = -1;
  int detection_index = -1;
  int line_index = -1;
  int threshold = -1;
};

/// Turns a binarized line image into a string. Plug point standing in for
/// the OCR engine; empty string means "unreadable".
class Transcriber {
 public:
  virtual ~Transcriber() = default;
  virtual std::string transcribe(const GrayImage& binary,
                                 const TranscribeContext& ctx) const = 0;
};

class NullTranscriber : public Transcriber {
 public:
  std::string transcribe(const GrayImage&, const TranscribeContext&) const override {
    return "";
  }
};

/// Mock backend: decodes the simulator's code-matrix glyphs.
class CodeMatrixTranscriber : public Transcriber {
 public:
  std::string transcribe(const GrayImage& binary,
                         const TranscribeContext& ctx) const override;
};

/// Replays precomputed strings from a JSON file keyed by keyframe id and
/// detection index: {"12": {"0": "3.112"}}. The string is returned for line
/// 0 at every threshold.
class ExternalFileTranscriber : public Transcriber {
 public:
  explicit ExternalFileTranscriber(const std::filesystem::path& file);
  std::string transcribe(const GrayImage& binary,
                         const TranscribeContext& ctx) const override;

 private:
  std::map<std::pair<int, int>, std::string> strings_;
};

struct Backends {
  std::unique_ptr<LineSegmenter> segmenter;
  std::unique_ptr<Transcriber> transcriber;

  /// name: "mock", "null", or "external-file" (requires file).
  static Backends make(const std::string& name, const std::filesystem::path& file = {});
};

}  // namespace signmap
