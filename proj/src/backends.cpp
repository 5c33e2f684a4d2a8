#include "signmap/backends.hpp"

#include <fstream>

#include <json.hpp>

#include "signmap/codec.hpp"
#include "signmap/error.hpp"

namespace signmap {

std::vector<PixelRect> NullLineSegmenter::segment(const GrayImage& rectified) const {
  if (rectified.empty()) return {};
  return {PixelRect::full(rectified.width, rectified.height)};
}

std::vector<PixelRect> ProjectionLineSegmenter::segment(const GrayImage& rectified) const {
  constexpr uint8_t kInk = 128;
  constexpr int kMinBandRows = 3;

  std::vector<bool> inked(size_t(rectified.height), false);
  for (int v = 0; v < rectified.height; ++v) {
    for (int u = 0; u < rectified.width; ++u) {
      if (rectified.at(u, v) < kInk) {
        inked[size_t(v)] = true;
        break;
      }
    }
  }

  std::vector<PixelRect> lines;
  int v = 0;
  while (v < rectified.height) {
    if (!inked[size_t(v)]) {
      ++v;
      continue;
    }
    int band_start = v;
    while (v < rectified.height && inked[size_t(v)]) ++v;
    int band_end = v;  // exclusive
    if (band_end - band_start < kMinBandRows) continue;

    int x0 = rectified.width, x1 = -1;
    for (int row = band_start; row < band_end; ++row) {
      for (int u = 0; u < rectified.width; ++u) {
        if (rectified.at(u, row) < kInk) {
          x0 = std::min(x0, u);
          x1 = std::max(x1, u);
        }
      }
    }
    PixelRect box{x0 - 1, band_start - 1, x1 + 2, band_end + 1};
    lines.push_back(box.clamped(rectified.width, rectified.height));
  }
  return lines;
}

std::string CodeMatrixTranscriber::transcribe(const GrayImage& binary,
                                              const TranscribeContext&) const {
  return codematrix::decode(binary);
}

ExternalFileTranscriber::ExternalFileTranscriber(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot read transcription file " + file.string());
  nlohmann::json j = nlohmann::json::parse(in, nullptr, true);
  for (auto& [kf, dets] : j.items()) {
    for (auto& [det, text] : dets.items()) {
      strings_[{std::stoi(kf), std::stoi(det)}] = text.get<std::string>();
    }
  }
}

std::string ExternalFileTranscriber::transcribe(const GrayImage&,
                                                const TranscribeContext& ctx) const {
  if (ctx.line_index != 0) return "";
  auto it = strings_.find({ctx.keyframe_id, ctx.detection_index});
  return it == strings_.end() ? "" : it->second;
}

Backends Backends::make(const std::string& name, const std::filesystem::path& file) {
  Backends b;
  if (name == "mock") {
    b.segmenter = std::make_unique<ProjectionLineSegmenter>();
    b.transcriber = std::make_unique<CodeMatrixTranscriber>();
  } else if (name == "null") {
    b.segmenter = std::make_unique<NullLineSegmenter>();
    b.transcriber = std::make_unique<NullTranscriber>();
  } else if (name == "external-file") {
    if (file.empty())
      throw ConfigError("backend 'external-file' requires a transcription file");
    b.segmenter = std::make_unique<NullLineSegmenter>();
    b.transcriber = std::make_unique<ExternalFileTranscriber>(file);
  } else {
    throw ConfigError("unknown backend '" + name + "' (mock|null|external-file)");
  }
  return b;
}

}  // namespace signmap
