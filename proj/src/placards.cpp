#include "signmap/placards.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <regex>

#include "signmap/backends.hpp"
#include "signmap/codec.hpp"

namespace signmap {

std::vector<Detection> filter_detections(const std::vector<Detection>& detections,
                                         double threshold) {
  std::vector<Detection> kept;
  for (const Detection& d : detections)
    if (d.confidence >= threshold) kept.push_back(d);
  return kept;
}

namespace {

struct PlaneModel {
  Vec3 normal = Vec3::Zero();
  double d = 0.0;  // normal . p + d = 0
};

// Least-squares plane through a point subset: centroid + smallest-eigenvector
// of the scatter matrix. Returns false when the subset is rank-deficient
// (collinear points).
bool refit_plane(const std::vector<Vec3>& points, const std::vector<int>& subset,
                 Vec3& normal, Vec3& centroid) {
  centroid = Vec3::Zero();
  for (int i : subset) centroid += points[size_t(i)];
  centroid /= double(subset.size());
  Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
  for (int i : subset) {
    Vec3 q = points[size_t(i)] - centroid;
    scatter += q * q.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(scatter);
  // eigenvalues ascending; a plane needs the two larger ones non-degenerate
  if (eig.eigenvalues()(1) < 1e-18) return false;
  normal = eig.eigenvectors().col(0).normalized();
  return true;
}

}  // namespace

PlanarPatch fit_plane(const PointCloud& cloud, const RansacParams& params) {
  const auto& pts = cloud.points;
  const int n = int(pts.size());
  if (n < 3) throw DegenerateCloud("plane fit needs >= 3 points, got " + std::to_string(n));

  std::mt19937_64 rng(params.seed);
  std::uniform_int_distribution<int> pick(0, n - 1);

  int best_count = 0;
  PlaneModel best;
  bool any_model = false;

  for (int it = 0; it < params.iterations; ++it) {
    int i0 = pick(rng), i1 = pick(rng), i2 = pick(rng);
    if (i0 == i1 || i1 == i2 || i0 == i2) continue;
    Vec3 u = pts[size_t(i1)] - pts[size_t(i0)];
    Vec3 v = pts[size_t(i2)] - pts[size_t(i0)];
    Vec3 cr = u.cross(v);
    if (cr.norm() < 1e-12) continue;  // collinear sample
    any_model = true;
    PlaneModel m;
    m.normal = cr.normalized();
    m.d = -m.normal.dot(pts[size_t(i0)]);
    int count = 0;
    for (const Vec3& p : pts)
      if (std::abs(m.normal.dot(p) + m.d) <= params.inlier_tol) ++count;
    if (count > best_count) {
      best_count = count;
      best = m;
    }
  }

  if (!any_model) throw DegenerateCloud("all sampled triples collinear");
  if (best_count < int(std::ceil(params.min_inlier_fraction * n)))
    throw NoConsensus("best inlier fraction " +
                      std::to_string(double(best_count) / n) + " below minimum");

  PlanarPatch patch;
  for (int i = 0; i < n; ++i)
    if (std::abs(best.normal.dot(pts[size_t(i)]) + best.d) <= params.inlier_tol)
      patch.inlier_indices.push_back(i);

  if (!refit_plane(pts, patch.inlier_indices, patch.normal, patch.centroid))
    throw DegenerateCloud("consensus set is collinear");

  // Orient toward the camera.
  if (patch.normal.dot(patch.centroid) > 0.0) patch.normal = -patch.normal;

  double ss = 0.0;
  double d0 = -patch.normal.dot(patch.centroid);
  for (int i : patch.inlier_indices) {
    double r = patch.normal.dot(pts[size_t(i)]) + d0;
    ss += r * r;
  }
  patch.rms_residual = std::sqrt(ss / double(patch.inlier_indices.size()));
  return patch;
}

std::pair<Vec3, double> placard_pose(const PlanarPatch& patch, const Pose3& cam_pose) {
  Vec3 position = cam_pose.apply(patch.centroid);
  Vec3 n_map = cam_pose.rotation * patch.normal;
  double theta = std::atan2(n_map.y(), n_map.x());
  return {position, wrap_angle(theta)};
}

GrayImage rectify_roi(const GrayImage& frame, const PixelRect& roi,
                      const PlanarPatch& patch, const CameraIntrinsics& k,
                      double max_incidence_deg) {
  if (roi.empty()) throw EmptyCloud("empty roi");
  const Vec3& n = patch.normal;    // toward the camera
  const Vec3& c = patch.centroid;  // z > 0

  // Incidence measured between the inward plane normal and the optical axis.
  double incidence = std::acos(std::clamp(-n.z(), -1.0, 1.0));
  if (incidence > deg2rad(max_incidence_deg))
    throw GrazingAngle("plane incidence " + std::to_string(rad2deg(incidence)) +
                       " deg beyond limit");

  // Virtual fronto-parallel camera: optical axis -n, positioned so the
  // centroid sits at the original viewing distance.
  Vec3 z_v = -n;
  Vec3 x_v = Vec3::UnitX() - Vec3::UnitX().dot(z_v) * z_v;
  if (x_v.norm() < 1e-6) x_v = Vec3::UnitY() - Vec3::UnitY().dot(z_v) * z_v;
  x_v.normalize();
  Vec3 y_v = z_v.cross(x_v);
  Eigen::Matrix3d rot;  // virtual axes expressed in camera coords
  rot.col(0) = x_v;
  rot.col(1) = y_v;
  rot.col(2) = z_v;
  Vec3 center_v = c - z_v * c.norm();

  // Plane-induced homography, real pixels -> provisional virtual pixels.
  Eigen::Matrix3d k_mat = Eigen::Matrix3d::Identity();
  k_mat(0, 0) = k.fx;
  k_mat(1, 1) = k.fy;
  k_mat(0, 2) = k.cx;
  k_mat(1, 2) = k.cy;
  Eigen::Matrix3d mid =
      rot.transpose() * (Eigen::Matrix3d::Identity() - center_v * n.transpose() / n.dot(c));
  Eigen::Matrix3d h0 = k_mat * mid * k_mat.inverse();

  // Map roi corners to size the output; longer edge preserved.
  auto map_pt = [&](double u, double v) {
    Vec3 q = h0 * Vec3(u, v, 1.0);
    return Vec2(q.x() / q.z(), q.y() / q.z());
  };
  Vec2 corners[4] = {map_pt(roi.x0, roi.y0), map_pt(roi.x1 - 1, roi.y0),
                     map_pt(roi.x0, roi.y1 - 1), map_pt(roi.x1 - 1, roi.y1 - 1)};
  double bx0 = corners[0].x(), bx1 = corners[0].x();
  double by0 = corners[0].y(), by1 = corners[0].y();
  for (const Vec2& p : corners) {
    bx0 = std::min(bx0, p.x());
    bx1 = std::max(bx1, p.x());
    by0 = std::min(by0, p.y());
    by1 = std::max(by1, p.y());
  }
  double long_edge = double(std::max(roi.width(), roi.height()));
  double scale = long_edge / std::max({bx1 - bx0, by1 - by0, 1e-9});
  int out_w = std::max(1, int(std::lround((bx1 - bx0) * scale)) + 1);
  int out_h = std::max(1, int(std::lround((by1 - by0) * scale)) + 1);

  Eigen::Matrix3d affine = Eigen::Matrix3d::Identity();
  affine(0, 0) = scale;
  affine(1, 1) = scale;
  affine(0, 2) = -bx0 * scale;
  affine(1, 2) = -by0 * scale;
  Eigen::Matrix3d h_inv = (affine * h0).inverse();

  GrayImage out(out_w, out_h, 255);
  for (int v = 0; v < out_h; ++v) {
    for (int u = 0; u < out_w; ++u) {
      Vec3 q = h_inv * Vec3(u, v, 1.0);
      if (std::abs(q.z()) < 1e-12) continue;
      double su = q.x() / q.z(), sv = q.y() / q.z();
      if (su < -0.5 || sv < -0.5 || su > frame.width - 0.5 || sv > frame.height - 0.5)
        continue;  // outside the source frame stays white
      out.at(u, v) = uint8_t(std::clamp(std::lround(frame.sample(su, sv)), 0l, 255l));
    }
  }
  return out;
}

std::vector<std::pair<uint8_t, GrayImage>> binarize_sweep(const GrayImage& line,
                                                          int low, int high, int step) {
  std::vector<std::pair<uint8_t, GrayImage>> sweep;
  for (int t = low; t <= high; t += step) {
    GrayImage bin(line.width, line.height);
    for (size_t i = 0; i < line.pixels.size(); ++i)
      bin.pixels[i] = line.pixels[i] >= t ? 255 : 0;
    sweep.emplace_back(uint8_t(t), std::move(bin));
  }
  return sweep;
}

std::optional<CanonicalLabel> validate_label(std::string_view s) {
  // Trim surrounding whitespace.
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return std::nullopt;
  size_t e = s.find_last_not_of(" \t\r\n");
  std::string t(s.substr(b, e - b + 1));

  static const std::regex room_re(R"(^([0-9])\.?([0-9]{3})$)");
  static const std::regex stair_re(R"(^STAIR([0-9])?$)");

  std::smatch m;
  if (std::regex_match(t, m, room_re))
    return CanonicalLabel{LabelKind::room, m[1].str() + "." + m[2].str()};
  if (t == "MEN" || t == "WOMEN" || t == "GENDER INCLUSIVE")
    return CanonicalLabel{LabelKind::restroom, t};
  if (std::regex_match(t, m, stair_re))
    return CanonicalLabel{LabelKind::stair, t};
  return std::nullopt;
}

ReadResult read_placard(int keyframe_id, int detection_index, const Detection& det,
                        const DepthImage& depth, const GrayImage& color,
                        const CameraIntrinsics& k, const Pose3& global_pose,
                        const ReadParams& params, const LineSegmenter& segmenter,
                        const Transcriber& transcriber) {
  ReadResult result;

  PixelRect roi = det.bbox.shrunk(params.bbox_shrink).clamped(depth.width, depth.height);
  if (roi.empty()) {
    result.dropped_reason = "roi empty after shrink/clamp";
    return result;
  }

  PlanarPatch patch;
  Vec3 position;
  double theta = 0.0;
  try {
    PointCloud cloud = backproject(depth, k, roi);
    patch = fit_plane(cloud, params.ransac);
    Vec3 n_map = global_pose.rotation * patch.normal;
    if (std::abs(n_map.z()) > params.max_normal_z) {
      result.dropped_reason = "plane normal nearly vertical (not a wall)";
      return result;
    }
    std::tie(position, theta) = placard_pose(patch, global_pose);
  } catch (const Error& err) {
    result.dropped_reason = err.what();
    return result;
  }

  PlacardObservation obs;
  obs.position = position;
  obs.theta = theta;
  obs.keyframe_id = keyframe_id;
  obs.detection_index = detection_index;

  // Transcription failures leave the label blank; only geometry drops the
  // observation.
  try {
    double sx = double(color.width) / k.width;
    double sy = double(color.height) / k.height;
    PixelRect roi_c{int(std::lround(roi.x0 * sx)), int(std::lround(roi.y0 * sy)),
                    int(std::lround(roi.x1 * sx)), int(std::lround(roi.y1 * sy))};
    roi_c = roi_c.clamped(color.width, color.height);
    GrayImage rectified =
        rectify_roi(color, roi_c, patch, k.scaled(sx, sy), params.max_incidence_deg);
    std::vector<PixelRect> lines = segmenter.segment(rectified);

    // One proposal per threshold: the lines' transcriptions joined with
    // spaces. Majority vote across thresholds, ties to the lowest threshold.
    struct Tally {
      int count = 0;
      int first_threshold = 0;
    };
    std::map<std::string, Tally> votes;
    std::vector<std::vector<std::pair<uint8_t, GrayImage>>> sweeps;
    for (const PixelRect& box : lines) {
      GrayImage crop(box.width(), box.height());
      for (int v = 0; v < box.height(); ++v)
        for (int u = 0; u < box.width(); ++u)
          crop.at(u, v) = rectified.at(box.x0 + u, box.y0 + v);
      sweeps.push_back(binarize_sweep(crop, params.binarize_low, params.binarize_high,
                                      params.binarize_step));
    }
    if (!sweeps.empty()) {
      for (size_t ti = 0; ti < sweeps[0].size(); ++ti) {
        std::vector<std::string> parts;
        for (size_t li = 0; li < sweeps.size(); ++li) {
          TranscribeContext ctx{keyframe_id, detection_index, int(li),
                                int(sweeps[li][ti].first)};
          parts.push_back(transcriber.transcribe(sweeps[li][ti].second, ctx));
        }
        auto canon = validate_label(codematrix::join_lines(parts));
        if (!canon) continue;
        auto [it, inserted] = votes.try_emplace(canon->text);
        if (inserted) it->second.first_threshold = int(sweeps[0][ti].first);
        it->second.count++;
      }
    }
    std::string winner;
    Tally best;
    for (const auto& [text, tally] : votes) {
      if (tally.count > best.count ||
          (tally.count == best.count && tally.first_threshold < best.first_threshold)) {
        best = tally;
        winner = text;
      }
    }
    obs.label = winner;
  } catch (const Error&) {
    // grazing view or similar: keep the observation, label stays blank
  }

  result.observation = obs;
  return result;
}

}  // namespace signmap
