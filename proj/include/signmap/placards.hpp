#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "signmap/geometry.hpp"
#include "signmap/image.hpp"

namespace signmap {

class LineSegmenter;
class Transcriber;

/// Detector bounding box in depth-image pixel coordinates.
struct Detection {
  PixelRect bbox;
  double confidence = 0.0;
};

/// Plane fitted to the detection's point cloud, camera frame. The normal is
/// oriented toward the camera (normal . centroid < 0).
struct PlanarPatch {
  Vec3 normal = Vec3::Zero();
  Vec3 centroid = Vec3::Zero();
  std::vector<int> inlier_indices;
  double rms_residual = 0.0;
};

/// One sighting of a placard: map-frame position, outward-normal heading in
/// the 2D projection, and a validated label (empty when transcription or
/// validation failed).
struct PlacardObservation {
  Vec3 position = Vec3::Zero();
  double theta = 0.0;  // in (-pi, pi]
  std::string label;
  int keyframe_id = -1;
  int detection_index = -1;
  bool on_wall = false;  // set by aggregation
};

enum class LabelKind { room, restroom, stair };

struct CanonicalLabel {
  LabelKind kind;
  std::string text;
};

/// Keeps detections with confidence >= threshold; input order preserved.
std::vector<Detection> filter_detections(const std::vector<Detection>& detections,
                                         double threshold);

struct RansacParams {
  double inlier_tol = 0.01;          // m
  int iterations = 200;
  double min_inlier_fraction = 0.5;
  uint64_t seed = 7;
};

/// RANSAC plane fit with least-squares refit on the consensus set.
/// Throws DegenerateCloud (< 3 points, or collinear) and NoConsensus (best
/// inlier fraction below min_inlier_fraction).
PlanarPatch fit_plane(const PointCloud& cloud, const RansacParams& params = {});

/// Lifts the patch into the map frame: position of the centroid plus the
/// heading theta = atan2(n_y, n_x) of the outward normal's 2D projection.
std::pair<Vec3, double> placard_pose(const PlanarPatch& patch, const Pose3& cam_pose);

/// Warps the roi of frame to the fronto-parallel view induced by the fitted
/// plane (virtual camera on the plane normal at the centroid distance). The
/// output's longer edge matches the roi's longer edge. Throws GrazingAngle
/// when the plane is seen beyond max_incidence_deg.
GrayImage rectify_roi(const GrayImage& frame, const PixelRect& roi,
                      const PlanarPatch& patch, const CameraIntrinsics& k,
                      double max_incidence_deg = 85.0);

/// Thresholds 5,10,...,250 applied to an 8-bit grayscale line image;
/// pixel >= threshold maps to white. Exactly 50 entries with the defaults.
std::vector<std::pair<uint8_t, GrayImage>> binarize_sweep(const GrayImage& line,
                                                          int low = 5, int high = 250,
                                                          int step = 5);

/// Validates a transcription against the placard grammar: room number (floor
/// digit, optional '.', three digits), restroom names, or STAIR with an
/// optional digit. Returns the canonical form, or nullopt.
std::optional<CanonicalLabel> validate_label(std::string_view s);

struct ReadParams {
  RansacParams ransac;
  double bbox_shrink = 0.0;        // fraction of each roi dimension removed
  double max_incidence_deg = 85.0;
  double max_normal_z = 0.95;      // |map-frame n_z| above this = not a wall
  int binarize_low = 5, binarize_high = 250, binarize_step = 5;
};

struct ReadResult {
  std::optional<PlacardObservation> observation;
  std::string dropped_reason;  // set when observation is empty
};

/// Full per-detection chain: backproject -> fit plane -> pose -> rectify ->
/// segment lines -> threshold sweep -> transcribe -> validate -> vote.
/// Geometry errors drop the observation (reason reported) instead of
/// propagating; an unreadable but well-fitted placard keeps an empty label.
ReadResult read_placard(int keyframe_id, int detection_index, const Detection& det,
                        const DepthImage& depth, const GrayImage& color,
                        const CameraIntrinsics& k, const Pose3& global_pose,
                        const ReadParams& params, const LineSegmenter& segmenter,
                        const Transcriber& transcriber);

}  // namespace signmap
