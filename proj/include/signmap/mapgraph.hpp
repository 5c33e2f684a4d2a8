#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "signmap/geometry.hpp"
#include "signmap/placards.hpp"

namespace signmap {

/// One localized RGB-D sample. pose is submap frame <- camera.
struct Keyframe {
  int id = -1;
  int map_id = 0;
  Pose3 pose;
  std::string depth_ref;
  std::vector<Detection> detections;
};

/// Tracking-loss boundary: the last localized keyframe of the old submap and
/// the origin keyframe of the new one.
struct LossEvent {
  int last_keyframe_id = -1;
  int origin_keyframe_id = -1;
};

/// Registry of submaps created by tracking losses. Submap 0's anchor is the
/// global frame; merging defines anchors for the rest. Submaps left without
/// an anchor are excluded from semantic output.
struct MapRegistry {
  std::map<int, std::vector<Keyframe>> submaps;  // map_id -> keyframes, id order
  std::map<int, Pose3> anchors;                  // map_id -> global <- submap
  std::vector<LossEvent> loss_events;            // time order
  std::vector<std::pair<LossEvent, std::string>> unmerged;  // event, reason

  bool anchored(int map_id) const { return anchors.count(map_id) > 0; }
  const Keyframe* find_keyframe(int keyframe_id) const;
  /// Global pose of a keyframe in an anchored submap.
  Pose3 global_pose(const Keyframe& kf) const;
};

struct IcpParams {
  int max_iterations = 50;
  double convergence_tol_m = 1e-4;
  double convergence_tol_rad = 1e-4;
  double max_correspondence_dist = 0.5;  // m
  double subsample_voxel = 0.05;         // m

  void validate() const;
};

struct IcpResult {
  Pose3 transform;       // target frame <- source frame
  double rms_residual;   // m, over gated correspondences at convergence
  int iterations;
  std::vector<double> residual_history;  // one entry per iteration
};

/// Point-to-point ICP with closed-form SVD pose update per iteration.
/// Both clouds are voxel-subsampled first; nearest neighbors come from a
/// kd-tree over the target. Throws InsufficientPoints (< 10 points after
/// subsampling) and NoCorrespondences (no pair within
/// max_correspondence_dist at the initial alignment).
IcpResult icp_align(const PointCloud& source, const PointCloud& target,
                    const Pose3& init, const IcpParams& params);

/// Centroid-per-voxel downsampling; order follows first appearance.
PointCloud voxel_subsample(const PointCloud& cloud, double voxel);

/// Re-anchors new_map into the global frame through old_map:
/// anchor(new) = anchor(old) * alignment, where alignment maps the new map's
/// frame into the old map's frame. Local keyframe poses are never touched.
/// Throws UnanchoredOldMap.
MapRegistry merge_maps(MapRegistry registry, int old_map, int new_map,
                       const Pose3& alignment);

/// Per-keyframe frame access used when resolving losses.
class FrameStore {
 public:
  virtual ~FrameStore() = default;
  virtual DepthImage depth(int keyframe_id) const = 0;
  virtual const CameraIntrinsics& intrinsics() const = 0;
};

/// Runs the loss-recovery chain: for each loss event in order, backprojects
/// the two named keyframes' full-frame clouds, ICP-aligns them seeded by
/// identity, and merges the new submap into the old one. Events that fail
/// are recorded in unmerged and processing continues.
MapRegistry resolve_losses(MapRegistry registry, const FrameStore& frames,
                           const IcpParams& params);

}  // namespace signmap
