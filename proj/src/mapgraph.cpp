#include "signmap/mapgraph.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <unordered_map>

#include "signmap/kdtree.hpp"

namespace signmap {

const Keyframe* MapRegistry::find_keyframe(int keyframe_id) const {
  for (const auto& [map_id, kfs] : submaps)
    for (const Keyframe& kf : kfs)
      if (kf.id == keyframe_id) return &kf;
  return nullptr;
}

Pose3 MapRegistry::global_pose(const Keyframe& kf) const {
  auto it = anchors.find(kf.map_id);
  if (it == anchors.end())
    throw UnanchoredOldMap("submap " + std::to_string(kf.map_id) + " has no anchor");
  return compose(it->second, kf.pose);
}

void IcpParams::validate() const {
  if (max_iterations <= 0 || convergence_tol_m <= 0.0 || convergence_tol_rad <= 0.0 ||
      max_correspondence_dist <= 0.0 || subsample_voxel <= 0.0)
    throw ConfigError("icp parameters must all be positive");
}

PointCloud voxel_subsample(const PointCloud& cloud, double voxel) {
  struct Acc {
    Vec3 sum = Vec3::Zero();
    int count = 0;
    int order = 0;
  };
  auto key_of = [voxel](const Vec3& p) {
    auto q = [voxel](double x) { return int64_t(std::floor(x / voxel)); };
    // pack three 21-bit signed voxel coordinates
    auto enc = [](int64_t v) { return uint64_t(v + (int64_t(1) << 20)) & 0x1fffff; };
    return (enc(q(p.x())) << 42) | (enc(q(p.y())) << 21) | enc(q(p.z()));
  };
  std::unordered_map<uint64_t, Acc> bins;
  bins.reserve(cloud.points.size());
  int order = 0;
  for (const Vec3& p : cloud.points) {
    Acc& acc = bins[key_of(p)];
    if (acc.count == 0) acc.order = order++;
    acc.sum += p;
    acc.count++;
  }
  std::vector<const Acc*> ordered(bins.size());
  for (const auto& [key, acc] : bins) ordered[size_t(acc.order)] = &acc;
  PointCloud out;
  out.frame = cloud.frame;
  out.points.reserve(ordered.size());
  for (const Acc* acc : ordered) out.points.push_back(acc->sum / double(acc->count));
  return out;
}

namespace {

// Best-fit rigid transform mapping a onto b (Umeyama / Horn via SVD).
Pose3 fit_rigid(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  Vec3 ca = Vec3::Zero(), cb = Vec3::Zero();
  for (size_t i = 0; i < a.size(); ++i) {
    ca += a[i];
    cb += b[i];
  }
  ca /= double(a.size());
  cb /= double(a.size());
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (size_t i = 0; i < a.size(); ++i) h += (a[i] - ca) * (b[i] - cb).transpose();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d r = svd.matrixV() * svd.matrixU().transpose();
  if (r.determinant() < 0.0) {
    Eigen::Matrix3d v = svd.matrixV();
    v.col(2) *= -1.0;
    r = v * svd.matrixU().transpose();
  }
  Pose3 out;
  out.rotation = Quat(r).normalized();
  out.translation = cb - r * ca;
  return out;
}

}  // namespace

IcpResult icp_align(const PointCloud& source, const PointCloud& target,
                    const Pose3& init, const IcpParams& params) {
  params.validate();
  PointCloud src = voxel_subsample(source, params.subsample_voxel);
  PointCloud tgt = voxel_subsample(target, params.subsample_voxel);
  if (src.points.size() < 10 || tgt.points.size() < 10)
    throw InsufficientPoints("clouds have " + std::to_string(src.points.size()) + "/" +
                             std::to_string(tgt.points.size()) +
                             " points after subsampling, need >= 10");

  KdTree3 tree(tgt.points);
  const double gate_sq =
      params.max_correspondence_dist * params.max_correspondence_dist;

  IcpResult result;
  result.transform = init;

  std::vector<Vec3> moved(src.points.size());
  std::vector<Vec3> corr_src, corr_tgt;

  auto match = [&](const Pose3& pose, double& rms_out) {
    corr_src.clear();
    corr_tgt.clear();
    double ss = 0.0;
    for (size_t i = 0; i < src.points.size(); ++i) {
      moved[i] = pose.apply(src.points[i]);
      double sq = 0.0;
      int idx = tree.nearest(moved[i], sq);
      if (idx >= 0 && sq <= gate_sq) {
        corr_src.push_back(moved[i]);
        corr_tgt.push_back(tgt.points[size_t(idx)]);
        ss += sq;
      }
    }
    rms_out = corr_src.empty() ? 0.0 : std::sqrt(ss / double(corr_src.size()));
    return !corr_src.empty();
  };

  double rms = 0.0;
  if (!match(result.transform, rms))
    throw NoCorrespondences("no pairs within max_correspondence_dist at init");

  result.iterations = 0;
  for (int it = 0; it < params.max_iterations; ++it) {
    Pose3 delta = fit_rigid(corr_src, corr_tgt);
    result.transform = compose(delta, result.transform);
    result.iterations = it + 1;
    if (!match(result.transform, rms))
      throw NoCorrespondences("correspondence set became empty at iteration " +
                              std::to_string(it + 1));
    result.residual_history.push_back(rms);
    if (delta.translation.norm() < params.convergence_tol_m &&
        rotation_angle(delta) < params.convergence_tol_rad)
      break;
  }
  result.rms_residual = rms;
  return result;
}

MapRegistry merge_maps(MapRegistry registry, int old_map, int new_map,
                       const Pose3& alignment) {
  auto it = registry.anchors.find(old_map);
  if (it == registry.anchors.end())
    throw UnanchoredOldMap("cannot merge into unanchored submap " +
                           std::to_string(old_map));
  registry.anchors[new_map] = compose(it->second, alignment);
  return registry;
}

MapRegistry resolve_losses(MapRegistry registry, const FrameStore& frames,
                           const IcpParams& params) {
  for (const LossEvent& event : registry.loss_events) {
    const Keyframe* last = registry.find_keyframe(event.last_keyframe_id);
    const Keyframe* origin = registry.find_keyframe(event.origin_keyframe_id);
    if (last == nullptr || origin == nullptr) {
      registry.unmerged.emplace_back(event, "loss event names unknown keyframes");
      continue;
    }
    try {
      if (!registry.anchored(last->map_id))
        throw UnanchoredOldMap("old submap " + std::to_string(last->map_id) +
                               " is itself unanchored");
      PointCloud target = backproject(frames.depth(last->id), frames.intrinsics());
      PointCloud source = backproject(frames.depth(origin->id), frames.intrinsics());
      IcpResult icp = icp_align(source, target, Pose3::identity(), params);
      // camera-to-camera alignment lifted to submap frames
      Pose3 alignment =
          compose(last->pose, compose(icp.transform, inverse(origin->pose)));
      registry = merge_maps(std::move(registry), last->map_id, origin->map_id, alignment);
    } catch (const Error& err) {
      registry.unmerged.emplace_back(event, err.what());
    }
  }
  return registry;
}

}  // namespace signmap
