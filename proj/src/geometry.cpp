#include "signmap/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace signmap {

Pose3 Pose3::from_axis_angle(const Vec3& axis, double angle_rad,
                             const Vec3& translation) {
  Pose3 p;
  p.rotation = Quat(Eigen::AngleAxisd(angle_rad, axis.normalized()));
  p.translation = translation;
  return p;
}

Pose3 compose(const Pose3& a, const Pose3& b) {
  Pose3 out;
  out.rotation = (a.rotation * b.rotation).normalized();
  out.translation = a.rotation * b.translation + a.translation;
  return out;
}

Pose3 inverse(const Pose3& p) {
  Pose3 out;
  out.rotation = p.rotation.conjugate().normalized();
  out.translation = -(out.rotation * p.translation);
  return out;
}

double rotation_angle(const Pose3& p) {
  Quat q = p.rotation.normalized();
  double s = Vec3(q.x(), q.y(), q.z()).norm();
  return 2.0 * std::atan2(s, std::abs(q.w()));
}

PoseDelta pose_delta(const Pose3& a, const Pose3& b) {
  Pose3 d = compose(inverse(a), b);
  return PoseDelta{d.translation.norm(), rotation_angle(d)};
}

void CameraIntrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) throw InvalidSpec("intrinsics: fx, fy must be positive");
  if (width <= 0 || height <= 0) throw InvalidSpec("intrinsics: width, height must be positive");
  if (cx < 0.0 || cx >= width) throw InvalidSpec("intrinsics: cx outside [0, width)");
  if (cy < 0.0 || cy >= height) throw InvalidSpec("intrinsics: cy outside [0, height)");
  if (!(depth_scale > 0.0)) throw InvalidSpec("intrinsics: depth_scale must be positive");
  if (!(depth_min < depth_max)) throw InvalidSpec("intrinsics: depth_min must be < depth_max");
}

CameraIntrinsics CameraIntrinsics::scaled(double sx, double sy) const {
  CameraIntrinsics k = *this;
  k.fx *= sx;
  k.cx *= sx;
  k.fy *= sy;
  k.cy *= sy;
  k.width = int(std::lround(width * sx));
  k.height = int(std::lround(height * sy));
  return k;
}

PixelRect PixelRect::clamped(int width, int height) const {
  PixelRect r;
  r.x0 = std::clamp(x0, 0, width);
  r.x1 = std::clamp(x1, 0, width);
  r.y0 = std::clamp(y0, 0, height);
  r.y1 = std::clamp(y1, 0, height);
  return r;
}

PixelRect PixelRect::shrunk(double fraction) const {
  if (fraction <= 0.0) return *this;
  double dx = width() * fraction * 0.5;
  double dy = height() * fraction * 0.5;
  PixelRect r;
  r.x0 = x0 + int(std::floor(dx));
  r.x1 = x1 - int(std::floor(dx));
  r.y0 = y0 + int(std::floor(dy));
  r.y1 = y1 - int(std::floor(dy));
  return r;
}

PointCloud transform_cloud(const Pose3& pose, const PointCloud& cloud,
                           Frame target_frame) {
  PointCloud out;
  out.frame = target_frame;
  out.points.reserve(cloud.points.size());
  for (const Vec3& p : cloud.points) out.points.push_back(pose.apply(p));
  return out;
}

PointCloud backproject(const DepthImage& depth, const CameraIntrinsics& k,
                       const PixelRect& roi) {
  PointCloud cloud;
  cloud.frame = Frame::camera;
  for (int v = roi.y0; v < roi.y1; ++v) {
    for (int u = roi.x0; u < roi.x1; ++u) {
      double raw = depth.at(u, v);
      if (raw <= 0.0) continue;  // 0 = no return
      double z = raw * k.depth_scale;
      if (z < k.depth_min || z > k.depth_max) continue;
      cloud.points.emplace_back((u - k.cx) * z / k.fx, (v - k.cy) * z / k.fy, z);
    }
  }
  if (cloud.points.empty()) throw EmptyCloud("no valid depth in roi");
  return cloud;
}

PointCloud backproject(const DepthImage& depth, const CameraIntrinsics& k) {
  return backproject(depth, k, PixelRect::full(depth.width, depth.height));
}

Vec2 project(const Vec3& point, const CameraIntrinsics& k) {
  if (point.z() <= 0.0) throw BehindCamera("point has z <= 0");
  return Vec2(k.fx * point.x() / point.z() + k.cx,
              k.fy * point.y() / point.z() + k.cy);
}

double wrap_angle(double a) {
  double w = std::fmod(a + M_PI, 2.0 * M_PI);
  if (w <= 0.0) w += 2.0 * M_PI;
  return w - M_PI;
}

double circular_distance(double a, double b) { return std::abs(wrap_angle(a - b)); }

}  // namespace signmap
