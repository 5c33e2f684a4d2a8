#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstdint>
#include <vector>

#include "signmap/error.hpp"

namespace signmap {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Quat = Eigen::Quaterniond;

/// Rigid transform in SE(3), stored as unit quaternion + translation.
/// Composition renormalizes the quaternion so long merge chains stay valid.
struct Pose3 {
  Quat rotation{1.0, 0.0, 0.0, 0.0};
  Vec3 translation{0.0, 0.0, 0.0};

  static Pose3 identity() { return Pose3{}; }
  static Pose3 from_axis_angle(const Vec3& axis, double angle_rad,
                               const Vec3& translation = Vec3::Zero());

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
};

Pose3 compose(const Pose3& a, const Pose3& b);
Pose3 inverse(const Pose3& p);

/// Magnitude of the rotation in radians, in [0, pi].
double rotation_angle(const Pose3& p);

/// Translation-norm and rotation-angle difference between two poses.
struct PoseDelta {
  double translation_m = 0.0;
  double rotation_rad = 0.0;
};
PoseDelta pose_delta(const Pose3& a, const Pose3& b);

/// Pinhole model of the depth camera. The registered color stream shares the
/// same optical center and field of view at a (possibly) different
/// resolution; scaled() derives its intrinsics.
struct CameraIntrinsics {
  double fx = 0.0, fy = 0.0;
  double cx = 0.0, cy = 0.0;
  int width = 0, height = 0;
  double depth_scale = 0.001;  // meters per stored unit
  double depth_min = 0.25;     // valid range default per WFOV depth mode
  double depth_max = 2.88;

  void validate() const;  // throws InvalidSpec naming the violated field
  CameraIntrinsics scaled(double sx, double sy) const;
};

/// Raw depth frame. Values are in stored units (depth_scale meters each);
/// 0 encodes "no return". Values stay floating point in memory; writing to a
/// 16-bit PGM quantizes.
struct DepthImage {
  int width = 0, height = 0;
  std::vector<double> values;

  DepthImage() = default;
  DepthImage(int w, int h) : width(w), height(h), values(size_t(w) * h, 0.0) {}
  double at(int u, int v) const { return values[size_t(v) * width + u]; }
  double& at(int u, int v) { return values[size_t(v) * width + u]; }
};

enum class Frame { camera, map };

struct PointCloud {
  Frame frame = Frame::camera;
  std::vector<Vec3> points;
};

/// Half-open pixel rectangle [x0,x1) x [y0,y1).
struct PixelRect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  static PixelRect full(int width, int height) { return {0, 0, width, height}; }
  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  bool empty() const { return x1 <= x0 || y1 <= y0; }
  PixelRect clamped(int width, int height) const;
  PixelRect shrunk(double fraction) const;  // shrink about the center
};

/// Applies R*p + t to every point; the result is tagged with target_frame.
PointCloud transform_cloud(const Pose3& pose, const PointCloud& cloud,
                           Frame target_frame = Frame::map);

/// Backprojects valid-depth pixels of roi through the pinhole model.
/// Pixels with no return or depth outside [depth_min, depth_max] are skipped.
/// Throws EmptyCloud when nothing in roi has valid depth.
PointCloud backproject(const DepthImage& depth, const CameraIntrinsics& k,
                       const PixelRect& roi);
PointCloud backproject(const DepthImage& depth, const CameraIntrinsics& k);

/// Projects a camera-frame point to pixel coordinates.
/// Throws BehindCamera when z <= 0.
Vec2 project(const Vec3& point, const CameraIntrinsics& k);

inline double deg2rad(double d) { return d * M_PI / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / M_PI; }

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

/// |wrap(a - b)|, the circular distance between two angles.
double circular_distance(double a, double b);

}  // namespace signmap
