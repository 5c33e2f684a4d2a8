#include "signmap/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace signmap {

VoxelKey OccupancyGrid3D::key_of(const Vec3& p) const {
  Vec3 rel = (p - origin) / resolution;
  return VoxelKey{int(std::floor(rel.x())), int(std::floor(rel.y())),
                  int(std::floor(rel.z()))};
}

Vec3 OccupancyGrid3D::voxel_center(const VoxelKey& k) const {
  return origin + Vec3((k.x + 0.5) * resolution, (k.y + 0.5) * resolution,
                       (k.z + 0.5) * resolution);
}

Cell2D Grid2D::at(int ix, int iy) const {
  int u = ix - x0, v = iy - y0;
  if (u < 0 || v < 0 || u >= nx || v >= ny) return Cell2D::unknown;
  return cells[size_t(v) * nx + u];
}

Vec2 Grid2D::cell_center(int ix, int iy) const {
  return Vec2((ix + 0.5) * resolution, (iy + 0.5) * resolution);
}

Pose3 correct_vertical_drift(const Pose3& pose, double z_fixed) {
  Pose3 out = pose;
  out.translation.z() = z_fixed;
  return out;
}

void integrate_keyframe(OccupancyGrid3D& grid, const Pose3& global_pose,
                        const DepthImage& depth, const CameraIntrinsics& k) {
  PointCloud cloud;
  try {
    cloud = backproject(depth, k);
  } catch (const EmptyCloud&) {
    return;  // vacuous integration
  }
  for (const Vec3& p : cloud.points) grid.occupied[grid.key_of(global_pose.apply(p))]++;
}

Grid2D project_2d(const OccupancyGrid3D& grid, double z_min, double z_max,
                  int min_column_hits) {
  if (z_min >= z_max) throw ConfigError("project_2d requires z_min < z_max");

  Grid2D out;
  out.resolution = grid.resolution;
  if (grid.occupied.empty()) return out;

  struct Column {
    int in_slab = 0;
    int anywhere = 0;
  };
  std::map<std::pair<int, int>, Column> columns;
  int min_x = INT_MAX, max_x = INT_MIN, min_y = INT_MAX, max_y = INT_MIN;
  for (const auto& [key, hits] : grid.occupied) {
    Column& col = columns[{key.x, key.y}];
    col.anywhere++;
    double zc = grid.voxel_center(key).z();
    if (zc >= z_min && zc <= z_max) col.in_slab++;
    min_x = std::min(min_x, key.x);
    max_x = std::max(max_x, key.x);
    min_y = std::min(min_y, key.y);
    max_y = std::max(max_y, key.y);
  }

  out.x0 = min_x;
  out.y0 = min_y;
  out.nx = max_x - min_x + 1;
  out.ny = max_y - min_y + 1;
  out.cells.assign(size_t(out.nx) * out.ny, Cell2D::unknown);
  for (const auto& [xy, col] : columns) {
    Cell2D value = col.in_slab >= min_column_hits ? Cell2D::occupied : Cell2D::free;
    out.cells[size_t(xy.second - min_y) * out.nx + (xy.first - min_x)] = value;
  }
  return out;
}

}  // namespace signmap
