#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "signmap/geometry.hpp"

namespace signmap {

struct VoxelKey {
  int x = 0, y = 0, z = 0;
  bool operator==(const VoxelKey&) const = default;
};

struct VoxelKeyHash {
  size_t operator()(const VoxelKey& k) const {
    uint64_t h = uint64_t(uint32_t(k.x)) * 0x9e3779b97f4a7c15ull;
    h ^= uint64_t(uint32_t(k.y)) * 0xc2b2ae3d27d4eb4full;
    h ^= uint64_t(uint32_t(k.z)) * 0x165667b19e3779f9ull;
    h ^= h >> 29;
    return size_t(h);
  }
};

/// Hit-count voxel map. Indexing is exact integer floor((p - origin)/res).
/// No free-space ray clearing; hits are all the wall filter and renderer need.
struct OccupancyGrid3D {
  double resolution = 0.03;
  Vec3 origin = Vec3::Zero();
  std::unordered_map<VoxelKey, int, VoxelKeyHash> occupied;

  VoxelKey key_of(const Vec3& p) const;
  Vec3 voxel_center(const VoxelKey& k) const;
};

enum class Cell2D : uint8_t { unknown = 0, occupied = 1, free = 2 };

/// Column projection of the 3D grid. Cell indices share the 3D voxel lattice;
/// (x0, y0) is the lattice index of cells[0] and lattice_origin the world
/// coordinate of lattice index (0, 0).
struct Grid2D {
  double resolution = 0.03;
  Vec2 lattice_origin = Vec2::Zero();
  int x0 = 0, y0 = 0;
  int nx = 0, ny = 0;
  std::vector<Cell2D> cells;

  bool empty() const { return nx <= 0 || ny <= 0; }
  Cell2D at(int ix, int iy) const;  // lattice indices; out of bounds = unknown
  Vec2 cell_center(int ix, int iy) const;
};

/// Pins the pose's vertical coordinate, leaving x, y and rotation untouched.
Pose3 correct_vertical_drift(const Pose3& pose, double z_fixed);

/// Backprojects the frame's valid pixels, lifts them with the global pose,
/// and increments the voxels they land in. Empty frames integrate vacuously.
void integrate_keyframe(OccupancyGrid3D& grid, const Pose3& global_pose,
                        const DepthImage& depth, const CameraIntrinsics& k);

/// A 2D cell is occupied iff its column holds >= min_column_hits occupied
/// voxels whose centers fall in [z_min, z_max]. Columns with voxels only
/// outside the slab come out free; untouched columns stay unknown.
Grid2D project_2d(const OccupancyGrid3D& grid, double z_min, double z_max,
                  int min_column_hits);

}  // namespace signmap
