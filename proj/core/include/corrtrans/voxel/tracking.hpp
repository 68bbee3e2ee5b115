#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "corrtrans/voxel/volume.hpp"

namespace corrtrans::voxel {

struct Ray3 {
  Vec3 origin;
  /// Normalized by the tracking routines; distances are in world units.
  Vec3 direction;
};

/// Incremental grid traversal. Calls fn(t0, t1, value) for every voxel
/// segment of the ray inside the volume and within [0, t_max], in order.
/// A point on a face between two voxels belongs to the voxel the ray is
/// entering. Throws std::domain_error for a zero direction.
void for_each_segment(const VoxelVolume& vol, const Ray3& ray, double t_max,
                      const std::function<void(double, double, double)>& fn);

/// Line integral of extinction along the ray up to t_max.
double optical_depth(const VoxelVolume& vol, const Ray3& ray,
                     double t_max = std::numeric_limits<double>::infinity());

/// exp(-optical depth) through the whole volume; 1 when the ray misses it.
double regular_tracking(const VoxelVolume& vol, const Ray3& ray);

/// Optical depth at each of the nondecreasing distances `depths`.
void optical_depth_profile(const VoxelVolume& vol, const Ray3& ray, std::span<const double> depths,
                           std::span<double> out);

struct BeamCurve {
  int axis = 0;
  std::vector<double> t;
  /// Beam-averaged transmittance.
  std::vector<double> transmittance;
  /// Beam-averaged optical depth; exp(-mean_optical_depth) <= transmittance.
  std::vector<double> mean_optical_depth;
};

/// resolution x resolution parallel rays enter the low face normal to `axis`
/// at cell centers of the face and travel along +axis. Depths are
/// j * extent / steps for j = 0..steps (steps == 0 uses the voxel count
/// along the axis). Result is independent of the worker count.
BeamCurve beam_transmittance(const VoxelVolume& vol, int axis, std::size_t resolution, std::size_t steps = 0,
                             unsigned workers = 1);

}  // namespace corrtrans::voxel
