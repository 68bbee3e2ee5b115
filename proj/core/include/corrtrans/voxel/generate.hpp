#pragma once

#include <array>
#include <cstdint>

#include "corrtrans/voxel/volume.hpp"

namespace corrtrans::voxel {

struct VolumeSpec {
  Dims dims{64, 64, 64};
  Bounds bounds{};
  double mean = 10.0;
  double variance = 10.0;
  /// Smoothing width along each axis is correlation_length * weight voxels;
  /// a zero weight leaves that axis unsmoothed.
  std::array<double, 3> axis_weights{1.0, 1.0, 1.0};
  double correlation_length = 4.0;
  std::uint64_t seed = 1;
};

/// Gaussian white noise, smoothed with a periodic separable Gaussian kernel,
/// then mapped by rank onto the quantiles of Gamma(mean^2/var, mean/var).
/// The value histogram is therefore the target gamma up to discretization,
/// while the smoothing sets the spatial clustering per axis.
/// Throws std::domain_error for dims below 16, mean <= 0, variance < 0 or
/// negative weights. variance == 0 gives the constant volume.
VoxelVolume gen_correlated_volume(const VolumeSpec& spec);

/// Independent Gamma(alpha, beta) voxels (no spatial correlation).
VoxelVolume gen_iid_gamma_volume(Dims dims, double alpha, double beta, std::uint64_t seed, Bounds bounds = {});

}  // namespace corrtrans::voxel
