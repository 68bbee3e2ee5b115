#pragma once

#include <array>
#include <cstddef>

#include "corrtrans/transmittance.hpp"
#include "corrtrans/voxel/tracking.hpp"
#include "corrtrans/voxel/volume.hpp"

namespace corrtrans::voxel {

struct ModelFitReport {
  /// sigma is fixed to 1, so concentration and extinction coincide.
  double sigma = 1.0;
  double mean_concentration = 0.0;
  /// Variance of the voxel values.
  double variance_concentration = 0.0;
  /// Variance of the column means along each axis (the spread a beam along
  /// that axis actually sees over the full depth).
  std::array<double, 3> axis_variance{};
  std::array<double, 3> gamma_rmse{};
  std::array<double, 3> exponential_rmse{};
  std::array<BeamCurve, 3> curves;

  /// Gamma model along `axis`, exponential when its variance is 0.
  ExtinctionModel gamma_model(int axis) const;
  /// diag(v_x^2, v_y^2, v_z^2), whose projection sqrt(w^T V w) returns v_a on axis a.
  DirectionalVariance ellipsoid() const;
};

struct FitOptions {
  /// 0 uses the larger face dimension of each axis.
  std::size_t beam_resolution = 0;
  unsigned workers = 1;
};

/// Variance over all columns parallel to `axis` of the column mean.
double projected_variance(const VoxelVolume& vol, int axis);

/// Root mean square of log T_beam - log T_model over the curve depths past 0.
double log_rmse(const BeamCurve& curve, const ExtinctionModel& model);

/// Moment fit plus beam scoring along x, y and z.
ModelFitReport fit_and_score(const VoxelVolume& vol, const FitOptions& options = {});

}  // namespace corrtrans::voxel
