#include "corrtrans/voxel/volume.hpp"

#include <cmath>
#include <stdexcept>

namespace corrtrans::voxel {

VoxelVolume::VoxelVolume(Dims dims, Bounds bounds, double fill) : dims_(dims), bounds_(bounds) {
  for (int a = 0; a < 3; ++a) {
    if (dims[a] == 0) throw std::domain_error("volume dimensions must be positive");
    if (!(bounds.hi[a] > bounds.lo[a]) || !std::isfinite(bounds.lo[a]) || !std::isfinite(bounds.hi[a])) {
      throw std::domain_error("volume bounds must be finite with hi > lo");
    }
  }
  values_.assign(dims[0] * dims[1] * dims[2], fill);
}

void VoxelVolume::check_values() const {
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) throw std::domain_error("voxel values must be finite and nonnegative");
  }
}

double VoxelVolume::mean() const noexcept {
  if (values_.empty()) return 0.0;
  double s = 0.0;
  for (double v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

double VoxelVolume::variance() const noexcept {
  if (values_.empty()) return 0.0;
  const double m = mean();
  double s = 0.0;
  for (double v : values_) s += (v - m) * (v - m);
  return s / static_cast<double>(values_.size());
}

}  // namespace corrtrans::voxel
