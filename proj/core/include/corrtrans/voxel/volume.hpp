#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "corrtrans/vec.hpp"

namespace corrtrans::voxel {

struct Bounds {
  Vec3 lo{0.0, 0.0, 0.0};
  Vec3 hi{1.0, 1.0, 1.0};

  constexpr bool operator==(const Bounds&) const = default;
};

using Dims = std::array<std::size_t, 3>;

/// Piecewise-constant extinction field on a regular grid, x-fastest storage.
class VoxelVolume {
public:
  VoxelVolume() = default;
  /// Throws std::domain_error for a zero dimension or empty/inverted bounds.
  explicit VoxelVolume(Dims dims, Bounds bounds = {}, double fill = 0.0);

  const Dims& dims() const noexcept { return dims_; }
  const Bounds& bounds() const noexcept { return bounds_; }
  std::size_t size() const noexcept { return values_.size(); }
  double voxel_size(int axis) const noexcept { return (bounds_.hi[axis] - bounds_.lo[axis]) / static_cast<double>(dims_[axis]); }
  double extent(int axis) const noexcept { return bounds_.hi[axis] - bounds_.lo[axis]; }

  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const noexcept { return (k * dims_[1] + j) * dims_[0] + i; }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const noexcept { return values_[index(i, j, k)]; }
  double& operator()(std::size_t i, std::size_t j, std::size_t k) noexcept { return values_[index(i, j, k)]; }

  std::vector<double>& values() noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Throws std::domain_error unless every value is finite and >= 0.
  void check_values() const;

  double mean() const noexcept;
  /// Population variance of the voxel values.
  double variance() const noexcept;

  bool operator==(const VoxelVolume&) const = default;

private:
  Dims dims_{0, 0, 0};
  Bounds bounds_{};
  std::vector<double> values_;
};

}  // namespace corrtrans::voxel
