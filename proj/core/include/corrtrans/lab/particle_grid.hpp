#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "corrtrans/lab/particle_field.hpp"

namespace corrtrans::lab {

struct RayHit {
  bool hit = false;
  /// Hit distance, or t_max on escape.
  double t = 0.0;
  std::size_t particle = std::numeric_limits<std::size_t>::max();
};

/// Uniform grid over the periodic unit square. Each cell lists the disks that
/// overlap it, stored with the image offset that places them next to the
/// cell, so rays can be marched through the unbounded tiling.
class ParticleGrid {
public:
  /// cells_per_axis == 0 picks clamp(round(sqrt(N / 2)), 10, 1024).
  explicit ParticleGrid(const ParticleField2D& field, std::size_t cells_per_axis = 0);

  /// Nearest disk hit along origin + t dir, t in (0, t_max]. Disks that
  /// contain the origin are ignored. Throws std::domain_error for a zero direction.
  RayHit trace(Vec2 origin, Vec2 dir, double t_max) const;

  std::size_t cells_per_axis() const noexcept { return n_; }

private:
  struct Entry {
    Vec2 center;
    std::uint32_t particle;
  };

  const ParticleField2D* field_;
  std::size_t n_;
  double cell_;
  std::vector<std::uint32_t> offsets_;  // CSR row starts, size n_^2 + 1
  std::vector<Entry> entries_;
};

/// Brute-force reference: tests every disk in every periodic image the ray can reach.
RayHit trace_ray_brute_force(const ParticleField2D& field, Vec2 origin, Vec2 dir, double t_max);

/// Grid-accelerated periodic trace (builds a temporary grid).
RayHit trace_ray_periodic(const ParticleField2D& field, Vec2 origin, Vec2 dir, double t_max);

/// Distance to the disk (center, r) along a unit direction, or +inf. Returns
/// +inf when the origin lies inside the disk.
double intersect_disk(Vec2 origin, Vec2 dir, Vec2 center, double r) noexcept;

}  // namespace corrtrans::lab
