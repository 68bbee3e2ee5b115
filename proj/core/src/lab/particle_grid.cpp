#include "corrtrans/lab/particle_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace corrtrans::lab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

long long floor_div(long long a, long long n) {
  const long long q = a / n;
  return (a % n != 0 && (a < 0) != (n < 0)) ? q - 1 : q;
}

Vec2 check_direction(Vec2 dir) {
  const double len = std::hypot(dir.x, dir.y);
  if (!(len > 0.0) || !std::isfinite(len)) throw std::domain_error("ray direction must be nonzero");
  return dir * (1.0 / len);
}

}  // namespace

double intersect_disk(Vec2 o, Vec2 d, Vec2 c, double r) noexcept {
  const Vec2 oc = o - c;
  const double b = dot(oc, d);
  const double cc = dot(oc, oc) - r * r;
  if (cc <= 0.0) return kInf;  // starts inside
  if (b >= 0.0) return kInf;   // moving away
  const double disc = b * b - cc;
  if (disc < 0.0) return kInf;
  // Stable form of -b - sqrt(disc).
  return cc / (-b + std::sqrt(disc));
}

ParticleGrid::ParticleGrid(const ParticleField2D& field, std::size_t cells_per_axis) : field_(&field) {
  const double count = static_cast<double>(field.positions.size());
  n_ = cells_per_axis > 0 ? cells_per_axis
                          : static_cast<std::size_t>(std::clamp<long long>(std::llround(std::sqrt(count / 2.0)), 10, 1024));
  cell_ = 1.0 / static_cast<double>(n_);
  const auto n = static_cast<long long>(n_);
  const double r = field.radius;

  // Two passes: count, then fill.
  std::vector<std::uint32_t> counts(n_ * n_ + 1, 0);
  auto for_each_cell = [&](const Vec2& p, auto&& fn) {
    const long long i0 = static_cast<long long>(std::floor((p.x - r) / cell_));
    const long long i1 = static_cast<long long>(std::floor((p.x + r) / cell_));
    const long long j0 = static_cast<long long>(std::floor((p.y - r) / cell_));
    const long long j1 = static_cast<long long>(std::floor((p.y + r) / cell_));
    for (long long j = j0; j <= j1; ++j) {
      for (long long i = i0; i <= i1; ++i) {
        const long long wi = i - floor_div(i, n) * n;
        const long long wj = j - floor_div(j, n) * n;
        const Vec2 center{p.x - static_cast<double>(floor_div(i, n)), p.y - static_cast<double>(floor_div(j, n))};
        fn(static_cast<std::size_t>(wj * n + wi), center);
      }
    }
  };
  for (const auto& p : field.positions) for_each_cell(p, [&](std::size_t cell, const Vec2&) { ++counts[cell + 1]; });
  for (std::size_t k = 1; k < counts.size(); ++k) counts[k] += counts[k - 1];
  offsets_ = counts;
  entries_.resize(offsets_.back());
  std::vector<std::uint32_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t idx = 0; idx < field.positions.size(); ++idx) {
    for_each_cell(field.positions[idx], [&](std::size_t cell, const Vec2& center) {
      entries_[cursor[cell]++] = {center, static_cast<std::uint32_t>(idx)};
    });
  }
}

RayHit ParticleGrid::trace(Vec2 origin, Vec2 dir, double t_max) const {
  dir = check_direction(dir);
  if (!std::isfinite(t_max)) throw std::domain_error("trace range must be finite");
  RayHit result{false, t_max, std::numeric_limits<std::size_t>::max()};
  if (entries_.empty() || !(t_max > 0.0)) return result;

  const auto n = static_cast<long long>(n_);
  const double r = field_->radius;
  long long ix = static_cast<long long>(std::floor(origin.x / cell_));
  long long iy = static_cast<long long>(std::floor(origin.y / cell_));
  const long long sx = dir.x > 0.0 ? 1 : -1;
  const long long sy = dir.y > 0.0 ? 1 : -1;
  const double dtx = dir.x != 0.0 ? cell_ / std::abs(dir.x) : kInf;
  const double dty = dir.y != 0.0 ? cell_ / std::abs(dir.y) : kInf;
  auto next_boundary = [&](long long i, double o, double d, long long s) {
    if (d == 0.0) return kInf;
    const double edge = static_cast<double>(s > 0 ? i + 1 : i) * cell_;
    return std::max(0.0, (edge - o) / d);
  };
  double tx = next_boundary(ix, origin.x, dir.x, sx);
  double ty = next_boundary(iy, origin.y, dir.y, sy);

  double t_enter = 0.0;
  while (t_enter <= t_max) {
    const double t_exit = std::min(tx, ty);
    const long long ox = floor_div(ix, n);
    const long long oy = floor_div(iy, n);
    const auto cell = static_cast<std::size_t>((iy - oy * n) * n + (ix - ox * n));
    const Vec2 image{static_cast<double>(ox), static_cast<double>(oy)};
    double best = kInf;
    std::size_t best_idx = result.particle;
    for (std::uint32_t k = offsets_[cell]; k < offsets_[cell + 1]; ++k) {
      const double t = intersect_disk(origin, dir, entries_[k].center + image, r);
      if (t < best) {
        best = t;
        best_idx = entries_[k].particle;
      }
    }
    if (best <= t_exit) {
      if (best <= t_max) result = {true, best, best_idx};
      return result;
    }
    if (tx < ty) {
      ix += sx;
      t_enter = tx;
      tx += dtx;
    } else {
      iy += sy;
      t_enter = ty;
      ty += dty;
    }
  }
  return result;
}

RayHit trace_ray_brute_force(const ParticleField2D& field, Vec2 origin, Vec2 dir, double t_max) {
  dir = check_direction(dir);
  RayHit result{false, t_max, std::numeric_limits<std::size_t>::max()};
  const Vec2 end = origin + dir * t_max;
  const double r = field.radius;
  const auto lo_x = static_cast<long long>(std::floor(std::min(origin.x, end.x) - r)) - 1;
  const auto hi_x = static_cast<long long>(std::floor(std::max(origin.x, end.x) + r)) + 1;
  const auto lo_y = static_cast<long long>(std::floor(std::min(origin.y, end.y) - r)) - 1;
  const auto hi_y = static_cast<long long>(std::floor(std::max(origin.y, end.y) + r)) + 1;
  double best = kInf;
  for (long long oy = lo_y; oy <= hi_y; ++oy) {
    for (long long ox = lo_x; ox <= hi_x; ++ox) {
      const Vec2 image{static_cast<double>(ox), static_cast<double>(oy)};
      for (std::size_t k = 0; k < field.positions.size(); ++k) {
        const double t = intersect_disk(origin, dir, field.positions[k] + image, r);
        if (t < best) {
          best = t;
          result.particle = k;
        }
      }
    }
  }
  if (best <= t_max) {
    result.hit = true;
    result.t = best;
  } else {
    result.particle = std::numeric_limits<std::size_t>::max();
  }
  return result;
}

RayHit trace_ray_periodic(const ParticleField2D& field, Vec2 origin, Vec2 dir, double t_max) {
  return ParticleGrid(field).trace(origin, dir, t_max);
}

}  // namespace corrtrans::lab
