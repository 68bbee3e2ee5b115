#include "corrtrans/voxel/tracking.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "corrtrans/parallel.hpp"

namespace corrtrans::voxel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec3 unit(const Vec3& d) {
  const double len = length(d);
  if (!(len > 0.0) || !std::isfinite(len)) throw std::domain_error("ray direction must be nonzero");
  return d / len;
}

}  // namespace

void for_each_segment(const VoxelVolume& vol, const Ray3& ray, double t_max,
                      const std::function<void(double, double, double)>& fn) {
  const Vec3 d = unit(ray.direction);
  const Vec3& o = ray.origin;
  const Bounds& b = vol.bounds();

  double t_in = 0.0;
  double t_out = t_max;
  for (int a = 0; a < 3; ++a) {
    if (d[a] == 0.0) {
      if (o[a] < b.lo[a] || o[a] >= b.hi[a]) return;
      continue;
    }
    double t0 = (b.lo[a] - o[a]) / d[a];
    double t1 = (b.hi[a] - o[a]) / d[a];
    if (t0 > t1) std::swap(t0, t1);
    t_in = std::max(t_in, t0);
    t_out = std::min(t_out, t1);
  }
  if (!(t_in < t_out)) return;

  std::array<long long, 3> idx{};
  std::array<long long, 3> step{};
  std::array<double, 3> t_next{};
  std::array<long long, 3> n{};
  for (int a = 0; a < 3; ++a) {
    n[a] = static_cast<long long>(vol.dims()[a]);
    const double h = vol.voxel_size(a);
    const double x = (o[a] + d[a] * t_in - b.lo[a]) / h;
    long long i = d[a] < 0.0 ? static_cast<long long>(std::ceil(x)) - 1 : static_cast<long long>(std::floor(x));
    idx[a] = std::clamp<long long>(i, 0, n[a] - 1);
    step[a] = d[a] > 0.0 ? 1 : (d[a] < 0.0 ? -1 : 0);
  }
  // Crossing distances are recomputed from the plane positions, not accumulated.
  auto crossing = [&](int a) {
    if (step[a] == 0) return kInf;
    const double plane = b.lo[a] + static_cast<double>(idx[a] + (step[a] > 0 ? 1 : 0)) * vol.voxel_size(a);
    return (plane - o[a]) / d[a];
  };
  for (int a = 0; a < 3; ++a) t_next[a] = crossing(a);

  double t = t_in;
  while (t < t_out) {
    const double tn = std::min({t_next[0], t_next[1], t_next[2]});
    const double te = std::min(tn, t_out);
    if (te > t) {
      fn(t, te, vol(static_cast<std::size_t>(idx[0]), static_cast<std::size_t>(idx[1]), static_cast<std::size_t>(idx[2])));
      t = te;
    }
    if (te >= t_out) break;
    for (int a = 0; a < 3; ++a) {
      if (t_next[a] != tn) continue;
      idx[a] += step[a];
      if (idx[a] < 0 || idx[a] >= n[a]) return;
      t_next[a] = crossing(a);
    }
  }
}

double optical_depth(const VoxelVolume& vol, const Ray3& ray, double t_max) {
  double tau = 0.0;
  for_each_segment(vol, ray, t_max, [&](double t0, double t1, double v) { tau += v * (t1 - t0); });
  return tau;
}

double regular_tracking(const VoxelVolume& vol, const Ray3& ray) { return std::exp(-optical_depth(vol, ray)); }

void optical_depth_profile(const VoxelVolume& vol, const Ray3& ray, std::span<const double> depths,
                           std::span<double> out) {
  if (out.size() != depths.size()) throw std::invalid_argument("profile output size mismatch");
  if (depths.empty()) return;
  if (!std::is_sorted(depths.begin(), depths.end())) throw std::domain_error("profile depths must be sorted");
  std::size_t k = 0;
  double acc = 0.0;
  for_each_segment(vol, ray, depths.back(), [&](double t0, double t1, double v) {
    while (k < depths.size() && depths[k] <= t1) {
      out[k] = acc + v * std::max(0.0, depths[k] - t0);
      ++k;
    }
    acc += v * (t1 - t0);
  });
  for (; k < depths.size(); ++k) out[k] = acc;
}

BeamCurve beam_transmittance(const VoxelVolume& vol, int axis, std::size_t resolution, std::size_t steps,
                             unsigned workers) {
  if (axis < 0 || axis > 2) throw std::domain_error("axis must be 0, 1 or 2");
  if (resolution == 0) throw std::domain_error("beam resolution must be positive");
  if (steps == 0) steps = vol.dims()[axis];
  const int u = (axis + 1) % 3;
  const int w = (axis + 2) % 3;
  const Bounds& b = vol.bounds();

  BeamCurve c;
  c.axis = axis;
  c.t.resize(steps + 1);
  for (std::size_t j = 0; j <= steps; ++j) c.t[j] = vol.extent(axis) * static_cast<double>(j) / static_cast<double>(steps);

  // Per-row partial sums keep the total independent of scheduling.
  std::vector<std::vector<double>> row_T(resolution, std::vector<double>(steps + 1, 0.0));
  std::vector<std::vector<double>> row_tau(resolution, std::vector<double>(steps + 1, 0.0));
  const double res = static_cast<double>(resolution);
  parallel_for(resolution, workers, [&](std::size_t row) {
    std::vector<double> tau(steps + 1);
    for (std::size_t col = 0; col < resolution; ++col) {
      Vec3 o;
      o[axis] = b.lo[axis];
      o[u] = b.lo[u] + vol.extent(u) * (static_cast<double>(col) + 0.5) / res;
      o[w] = b.lo[w] + vol.extent(w) * (static_cast<double>(row) + 0.5) / res;
      Vec3 d;
      d[axis] = 1.0;
      optical_depth_profile(vol, {o, d}, c.t, tau);
      for (std::size_t j = 0; j <= steps; ++j) {
        row_T[row][j] += std::exp(-tau[j]);
        row_tau[row][j] += tau[j];
      }
    }
  });

  c.transmittance.assign(steps + 1, 0.0);
  c.mean_optical_depth.assign(steps + 1, 0.0);
  for (std::size_t row = 0; row < resolution; ++row) {
    for (std::size_t j = 0; j <= steps; ++j) {
      c.transmittance[j] += row_T[row][j];
      c.mean_optical_depth[j] += row_tau[row][j];
    }
  }
  const double rays = res * res;
  for (std::size_t j = 0; j <= steps; ++j) {
    c.transmittance[j] /= rays;
    c.mean_optical_depth[j] /= rays;
  }
  return c;
}

}  // namespace corrtrans::voxel
