#include "corrtrans/voxel/generate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "corrtrans/free_flight.hpp"
#include "corrtrans/rng.hpp"

namespace corrtrans::voxel {

namespace {

std::vector<double> gaussian_kernel(double sigma) {
  const auto radius = static_cast<std::size_t>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double x = static_cast<double>(i) - static_cast<double>(radius);
    k[i] = std::exp(-0.5 * x * x / (sigma * sigma));
    sum += k[i];
  }
  for (double& v : k) v /= sum;
  return k;
}

// Periodic convolution along one axis.
void smooth_axis(std::vector<double>& data, const Dims& d, int axis, double sigma) {
  if (!(sigma > 0.0)) return;
  const std::vector<double> kernel = gaussian_kernel(sigma);
  const auto radius = static_cast<long long>(kernel.size() / 2);
  const std::size_t n = d[axis];
  const std::size_t stride = axis == 0 ? 1 : (axis == 1 ? d[0] : d[0] * d[1]);
  const std::size_t lines = data.size() / n;
  std::vector<double> line(n);
  for (std::size_t l = 0; l < lines; ++l) {
    // Base offset of line l: split l into the coordinates of the other two axes.
    std::size_t base;
    if (axis == 0) {
      base = l * n;
    } else if (axis == 1) {
      base = (l / d[0]) * d[0] * d[1] + (l % d[0]);
    } else {
      base = l;
    }
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (long long o = -radius; o <= radius; ++o) {
        const long long m = static_cast<long long>(n);
        const long long j = ((static_cast<long long>(i) + o) % m + m) % m;
        s += kernel[static_cast<std::size_t>(o + radius)] * data[base + static_cast<std::size_t>(j) * stride];
      }
      line[i] = s;
    }
    for (std::size_t i = 0; i < n; ++i) data[base + i * stride] = line[i];
  }
}

}  // namespace

VoxelVolume gen_correlated_volume(const VolumeSpec& s) {
  for (auto n : s.dims) {
    if (n < 16) throw std::domain_error("generated volumes need at least 16 voxels per axis");
  }
  if (!(s.mean > 0.0) || !std::isfinite(s.mean)) throw std::domain_error("mean must be positive");
  if (!(s.variance >= 0.0) || !std::isfinite(s.variance)) throw std::domain_error("variance must be >= 0");
  if (!(s.correlation_length >= 0.0)) throw std::domain_error("correlation length must be >= 0");
  for (double w : s.axis_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::domain_error("axis weights must be >= 0");
  }

  VoxelVolume vol(s.dims, s.bounds, s.mean);
  if (s.variance == 0.0) return vol;

  auto& v = vol.values();
  Rng rng = Rng::stream(s.seed, 0);
  for (double& x : v) x = rng.normal();
  for (int a = 0; a < 3; ++a) smooth_axis(v, s.dims, a, s.correlation_length * s.axis_weights[a]);

  // Rank matching; ties broken by index so the map is deterministic.
  std::vector<std::uint32_t> order(v.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return v[a] < v[b] || (v[a] == v[b] && a < b);
  });
  const double alpha = s.mean * s.mean / s.variance;
  const double beta = s.mean / s.variance;
  const double n = static_cast<double>(v.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    v[order[r]] = boost::math::gamma_p_inv(alpha, (static_cast<double>(r) + 0.5) / n) / beta;
  }
  return vol;
}

VoxelVolume gen_iid_gamma_volume(Dims dims, double alpha, double beta, std::uint64_t seed, Bounds bounds) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw std::domain_error("gamma parameters must be positive");
  VoxelVolume vol(dims, bounds);
  Rng rng = Rng::stream(seed, 0);
  for (double& x : vol.values()) x = marsaglia_tsang(rng, alpha).value / beta;
  return vol;
}

}  // namespace corrtrans::voxel
