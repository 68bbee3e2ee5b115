#include "corrtrans/voxel/fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace corrtrans::voxel {

ExtinctionModel ModelFitReport::gamma_model(int axis) const {
  return ExtinctionModel::gamma_concentration(mean_concentration, axis_variance.at(static_cast<std::size_t>(axis)), sigma);
}

DirectionalVariance ModelFitReport::ellipsoid() const {
  return DirectionalVariance::diagonal(axis_variance[0] * axis_variance[0], axis_variance[1] * axis_variance[1],
                                       axis_variance[2] * axis_variance[2]);
}

double projected_variance(const VoxelVolume& vol, int axis) {
  if (axis < 0 || axis > 2) throw std::domain_error("axis must be 0, 1 or 2");
  const Dims& d = vol.dims();
  const std::size_t n = d[static_cast<std::size_t>(axis)];
  std::vector<double> col(vol.size() / n, 0.0);
  for (std::size_t k = 0; k < d[2]; ++k) {
    for (std::size_t j = 0; j < d[1]; ++j) {
      for (std::size_t i = 0; i < d[0]; ++i) {
        std::size_t c;
        if (axis == 0) {
          c = k * d[1] + j;
        } else if (axis == 1) {
          c = k * d[0] + i;
        } else {
          c = j * d[0] + i;
        }
        col[c] += vol(i, j, k);
      }
    }
  }
  double mean = 0.0;
  for (double& v : col) {
    v /= static_cast<double>(n);
    mean += v;
  }
  mean /= static_cast<double>(col.size());
  double var = 0.0;
  for (double v : col) var += (v - mean) * (v - mean);
  return var / static_cast<double>(col.size());
}

double log_rmse(const BeamCurve& curve, const ExtinctionModel& model) {
  double ss = 0.0;
  std::size_t n = 0;
  for (std::size_t j = 1; j < curve.t.size(); ++j) {
    const double measured = curve.transmittance[j];
    if (!(measured > 0.0)) continue;
    const double diff = std::log(measured) - std::log(model.transmittance(curve.t[j]));
    ss += diff * diff;
    ++n;
  }
  return n == 0 ? 0.0 : std::sqrt(ss / static_cast<double>(n));
}

ModelFitReport fit_and_score(const VoxelVolume& vol, const FitOptions& options) {
  vol.check_values();
  ModelFitReport r;
  r.mean_concentration = vol.mean();
  if (!(r.mean_concentration > 0.0)) throw std::domain_error("fit needs a positive mean extinction");
  r.variance_concentration = vol.variance();
  const ExtinctionModel exponential{ExponentialModel{r.mean_concentration}};
  for (int a = 0; a < 3; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    r.axis_variance[ua] = r.variance_concentration > 0.0 ? projected_variance(vol, a) : 0.0;
    const std::size_t res = options.beam_resolution > 0
                                ? options.beam_resolution
                                : std::max(vol.dims()[(ua + 1) % 3], vol.dims()[(ua + 2) % 3]);
    r.curves[ua] = beam_transmittance(vol, a, res, 0, options.workers);
    r.exponential_rmse[ua] = log_rmse(r.curves[ua], exponential);
    r.gamma_rmse[ua] = log_rmse(r.curves[ua], r.gamma_model(a));
  }
  return r;
}

}  // namespace corrtrans::voxel
