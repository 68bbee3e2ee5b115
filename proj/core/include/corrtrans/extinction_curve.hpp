#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "corrtrans/transmittance.hpp"

namespace corrtrans {

/// Tabulated T, p and mu on increasing abscissae with t_0 = 0.
struct ExtinctionCurve {
  std::vector<double> t;
  std::vector<double> transmittance;
  std::vector<double> extinction_prob;
  std::vector<double> diff_extinction;

  std::size_t size() const noexcept { return t.size(); }
};

/// Samples a model on `steps` evenly spaced points of [t_min, t_max].
ExtinctionCurve tabulate(const ExtinctionModel& model, double t_min, double t_max, std::size_t steps);

struct CurveBinning {
  std::size_t bins = 256;
  /// Upper end of the histogram as a quantile of the samples.
  double upper_quantile = 0.999;
  /// Explicit upper end; overrides the quantile when > 0.
  double t_max = 0.0;
};

/// Empirical curve from sorted event distances. Each bin i = [t_i, t_i + dt)
/// reports the survival T(t_i) at its left edge, p = count / (n dt) and
/// mu = p / T. Throws std::domain_error for empty or unsorted input.
ExtinctionCurve extinction_from_samples(std::span<const double> sorted_distances, const CurveBinning& binning = {});

}  // namespace corrtrans
