#include "corrtrans/extinction_curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace corrtrans {

ExtinctionCurve tabulate(const ExtinctionModel& model, double t_min, double t_max, std::size_t steps) {
  if (steps == 0) throw std::domain_error("tabulate: need at least one step");
  if (!(t_min >= 0.0) || !(t_max >= t_min)) throw std::domain_error("tabulate: need 0 <= t_min <= t_max");
  ExtinctionCurve c;
  c.t.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = steps == 1 ? t_min
                                : t_min + (t_max - t_min) * static_cast<double>(i) / static_cast<double>(steps - 1);
    c.t.push_back(t);
    c.transmittance.push_back(model.transmittance(t));
    c.extinction_prob.push_back(model.extinction_prob(t));
    c.diff_extinction.push_back(model.diff_extinction(t));
  }
  return c;
}

ExtinctionCurve extinction_from_samples(std::span<const double> s, const CurveBinning& binning) {
  if (s.empty()) throw std::domain_error("extinction_from_samples: no samples");
  if (binning.bins == 0) throw std::domain_error("extinction_from_samples: need at least one bin");
  if (!std::is_sorted(s.begin(), s.end())) throw std::domain_error("extinction_from_samples: samples must be sorted");
  if (!(s.front() >= 0.0)) throw std::domain_error("extinction_from_samples: distances must be >= 0");

  double t_max = binning.t_max;
  if (!(t_max > 0.0)) {
    const double q = std::clamp(binning.upper_quantile, 0.0, 1.0);
    const auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(s.size() - 1)));
    t_max = s[idx];
  }
  if (!(t_max > 0.0)) t_max = s.back() > 0.0 ? s.back() : 1.0;

  const std::size_t bins = binning.bins;
  const double dt = t_max / static_cast<double>(bins);
  const double n = static_cast<double>(s.size());

  ExtinctionCurve c;
  c.t.resize(bins);
  c.transmittance.resize(bins);
  c.extinction_prob.resize(bins);
  c.diff_extinction.resize(bins);

  auto it = s.begin();
  std::size_t before = 0;
  for (std::size_t i = 0; i < bins; ++i) {
    const double lo = dt * static_cast<double>(i);
    const double hi = i + 1 == bins ? t_max : dt * static_cast<double>(i + 1);
    const auto end = std::lower_bound(it, s.end(), hi);
    const auto count = static_cast<std::size_t>(end - it);
    c.t[i] = lo;
    c.transmittance[i] = 1.0 - static_cast<double>(before) / n;
    c.extinction_prob[i] = static_cast<double>(count) / (n * dt);
    c.diff_extinction[i] = c.transmittance[i] > 0.0 ? c.extinction_prob[i] / c.transmittance[i] : 0.0;
    before += count;
    it = end;
  }
  return c;
}

}  // namespace corrtrans
