#pragma once

// Small statistics toolbox shared by the diagnostics, the lab and the tests.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace corrtrans {

/// Welford accumulator.
class RunningStats {
public:
  void add(double x) noexcept;
  void merge(const RunningStats& o) noexcept;

  std::uint64_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  /// Unbiased sample variance (0 for fewer than two samples).
  double variance() const noexcept;
  double standard_error() const noexcept;

private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// sup |F_n - F| of sorted samples against a continuous CDF.
double ks_statistic_sorted(std::span<const double> sorted, const std::function<double(double)>& cdf);

/// Asymptotic Kolmogorov survival function P(sqrt(n) D > lambda).
double kolmogorov_survival(double lambda);

/// One-sample p-value with the Stephens small-sample correction.
double ks_pvalue(double d, double n);

struct TwoSampleKs {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample KS test on histograms sharing the same bins.
TwoSampleKs ks_two_sample_binned(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

/// Upper tail of the chi-square distribution.
double chi_square_pvalue(double chi2, double dof);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = slope x + intercept.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

struct ExponentialFit {
  double rate = 0.0;
  double amplitude = 1.0;
  /// Coefficient of determination of amplitude * exp(-rate t) against T,
  /// measured in linear T space.
  double r_squared = 0.0;
};

/// Fits T(t) ~ A exp(-rate t) by least squares on log T over the points with T > 0.
ExponentialFit fit_exponential(std::span<const double> t, std::span<const double> T);

}  // namespace corrtrans
