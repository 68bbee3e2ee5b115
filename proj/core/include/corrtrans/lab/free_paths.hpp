#pragma once

// Free-path statistics of rays launched through ensembles of 2D particle fields.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "corrtrans/lab/particle_field.hpp"

namespace corrtrans::lab {

enum class OriginClass { Source, Scatterer };

/// Default launch angle for source rays: tan(theta) is the golden-ratio
/// conjugate, an irrational slope that never lines up with the lattice.
inline constexpr double kDefaultSourceAngle = 0.55357435889704525;

/// Integer histogram of free paths; everything at or beyond t_max lands in
/// the overflow bin, so the survival estimate is unbiased up to t_max.
struct FreePathHistogram {
  OriginClass origin = OriginClass::Source;
  double angle = kDefaultSourceAngle;
  double t_max = 1.0;
  std::vector<std::uint64_t> counts;
  std::uint64_t overflow = 0;
  std::uint64_t total = 0;
  std::size_t realizations = 0;
  std::size_t samples = 0;
  /// N * 2r of the traced field(s); the rate of the equal-mean exponential.
  double nominal_mean_extinction = 0.0;

  FreePathHistogram() = default;
  FreePathHistogram(std::size_t bins, double t_max);

  void add(double t);
  /// Sums counts; bins and range must match.
  void merge(const FreePathHistogram& o);

  std::size_t bins() const noexcept { return counts.size(); }
  double bin_width() const noexcept { return t_max / static_cast<double>(counts.size()); }
  double bin_left(std::size_t i) const noexcept { return bin_width() * static_cast<double>(i); }
  double bin_center(std::size_t i) const noexcept { return bin_width() * (static_cast<double>(i) + 0.5); }

  /// Density estimate count_i / (total * width).
  double p(std::size_t i) const;
  /// Survival at the left edge of bin i: 1 - sum_{j < i} p_j * width.
  double T(std::size_t i) const;
  /// Binomial standard error of p(i).
  double stderr_p(std::size_t i) const;
};

struct FreePathConfig {
  FieldSpec field;
  OriginClass origin = OriginClass::Source;
  double angle = kDefaultSourceAngle;
  std::size_t realizations = 200;
  std::size_t samples = 1000;
  std::size_t bins = 64;
  double t_max = 5.0;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

/// Source rays start on the x = 0 line at a uniform height and travel at the
/// fixed angle; scatterer rays start at a uniformly chosen particle in a
/// uniform direction. Result is independent of the worker count.
FreePathHistogram estimate_free_paths(const FreePathConfig& config);

/// Builds the second medium of a boundary experiment from the first one.
class CrossCorrelationStrategy {
public:
  virtual ~CrossCorrelationStrategy() = default;

  /// Field for medium 2 given medium 1, the requested spec and c12.
  virtual ParticleField2D make_second(const ParticleField2D& first, const FieldSpec& second, double c12,
                                      Rng& rng) const = 0;
};

/// c12 = +x reuses round(x M) of the M medium-1 walk seeds; c12 = -x places
/// that many seeds in the emptiest of 32 candidate spots of medium 1; the
/// remaining seeds are uniform. c12 = 0 generates medium 2 independently.
/// Nonzero c12 requires positive-walk media on both sides.
class SeedSharingStrategy final : public CrossCorrelationStrategy {
public:
  ParticleField2D make_second(const ParticleField2D& first, const FieldSpec& second, double c12,
                              Rng& rng) const override;
};

struct BoundaryExperiment {
  FieldSpec medium1;
  FieldSpec medium2;
  double c12 = 0.0;
  /// Distance along the ray at which medium 1 ends and medium 2 begins.
  double switch_distance = 0.5;
  double angle = kDefaultSourceAngle;
  std::size_t realizations = 200;
  std::size_t samples = 1000;
  std::size_t bins = 64;
  /// Post-interface histogram range.
  double t_max = 5.0;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

struct BoundaryResult {
  /// Free paths measured from the interface, over the rays that reached it.
  FreePathHistogram post_interface;
  std::uint64_t launched = 0;
  std::uint64_t reached_interface = 0;
  /// Post-interface histogram of each realization, for ensemble error bars.
  std::vector<FreePathHistogram> per_realization;
};

/// Fraction of the rays in `h` that stop in [t0, t1) (bins are assigned by their centers).
double hit_fraction_between(const FreePathHistogram& h, double t0, double t1);

struct EnsembleEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Ratio estimate of the hit fraction in [t0, t1) with a standard error from
/// the spread between realizations (rays of one realization are correlated).
EnsembleEstimate ensemble_hit_fraction(const std::vector<FreePathHistogram>& realizations, double t0, double t1);

/// Throws std::domain_error for |c12| >= 1 or non-positive switch distance.
BoundaryResult run_boundary_experiment(const BoundaryExperiment& config,
                                       const CrossCorrelationStrategy& strategy = SeedSharingStrategy{});

}  // namespace corrtrans::lab
