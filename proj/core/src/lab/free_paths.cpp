#include "corrtrans/lab/free_paths.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "corrtrans/lab/particle_grid.hpp"
#include "corrtrans/parallel.hpp"

namespace corrtrans::lab {

namespace {

void check_counts(std::size_t realizations, std::size_t samples, std::size_t bins, double t_max) {
  if (realizations == 0 || samples == 0) throw std::domain_error("need at least one realization and one sample");
  if (bins == 0) throw std::domain_error("need at least one bin");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw std::domain_error("t_max must be positive and finite");
}

Vec2 direction_at(double angle) { return {std::cos(angle), std::sin(angle)}; }

Vec2 uniform_direction(Rng& rng) { return direction_at(2.0 * std::numbers::pi * rng.uniform()); }

}  // namespace

FreePathHistogram::FreePathHistogram(std::size_t bins, double t_max_) : t_max(t_max_), counts(bins, 0) {}

void FreePathHistogram::add(double t) {
  ++total;
  const double x = t / bin_width();
  if (!(t < t_max) || x >= static_cast<double>(counts.size())) {
    ++overflow;
    return;
  }
  ++counts[static_cast<std::size_t>(std::max(0.0, x))];
}

void FreePathHistogram::merge(const FreePathHistogram& o) {
  if (o.counts.size() != counts.size() || o.t_max != t_max) throw std::domain_error("histogram binning mismatch");
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
  overflow += o.overflow;
  total += o.total;
}

double FreePathHistogram::p(std::size_t i) const {
  if (total == 0) return 0.0;
  return static_cast<double>(counts.at(i)) / (static_cast<double>(total) * bin_width());
}

double FreePathHistogram::T(std::size_t i) const {
  if (total == 0) return 1.0;
  std::uint64_t before = 0;
  for (std::size_t j = 0; j < i && j < counts.size(); ++j) before += counts[j];
  return 1.0 - static_cast<double>(before) / static_cast<double>(total);
}

double FreePathHistogram::stderr_p(std::size_t i) const {
  if (total == 0) return 0.0;
  const double n = static_cast<double>(total);
  const double q = static_cast<double>(counts.at(i)) / n;
  return std::sqrt(q * (1.0 - q) / n) / bin_width();
}

FreePathHistogram estimate_free_paths(const FreePathConfig& cfg) {
  check_counts(cfg.realizations, cfg.samples, cfg.bins, cfg.t_max);
  validate(cfg.field);

  std::vector<FreePathHistogram> parts(cfg.realizations, FreePathHistogram(cfg.bins, cfg.t_max));
  std::vector<double> mean_ext(cfg.realizations, 0.0);
  const Vec2 source_dir = direction_at(cfg.angle);

  parallel_for(cfg.realizations, cfg.workers, [&](std::size_t r) {
    Rng field_rng = Rng::stream(cfg.seed, 2 * r);
    Rng ray_rng = Rng::stream(cfg.seed, 2 * r + 1);
    const ParticleField2D field = generate_field(cfg.field, field_rng);
    const ParticleGrid grid(field);
    mean_ext[r] = field.nominal_mean_extinction();
    auto& h = parts[r];
    for (std::size_t s = 0; s < cfg.samples; ++s) {
      Vec2 origin;
      Vec2 dir;
      if (cfg.origin == OriginClass::Source || field.positions.empty()) {
        origin = {0.0, ray_rng.uniform()};
        dir = source_dir;
      } else {
        origin = field.positions[ray_rng.uniform_index(field.positions.size())];
        dir = uniform_direction(ray_rng);
      }
      const RayHit hit = grid.trace(origin, dir, cfg.t_max);
      h.add(hit.hit ? hit.t : cfg.t_max);
    }
  });

  FreePathHistogram out(cfg.bins, cfg.t_max);
  out.origin = cfg.origin;
  out.angle = cfg.angle;
  out.realizations = cfg.realizations;
  out.samples = cfg.samples;
  double mu = 0.0;
  for (std::size_t r = 0; r < cfg.realizations; ++r) {
    out.merge(parts[r]);
    mu += mean_ext[r];
  }
  out.nominal_mean_extinction = mu / static_cast<double>(cfg.realizations);
  return out;
}

ParticleField2D SeedSharingStrategy::make_second(const ParticleField2D& first, const FieldSpec& second, double c12,
                                                 Rng& rng) const {
  if (!(std::abs(c12) < 1.0)) throw std::domain_error("cross-correlation must satisfy |c12| < 1");
  if (c12 == 0.0) return generate_field(second, rng);
  if (first.kind != FieldKind::PositiveWalk || second.kind != FieldKind::PositiveWalk) {
    throw std::domain_error("nonzero cross-correlation needs positive-walk media on both sides");
  }
  validate(second);
  const std::size_t n = particle_count(second.mean_extinction, second.radius);
  const std::size_t m = std::max<std::size_t>(1, std::min(second.clusters, std::max<std::size_t>(n, 1)));
  const auto linked = static_cast<std::size_t>(std::llround(std::abs(c12) * static_cast<double>(m)));

  std::vector<Vec2> seeds;
  seeds.reserve(m);
  if (c12 > 0.0) {
    for (std::size_t k = 0; k < linked; ++k) seeds.push_back(first.cluster_seeds[k % first.cluster_seeds.size()]);
  } else {
    // Coarse occupancy of medium 1; candidates land in the emptiest spots.
    constexpr int kCells = 16;
    std::vector<int> occupancy(kCells * kCells, 0);
    auto cell_of = [](double v) { return std::min(kCells - 1, static_cast<int>(v * kCells)); };
    for (const auto& p : first.positions) ++occupancy[cell_of(p.y) * kCells + cell_of(p.x)];
    auto density_at = [&](Vec2 p) {
      const int cx = cell_of(p.x);
      const int cy = cell_of(p.y);
      int sum = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          sum += occupancy[((cy + dy + kCells) % kCells) * kCells + (cx + dx + kCells) % kCells];
        }
      }
      return sum;
    };
    for (std::size_t k = 0; k < linked; ++k) {
      Vec2 best{rng.uniform(), rng.uniform()};
      int best_density = density_at(best);
      for (int c = 1; c < 32; ++c) {
        const Vec2 cand{rng.uniform(), rng.uniform()};
        const int d = density_at(cand);
        if (d < best_density) {
          best = cand;
          best_density = d;
        }
      }
      seeds.push_back(best);
    }
  }
  while (seeds.size() < m) seeds.push_back({rng.uniform(), rng.uniform()});
  return gen_positive_from_seeds(n, second.radius, second.correlation, seeds, rng);
}

BoundaryResult run_boundary_experiment(const BoundaryExperiment& cfg, const CrossCorrelationStrategy& strategy) {
  check_counts(cfg.realizations, cfg.samples, cfg.bins, cfg.t_max);
  if (!(std::abs(cfg.c12) < 1.0)) throw std::domain_error("cross-correlation must satisfy |c12| < 1");
  if (!(cfg.switch_distance > 0.0) || !std::isfinite(cfg.switch_distance)) {
    throw std::domain_error("switch distance must be positive");
  }
  validate(cfg.medium1);
  validate(cfg.medium2);
  if (cfg.c12 != 0.0 &&
      (cfg.medium1.kind != FieldKind::PositiveWalk || cfg.medium2.kind != FieldKind::PositiveWalk)) {
    throw std::domain_error("nonzero cross-correlation needs positive-walk media on both sides");
  }

  std::vector<FreePathHistogram> parts(cfg.realizations, FreePathHistogram(cfg.bins, cfg.t_max));
  std::vector<std::uint64_t> reached(cfg.realizations, 0);
  std::vector<double> mean_ext(cfg.realizations, 0.0);
  const Vec2 dir = direction_at(cfg.angle);

  parallel_for(cfg.realizations, cfg.workers, [&](std::size_t r) {
    Rng field_rng = Rng::stream(cfg.seed, 3 * r);
    Rng second_rng = Rng::stream(cfg.seed, 3 * r + 1);
    Rng ray_rng = Rng::stream(cfg.seed, 3 * r + 2);
    const ParticleField2D first = generate_field(cfg.medium1, field_rng);
    const ParticleField2D second = strategy.make_second(first, cfg.medium2, cfg.c12, second_rng);
    const ParticleGrid grid1(first);
    const ParticleGrid grid2(second);
    mean_ext[r] = second.nominal_mean_extinction();
    for (std::size_t s = 0; s < cfg.samples; ++s) {
      const Vec2 origin{0.0, ray_rng.uniform()};
      if (grid1.trace(origin, dir, cfg.switch_distance).hit) continue;
      ++reached[r];
      const RayHit hit = grid2.trace(origin + dir * cfg.switch_distance, dir, cfg.t_max);
      parts[r].add(hit.hit ? hit.t : cfg.t_max);
    }
  });

  BoundaryResult out;
  out.post_interface = FreePathHistogram(cfg.bins, cfg.t_max);
  out.post_interface.angle = cfg.angle;
  out.post_interface.realizations = cfg.realizations;
  out.post_interface.samples = cfg.samples;
  double mu = 0.0;
  for (std::size_t r = 0; r < cfg.realizations; ++r) {
    out.post_interface.merge(parts[r]);
    out.reached_interface += reached[r];
    mu += mean_ext[r];
  }
  out.per_realization = std::move(parts);
  out.post_interface.nominal_mean_extinction = mu / static_cast<double>(cfg.realizations);
  out.launched = static_cast<std::uint64_t>(cfg.realizations) * cfg.samples;
  return out;
}

double hit_fraction_between(const FreePathHistogram& h, double t0, double t1) {
  if (h.total == 0) return 0.0;
  std::uint64_t hits = 0;
  for (std::size_t i = 0; i < h.bins(); ++i) {
    const double c = h.bin_center(i);
    if (c >= t0 && c < t1) hits += h.counts[i];
  }
  return static_cast<double>(hits) / static_cast<double>(h.total);
}

EnsembleEstimate ensemble_hit_fraction(const std::vector<FreePathHistogram>& parts, double t0, double t1) {
  // Ratio estimator sum(hits) / sum(rays) with its linearized variance.
  double hits = 0.0;
  double rays = 0.0;
  std::vector<std::pair<double, double>> per;
  per.reserve(parts.size());
  for (const auto& h : parts) {
    const double n = static_cast<double>(h.total);
    const double k = hit_fraction_between(h, t0, t1) * n;
    per.emplace_back(k, n);
    hits += k;
    rays += n;
  }
  EnsembleEstimate e;
  if (rays == 0.0) return e;
  e.mean = hits / rays;
  const double m = static_cast<double>(per.size());
  if (m < 2) return e;
  const double mean_n = rays / m;
  double ss = 0.0;
  for (const auto& [k, n] : per) ss += (k - e.mean * n) * (k - e.mean * n);
  e.standard_error = std::sqrt(ss / (m * (m - 1.0))) / mean_n;
  return e;
}

}  // namespace corrtrans::lab
