#include "corrtrans/lab/particle_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace corrtrans::lab {

namespace {

Vec2 unit_direction(double u) {
  const double phi = 2.0 * std::numbers::pi * u;
  return {std::cos(phi), std::sin(phi)};
}

// Exponential step with mean `scale`.
double step_length(Rng& rng, double scale) { return -std::log1p(-rng.uniform()) * scale; }

void check_radius(double r) {
  if (!(r > 0.0 && r < 0.5)) throw std::domain_error("particle radius must lie in (0, 0.5)");
}

}  // namespace

std::size_t particle_count(double mean_extinction, double radius) {
  if (!(mean_extinction > 0.0)) throw std::domain_error("mean extinction must be positive");
  check_radius(radius);
  return static_cast<std::size_t>(std::llround(mean_extinction / (2.0 * radius)));
}

double wrap_unit(double x) noexcept {
  double w = x - std::floor(x);
  return w >= 1.0 ? 0.0 : w;
}

Vec2 wrap_unit(Vec2 p) noexcept { return {wrap_unit(p.x), wrap_unit(p.y)}; }

ParticleField2D gen_negative_medium(std::size_t n, double r, double c, std::uint64_t seed, double jitter) {
  Rng rng = Rng::stream(seed, 0);
  return gen_negative_medium(n, r, c, rng, jitter);
}

ParticleField2D gen_negative_medium(std::size_t n, double r, double c, Rng& rng, double jitter) {
  check_radius(r);
  if (!(c >= -1.0 && c <= 0.0)) throw std::domain_error("negative medium needs c in [-1, 0]");
  ParticleField2D f;
  f.radius = r;
  f.correlation = c;
  f.kind = FieldKind::NegativeLattice;
  if (n == 0) return f;

  // Spacing a of a hexagonal lattice with n sites per unit area.
  const double a = std::sqrt(2.0 / (std::sqrt(3.0) * static_cast<double>(n)));
  const auto cols = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(1.0 / a)));
  auto rows = std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(2.0 / (std::sqrt(3.0) * a))));
  rows += rows % 2;  // odd row count would break the staggering across the seam
  const double dx = 1.0 / static_cast<double>(cols);
  const double dy = 1.0 / static_cast<double>(rows);
  if (std::min(dx, std::hypot(0.5 * dx, dy)) < 2.0 * r) {
    f.warnings.push_back("lattice spacing below particle diameter; disks overlap");
  }

  const Vec2 shift{rng.uniform(), rng.uniform()};
  const double pp = 1.0 - std::abs(c);
  const double scale = pp * pp;
  f.positions.reserve(rows * cols);
  for (std::size_t j = 0; j < rows; ++j) {
    for (std::size_t i = 0; i < cols; ++i) {
      const std::uint64_t site = j * cols + i;
      Vec2 p{(static_cast<double>(i) + (j % 2 == 1 ? 0.5 : 0.0)) * dx, static_cast<double>(j) * dy};
      // Fixed sub-radius offset so that no disk hides exactly behind another
      // along a lattice axis.
      p = p + unit_direction(static_cast<double>(mix64(site) >> 11) * 0x1.0p-53) * (jitter * r);
      p = p + shift;
      if (pp > 0.0 && rng.uniform() < pp) {
        const double s = step_length(rng, scale);
        p = p + unit_direction(rng.uniform()) * s;
      }
      f.positions.push_back(wrap_unit(p));
    }
  }
  return f;
}

ParticleField2D gen_positive_medium(std::size_t n, double r, double c, std::uint64_t seed, std::size_t clusters) {
  Rng rng = Rng::stream(seed, 0);
  return gen_positive_medium(n, r, c, rng, clusters);
}

ParticleField2D gen_positive_medium(std::size_t n, double r, double c, Rng& rng, std::size_t clusters) {
  if (clusters == 0) throw std::domain_error("positive medium needs at least one cluster");
  std::vector<Vec2> seeds(std::min(clusters, std::max<std::size_t>(n, 1)));
  for (auto& s : seeds) s = {rng.uniform(), rng.uniform()};
  return gen_positive_from_seeds(n, r, c, seeds, rng);
}

ParticleField2D gen_positive_from_seeds(std::size_t n, double r, double c, std::span<const Vec2> seeds, Rng& rng) {
  check_radius(r);
  if (!(c > 0.0 && c < 1.0)) throw std::domain_error("positive medium needs c in (0, 1)");
  if (seeds.empty()) throw std::domain_error("positive medium needs at least one seed");
  ParticleField2D f;
  f.radius = r;
  f.correlation = c;
  f.kind = FieldKind::PositiveWalk;
  f.cluster_seeds.assign(seeds.begin(), seeds.end());
  f.positions.reserve(n);
  const double scale = (1.0 - c) * (1.0 - c);
  const std::size_t m = seeds.size();
  for (std::size_t k = 0; k < m; ++k) {
    // Walk k gets an equal share of the particles, the first ones absorbing the remainder.
    const std::size_t count = n / m + (k < n % m ? 1 : 0);
    Vec2 p = wrap_unit(seeds[k]);
    for (std::size_t i = 0; i < count; ++i) {
      if (i > 0) p = wrap_unit(p + unit_direction(rng.uniform()) * step_length(rng, scale));
      f.positions.push_back(p);
    }
  }
  return f;
}

ParticleField2D gen_uncorrelated_medium(std::size_t n, double r, Rng& rng) {
  check_radius(r);
  ParticleField2D f;
  f.radius = r;
  f.kind = FieldKind::Uncorrelated;
  f.positions.resize(n);
  for (auto& p : f.positions) p = {rng.uniform(), rng.uniform()};
  return f;
}

void validate(const FieldSpec& s) {
  check_radius(s.radius);
  if (!(s.mean_extinction > 0.0)) throw std::domain_error("mean extinction must be positive");
  switch (s.kind) {
    case FieldKind::NegativeLattice:
      if (!(s.correlation >= -1.0 && s.correlation <= 0.0)) throw std::domain_error("negative medium needs c in [-1, 0]");
      break;
    case FieldKind::PositiveWalk:
      if (!(s.correlation > 0.0 && s.correlation < 1.0)) throw std::domain_error("positive medium needs c in (0, 1)");
      if (s.clusters == 0) throw std::domain_error("positive medium needs at least one cluster");
      break;
    case FieldKind::Uncorrelated:
      break;
  }
  if (!(s.jitter >= 0.0)) throw std::domain_error("jitter must be >= 0");
}

ParticleField2D generate_field(const FieldSpec& s, Rng& rng) {
  validate(s);
  const std::size_t n = particle_count(s.mean_extinction, s.radius);
  switch (s.kind) {
    case FieldKind::NegativeLattice:
      return gen_negative_medium(n, s.radius, s.correlation, rng, s.jitter);
    case FieldKind::PositiveWalk:
      return gen_positive_medium(n, s.radius, s.correlation, rng, s.clusters);
    case FieldKind::Uncorrelated:
      break;
  }
  return gen_uncorrelated_medium(n, s.radius, rng);
}

}  // namespace corrtrans::lab
