#pragma once

// Procedural 2D disk fields on the periodic unit square.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "corrtrans/rng.hpp"
#include "corrtrans/vec.hpp"

namespace corrtrans::lab {

enum class FieldKind { NegativeLattice, PositiveWalk, Uncorrelated };

struct ParticleField2D {
  std::vector<Vec2> positions;  // wrapped into [0, 1)^2
  double radius = 1e-5;
  double correlation = 0.0;
  FieldKind kind = FieldKind::Uncorrelated;
  /// Starting points of the random walks (positive fields only).
  std::vector<Vec2> cluster_seeds;
  std::vector<std::string> warnings;

  /// Mean extinction of the field seen from a random point: N * 2r.
  double nominal_mean_extinction() const noexcept {
    return static_cast<double>(positions.size()) * 2.0 * radius;
  }
};

struct FieldSpec {
  FieldKind kind = FieldKind::Uncorrelated;
  double correlation = 0.0;
  double radius = 1e-5;
  /// Target mean extinction; the particle count is round(mu / (2 r)).
  double mean_extinction = 2.0;
  /// Number of independent random walks for positive fields.
  std::size_t clusters = 1;
  /// Deterministic lattice jitter as a fraction of the radius.
  double jitter = 0.1;
};

std::size_t particle_count(double mean_extinction, double radius);

/// Wraps into [0, 1).
double wrap_unit(double x) noexcept;
Vec2 wrap_unit(Vec2 p) noexcept;

/// Hexagonal lattice fitted to the torus (even row count, spacing adjusted
/// per axis) with a small deterministic jitter, a random global translation,
/// and each site displaced with probability 1 - |c| by -ln(xi) (1 - |c|)^2.
/// The site count is the closest lattice to n and may differ from it slightly.
ParticleField2D gen_negative_medium(std::size_t n, double r, double c, std::uint64_t seed, double jitter = 0.1);
ParticleField2D gen_negative_medium(std::size_t n, double r, double c, Rng& rng, double jitter = 0.1);

/// `clusters` random walks with steps -ln(xi) (1 - c)^2 in uniform directions;
/// the first point of each walk is uniform.
ParticleField2D gen_positive_medium(std::size_t n, double r, double c, std::uint64_t seed, std::size_t clusters = 1);
ParticleField2D gen_positive_medium(std::size_t n, double r, double c, Rng& rng, std::size_t clusters = 1);

/// Positive field whose walks start at the given seeds.
ParticleField2D gen_positive_from_seeds(std::size_t n, double r, double c, std::span<const Vec2> seeds, Rng& rng);

ParticleField2D gen_uncorrelated_medium(std::size_t n, double r, Rng& rng);

ParticleField2D generate_field(const FieldSpec& spec, Rng& rng);

void validate(const FieldSpec& spec);

}  // namespace corrtrans::lab
