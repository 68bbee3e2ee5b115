#pragma once

// Transmittance T(t), extinction probability p(t) = -dT/dt and differential
// extinction probability mu(t) = p(t) / T(t) for the supported correlation
// models. All evaluators are immutable and safe to share between threads.

#include <array>
#include <type_traits>
#include <variant>
#include <vector>

#include "corrtrans/vec.hpp"

namespace corrtrans {

/// Shape/rate pair of the gamma distribution fitted to a concentration.
struct GammaParams {
  double alpha = 0.0;
  double beta = 0.0;
};

/// alpha = mean^2 / var, beta = mean / var. Throws std::domain_error unless
/// both inputs are positive.
GammaParams gamma_params(double mean_c, double var_c);

/// Uncorrelated (Poissonian) medium: T(t) = exp(-mu t).
struct ExponentialModel {
  double mean_extinction = 1.0;

  bool operator==(const ExponentialModel&) const = default;
};

/// Positively correlated medium whose local concentration is gamma distributed.
struct GammaConcentrationModel {
  double mean_concentration = 1.0;      // particles per unit volume
  double variance_concentration = 1.0;  // > 0; use ExponentialModel for 0
  double cross_section = 1.0;           // area per particle

  double alpha() const noexcept { return mean_concentration * mean_concentration / variance_concentration; }
  double beta() const noexcept { return mean_concentration / variance_concentration; }
  double mean_extinction() const noexcept { return mean_concentration * cross_section; }

  bool operator==(const GammaConcentrationModel&) const = default;
};

/// Perfectly negatively correlated medium (Bernoulli extinction):
/// T(t) = max(0, 1 - mu t).
struct LinearNegativeModel {
  double mean_extinction = 1.0;

  bool operator==(const LinearNegativeModel&) const = default;
};

/// Empirical model where the free path itself is Gamma(k, theta) distributed.
struct GammaPathLengthModel {
  double mean_free_path = 1.0;
  double variance_free_path = 1.0;

  double shape() const noexcept { return mean_free_path * mean_free_path / variance_free_path; }
  double scale() const noexcept { return variance_free_path / mean_free_path; }

  bool operator==(const GammaPathLengthModel&) const = default;
};

struct PhaseDescriptor {
  enum class Kind { Isotropic, HenyeyGreenstein };

  Kind kind = Kind::Isotropic;
  double g = 0.0;

  static PhaseDescriptor isotropic() noexcept { return {}; }
  static PhaseDescriptor henyey_greenstein(double g);

  bool operator==(const PhaseDescriptor&) const = default;
};

struct MixtureComponent;

/// Discrete mixture of scatterer populations. The components are independent
/// sub-populations, so T = sum w_k T_k and p = sum w_k p_k; the combined
/// mu(t) = sum w_k(t) mu_k(t) uses the survival-reweighted weights
/// w_k(t) = w_k T_k(t) / T(t), which equal w_k at t = 0.
struct MixtureModel {
  std::vector<MixtureComponent> components;

  bool operator==(const MixtureModel&) const;
};

class ExtinctionModel {
public:
  using Variant = std::variant<ExponentialModel, GammaConcentrationModel, LinearNegativeModel,
                               GammaPathLengthModel, MixtureModel>;

  /// Unit-rate exponential.
  ExtinctionModel();

  // Each constructor validates its parameters and throws std::domain_error.
  ExtinctionModel(ExponentialModel m);
  ExtinctionModel(GammaConcentrationModel m);
  ExtinctionModel(LinearNegativeModel m);
  ExtinctionModel(GammaPathLengthModel m);
  ExtinctionModel(MixtureModel m);

  /// Gamma-concentration model, or the exact exponential limit when var_c == 0.
  static ExtinctionModel gamma_concentration(double mean_c, double var_c, double sigma = 1.0);

  double transmittance(double t) const;
  double extinction_prob(double t) const;
  double diff_extinction(double t) const;

  /// mu(0) for every model except the gamma path-length one, where the
  /// equal-mean-free-path rate 1 / <t> is returned (mu(0) is 0 there for k > 1).
  double mean_extinction() const;

  const Variant& variant() const noexcept { return model_; }

  template <class T>
  const T* get_if() const noexcept {
    return std::get_if<T>(&model_);
  }

  bool operator==(const ExtinctionModel& o) const;

private:
  Variant model_;
};

struct MixtureComponent {
  double weight = 1.0;
  ExtinctionModel model;
  double albedo = 1.0;
  PhaseDescriptor phase;

  bool operator==(const MixtureComponent&) const = default;
};

inline bool MixtureModel::operator==(const MixtureModel& o) const { return components == o.components; }

// Closed forms for the gamma-concentration model. t < 0 throws std::domain_error.
double transmittance_gamma(double t, const GammaConcentrationModel& m);
double extinction_prob_gamma(double t, const GammaConcentrationModel& m);
double diff_extinction_gamma(double t, const GammaConcentrationModel& m);

double transmittance_exponential(double t, double mu);
double extinction_prob_exponential(double t, double mu);

/// Path-length density of a two-region medium:
/// p1 mu1 exp(-mu1 t) + (1 - p1) mu2 exp(-mu2 t).
double two_mixture_pathlength(double t, double mu1, double mu2, double p1);

struct ModelEval {
  double transmittance = 1.0;
  double extinction_prob = 0.0;
  double diff_extinction = 0.0;
};

ModelEval linear_model_eval(double t, double mu);

struct PathLengthEval {
  double extinction_prob = 0.0;
  double transmittance = 1.0;
  double diff_extinction = 0.0;
  /// T fell below kTransmittanceFloor; T is clamped and mu reports the
  /// asymptotic hazard 1 / theta.
  bool saturated = false;
};

inline constexpr double kTransmittanceFloor = 1e-300;

PathLengthEval gamma_pathlength_eval(double t, double k, double theta);

/// Symmetric positive-semidefinite variance ellipsoid of the concentration.
/// The projected value sqrt(w^T V w) replaces Var{C} for direction w.
class DirectionalVariance {
public:
  using Matrix = std::array<std::array<double, 3>, 3>;

  /// Throws std::domain_error when V is not symmetric or not PSD.
  explicit DirectionalVariance(const Matrix& v);

  static DirectionalVariance diagonal(double xx, double yy, double zz);
  static DirectionalVariance isotropic(double v) { return diagonal(v, v, v); }

  /// |omega| must be 1 within 1e-9.
  double operator()(const Vec3& omega) const;

  /// Gamma model along omega, or the exponential limit when the projection vanishes.
  ExtinctionModel model_along(const Vec3& omega, double mean_c, double sigma) const;

  const Matrix& matrix() const noexcept { return v_; }

private:
  Matrix v_;
};

/// Evaluators for mu(t), the scattering albedo Lambda(t) and the phase-function
/// weights of a mixture of scatterers.
class MixtureEvaluator {
public:
  /// Throws std::domain_error when the weights do not sum to one within 1e-12.
  explicit MixtureEvaluator(MixtureModel mixture);

  double diff_extinction(double t) const;
  double albedo(double t) const;

  /// Weight of each component's phase function at distance t (sums to one
  /// when any component scatters).
  std::vector<double> phase_weights(double t) const;

  /// Survival-reweighted population fractions w_k T_k(t) / T(t).
  std::vector<double> effective_weights(double t) const;

  const MixtureModel& model() const noexcept { return mixture_; }

private:
  MixtureModel mixture_;
};

MixtureEvaluator mixture_combine(const MixtureModel& mixture);

}  // namespace corrtrans
