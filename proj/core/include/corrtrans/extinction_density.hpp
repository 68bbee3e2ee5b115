#pragma once

// Beam-averaged transmittance T(t) = int exp(-mu t) p(mu) dmu for an arbitrary
// distribution of extinction across the beam front. Used as the quadrature
// oracle for the closed forms.

#include <functional>
#include <vector>

namespace corrtrans {

class ExtinctionDensity {
public:
  enum class Kind { Gamma, Analytic, Tabulated, Atoms };

  /// Extinction mu = sigma * C with C ~ Gamma(alpha, rate beta).
  static ExtinctionDensity gamma(double alpha, double beta, double sigma = 1.0);

  /// Arbitrary density supported on [0, mu_max]. Normalization is checked by
  /// quadrature.
  static ExtinctionDensity analytic(std::function<double(double)> pdf, double mu_max);

  /// Piecewise-linear density through (mu_i, pdf_i); mu strictly increasing, mu_0 >= 0.
  static ExtinctionDensity tabulated(std::vector<double> mu, std::vector<double> pdf);

  /// Sum of point masses weights_i * delta(mu - mu_i).
  static ExtinctionDensity atoms(std::vector<double> mu, std::vector<double> weights);

  Kind kind() const noexcept { return kind_; }

  /// Upper end of the support (tail mass beyond it < 1e-12 for the gamma case).
  double mu_max() const noexcept { return mu_max_; }

  /// Density value; point masses evaluate to 0.
  double operator()(double mu) const;

  /// Normalization tolerance enforced at construction.
  static constexpr double kNormTolerance = 1e-9;

private:
  ExtinctionDensity() = default;

  friend double transmittance_numeric(const ExtinctionDensity&, double);
  friend double extinction_prob_numeric(const ExtinctionDensity&, double);
  friend double moment_numeric(const ExtinctionDensity&, double, int);

  Kind kind_ = Kind::Analytic;
  double alpha_ = 0.0;
  double rate_ = 0.0;  // of mu, i.e. beta / sigma
  double mu_max_ = 0.0;
  std::function<double(double)> pdf_;
  std::vector<double> mu_;
  std::vector<double> values_;
};

/// int exp(-mu t) p(mu) dmu by adaptive quadrature. t >= 0.
double transmittance_numeric(const ExtinctionDensity& density, double t);

/// int mu exp(-mu t) p(mu) dmu, i.e. the extinction probability -dT/dt.
double extinction_prob_numeric(const ExtinctionDensity& density, double t);

/// int mu^order exp(-mu t) p(mu) dmu for order in {0, 1, 2}.
double moment_numeric(const ExtinctionDensity& density, double t, int order);

}  // namespace corrtrans
