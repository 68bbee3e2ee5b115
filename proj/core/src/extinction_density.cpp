#include "corrtrans/extinction_density.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace corrtrans {

namespace {

constexpr double kTailMass = 1e-12;
constexpr double kQuadTolerance = 1e-14;

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

double integrate(const std::function<double(double)>& f, double a, double b) {
  // The integrator grows its abscissa tables lazily, so keep one per thread.
  thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
  if (!(b > a)) return 0.0;
  return integrator.integrate(f, a, b, kQuadTolerance);
}

double mu_power(double mu, int order) {
  switch (order) {
    case 0: return 1.0;
    case 1: return mu;
    default: return mu * mu;
  }
}

}  // namespace

ExtinctionDensity ExtinctionDensity::gamma(double alpha, double beta, double sigma) {
  require(alpha > 0.0 && beta > 0.0 && sigma > 0.0, "gamma density: parameters must be positive");
  ExtinctionDensity d;
  d.kind_ = Kind::Gamma;
  d.alpha_ = alpha;
  d.rate_ = beta / sigma;
  d.mu_max_ = boost::math::gamma_q_inv(alpha, kTailMass) / d.rate_;
  return d;
}

ExtinctionDensity ExtinctionDensity::analytic(std::function<double(double)> pdf, double mu_max) {
  require(static_cast<bool>(pdf), "analytic density: empty function");
  require(mu_max > 0.0 && std::isfinite(mu_max), "analytic density: mu_max must be positive");
  ExtinctionDensity d;
  d.kind_ = Kind::Analytic;
  d.mu_max_ = mu_max;
  d.pdf_ = std::move(pdf);
  const double norm = integrate(
      [&](double mu) {
        const double v = d.pdf_(mu);
        require(v >= 0.0, "analytic density: negative value");
        return v;
      },
      0.0, mu_max);
  require(std::abs(norm - 1.0) <= kNormTolerance, "analytic density: not normalized");
  return d;
}

ExtinctionDensity ExtinctionDensity::tabulated(std::vector<double> mu, std::vector<double> pdf) {
  require(mu.size() == pdf.size() && mu.size() >= 2, "tabulated density: need matching arrays of size >= 2");
  require(mu.front() >= 0.0, "tabulated density: abscissae must be >= 0");
  double norm = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    require(pdf[i] >= 0.0 && std::isfinite(pdf[i]), "tabulated density: values must be finite and >= 0");
    if (i > 0) {
      require(mu[i] > mu[i - 1], "tabulated density: abscissae must be strictly increasing");
      norm += 0.5 * (pdf[i] + pdf[i - 1]) * (mu[i] - mu[i - 1]);
    }
  }
  require(std::abs(norm - 1.0) <= kNormTolerance, "tabulated density: not normalized");
  ExtinctionDensity d;
  d.kind_ = Kind::Tabulated;
  d.mu_max_ = mu.back();
  d.mu_ = std::move(mu);
  d.values_ = std::move(pdf);
  return d;
}

ExtinctionDensity ExtinctionDensity::atoms(std::vector<double> mu, std::vector<double> weights) {
  require(mu.size() == weights.size() && !mu.empty(), "atomic density: need matching non-empty arrays");
  double norm = 0.0;
  double mu_max = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    require(mu[i] >= 0.0 && std::isfinite(mu[i]), "atomic density: locations must be finite and >= 0");
    require(weights[i] >= 0.0, "atomic density: weights must be >= 0");
    norm += weights[i];
    mu_max = std::max(mu_max, mu[i]);
  }
  require(std::abs(norm - 1.0) <= kNormTolerance, "atomic density: weights not normalized");
  ExtinctionDensity d;
  d.kind_ = Kind::Atoms;
  d.mu_max_ = mu_max;
  d.mu_ = std::move(mu);
  d.values_ = std::move(weights);
  return d;
}

double ExtinctionDensity::operator()(double mu) const {
  switch (kind_) {
    case Kind::Gamma: {
      if (mu <= 0.0) return alpha_ < 1.0 ? std::numeric_limits<double>::infinity() : (alpha_ == 1.0 ? rate_ : 0.0);
      return boost::math::gamma_p_derivative(alpha_, mu * rate_) * rate_;
    }
    case Kind::Analytic:
      return (mu < 0.0 || mu > mu_max_) ? 0.0 : pdf_(mu);
    case Kind::Tabulated: {
      if (mu < mu_.front() || mu > mu_.back()) return 0.0;
      const auto it = std::upper_bound(mu_.begin(), mu_.end(), mu);
      if (it == mu_.end()) return values_.back();
      const std::size_t i = static_cast<std::size_t>(it - mu_.begin());
      const double f = (mu - mu_[i - 1]) / (mu_[i] - mu_[i - 1]);
      return values_[i - 1] + f * (values_[i] - values_[i - 1]);
    }
    case Kind::Atoms:
      return 0.0;
  }
  return 0.0;
}

double moment_numeric(const ExtinctionDensity& d, double t, int order) {
  require(t >= 0.0, "transmittance_numeric: distance must be >= 0");
  require(order >= 0 && order <= 2, "moment_numeric: order must be 0, 1 or 2");
  using Kind = ExtinctionDensity::Kind;
  switch (d.kind_) {
    case Kind::Gamma: {
      // Integrate in x = rate * mu with the exponentials merged, so that
      // neither x^(alpha-1) nor exp(-mu t) is evaluated on its own.
      const double a = d.alpha_;
      const double k = 1.0 + t / d.rate_;
      const double log_norm = std::lgamma(a) + order * std::log(d.rate_);
      const auto f = [&](double x) {
        if (x <= 0.0) return 0.0;
        return std::exp((a - 1.0 + order) * std::log(x) - k * x - log_norm);
      };
      return integrate(f, 0.0, d.mu_max_ * d.rate_);
    }
    case Kind::Analytic:
      return integrate([&](double mu) { return mu_power(mu, order) * std::exp(-mu * t) * d.pdf_(mu); }, 0.0,
                       d.mu_max_);
    case Kind::Tabulated: {
      double sum = 0.0;
      for (std::size_t i = 1; i < d.mu_.size(); ++i) {
        const double a = d.mu_[i - 1];
        const double b = d.mu_[i];
        const double fa = d.values_[i - 1];
        const double fb = d.values_[i];
        const auto f = [&](double mu) {
          const double lin = fa + (mu - a) / (b - a) * (fb - fa);
          return mu_power(mu, order) * std::exp(-mu * t) * lin;
        };
        sum += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 10, kQuadTolerance);
      }
      return sum;
    }
    case Kind::Atoms: {
      double sum = 0.0;
      for (std::size_t i = 0; i < d.mu_.size(); ++i) {
        sum += d.values_[i] * mu_power(d.mu_[i], order) * std::exp(-d.mu_[i] * t);
      }
      return sum;
    }
  }
  return 0.0;
}

double transmittance_numeric(const ExtinctionDensity& density, double t) { return moment_numeric(density, t, 0); }

double extinction_prob_numeric(const ExtinctionDensity& density, double t) { return moment_numeric(density, t, 1); }

}  // namespace corrtrans
