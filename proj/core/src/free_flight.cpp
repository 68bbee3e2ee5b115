#include "corrtrans/free_flight.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace corrtrans {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

void check_gamma(double alpha, double beta, double sigma) {
  require(alpha > 0.0 && beta > 0.0 && sigma > 0.0, "gamma sampler: alpha, beta and sigma must be positive");
}

void check_xi(double xi) { require(xi >= 0.0 && xi < 1.0, "sampler: xi must lie in [0, 1)"); }

double gamma_density(double t, double k, double theta) {
  if (t <= 0.0) return k < 1.0 ? std::numeric_limits<double>::infinity() : (k == 1.0 ? 1.0 / theta : 0.0);
  return boost::math::gamma_p_derivative(k, t / theta) / theta;
}

}  // namespace

double gamma_proportional_cdf(double t, double alpha, double beta, double sigma) {
  return -std::expm1((1.0 - alpha) * std::log1p(sigma * t / beta));
}

double gamma_general_cdf(double t, double alpha, double beta, double sigma) {
  return -std::expm1(-alpha * std::log1p(sigma * t / beta));
}

double exponential_cdf(double t, double mu) { return -std::expm1(-mu * t); }

double linear_cdf(double t, double mu) { return std::clamp(mu * t, 0.0, 1.0); }

double gamma_pathlength_cdf(double t, double k, double theta) {
  return t <= 0.0 ? 0.0 : boost::math::gamma_p(k, t / theta);
}

DistanceSample sample_gamma_proportional(double xi, double alpha, double beta, double sigma) {
  check_gamma(alpha, beta, sigma);
  require(alpha > 1.0, "proportional sampler needs alpha > 1; use sample_gamma_general");
  check_xi(xi);
  DistanceSample s;
  s.t = beta / sigma * std::expm1(std::log1p(-xi) / (1.0 - alpha));
  s.pdf = sigma * (alpha - 1.0) / beta * std::exp(-alpha * std::log1p(sigma * s.t / beta));
  return s;
}

DistanceSample sample_gamma_general(double xi, double alpha, double beta, double sigma) {
  check_gamma(alpha, beta, sigma);
  check_xi(xi);
  DistanceSample s;
  s.t = beta / sigma * std::expm1(-std::log1p(-xi) / alpha);
  s.pdf = sigma * alpha / beta * std::exp(-(1.0 + alpha) * std::log1p(sigma * s.t / beta));
  return s;
}

DistanceSample sample_exponential(double xi, double mu) {
  require(mu > 0.0, "exponential sampler: mu must be positive");
  check_xi(xi);
  DistanceSample s;
  s.t = -std::log1p(-xi) / mu;
  s.pdf = mu * std::exp(-mu * s.t);
  return s;
}

DistanceSample sample_linear(double xi, double mu) {
  require(mu > 0.0, "linear sampler: mu must be positive");
  check_xi(xi);
  DistanceSample s;
  s.t = xi / mu;
  s.pdf = mu;
  return s;
}

GammaVariate marsaglia_tsang(Rng& rng, double k) {
  require(k > 0.0, "gamma variate: shape must be positive");
  const bool boost = k < 1.0;
  const double d = (boost ? k + 1.0 : k) - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  GammaVariate g;
  for (;;) {
    ++g.proposals;
    const double x = rng.normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2 || std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
      g.value = d * v;
      break;
    }
  }
  if (boost) g.value *= std::pow(1.0 - rng.uniform(), 1.0 / k);
  return g;
}

DistanceSample sample_gamma_pathlength(Rng& rng, double k, double theta) {
  require(k > 0.0 && theta > 0.0, "gamma path-length sampler: k and theta must be positive");
  DistanceSample s;
  s.t = marsaglia_tsang(rng, k).value * theta;
  s.pdf = gamma_density(s.t, k, theta);
  return s;
}

double surface_hit_probability(double t_boundary, double alpha, double beta, double sigma) {
  check_gamma(alpha, beta, sigma);
  require(alpha > 1.0, "surface hit probability needs alpha > 1");
  require(t_boundary >= 0.0, "surface hit probability: distance must be >= 0");
  return std::exp((1.0 - alpha) * std::log1p(sigma * t_boundary / beta));
}

FlightSampler::FlightSampler(ExtinctionModel model, FlightStrategy strategy) : model_(std::move(model)) {
  if (model_.get_if<ExponentialModel>()) {
    method_ = Method::Exponential;
  } else if (const auto* g = model_.get_if<GammaConcentrationModel>()) {
    method_ = (strategy == FlightStrategy::Default && g->alpha() > 1.0) ? Method::GammaProportional
                                                                         : Method::GammaGeneral;
  } else if (model_.get_if<LinearNegativeModel>()) {
    method_ = Method::Linear;
  } else if (model_.get_if<GammaPathLengthModel>()) {
    method_ = Method::GammaPathLength;
  } else {
    method_ = Method::Mixture;
    double acc = 0.0;
    for (const auto& c : model_.get_if<MixtureModel>()->components) {
      components_.emplace_back(c.model, FlightStrategy::Analog);
      acc += c.weight;
      cumulative_.push_back(acc);
    }
    cumulative_.back() = 1.0;
  }
}

double FlightSampler::pdf(double t) const {
  if (method_ == Method::GammaProportional) {
    const auto* g = model_.get_if<GammaConcentrationModel>();
    const double a = g->alpha();
    const double b = g->beta();
    return g->cross_section * (a - 1.0) / b * std::exp(-a * std::log1p(g->cross_section * t / b));
  }
  return model_.extinction_prob(t);
}

double FlightSampler::survival(double t) const {
  if (method_ == Method::GammaProportional) {
    const auto* g = model_.get_if<GammaConcentrationModel>();
    return surface_hit_probability(t, g->alpha(), g->beta(), g->cross_section);
  }
  return model_.transmittance(t);
}

DistanceSample FlightSampler::sample(Rng& rng, double t_boundary) const {
  DistanceSample s;
  switch (method_) {
    case Method::Exponential:
      s = sample_exponential(rng.uniform(), model_.get_if<ExponentialModel>()->mean_extinction);
      break;
    case Method::GammaProportional:
    case Method::GammaGeneral: {
      const auto* g = model_.get_if<GammaConcentrationModel>();
      s = method_ == Method::GammaProportional
              ? sample_gamma_proportional(rng.uniform(), g->alpha(), g->beta(), g->cross_section)
              : sample_gamma_general(rng.uniform(), g->alpha(), g->beta(), g->cross_section);
      break;
    }
    case Method::Linear:
      s = sample_linear(rng.uniform(), model_.get_if<LinearNegativeModel>()->mean_extinction);
      break;
    case Method::GammaPathLength: {
      const auto* pl = model_.get_if<GammaPathLengthModel>();
      s = sample_gamma_pathlength(rng, pl->shape(), pl->scale());
      break;
    }
    case Method::Mixture: {
      const double u = rng.uniform();
      const auto k = static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), u) -
                                              cumulative_.begin());
      s = components_[std::min(k, components_.size() - 1)].sample(rng);
      break;
    }
  }

  if (s.t >= t_boundary) {
    s.t = t_boundary;
    s.pdf = 0.0;
    s.reached_boundary = true;
    if (method_ == Method::GammaProportional) {
      s.boundary_probability = survival(t_boundary);
      s.weight = model_.transmittance(t_boundary) / s.boundary_probability;
    } else {
      // Analog sampling: the sampler survival is T itself.
      s.boundary_probability = model_.transmittance(t_boundary);
      s.weight = 1.0;
    }
    return s;
  }

  if (method_ == Method::GammaProportional) {
    s.weight = model_.extinction_prob(s.t) / s.pdf;
  } else {
    if (method_ == Method::Mixture) s.pdf = model_.extinction_prob(s.t);
    s.weight = 1.0;
  }
  return s;
}

}  // namespace corrtrans
