#include "corrtrans/transmittance.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace corrtrans {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

void check_distance(double t) { require(t >= 0.0 && !std::isnan(t), "distance must be >= 0"); }

void validate(const ExponentialModel& m) {
  require(positive_finite(m.mean_extinction), "exponential: mean extinction must be positive");
}

void validate(const GammaConcentrationModel& m) {
  require(positive_finite(m.mean_concentration), "gamma: mean concentration must be positive");
  require(positive_finite(m.variance_concentration),
          "gamma: concentration variance must be positive (use the exponential model for 0)");
  require(positive_finite(m.cross_section), "gamma: cross section must be positive");
  require(positive_finite(m.alpha()) && positive_finite(m.beta()), "gamma: alpha/beta out of range");
}

void validate(const LinearNegativeModel& m) {
  require(positive_finite(m.mean_extinction), "linear: mean extinction must be positive");
}

void validate(const GammaPathLengthModel& m) {
  require(positive_finite(m.mean_free_path), "gamma path length: mean must be positive");
  require(positive_finite(m.variance_free_path), "gamma path length: variance must be positive");
}

void validate(const MixtureModel& m) {
  require(!m.components.empty(), "mixture: no components");
  double sum = 0.0;
  for (const auto& c : m.components) {
    require(c.weight > 0.0 && c.weight <= 1.0, "mixture: weights must lie in (0, 1]");
    require(c.albedo >= 0.0 && c.albedo <= 1.0, "mixture: albedo must lie in [0, 1]");
    require(c.model.get_if<MixtureModel>() == nullptr, "mixture: nested mixtures are not supported");
    sum += c.weight;
  }
  require(std::abs(sum - 1.0) <= 1e-12, "mixture: weights must sum to 1");
}

// (T, p) for every non-mixture model.
struct TP {
  double T;
  double p;
};

TP eval_tp(const ExtinctionModel::Variant& v, double t);

}  // namespace

GammaParams gamma_params(double mean_c, double var_c) {
  require(positive_finite(mean_c), "gamma_params: mean must be positive");
  require(positive_finite(var_c), "gamma_params: variance must be positive");
  return {mean_c * mean_c / var_c, mean_c / var_c};
}

PhaseDescriptor PhaseDescriptor::henyey_greenstein(double g) {
  require(g > -1.0 && g < 1.0, "Henyey-Greenstein asymmetry must lie in (-1, 1)");
  return {Kind::HenyeyGreenstein, g};
}

double transmittance_exponential(double t, double mu) {
  check_distance(t);
  return std::exp(-mu * t);
}

double extinction_prob_exponential(double t, double mu) {
  check_distance(t);
  return mu * std::exp(-mu * t);
}

double transmittance_gamma(double t, const GammaConcentrationModel& m) {
  check_distance(t);
  // exp/log1p keeps the near-exponential regime (huge alpha) accurate.
  return std::exp(-m.alpha() * std::log1p(m.cross_section * t / m.beta()));
}

double extinction_prob_gamma(double t, const GammaConcentrationModel& m) {
  check_distance(t);
  return m.mean_extinction() * std::exp(-(1.0 + m.alpha()) * std::log1p(m.cross_section * t / m.beta()));
}

double diff_extinction_gamma(double t, const GammaConcentrationModel& m) {
  check_distance(t);
  return m.mean_extinction() / (1.0 + m.cross_section * t / m.beta());
}

double two_mixture_pathlength(double t, double mu1, double mu2, double p1) {
  check_distance(t);
  require(positive_finite(mu1) && positive_finite(mu2), "two_mixture_pathlength: rates must be positive");
  require(p1 >= 0.0 && p1 <= 1.0, "two_mixture_pathlength: p1 must lie in [0, 1]");
  return p1 * mu1 * std::exp(-mu1 * t) + (1.0 - p1) * mu2 * std::exp(-mu2 * t);
}

ModelEval linear_model_eval(double t, double mu) {
  check_distance(t);
  require(positive_finite(mu), "linear: mean extinction must be positive");
  const double remaining = 1.0 - mu * t;
  if (remaining <= 0.0) return {0.0, 0.0, 0.0};
  return {remaining, mu, mu / remaining};
}

PathLengthEval gamma_pathlength_eval(double t, double k, double theta) {
  check_distance(t);
  require(positive_finite(k) && positive_finite(theta), "gamma path length: k and theta must be positive");
  PathLengthEval r;
  if (t == 0.0) {
    r.transmittance = 1.0;
    if (k < 1.0) {
      r.extinction_prob = std::numeric_limits<double>::infinity();
    } else if (k == 1.0) {
      r.extinction_prob = 1.0 / theta;
    } else {
      r.extinction_prob = 0.0;
    }
    r.diff_extinction = r.extinction_prob;
    return r;
  }
  const double x = t / theta;
  r.extinction_prob = boost::math::gamma_p_derivative(k, x) / theta;
  r.transmittance = boost::math::gamma_q(k, x);
  if (r.transmittance < kTransmittanceFloor) {
    r.transmittance = kTransmittanceFloor;
    r.diff_extinction = 1.0 / theta;
    r.saturated = true;
  } else {
    r.diff_extinction = r.extinction_prob / r.transmittance;
  }
  return r;
}

namespace {

TP eval_tp(const ExtinctionModel::Variant& v, double t) {
  if (const auto* e = std::get_if<ExponentialModel>(&v)) {
    const double T = std::exp(-e->mean_extinction * t);
    return {T, e->mean_extinction * T};
  }
  if (const auto* g = std::get_if<GammaConcentrationModel>(&v)) {
    return {transmittance_gamma(t, *g), extinction_prob_gamma(t, *g)};
  }
  if (const auto* l = std::get_if<LinearNegativeModel>(&v)) {
    const ModelEval e = linear_model_eval(t, l->mean_extinction);
    return {e.transmittance, e.extinction_prob};
  }
  if (const auto* pl = std::get_if<GammaPathLengthModel>(&v)) {
    const PathLengthEval e = gamma_pathlength_eval(t, pl->shape(), pl->scale());
    return {e.transmittance, e.extinction_prob};
  }
  const auto& mix = std::get<MixtureModel>(v);
  TP sum{0.0, 0.0};
  for (const auto& c : mix.components) {
    const TP k = eval_tp(c.model.variant(), t);
    sum.T += c.weight * k.T;
    sum.p += c.weight * k.p;
  }
  return sum;
}

double mixture_diff_extinction(const MixtureModel& mix, double t) {
  // mu = sum w_k p_k / sum w_k T_k; at t = 0 every T_k is 1 and the sum of
  // weights is skipped so mu(0) is exactly sum w_k mu_k(0).
  double wt = 0.0;
  double wp = 0.0;
  for (const auto& c : mix.components) {
    if (t == 0.0) {
      wp += c.weight * c.model.diff_extinction(0.0);
      continue;
    }
    const TP k = eval_tp(c.model.variant(), t);
    wt += c.weight * k.T;
    wp += c.weight * k.p;
  }
  if (t == 0.0) return wp;
  return wt > 0.0 ? wp / wt : 0.0;
}

}  // namespace

ExtinctionModel::ExtinctionModel() : model_(ExponentialModel{1.0}) {}
ExtinctionModel::ExtinctionModel(ExponentialModel m) : model_(m) { validate(m); }
ExtinctionModel::ExtinctionModel(GammaConcentrationModel m) : model_(m) { validate(m); }
ExtinctionModel::ExtinctionModel(LinearNegativeModel m) : model_(m) { validate(m); }
ExtinctionModel::ExtinctionModel(GammaPathLengthModel m) : model_(m) { validate(m); }
ExtinctionModel::ExtinctionModel(MixtureModel m) : model_(std::move(m)) {
  validate(std::get<MixtureModel>(model_));
}

ExtinctionModel ExtinctionModel::gamma_concentration(double mean_c, double var_c, double sigma) {
  require(var_c >= 0.0, "gamma: concentration variance must be >= 0");
  if (var_c == 0.0) {
    require(positive_finite(mean_c) && positive_finite(sigma), "gamma: mean and cross section must be positive");
    return ExponentialModel{mean_c * sigma};
  }
  return GammaConcentrationModel{mean_c, var_c, sigma};
}

double ExtinctionModel::transmittance(double t) const {
  check_distance(t);
  return eval_tp(model_, t).T;
}

double ExtinctionModel::extinction_prob(double t) const {
  check_distance(t);
  return eval_tp(model_, t).p;
}

double ExtinctionModel::diff_extinction(double t) const {
  check_distance(t);
  if (const auto* e = std::get_if<ExponentialModel>(&model_)) return e->mean_extinction;
  if (const auto* g = std::get_if<GammaConcentrationModel>(&model_)) return diff_extinction_gamma(t, *g);
  if (const auto* l = std::get_if<LinearNegativeModel>(&model_)) {
    return linear_model_eval(t, l->mean_extinction).diff_extinction;
  }
  if (const auto* pl = std::get_if<GammaPathLengthModel>(&model_)) {
    return gamma_pathlength_eval(t, pl->shape(), pl->scale()).diff_extinction;
  }
  return mixture_diff_extinction(std::get<MixtureModel>(model_), t);
}

double ExtinctionModel::mean_extinction() const {
  if (const auto* e = std::get_if<ExponentialModel>(&model_)) return e->mean_extinction;
  if (const auto* g = std::get_if<GammaConcentrationModel>(&model_)) return g->mean_extinction();
  if (const auto* l = std::get_if<LinearNegativeModel>(&model_)) return l->mean_extinction;
  if (const auto* pl = std::get_if<GammaPathLengthModel>(&model_)) return 1.0 / pl->mean_free_path;
  double sum = 0.0;
  for (const auto& c : std::get<MixtureModel>(model_).components) sum += c.weight * c.model.mean_extinction();
  return sum;
}

bool ExtinctionModel::operator==(const ExtinctionModel& o) const { return model_ == o.model_; }

DirectionalVariance::DirectionalVariance(const Matrix& v) : v_(v) {
  double scale = 0.0;
  for (const auto& row : v) {
    for (double x : row) {
      require(std::isfinite(x), "variance ellipsoid: entries must be finite");
      scale = std::max(scale, std::abs(x));
    }
  }
  const double tol = 1e-12 * std::max(scale, 1.0);
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      require(std::abs(v[i][j] - v[j][i]) <= tol, "variance ellipsoid: matrix must be symmetric");
    }
  }
  // Positive semidefinite iff every principal minor is nonnegative.
  for (int i = 0; i < 3; ++i) require(v[i][i] >= -tol, "variance ellipsoid: matrix must be positive semidefinite");
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      require(v[i][i] * v[j][j] - v[i][j] * v[j][i] >= -tol * std::max(scale, 1.0),
              "variance ellipsoid: matrix must be positive semidefinite");
    }
  }
  const double det = v[0][0] * (v[1][1] * v[2][2] - v[1][2] * v[2][1]) -
                     v[0][1] * (v[1][0] * v[2][2] - v[1][2] * v[2][0]) +
                     v[0][2] * (v[1][0] * v[2][1] - v[1][1] * v[2][0]);
  require(det >= -tol * std::max(scale * scale, 1.0), "variance ellipsoid: matrix must be positive semidefinite");
}

DirectionalVariance DirectionalVariance::diagonal(double xx, double yy, double zz) {
  return DirectionalVariance(Matrix{{{xx, 0.0, 0.0}, {0.0, yy, 0.0}, {0.0, 0.0, zz}}});
}

double DirectionalVariance::operator()(const Vec3& w) const {
  require(std::abs(length(w) - 1.0) <= 1e-9, "directional variance: direction must be unit length");
  double q = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) q += w[i] * v_[i][j] * w[j];
  }
  return std::sqrt(std::max(q, 0.0));
}

ExtinctionModel DirectionalVariance::model_along(const Vec3& omega, double mean_c, double sigma) const {
  return ExtinctionModel::gamma_concentration(mean_c, (*this)(omega), sigma);
}

MixtureEvaluator::MixtureEvaluator(MixtureModel mixture) : mixture_(std::move(mixture)) { validate(mixture_); }

MixtureEvaluator mixture_combine(const MixtureModel& mixture) { return MixtureEvaluator(mixture); }

std::vector<double> MixtureEvaluator::effective_weights(double t) const {
  check_distance(t);
  std::vector<double> w;
  w.reserve(mixture_.components.size());
  double sum = 0.0;
  for (const auto& c : mixture_.components) {
    w.push_back(c.weight * c.model.transmittance(t));
    sum += w.back();
  }
  if (sum <= 0.0) {
    // Every component is exhausted; report the population fractions.
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = mixture_.components[k].weight;
    return w;
  }
  for (double& x : w) x /= sum;
  return w;
}

double MixtureEvaluator::diff_extinction(double t) const {
  check_distance(t);
  return mixture_diff_extinction(mixture_, t);
}

double MixtureEvaluator::albedo(double t) const {
  check_distance(t);
  double num = 0.0;
  double den = 0.0;
  for (const auto& c : mixture_.components) {
    const double p = c.weight * c.model.extinction_prob(t);
    num += p * c.albedo;
    den += p;
  }
  if (den > 0.0) return num / den;
  const auto w = effective_weights(t);
  double a = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) a += w[k] * mixture_.components[k].albedo;
  return a;
}

std::vector<double> MixtureEvaluator::phase_weights(double t) const {
  check_distance(t);
  std::vector<double> w;
  w.reserve(mixture_.components.size());
  double sum = 0.0;
  for (const auto& c : mixture_.components) {
    w.push_back(c.weight * c.model.extinction_prob(t) * c.albedo);
    sum += w.back();
  }
  if (sum <= 0.0) return effective_weights(t);
  for (double& x : w) x /= sum;
  return w;
}

}  // namespace corrtrans
