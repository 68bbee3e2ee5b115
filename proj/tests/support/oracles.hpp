#pragma once

// Test-side reference computations. Nothing here calls into corrtrans, so the
// checks below compare two independent implementations.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

inline double integrate(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

// Integral over [0, inf).
inline double integrate_half_line(const std::function<double(double)>& f) {
  boost::math::quadrature::exp_sinh<double> q;
  return q.integrate(f, 1e-15);
}

// Beam-front average of exp(-sigma C t) with C ~ Gamma(alpha, rate beta),
// and of sigma C exp(-sigma C t). The substitution C = u^2 removes the
// endpoint singularity for alpha < 1.
inline double gamma_moment(double alpha, double beta, double sigma, double t, int order) {
  const double log_norm = std::log(2.0) + alpha * std::log(beta) - std::lgamma(alpha);
  return integrate_half_line([&](double u) {
    if (!(u > 0.0) || !std::isfinite(u)) return 0.0;
    const double c = u * u;
    const double w = order == 0 ? 1.0 : sigma * c;
    return w * std::exp(log_norm + (2.0 * alpha - 1.0) * std::log(u) - (beta + sigma * t) * c);
  });
}

inline double gamma_beam_T(double alpha, double beta, double sigma, double t) {
  return gamma_moment(alpha, beta, sigma, t, 0);
}

inline double gamma_beam_p(double alpha, double beta, double sigma, double t) {
  return gamma_moment(alpha, beta, sigma, t, 1);
}

// sup |F_n - F| of the samples against a continuous CDF.
inline double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

struct SampleMoments {
  double mean = 0.0;
  double variance = 0.0;
  double se = 0.0;
};

inline SampleMoments moments(const std::vector<double>& xs) {
  SampleMoments m;
  const double n = static_cast<double>(xs.size());
  for (double x : xs) m.mean += x;
  m.mean /= n;
  for (double x : xs) m.variance += (x - m.mean) * (x - m.mean);
  m.variance /= n - 1.0;
  m.se = std::sqrt(m.variance / n);
  return m;
}

}  // namespace oracle
