#include <gtest/gtest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <vector>

#include "corrtrans/free_flight.hpp"
#include "corrtrans/rng.hpp"
#include "oracles.hpp"

using namespace corrtrans;

namespace {

// Densities and CDFs written out independently of the library.
double prop_pdf(double t, double a, double b, double s) { return (a - 1) * s / b * std::pow(1 + s * t / b, -a); }
double prop_cdf(double t, double a, double b, double s) { return 1 - std::pow(1 + s * t / b, 1 - a); }
double gen_pdf(double t, double a, double b, double s) { return a * s / b * std::pow(1 + s * t / b, -a - 1); }
double gen_cdf(double t, double a, double b, double s) { return 1 - std::pow(1 + s * t / b, -a); }
double gamma_pdf(double t, double k, double th) {
  return std::exp((k - 1) * std::log(t) - t / th - std::lgamma(k) - k * std::log(th));
}

constexpr std::size_t kDraws = 1000000;

template <class F>
std::vector<double> draw(std::uint64_t seed, F f) {
  Rng r = Rng::stream(seed, 0);
  std::vector<double> xs(kDraws);
  for (auto& x : xs) x = f(r);
  return xs;
}

}  // namespace

TEST(Proportional, Examples) {
  EXPECT_DOUBLE_EQ(sample_gamma_proportional(0.0, 2, 1, 1).t, 0.0);
  EXPECT_NEAR(sample_gamma_proportional(0.75, 2, 1, 1).t, 3.0, 1e-12);
  EXPECT_THROW(sample_gamma_proportional(0.5, 1.0, 1, 1), std::domain_error);
  EXPECT_THROW(sample_gamma_proportional(0.5, 0.5, 1, 1), std::domain_error);
}

TEST(Proportional, KolmogorovSmirnov) {
  const auto xs = draw(101, [](Rng& r) { return sample_gamma_proportional(r.uniform(), 2, 1, 1).t; });
  EXPECT_LT(oracle::ks_distance(xs, [](double t) { return prop_cdf(t, 2, 1, 1); }), 0.002);
}

TEST(General, Examples) {
  EXPECT_DOUBLE_EQ(sample_gamma_general(0.0, 1, 1, 1).t, 0.0);
  EXPECT_NEAR(sample_gamma_general(0.5, 1, 1, 1).t, 1.0, 1e-12);
}

TEST(General, MeanMatchesAnalytic) {
  const auto xs = draw(102, [](Rng& r) { return sample_gamma_general(r.uniform(), 3, 1, 1).t; });
  const auto m = oracle::moments(xs);
  // beta / (sigma (alpha - 1))
  EXPECT_NEAR(m.mean, 0.5, 3 * m.se);
  EXPECT_LT(oracle::ks_distance(xs, [](double t) { return gen_cdf(t, 3, 1, 1); }), 0.002);
}

TEST(Exponential, Examples) {
  EXPECT_DOUBLE_EQ(sample_exponential(0.0, 1).t, 0.0);
  EXPECT_NEAR(sample_exponential(1 - std::exp(-1.0), 1).t, 1.0, 1e-12);
  const auto xs = draw(103, [](Rng& r) { return sample_exponential(r.uniform(), 1.7).t; });
  EXPECT_LT(oracle::ks_distance(xs, [](double t) { return 1 - std::exp(-1.7 * t); }), 0.002);
}

TEST(Linear, Examples) {
  EXPECT_DOUBLE_EQ(sample_linear(0.0, 2).t, 0.0);
  EXPECT_DOUBLE_EQ(sample_linear(0.5, 2).t, 0.25);
  const auto xs = draw(104, [](Rng& r) { return sample_linear(r.uniform(), 2).t; });
  const auto m = oracle::moments(xs);
  EXPECT_NEAR(m.mean, 0.25, 3 * m.se);
  EXPECT_LT(oracle::ks_distance(xs, [](double t) { return std::clamp(2 * t, 0.0, 1.0); }), 0.002);
}

TEST(PathLength, ShapeOneIsExponential) {
  const auto xs = draw(105, [](Rng& r) { return sample_gamma_pathlength(r, 1.0, 2.0).t; });
  EXPECT_LT(oracle::ks_distance(xs, [](double t) { return 1 - std::exp(-0.5 * t); }), 0.002);
}

TEST(PathLength, MomentsAndAcceptance) {
  Rng r = Rng::stream(106, 0);
  std::vector<double> xs(kDraws);
  std::uint64_t proposals = 0;
  for (auto& x : xs) {
    const auto v = marsaglia_tsang(r, 2.5);
    proposals += v.proposals;
    x = 0.8 * v.value;
  }
  const auto m = oracle::moments(xs);
  EXPECT_NEAR(m.mean, 2.5 * 0.8, 3 * m.se);
  // SE of the sample variance: sqrt((mu4 - var^2) / n) with mu4 = 3k(k+2) theta^4 for a gamma.
  const double var = 2.5 * 0.64;
  const double mu4 = 3 * 2.5 * 4.5 * std::pow(0.8, 4);
  EXPECT_NEAR(m.variance, var, 3 * std::sqrt((mu4 - var * var) / kDraws));
  EXPECT_GT(static_cast<double>(kDraws) / static_cast<double>(proposals), 0.9);
  EXPECT_LT(oracle::ks_distance(xs, [](double t) { return boost::math::gamma_p(2.5, t / 0.8); }), 0.002);
}

TEST(PathLength, SmallShapeBoost) {
  const auto xs = draw(107, [](Rng& r) { return sample_gamma_pathlength(r, 0.4, 1.5).t; });
  EXPECT_LT(oracle::ks_distance(xs, [](double t) { return boost::math::gamma_p(0.4, t / 1.5); }), 0.002);
}

TEST(SurfaceHit, Examples) {
  EXPECT_DOUBLE_EQ(surface_hit_probability(0.0, 2, 1, 1), 1.0);
  EXPECT_NEAR(surface_hit_probability(3.0, 2, 1, 1), 0.25, 1e-15);
  EXPECT_THROW(surface_hit_probability(1.0, 1.0, 1, 1), std::domain_error);
}

TEST(SurfaceHit, MatchesExceedanceFraction) {
  const auto xs = draw(108, [](Rng& r) { return sample_gamma_proportional(r.uniform(), 2, 1, 1).t; });
  double beyond = 0;
  for (double x : xs) beyond += x > 3.0 ? 1 : 0;
  const double f = beyond / kDraws;
  const double se = std::sqrt(0.25 * 0.75 / kDraws);
  EXPECT_NEAR(f, surface_hit_probability(3.0, 2, 1, 1), 3 * se);
}

TEST(Samplers, CdfRoundTrip) {
  Rng r = Rng::stream(109, 0);
  for (int i = 0; i < 10000; ++i) {
    const double xi = r.uniform() * 0.999;
    ASSERT_NEAR(gamma_proportional_cdf(sample_gamma_proportional(xi, 2.7, 0.6, 1.4).t, 2.7, 0.6, 1.4), xi, 1e-10);
    ASSERT_NEAR(gamma_general_cdf(sample_gamma_general(xi, 0.6, 0.6, 1.4).t, 0.6, 0.6, 1.4), xi, 1e-10);
    ASSERT_NEAR(exponential_cdf(sample_exponential(xi, 3.3).t, 3.3), xi, 1e-10);
    ASSERT_NEAR(linear_cdf(sample_linear(xi, 3.3).t, 3.3), xi, 1e-10);
    // Library CDFs agree with the written-out ones.
    const double t = 5 * r.uniform();
    ASSERT_NEAR(gamma_proportional_cdf(t, 2.7, 0.6, 1.4), prop_cdf(t, 2.7, 0.6, 1.4), 1e-14);
    ASSERT_NEAR(gamma_general_cdf(t, 0.6, 0.6, 1.4), gen_cdf(t, 0.6, 0.6, 1.4), 1e-14);
    ASSERT_NEAR(gamma_pathlength_cdf(t, 1.7, 0.4), boost::math::gamma_p(1.7, t / 0.4), 1e-14);
  }
}

TEST(Samplers, PdfMatchesDensity) {
  Rng r = Rng::stream(110, 0);
  for (int i = 0; i < 10000; ++i) {
    const double xi = r.uniform();
    auto s = sample_gamma_proportional(xi, 2.7, 0.6, 1.4);
    ASSERT_NEAR(s.pdf, prop_pdf(s.t, 2.7, 0.6, 1.4), 1e-12 * std::max(1.0, s.pdf));
    s = sample_gamma_general(xi, 0.6, 0.6, 1.4);
    ASSERT_NEAR(s.pdf, gen_pdf(s.t, 0.6, 0.6, 1.4), 1e-12 * std::max(1.0, s.pdf));
    s = sample_exponential(xi, 3.3);
    ASSERT_NEAR(s.pdf, 3.3 * std::exp(-3.3 * s.t), 1e-12);
    s = sample_linear(xi, 3.3);
    ASSERT_DOUBLE_EQ(s.pdf, 3.3);
    s = sample_gamma_pathlength(r, 1.7, 0.4);
    ASSERT_NEAR(s.pdf, gamma_pdf(s.t, 1.7, 0.4), 1e-12 * std::max(1.0, s.pdf));
  }
}

TEST(Samplers, StochasticOrderingAtEqualMean) {
  // Mean extinction 1 everywhere; the gamma model has alpha = 3, beta = 3.
  const auto lin = oracle::moments(draw(111, [](Rng& r) { return sample_linear(r.uniform(), 1).t; }));
  const auto ex = oracle::moments(draw(112, [](Rng& r) { return sample_exponential(r.uniform(), 1).t; }));
  const auto ga = oracle::moments(draw(113, [](Rng& r) { return sample_gamma_general(r.uniform(), 3, 3, 1).t; }));
  EXPECT_LT(lin.mean + 3 * std::hypot(lin.se, ex.se), ex.mean);
  EXPECT_LT(ex.mean + 3 * std::hypot(ex.se, ga.se), ga.mean);
}

TEST(Samplers, Deterministic) {
  Rng a = Rng::stream(5, 9);
  Rng b = Rng::stream(5, 9);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(sample_gamma_pathlength(a, 0.7, 1.0).t, sample_gamma_pathlength(b, 0.7, 1.0).t);
  }
}

TEST(FlightSampler, StrategySelection) {
  using M = FlightSampler::Method;
  EXPECT_EQ(FlightSampler(ExtinctionModel(ExponentialModel{2})).method(), M::Exponential);
  EXPECT_EQ(FlightSampler(ExtinctionModel(GammaConcentrationModel{4, 2, 1})).method(), M::GammaProportional);
  EXPECT_EQ(FlightSampler(ExtinctionModel(GammaConcentrationModel{1, 2, 1})).method(), M::GammaGeneral);
  EXPECT_EQ(FlightSampler(ExtinctionModel(GammaConcentrationModel{4, 2, 1}), FlightStrategy::Analog).method(),
            M::GammaGeneral);
  EXPECT_EQ(FlightSampler(ExtinctionModel(LinearNegativeModel{2})).method(), M::Linear);
  EXPECT_EQ(FlightSampler(ExtinctionModel(GammaPathLengthModel{1, 2})).method(), M::GammaPathLength);
}

TEST(FlightSampler, AnalogWeightsAreOne) {
  const FlightSampler s(ExtinctionModel(ExponentialModel{2}));
  Rng r = Rng::stream(1, 1);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(s.sample(r, 0.4).weight, 1.0);
}

// Weighted boundary events estimate T(t_b), weighted collisions before t_b
// estimate 1 - T(t_b), whatever the sampling density.
TEST(FlightSampler, WeightedEventsAreUnbiased) {
  MixtureModel mix{{{0.4, ExtinctionModel(ExponentialModel{1}), 1, {}},
                    {0.6, ExtinctionModel(GammaConcentrationModel{2, 4, 1}), 1, {}}}};
  const std::vector<ExtinctionModel> models{
      ExtinctionModel(GammaConcentrationModel{3, 2, 1}), ExtinctionModel(GammaConcentrationModel{1, 2, 1}),
      ExtinctionModel(LinearNegativeModel{1}), ExtinctionModel(GammaPathLengthModel{1, 0.3}), ExtinctionModel(mix)};
  const double tb = 0.8;
  for (const auto& m : models) {
    const FlightSampler s(m);
    Rng r = Rng::stream(77, 0);
    std::vector<double> through(200000);
    for (auto& x : through) {
      const auto e = s.sample(r, tb);
      x = e.reached_boundary ? e.weight : 0.0;
    }
    const auto mo = oracle::moments(through);
    EXPECT_NEAR(mo.mean, m.transmittance(tb), 4 * mo.se + 1e-12);
    EXPECT_NEAR(s.survival(tb), s.method() == FlightSampler::Method::GammaProportional
                                    ? std::pow(1 + tb / 1.5, 1 - 4.5)  // alpha 4.5, beta 1.5
                                    : m.transmittance(tb),
                1e-12);
  }
}
