#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "corrtrans/extinction_curve.hpp"
#include "corrtrans/extinction_density.hpp"
#include "corrtrans/free_flight.hpp"
#include "corrtrans/rng.hpp"
#include "corrtrans/transmittance.hpp"
#include "oracles.hpp"

using namespace corrtrans;

namespace {

GammaConcentrationModel gamma_ab(double alpha, double beta, double sigma = 1.0) {
  return {alpha / beta, alpha / (beta * beta), sigma};
}

std::vector<ExtinctionModel> model_zoo() {
  MixtureModel mix;
  mix.components = {{0.3, ExtinctionModel(ExponentialModel{1.0}), 0.2, {}},
                    {0.7, ExtinctionModel(gamma_ab(2.0, 1.0)), 0.9, PhaseDescriptor::henyey_greenstein(0.4)}};
  return {ExtinctionModel(ExponentialModel{2.0}), ExtinctionModel(gamma_ab(0.5, 0.1, 2.0)),
          ExtinctionModel(gamma_ab(2.5, 0.25)),   ExtinctionModel(LinearNegativeModel{1.5}),
          ExtinctionModel(GammaPathLengthModel{1.0, 0.5}), ExtinctionModel(GammaPathLengthModel{2.0, 8.0}),
          ExtinctionModel(mix)};
}

}  // namespace

TEST(GammaParams, Examples) {
  auto p = gamma_params(2, 4);
  EXPECT_DOUBLE_EQ(p.alpha, 1.0);
  EXPECT_DOUBLE_EQ(p.beta, 0.5);
  p = gamma_params(1, 1);
  EXPECT_DOUBLE_EQ(p.alpha, 1.0);
  EXPECT_DOUBLE_EQ(p.beta, 1.0);
  p = gamma_params(10, 40);
  EXPECT_DOUBLE_EQ(p.alpha, 2.5);
  EXPECT_DOUBLE_EQ(p.beta, 0.25);
}

TEST(GammaParams, RejectsNonPositive) {
  EXPECT_THROW(gamma_params(0, 1), std::domain_error);
  EXPECT_THROW(gamma_params(1, 0), std::domain_error);
  EXPECT_THROW(gamma_params(-1, 1), std::domain_error);
}

TEST(GammaModel, MeanExtinction) {
  const GammaConcentrationModel m{10, 40, 0.2};
  EXPECT_DOUBLE_EQ(m.mean_extinction(), 2.0);
  EXPECT_NEAR(m.cross_section * m.alpha() / m.beta(), 2.0, 1e-15);
}

TEST(GammaModel, TransmittanceExamples) {
  const auto m = gamma_ab(1, 1);
  EXPECT_DOUBLE_EQ(transmittance_gamma(1.0, m), 0.5);
  EXPECT_DOUBLE_EQ(transmittance_gamma(0.0, m), 1.0);
  EXPECT_THROW(transmittance_gamma(-0.1, m), std::domain_error);
  EXPECT_THROW(extinction_prob_gamma(-0.1, m), std::domain_error);
  EXPECT_THROW(diff_extinction_gamma(-0.1, m), std::domain_error);
}

TEST(GammaModel, TransmittanceMatchesQuadrature) {
  // Frozen from the exp-sinh beam average in oracles.hpp.
  const double frozen = 0.43120115037169227;
  const auto m = gamma_ab(2.5, 0.25);
  EXPECT_NEAR(transmittance_gamma(0.1, m), frozen, 1e-9);
  EXPECT_NEAR(oracle::gamma_beam_T(2.5, 0.25, 1.0, 0.1), frozen, 1e-12);
  EXPECT_NEAR(transmittance_numeric(ExtinctionDensity::gamma(2.5, 0.25), 0.1), frozen, 1e-9);
}

TEST(GammaModel, ExtinctionProbExamples) {
  EXPECT_DOUBLE_EQ(extinction_prob_gamma(0.0, gamma_ab(1, 1)), 1.0);
  EXPECT_DOUBLE_EQ(extinction_prob_gamma(1.0, gamma_ab(2, 1)), 0.25);
}

TEST(GammaModel, ExtinctionProbNormalized) {
  for (double a : {0.5, 1.0, 2.5}) {
    for (double b : {0.2, 1.0}) {
      const auto m = gamma_ab(a, b, 1.3);
      const double mass = oracle::integrate_half_line([&](double t) { return extinction_prob_gamma(t, m); });
      EXPECT_NEAR(mass, 1.0, 1e-6) << "alpha " << a << " beta " << b;
    }
  }
}

TEST(GammaModel, DiffExtinctionExamples) {
  const auto m = gamma_ab(1, 1);
  EXPECT_DOUBLE_EQ(diff_extinction_gamma(0.0, m), 1.0);
  EXPECT_DOUBLE_EQ(diff_extinction_gamma(1.0, m), 0.5);
  const auto m2 = gamma_ab(3, 0.5, 2);
  EXPECT_DOUBLE_EQ(diff_extinction_gamma(0.0, m2), m2.mean_extinction());
}

TEST(GammaModel, HazardIdentityOnRandomGrid) {
  Rng r = Rng::stream(17, 0);
  for (int i = 0; i < 2000; ++i) {
    const auto m = gamma_ab(0.1 + 10 * r.uniform(), 0.05 + 10 * r.uniform(), 0.1 + 3 * r.uniform());
    const double t = 20 * r.uniform();
    const double lhs = diff_extinction_gamma(t, m) * transmittance_gamma(t, m);
    const double p = extinction_prob_gamma(t, m);
    ASSERT_NEAR(lhs, p, 1e-12 * std::max(1.0, p));
  }
}

TEST(GammaModel, ClosedFormsMatchQuadratureGrid) {
  double worst = 0.0;
  for (double a : {0.5, 1.0, 2.5, 10.0}) {
    for (double b : {0.1, 1.0, 10.0}) {
      for (double s : {0.5, 1.0, 2.0}) {
        const auto m = gamma_ab(a, b, s);
        const double tmax = 50.0 / m.mean_extinction();
        for (int i = 0; i <= 20; ++i) {
          const double t = tmax * i / 20.0;
          worst = std::max(worst, std::abs(transmittance_gamma(t, m) - oracle::gamma_beam_T(a, b, s, t)));
        }
      }
    }
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(GammaModel, ExponentialLimit) {
  const auto m = ExtinctionModel::gamma_concentration(1.0, 1e-6, 1.0);
  const ExtinctionModel g(GammaConcentrationModel{1.0, 1e-6, 1.0});
  for (int i = 0; i <= 1000; ++i) {
    const double t = 10.0 * i / 1000.0;
    ASSERT_LT(std::abs(g.transmittance(t) - std::exp(-t)), 1e-3);
    ASSERT_LT(std::abs(m.transmittance(t) - std::exp(-t)), 1e-3);
  }
}

TEST(GammaModel, ZeroVarianceIsExponential) {
  const auto m = ExtinctionModel::gamma_concentration(5.0, 0.0, 0.4);
  const auto* e = m.get_if<ExponentialModel>();
  ASSERT_NE(e, nullptr);
  EXPECT_DOUBLE_EQ(e->mean_extinction, 2.0);
}

TEST(GammaModel, SubExponentialTail) {
  Rng r = Rng::stream(3, 3);
  for (int i = 0; i < 200; ++i) {
    const double mean = 0.1 + 10 * r.uniform();
    const double var = 1e-3 + 20 * r.uniform();
    const double s = 0.1 + 2 * r.uniform();
    const GammaConcentrationModel m{mean, var, s};
    const double t = 10.0 / m.mean_extinction();
    ASSERT_GT(transmittance_gamma(t, m), std::exp(-m.mean_extinction() * t));
  }
}

TEST(LinearModel, Examples) {
  auto e = linear_model_eval(0.25, 2.0);
  EXPECT_DOUBLE_EQ(e.transmittance, 0.5);
  EXPECT_DOUBLE_EQ(e.extinction_prob, 2.0);
  EXPECT_DOUBLE_EQ(e.diff_extinction, 4.0);
  e = linear_model_eval(0.5, 2.0);
  EXPECT_DOUBLE_EQ(e.transmittance, 0.0);
  EXPECT_DOUBLE_EQ(e.extinction_prob, 0.0);
  EXPECT_DOUBLE_EQ(e.diff_extinction, 0.0);
  const double mass = oracle::integrate(
      [](double t) { return linear_model_eval(t, 2.0).extinction_prob; }, 0.0, 0.5);
  EXPECT_NEAR(mass, 1.0, 1e-12);
}

TEST(LinearModel, SuperExponential) {
  const ExtinctionModel m(LinearNegativeModel{1.7});
  for (int i = 0; i <= 1000; ++i) {
    const double t = 3.0 * i / 1000.0;
    ASSERT_LE(m.transmittance(t), std::exp(-1.7 * t) + 1e-15);
  }
}

TEST(TwoMixture, Examples) {
  for (double p1 : {0.0, 0.3, 1.0}) {
    EXPECT_NEAR(two_mixture_pathlength(0.7, 2.0, 2.0, p1), 2.0 * std::exp(-1.4), 1e-15);
  }
  EXPECT_NEAR(two_mixture_pathlength(0.7, 1.5, 9.0, 1.0), 1.5 * std::exp(-1.05), 1e-15);
  EXPECT_DOUBLE_EQ(two_mixture_pathlength(0.0, 1.0, 3.0, 0.5), 2.0);
  EXPECT_THROW(two_mixture_pathlength(0.0, -1.0, 3.0, 0.5), std::domain_error);
  EXPECT_THROW(two_mixture_pathlength(0.0, 1.0, 3.0, 1.5), std::domain_error);
}

TEST(PathLengthModel, ShapeOneIsExponential) {
  for (double t : {0.0, 0.3, 1.0, 4.0}) {
    const auto e = gamma_pathlength_eval(t, 1.0, 0.5);
    EXPECT_NEAR(e.transmittance, std::exp(-2 * t), 1e-14);
    EXPECT_NEAR(e.extinction_prob, 2 * std::exp(-2 * t), 1e-13);
    EXPECT_NEAR(e.diff_extinction, 2.0, 1e-12);
  }
}

TEST(PathLengthModel, NormalizedAndOnset) {
  for (double k : {0.7, 2.0, 5.5}) {
    const double mass =
        oracle::integrate_half_line([&](double t) { return gamma_pathlength_eval(t, k, 0.8).extinction_prob; });
    EXPECT_NEAR(mass, 1.0, 1e-8) << "k " << k;
  }
  EXPECT_DOUBLE_EQ(gamma_pathlength_eval(0.0, 2.0, 1.0).extinction_prob, 0.0);
}

TEST(PathLengthModel, SaturatesAndFlags) {
  const auto e = gamma_pathlength_eval(5000.0, 2.0, 1.0);
  EXPECT_TRUE(e.saturated);
  EXPECT_DOUBLE_EQ(e.transmittance, kTransmittanceFloor);
  EXPECT_DOUBLE_EQ(e.diff_extinction, 1.0);
  EXPECT_FALSE(gamma_pathlength_eval(5.0, 2.0, 1.0).saturated);
}

TEST(DirectionalVariance, Examples) {
  const auto iso = DirectionalVariance::isotropic(1.0);
  EXPECT_DOUBLE_EQ(iso(normalize(Vec3{1, 2, 3})), 1.0);
  const auto d = DirectionalVariance::diagonal(4, 0, 0);
  EXPECT_DOUBLE_EQ(d(Vec3{1, 0, 0}), 2.0);
  EXPECT_DOUBLE_EQ(d(Vec3{0, 0, 1}), 0.0);
  const auto along_z = d.model_along(Vec3{0, 0, 1}, 3.0, 1.0);
  ASSERT_NE(along_z.get_if<ExponentialModel>(), nullptr);
  EXPECT_DOUBLE_EQ(along_z.mean_extinction(), 3.0);
  const auto along_x = d.model_along(Vec3{1, 0, 0}, 3.0, 1.0);
  const auto* g = along_x.get_if<GammaConcentrationModel>();
  ASSERT_NE(g, nullptr);
  EXPECT_DOUBLE_EQ(g->variance_concentration, 2.0);
}

TEST(DirectionalVariance, Errors) {
  DirectionalVariance::Matrix not_psd{{{1, 0, 0}, {0, -1, 0}, {0, 0, 1}}};
  EXPECT_THROW(DirectionalVariance{not_psd}, std::domain_error);
  DirectionalVariance::Matrix asym{{{1, 0.5, 0}, {0, 1, 0}, {0, 0, 1}}};
  EXPECT_THROW(DirectionalVariance{asym}, std::domain_error);
  EXPECT_THROW(DirectionalVariance::isotropic(1.0)(Vec3{1, 1, 0}), std::domain_error);
}

TEST(DirectionalVariance, RandomPsdNonNegative) {
  Rng r = Rng::stream(5, 5);
  for (int i = 0; i < 200; ++i) {
    // A A^T is PSD.
    double a[3][3];
    for (auto& row : a)
      for (auto& x : row) x = r.uniform() * 2 - 1;
    DirectionalVariance::Matrix v{};
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q)
        for (int k = 0; k < 3; ++k) v[p][q] += a[p][k] * a[q][k];
    const DirectionalVariance dv(v);
    const Vec3 w = normalize(Vec3{r.normal(), r.normal(), r.normal()});
    ASSERT_GE(dv(w), 0.0);
  }
}

TEST(Mixture, SingleComponentIdentity) {
  const ExtinctionModel base(gamma_ab(2, 1));
  const MixtureEvaluator ev(MixtureModel{{{1.0, base, 0.6, {}}}});
  for (double t : {0.0, 0.5, 3.0}) {
    EXPECT_NEAR(ev.diff_extinction(t), base.diff_extinction(t), 1e-14);
    EXPECT_NEAR(ev.albedo(t), 0.6, 1e-15);
  }
}

TEST(Mixture, IdenticalHalves) {
  const ExtinctionModel base(ExponentialModel{1.3});
  const MixtureEvaluator ev(MixtureModel{{{0.5, base, 0.4, {}}, {0.5, base, 0.4, {}}}});
  const ExtinctionModel combined(ev.model());
  for (double t : {0.0, 0.5, 3.0}) {
    EXPECT_NEAR(ev.diff_extinction(t), 1.3, 1e-14);
    EXPECT_NEAR(ev.albedo(t), 0.4, 1e-15);
    EXPECT_NEAR(combined.transmittance(t), base.transmittance(t), 1e-15);
  }
}

TEST(Mixture, AlbedoOfTwoExponentials) {
  const MixtureEvaluator ev(MixtureModel{{{0.5, ExtinctionModel(ExponentialModel{1.0}), 0.0, {}},
                                          {0.5, ExtinctionModel(ExponentialModel{3.0}), 1.0, {}}}});
  for (double t : {0.0, 0.1, 0.5, 1.0, 2.0, 5.0}) {
    const double expected = 3 * std::exp(-3 * t) / (std::exp(-t) + 3 * std::exp(-3 * t));
    EXPECT_NEAR(ev.albedo(t), expected, 1e-14) << t;
  }
  EXPECT_DOUBLE_EQ(ev.diff_extinction(0.0), 2.0);
}

TEST(Mixture, PhaseWeightsFollowScatteringShare) {
  const MixtureEvaluator ev(
      MixtureModel{{{0.25, ExtinctionModel(ExponentialModel{1.0}), 0.5, PhaseDescriptor::henyey_greenstein(0.3)},
                    {0.75, ExtinctionModel(ExponentialModel{2.0}), 1.0, {}}}});
  const double t = 0.7;
  const double a = 0.25 * std::exp(-t) * 0.5;
  const double b = 0.75 * 2 * std::exp(-2 * t) * 1.0;
  const auto w = ev.phase_weights(t);
  ASSERT_EQ(w.size(), 2u);
  EXPECT_NEAR(w[0], a / (a + b), 1e-14);
  EXPECT_NEAR(w[1], b / (a + b), 1e-14);
}

TEST(Mixture, InitialRateIsWeightedSum) {
  const MixtureModel mix{{{0.2, ExtinctionModel(ExponentialModel{1.0}), 1.0, {}},
                          {0.5, ExtinctionModel(gamma_ab(2, 0.5)), 1.0, {}},
                          {0.3, ExtinctionModel(LinearNegativeModel{3.0}), 1.0, {}}}};
  const MixtureEvaluator ev(mix);
  EXPECT_DOUBLE_EQ(ev.diff_extinction(0.0), 0.2 * 1.0 + 0.5 * 4.0 + 0.3 * 3.0);
}

TEST(Mixture, WeightSumChecked) {
  EXPECT_THROW(MixtureEvaluator(MixtureModel{{{0.5, ExtinctionModel{}, 1.0, {}}, {0.4, ExtinctionModel{}, 1.0, {}}}}),
               std::domain_error);
}

TEST(Models, CurveInvariantsOnGrid) {
  for (const auto& m : model_zoo()) {
    const double tmax = 8.0 / m.mean_extinction();
    double prev = 1.0;
    ASSERT_DOUBLE_EQ(m.transmittance(0.0), 1.0);
    for (int i = 0; i < 1000; ++i) {
      const double t = tmax * i / 999.0;
      const double T = m.transmittance(t);
      const double p = m.extinction_prob(t);
      ASSERT_GE(T, 0.0);
      ASSERT_LE(T, 1.0);
      ASSERT_LE(T, prev + 1e-15);
      ASSERT_GE(p, 0.0);
      if (T > 0.0 && std::isfinite(p)) {
        ASSERT_NEAR(m.diff_extinction(t) * T, p, 1e-10 * std::max(1.0, p));
      }
      prev = T;
    }
  }
}

TEST(NumericTransmittance, NarrowDensityIsExponential) {
  const double eps = 1e-4;
  // Triangle of half-width eps around 2.
  const auto d = ExtinctionDensity::tabulated({0.0, 2.0 - eps, 2.0, 2.0 + eps}, {0.0, 0.0, 1.0 / eps, 0.0});
  for (double t : {0.0, 0.5, 2.0, 10.0}) EXPECT_NEAR(transmittance_numeric(d, t), std::exp(-2 * t), 1e-6);
}

TEST(NumericTransmittance, TwoAtoms) {
  const auto d = ExtinctionDensity::atoms({1.0, 3.0}, {0.5, 0.5});
  for (double t : {0.0, 0.4, 2.0}) {
    EXPECT_NEAR(transmittance_numeric(d, t), 0.5 * std::exp(-t) + 0.5 * std::exp(-3 * t), 1e-15);
    EXPECT_NEAR(extinction_prob_numeric(d, t), two_mixture_pathlength(t, 1.0, 3.0, 0.5), 1e-14);
  }
}

TEST(NumericTransmittance, TabulatedMatchesAnalytic) {
  // Triangle density on [0, 2] peaking at 1.
  std::vector<double> mu{0.0, 1.0, 2.0};
  std::vector<double> pdf{0.0, 1.0, 0.0};
  const auto d = ExtinctionDensity::tabulated(mu, pdf);
  const double t = 1.5;
  const double ref = oracle::integrate([&](double m) { return (m < 1 ? m : 2 - m) * std::exp(-m * t); }, 0.0, 2.0);
  EXPECT_NEAR(transmittance_numeric(d, t), ref, 1e-12);
}

TEST(NumericTransmittance, RejectsUnnormalized) {
  EXPECT_THROW(ExtinctionDensity::analytic([](double) { return 1.0; }, 2.0), std::domain_error);
  EXPECT_THROW(ExtinctionDensity::atoms({1.0}, {0.9}), std::domain_error);
  EXPECT_THROW(transmittance_numeric(ExtinctionDensity::gamma(2, 1), -1.0), std::domain_error);
}

TEST(Curves, TabulateConsistent) {
  const ExtinctionModel m(gamma_ab(2, 1));
  const auto c = tabulate(m, 0.0, 10.0, 11);
  ASSERT_EQ(c.size(), 11u);
  EXPECT_DOUBLE_EQ(c.t[0], 0.0);
  EXPECT_DOUBLE_EQ(c.t[10], 10.0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_DOUBLE_EQ(c.transmittance[i], m.transmittance(c.t[i]));
    EXPECT_DOUBLE_EQ(c.extinction_prob[i], m.extinction_prob(c.t[i]));
  }
}

TEST(Curves, FromExponentialSamplesHasFlatHazard) {
  Rng r = Rng::stream(8, 0);
  std::vector<double> xs(1000000);
  for (auto& x : xs) x = sample_exponential(r.uniform(), 1.0).t;
  std::sort(xs.begin(), xs.end());
  CurveBinning b;
  b.bins = 30;
  b.t_max = 3.0;
  const auto c = extinction_from_samples(xs, b);
  for (std::size_t i = 0; i < c.size(); ++i) {
    // Bin hazard of a unit exponential over [t, t + dt) is (1 - e^-dt) / dt.
    EXPECT_NEAR(c.diff_extinction[i], (1 - std::exp(-0.1)) / 0.1, 0.05) << c.t[i];
  }
}

TEST(Curves, FromGammaSamplesHasDecreasingHazard) {
  Rng r = Rng::stream(8, 1);
  std::vector<double> xs(200000);
  for (auto& x : xs) x = sample_gamma_general(r.uniform(), 1.5, 1.0, 1.0).t;
  std::sort(xs.begin(), xs.end());
  CurveBinning b;
  b.bins = 8;
  b.t_max = 4.0;
  const auto c = extinction_from_samples(xs, b);
  for (std::size_t i = 1; i < c.size(); ++i) EXPECT_LT(c.diff_extinction[i], c.diff_extinction[i - 1]);
}

TEST(Curves, FromSamplesDeterministicAndChecked) {
  std::vector<double> xs{0.1, 0.2, 0.2, 0.5, 0.9, 1.4};
  EXPECT_EQ(extinction_from_samples(xs).transmittance, extinction_from_samples(xs).transmittance);
  EXPECT_THROW(extinction_from_samples(std::vector<double>{}), std::domain_error);
  EXPECT_THROW(extinction_from_samples(std::vector<double>{0.5, 0.1}), std::domain_error);
}
