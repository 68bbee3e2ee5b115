#include <gtest/gtest.h>

#include <algorithm>
#include <boost/math/distributions/gamma.hpp>
#include <cmath>
#include <sstream>
#include <vector>

#include "corrtrans/rng.hpp"
#include "corrtrans/voxel/fit.hpp"
#include "corrtrans/voxel/generate.hpp"
#include "corrtrans/voxel/tracking.hpp"
#include "corrtrans/voxel/volume_io.hpp"

using namespace corrtrans;
using namespace corrtrans::voxel;

namespace {

// Exact reference: gather every plane crossing of the ray, sort, and sample
// the voxel at each segment midpoint.
double segment_oracle(const VoxelVolume& vol, Vec3 o, Vec3 d) {
  d = d / length(d);
  const auto& b = vol.bounds();
  double t_in = 0.0;
  double t_out = 1e300;
  for (int a = 0; a < 3; ++a) {
    if (d[a] == 0.0) continue;
    double t0 = (b.lo[a] - o[a]) / d[a];
    double t1 = (b.hi[a] - o[a]) / d[a];
    if (t0 > t1) std::swap(t0, t1);
    t_in = std::max(t_in, t0);
    t_out = std::min(t_out, t1);
  }
  if (!(t_in < t_out)) return 0.0;
  std::vector<double> ts{t_in, t_out};
  for (int a = 0; a < 3; ++a) {
    if (d[a] == 0.0) continue;
    for (std::size_t k = 0; k <= vol.dims()[a]; ++k) {
      const double t = (b.lo[a] + static_cast<double>(k) * vol.voxel_size(a) - o[a]) / d[a];
      if (t > t_in && t < t_out) ts.push_back(t);
    }
  }
  std::sort(ts.begin(), ts.end());
  double tau = 0.0;
  for (std::size_t s = 0; s + 1 < ts.size(); ++s) {
    const double tm = 0.5 * (ts[s] + ts[s + 1]);
    const Vec3 p = o + d * tm;
    std::size_t idx[3];
    for (int a = 0; a < 3; ++a) {
      const double x = std::floor((p[a] - b.lo[a]) / vol.voxel_size(a));
      idx[a] = static_cast<std::size_t>(std::clamp(x, 0.0, static_cast<double>(vol.dims()[a] - 1)));
    }
    tau += vol(idx[0], idx[1], idx[2]) * (ts[s + 1] - ts[s]);
  }
  return tau;
}

VoxelVolume random_volume(Dims dims, std::uint64_t seed) {
  VoxelVolume v(dims, Bounds{{-1, 0, 2}, {1, 3, 3}});
  Rng r = Rng::stream(seed, 0);
  for (auto& x : v.values()) x = 5.0 * r.uniform();
  return v;
}

VolumeSpec small_spec(double corr_length = 2.0) {
  VolumeSpec s;
  s.dims = {32, 32, 32};
  s.mean = 10.0;
  s.variance = 10.0;
  s.correlation_length = corr_length;
  s.seed = 3;
  return s;
}

}  // namespace

TEST(Generator, ZeroVarianceIsConstant) {
  auto s = small_spec();
  s.variance = 0.0;
  const auto v = gen_correlated_volume(s);
  for (double x : v.values()) ASSERT_EQ(x, 10.0);
}

TEST(Generator, DecilesFollowGamma) {
  auto s = small_spec();
  s.dims = {48, 48, 48};
  auto v = gen_correlated_volume(s).values();
  std::sort(v.begin(), v.end());
  const boost::math::gamma_distribution<double> g(10.0, 1.0);  // shape mean^2/var, scale var/mean
  for (int k = 1; k <= 9; ++k) {
    const double q = boost::math::quantile(g, k / 10.0);
    const double got = v[static_cast<std::size_t>(k / 10.0 * static_cast<double>(v.size()))];
    EXPECT_NEAR(got, q, 0.02 * q) << "decile " << k;
  }
}

TEST(Generator, DeterministicAndSeeded) {
  const auto s = small_spec();
  EXPECT_EQ(gen_correlated_volume(s), gen_correlated_volume(s));
  auto t = s;
  t.seed = 4;
  EXPECT_NE(gen_correlated_volume(s), gen_correlated_volume(t));
}

TEST(Generator, RejectsBadSpecs) {
  auto s = small_spec();
  s.dims = {15, 32, 32};
  EXPECT_THROW(gen_correlated_volume(s), std::domain_error);
  s = small_spec();
  s.mean = 0.0;
  EXPECT_THROW(gen_correlated_volume(s), std::domain_error);
  s = small_spec();
  s.variance = -1.0;
  EXPECT_THROW(gen_correlated_volume(s), std::domain_error);
  s = small_spec();
  s.axis_weights = {1.0, -1.0, 1.0};
  EXPECT_THROW(gen_correlated_volume(s), std::domain_error);
}

TEST(Tracking, UniformVolume) {
  const VoxelVolume v({8, 8, 8}, Bounds{}, 3.0);
  const Vec3 d{1, 1, 1};
  EXPECT_NEAR(optical_depth(v, {{0, 0, 0}, d}), 3.0 * std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(regular_tracking(v, {{0, 0, 0}, d}), std::exp(-3.0 * std::sqrt(3.0)), 1e-12);
  EXPECT_DOUBLE_EQ(regular_tracking(v, {{2, 2, 2}, d}), 1.0);
  EXPECT_DOUBLE_EQ(regular_tracking(v, {{0.5, 0.5, -1}, {1, 0, 0}}), 1.0);
  EXPECT_THROW(optical_depth(v, {{0, 0, 0}, {0, 0, 0}}), std::domain_error);
}

TEST(Tracking, TwoHalves) {
  VoxelVolume v({2, 1, 1});
  v(0, 0, 0) = 1.0;
  v(1, 0, 0) = 5.0;
  EXPECT_NEAR(optical_depth(v, {{-1, 0.5, 0.5}, {1, 0, 0}}), 3.0, 1e-12);
  EXPECT_NEAR(optical_depth(v, {{-1, 0.5, 0.5}, {1, 0, 0}}, 1.25), 0.25, 1e-12);
  EXPECT_NEAR(optical_depth(v, {{2, 0.5, 0.5}, {-1, 0, 0}}), 3.0, 1e-12);
}

TEST(Tracking, MatchesExactSegmentOracle) {
  const auto v = random_volume({7, 11, 5}, 1);
  Rng r = Rng::stream(2, 0);
  for (int i = 0; i < 500; ++i) {
    const Vec3 o{-2 + 4 * r.uniform(), -1 + 5 * r.uniform(), 1 + 3 * r.uniform()};
    const Vec3 d{r.normal(), r.normal(), r.normal()};
    ASSERT_NEAR(optical_depth(v, {o, d}), segment_oracle(v, o, d), 1e-9) << i;
  }
  // Axis-parallel rays along voxel faces.
  for (double x : {-0.5, 0.0, 0.25}) {
    const Vec3 o{x, 0.0, 2.0};
    ASSERT_NEAR(optical_depth(v, {o, {0, 1, 0}}), segment_oracle(v, o, {0, 1, 0}), 1e-9);
  }
}

TEST(Tracking, DenseQuadratureAgreesWithinBound) {
  const auto v = random_volume({6, 6, 6}, 5);
  const Vec3 o{-1.5, -0.3, 1.7};
  const Vec3 d = Vec3{1.0, 1.3, 0.4} / length(Vec3{1.0, 1.3, 0.4});
  const double exact = optical_depth(v, {o, d});
  const int n = 200000;
  const double tmax = 8.0;
  const double h = tmax / n;
  double sum = 0.0;
  std::size_t crossings = 0;
  double last = -1.0;
  for (int k = 0; k < n; ++k) {
    const Vec3 p = o + d * ((k + 0.5) * h);
    double val = 0.0;
    bool inside = true;
    std::size_t idx[3];
    for (int a = 0; a < 3; ++a) {
      const double x = (p[a] - v.bounds().lo[a]) / v.voxel_size(a);
      if (x < 0 || x >= static_cast<double>(v.dims()[a])) inside = false;
      else idx[a] = static_cast<std::size_t>(x);
    }
    if (inside) val = v(idx[0], idx[1], idx[2]);
    if (val != last) ++crossings;
    last = val;
    sum += val * h;
  }
  // Each value jump costs at most max|value| * h.
  EXPECT_NEAR(sum, exact, static_cast<double>(crossings) * 5.0 * h);
}

TEST(Tracking, FaceBelongsToEnteredVoxel) {
  VoxelVolume v({2, 1, 1});
  v(0, 0, 0) = 1.0;
  v(1, 0, 0) = 5.0;
  std::vector<double> seen;
  for_each_segment(v, {{0.5, 0.5, 0.5}, {1, 0, 0}}, 10.0, [&](double, double, double val) { seen.push_back(val); });
  ASSERT_FALSE(seen.empty());
  EXPECT_EQ(seen.front(), 5.0);
  seen.clear();
  for_each_segment(v, {{0.5, 0.5, 0.5}, {-1, 0, 0}}, 10.0, [&](double, double, double val) { seen.push_back(val); });
  ASSERT_FALSE(seen.empty());
  EXPECT_EQ(seen.front(), 1.0);
}

TEST(Tracking, ProfileMatchesTruncatedDepth) {
  const auto v = random_volume({9, 9, 9}, 8);
  const Ray3 ray{{-1.2, 0.1, 2.1}, {1.0, 0.7, 0.2}};
  std::vector<double> depths{0.0, 0.3, 0.9, 1.4, 2.6, 5.0};
  std::vector<double> out(depths.size());
  optical_depth_profile(v, ray, depths, out);
  for (std::size_t i = 0; i < depths.size(); ++i) EXPECT_NEAR(out[i], optical_depth(v, ray, depths[i]), 1e-12);
}

TEST(Beams, ConstantVolumeIsExponential) {
  const VoxelVolume v({16, 16, 16}, Bounds{}, 4.0);
  for (int a = 0; a < 3; ++a) {
    const auto c = beam_transmittance(v, a, 8);
    ASSERT_EQ(c.t.size(), 17u);
    for (std::size_t j = 0; j < c.t.size(); ++j) EXPECT_NEAR(c.transmittance[j], std::exp(-4.0 * c.t[j]), 1e-12);
  }
}

TEST(Beams, SingleRayIsRegularTracking) {
  const auto v = random_volume({8, 8, 8}, 4);
  const auto c = beam_transmittance(v, 2, 1);
  // One ray through the center of the low z face.
  const Vec3 o{0.0, 1.5, 2.0};
  EXPECT_NEAR(c.transmittance.back(), regular_tracking(v, {o, {0, 0, 1}}), 1e-12);
}

TEST(Beams, CurvesMonotoneAndAboveJensen) {
  const auto v = gen_correlated_volume(small_spec());
  const auto c = beam_transmittance(v, 0, 16, 0, 2);
  EXPECT_DOUBLE_EQ(c.transmittance.front(), 1.0);
  for (std::size_t j = 1; j < c.t.size(); ++j) {
    ASSERT_LE(c.transmittance[j], c.transmittance[j - 1]);
    ASSERT_GE(c.transmittance[j], std::exp(-c.mean_optical_depth[j]) - 1e-15);
  }
  const auto c1 = beam_transmittance(v, 0, 16, 0, 1);
  EXPECT_EQ(c.transmittance, c1.transmittance);
}

TEST(Fit, ConstantVolumeIsPerfect) {
  const VoxelVolume v({16, 16, 16}, Bounds{}, 2.0);
  const auto r = fit_and_score(v, {4, 1});
  for (int a = 0; a < 3; ++a) {
    EXPECT_NEAR(r.gamma_rmse[a], 0.0, 1e-12);
    EXPECT_NEAR(r.exponential_rmse[a], 0.0, 1e-12);
  }
}

TEST(Fit, GammaBeatsExponentialOnCorrelatedVolume) {
  auto s = small_spec(4.0);
  s.dims = {48, 48, 48};
  s.bounds = Bounds{{0, 0, 0}, {0.5, 0.5, 0.5}};
  const auto r = fit_and_score(gen_correlated_volume(s), {24, 1});
  for (int a = 0; a < 3; ++a) EXPECT_LT(r.gamma_rmse[a], r.exponential_rmse[a]) << a;
}

TEST(Fit, IsotropicVolumeHasEqualAxisVariance) {
  auto s = small_spec(1.0);
  s.dims = {48, 48, 48};
  const auto v = gen_correlated_volume(s);
  const double x = projected_variance(v, 0);
  for (int a = 1; a < 3; ++a) EXPECT_NEAR(projected_variance(v, a), x, 0.1 * x);
}

TEST(Fit, IidVolumeRecoversShape) {
  const double alpha = 2.0;
  const double beta = 0.5;
  const auto v = gen_iid_gamma_volume({96, 96, 96}, alpha, beta, 7);
  EXPECT_NEAR(v.mean() * v.mean() / v.variance(), alpha, 0.05 * alpha);
  // Independent voxels: the column mean has variance Var / n.
  const double expect = v.variance() / 96.0;
  for (int a = 0; a < 3; ++a) EXPECT_NEAR(projected_variance(v, a), expect, 0.1 * expect);
}

TEST(VolumeIo, RoundTrip) {
  VoxelVolume v({3, 2, 4}, Bounds{{-1, -2, -3}, {1, 2, 3.5}});
  for (std::size_t i = 0; i < v.size(); ++i) v.values()[i] = 0.25 * static_cast<double>(i);
  std::stringstream ss;
  write_volume(ss, v);
  EXPECT_EQ(ss.str().size(), kVolumeHeaderSize + 4 * v.size());
  EXPECT_EQ(read_volume(ss), v);
}

TEST(VolumeIo, ReportsOffsets) {
  VoxelVolume v({2, 2, 2}, Bounds{}, 1.0);
  std::stringstream good;
  write_volume(good, v);
  const std::string bytes = good.str();

  auto offset_of = [](const std::string& b) -> long {
    std::istringstream in(b);
    try {
      read_volume(in);
    } catch (const VolumeParseError& e) {
      return static_cast<long>(e.offset());
    }
    return -1;
  };
  std::string bad = bytes;
  bad[2] = 'X';
  EXPECT_EQ(offset_of(bad), 2);
  EXPECT_EQ(offset_of(bytes.substr(0, 40)), 40);
  EXPECT_EQ(offset_of(bytes.substr(0, bytes.size() - 3)), static_cast<long>(bytes.size() - 3));
  EXPECT_EQ(offset_of(bytes + "z"), static_cast<long>(bytes.size()));
  bad = bytes;
  bad[65] = 'G';
  EXPECT_EQ(offset_of(bad), 65);
  bad = bytes;
  const float neg = -1.0f;
  bad.replace(kVolumeHeaderSize + 8, 4, reinterpret_cast<const char*>(&neg), 4);
  EXPECT_EQ(offset_of(bad), static_cast<long>(kVolumeHeaderSize + 8));
}
