#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "uavmob/statistics.hpp"

namespace {

using namespace uavmob;

TEST(KsDistance, HandComputed) {
  // Uniform on [0, 1] against samples {0.1, 0.2, 0.9}: largest gap is
  // F_n(0.2) - F(0.2) = 2/3 - 0.2.
  const std::vector<double> samples{0.9, 0.1, 0.2};
  auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
  EXPECT_NEAR(ks_distance(samples, uniform), 2.0 / 3.0 - 0.2, 1e-15);
  const std::vector<double> sorted{0.1, 0.2, 0.9};
  EXPECT_EQ(ks_distance_sorted(sorted, uniform), ks_distance(samples, uniform));
}

TEST(KsDistance, LeftLimitOfJump) {
  // One sample at 0.5: before the jump F_n = 0 while F = 0.5.
  const std::vector<double> samples{0.5};
  EXPECT_NEAR(ks_distance(samples, [](double x) { return std::clamp(x, 0.0, 1.0); }), 0.5, 1e-15);
}

TEST(KsDistance, ScalesAsInverseRootN) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u;
  std::vector<double> samples(100000);
  for (auto &x : samples) {
    x = u(rng);
  }
  const double d = ks_distance(samples, [](double x) { return x; });
  // 99.9% Kolmogorov quantile is 1.95 / sqrt(n).
  EXPECT_LT(d, 1.95 / std::sqrt(1e5));
  EXPECT_GT(d, 0.0);
}

TEST(TabulatedCdf, InterpolatesAndFallsBack) {
  int calls = 0;
  auto cdf = [&calls](double r) {
    ++calls;
    return 1.0 - std::exp(-r);
  };
  const TabulatedCdf table(cdf, 10.0, 4001);
  const int after_build = calls;
  for (double r = 0.0; r <= 10.0; r += 0.0173) {
    EXPECT_NEAR(table(r), 1.0 - std::exp(-r), 1e-6);
  }
  EXPECT_EQ(calls, after_build);
  EXPECT_DOUBLE_EQ(table(12.0), 1.0 - std::exp(-12.0));
  EXPECT_EQ(calls, after_build + 1);
}

TEST(Moments, MeanVarianceCorrelation) {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  EXPECT_DOUBLE_EQ(mean(x), 2.5);
  EXPECT_DOUBLE_EQ(variance(x), 5.0 / 3.0);
  const std::vector<double> y{2.0, 4.0, 6.0, 8.0};
  const std::vector<double> z{4.0, 3.0, 2.0, 1.0};
  EXPECT_NEAR(pearson_correlation(x, y), 1.0, 1e-15);
  EXPECT_NEAR(pearson_correlation(x, z), -1.0, 1e-15);
  const std::vector<double> flat{1.0, 1.0, 1.0, 1.0};
  EXPECT_THROW(pearson_correlation(x, flat), std::domain_error);
}

} // namespace
