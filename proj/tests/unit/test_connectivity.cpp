#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "uavmob/connectivity.hpp"
#include "uavmob/experiment_config.hpp"
#include "uavmob/special_functions.hpp"

namespace {

using namespace uavmob;

ConnectivitySpec at(double gamma, double b) { return ConnectivitySpec::from_length_scale(gamma, b); }

// lambda_xy, lambda_z of the connectivity figure: alpha = s = 1, beta = 10, sigma = (1, 1, 0.01).
constexpr double kLxy = 0.5 + 0.05 / 11.0;
constexpr double kLz = 0.00005 + 0.05 / 11.0;

double symmetric_gamma2(double lambda, double b) { return std::pow(1.0 + 2.0 * lambda / (b * b), -1.5); }

TEST(Spec, LengthScaleConvention) {
  const ConnectivitySpec spec{2.0, 0.25};
  EXPECT_DOUBLE_EQ(spec.length_scale(), 2.0);
  EXPECT_DOUBLE_EQ(at(4.0, 3.0).snr_ratio, std::pow(3.0, -4.0));
  EXPECT_THROW((ConnectivitySpec{1.5, 1.0}).validate(), std::invalid_argument);
  EXPECT_THROW((ConnectivitySpec{2.0, 0.0}).validate(), std::invalid_argument);
}

TEST(PconnNumeric, DegenerateAtOriginIsAlwaysConnected) {
  for (double gamma : {2.0, 3.0, 4.0}) {
    EXPECT_NEAR(pconn_numeric([](double) { return 1.0; }, at(gamma, 0.7)), 1.0, 1e-12);
  }
}

TEST(PconnNumeric, SymmetricOuGammaTwo) {
  const auto dist = RadialDistribution::from_model(SymmetricModel(ControlLaw::ou(2.0), 1.5));
  const double lambda = 1.5 * 1.5 / 4.0;
  for (double b : {0.1, 0.5, 1.0, 3.0, 20.0}) {
    EXPECT_NEAR(pconn_numeric(dist, at(2.0, b)), symmetric_gamma2(lambda, b), 1e-10);
    const auto analytic = pconn_analytic(dist, at(2.0, b));
    ASSERT_TRUE(analytic.has_value());
    EXPECT_NEAR(*analytic, symmetric_gamma2(lambda, b), 1e-14);
  }
}

TEST(PconnNumeric, AgreesWithDensityOracle) {
  const auto dist = RadialDistribution::from_lambdas(Lambdas(1.095, 0.75, 0.495));
  for (double gamma : {2.0, 2.5, 3.0, 4.0}) {
    for (double b : {0.3, 1.0, 4.0}) {
      const double oracle = oracle::pconn_from_pdf([&](double r) { return dist.pdf(r); }, b, gamma, 15.0);
      EXPECT_NEAR(pconn_numeric(dist, at(gamma, b)), oracle, 1e-9) << gamma << " " << b;
    }
  }
}

TEST(PconnNumeric, FigureSixLeftEdgeApproachesOne) {
  const auto dist = RadialDistribution::from_lambdas(Lambdas(kLxy, kLxy, kLz));
  EXPECT_GT(pconn_numeric(dist, ConnectivitySpec{2.0, 1e-2}), 0.98);
  EXPECT_GT(pconn_numeric(dist, ConnectivitySpec{2.0, 1e-4}), 0.9998);
}

TEST(PconnOnOff, MatchesQuadrature) {
  const OcRadial unit{1.0, 1.0, 1.0};
  EXPECT_NEAR(pconn_oc_gamma2(1.0, 1.0, 1.0, at(2.0, 1.0)),
              pconn_numeric([&](double r) { return unit.cdf(r); }, at(2.0, 1.0)), 1e-8);
  int points = 0;
  for (const auto &[c, m, sigma] : {std::tuple{1.0, 1.0, 1.0}, std::tuple{0.5, 0.5, 1.0},
                                    std::tuple{2.0, 0.2, 0.5}, std::tuple{0.3, 2.0, 1.2}}) {
    const OcRadial law{c, m, sigma};
    for (double b : log_space(0.05, 50.0, 15)) {
      const double numeric = pconn_numeric([&](double r) { return law.cdf(r); }, at(2.0, b));
      EXPECT_NEAR(pconn_oc_gamma2(c, m, sigma, at(2.0, b)), numeric, 1e-6) << c << " " << m << " B=" << b;
      ++points;
    }
  }
  EXPECT_GE(points, 50);
}

TEST(PconnOnOff, Limits) {
  EXPECT_NEAR(pconn_oc_gamma2(1.0, 1.0, 1.0, at(2.0, 1e5)), 1.0, 1e-8);
  EXPECT_NEAR(pconn_oc_gamma2(1.0, 1.0, 1.0, at(2.0, 1e-5)), 0.0, 1e-8);
  EXPECT_THROW(pconn_oc_gamma2(1.0, 1.0, 1.0, at(3.0, 1.0)), std::invalid_argument);
}

TEST(PconnSeries, GammaTwo) {
  const Lambdas figure4(1.095, 0.75, 0.495);
  const auto dist = RadialDistribution::from_lambdas(figure4);
  EXPECT_NEAR(pconn_series_gamma2(figure4, at(2.0, 1.0)), pconn_numeric(dist, at(2.0, 1.0)), 1e-6);
  EXPECT_NEAR(pconn_series_gamma2(Lambdas(0.4, 0.4, 0.4), at(2.0, 0.8)), symmetric_gamma2(0.4, 0.8), 1e-14);
  EXPECT_NEAR(pconn_series_gamma2(figure4, at(2.0, 1e6)), 1.0, 1e-10);
  EXPECT_THROW(pconn_series_gamma2(figure4, at(4.0, 1.0)), std::invalid_argument);
}

TEST(PconnSeries, GammaFour) {
  const Lambdas figure4(1.095, 0.75, 0.495);
  const auto dist = RadialDistribution::from_lambdas(figure4);
  EXPECT_NEAR(pconn_series_gamma4(figure4, at(4.0, 1.0)), pconn_numeric(dist, at(4.0, 1.0)), 1e-5);
  const Lambdas equal(0.6, 0.6, 0.6);
  const auto chi = RadialDistribution::from_lambdas(equal);
  for (double b : {0.2, 1.0, 5.0}) {
    EXPECT_NEAR(pconn_series_gamma4(equal, at(4.0, b)), pconn_numeric(chi, at(4.0, b)), 1e-5);
  }
  EXPECT_NEAR(pconn_series_gamma4(figure4, at(4.0, 1e-4)), 0.0, 1e-8);
  EXPECT_NEAR(pconn_series_gamma4(figure4, at(4.0, 1e3)), 1.0, 1e-8);
}

TEST(PconnSeries, GridAgainstQuadrature) {
  int points = 0;
  for (const auto &l : {std::array{1.095, 0.75, 0.495}, std::array{1.0, 0.5, 0.1}, std::array{2.0, 0.02, 0.4},
                        std::array{0.3, 0.3, 0.05}}) {
    const Lambdas lambdas(l[0], l[1], l[2]);
    const QuadraticFormRadial law(lambdas);
    for (double b : log_space(0.1, 10.0, 13)) {
      const double n2 = pconn_numeric([&](double r) { return law.cdf(r); }, at(2.0, b));
      const double n4 = pconn_numeric([&](double r) { return law.cdf(r); }, at(4.0, b));
      EXPECT_NEAR(pconn_series_gamma2(law, at(2.0, b)), n2, 1e-6);
      EXPECT_NEAR(pconn_series_gamma4(law, at(4.0, b)), n4, 1e-5);
      ++points;
    }
  }
  EXPECT_GE(points, 50);
}

TEST(PconnPartial, ClosedFormAgainstQuadrature) {
  int points = 0;
  for (const auto &[lxy, lz] : {std::pair{kLxy, kLz}, std::pair{0.5, 0.125}, std::pair{0.125, 0.5},
                                std::pair{2.0, 1.9}, std::pair{0.01, 1.0}}) {
    const PartialSymmetryRadial law{lxy, lz};
    for (double b : log_space(0.05, 20.0, 11)) {
      const double numeric = pconn_numeric([&](double r) { return law.cdf(r); }, at(2.0, b));
      EXPECT_NEAR(pconn_partial_gamma2(lxy, lz, at(2.0, b)), numeric, 1e-8) << lxy << " " << lz << " B=" << b;
      EXPECT_NEAR(pconn_partial_general(lxy, lz, at(2.0, b)), pconn_partial_gamma2(lxy, lz, at(2.0, b)), 1e-8);
      ++points;
    }
  }
  EXPECT_GE(points, 50);
}

TEST(PconnPartial, SymmetricLimits) {
  for (double lambda : {0.1, 0.5, 2.0}) {
    for (double b : {0.3, 1.0, 4.0}) {
      EXPECT_NEAR(pconn_partial_gamma2(lambda, lambda * (1.0 - 1e-8), at(2.0, b)), symmetric_gamma2(lambda, b), 1e-6);
      EXPECT_NEAR(pconn_partial_gamma2(lambda, lambda, at(2.0, b)), symmetric_gamma2(lambda, b), 1e-12);
      EXPECT_NEAR(pconn_partial_general(lambda, lambda * (1.0 - 1e-8), at(4.0, b)),
                  pconn_series_gamma4(Lambdas(lambda, lambda, lambda), at(4.0, b)), 1e-5);
    }
  }
  EXPECT_NEAR(pconn_partial_gamma2(kLxy, kLz, at(2.0, 1e6)), 1.0, 1e-10);
  EXPECT_THROW(pconn_partial_gamma2(kLxy, kLz, at(3.0, 1.0)), std::invalid_argument);
}

TEST(Pconn, StrictlyDecreasingInThreshold) {
  const std::vector<RadialDistribution> dists{
      RadialDistribution::from_model(SymmetricModel(ControlLaw::ou(1.0), 1.0)),
      RadialDistribution::from_model(SymmetricModel(ControlLaw::on_off(1.0, 1.0), 1.0)),
      RadialDistribution::from_lambdas(Lambdas(1.095, 0.75, 0.495)),
      RadialDistribution::from_lambdas(Lambdas(kLxy, kLxy, kLz))};
  for (const auto &dist : dists) {
    for (double gamma : {2.0, 3.0, 4.0}) {
      double previous = 2.0;
      for (double ratio : log_space(1e-2, 1e2, 30)) {
        const double p = pconn_numeric(dist, ConnectivitySpec{gamma, ratio});
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, 1.0);
        EXPECT_LT(p, previous) << dist.name() << " gamma=" << gamma << " ratio=" << ratio;
        previous = p;
      }
    }
  }
}

TEST(Pconn, StochasticDominance) {
  // A tighter OU law dominates a looser one pointwise, and so does on-off
  // control with a smaller threshold.
  const auto tight = RadialDistribution::from_model(SymmetricModel(ControlLaw::ou(2.0), 1.0));
  const auto loose = RadialDistribution::from_model(SymmetricModel(ControlLaw::ou(1.0), 1.0));
  const auto oc_tight = RadialDistribution::from_model(SymmetricModel(ControlLaw::on_off(1.0, 0.5), 1.0));
  const auto oc_loose = RadialDistribution::from_model(SymmetricModel(ControlLaw::on_off(1.0, 1.0), 1.0));
  for (double r = 0.0; r < 8.0; r += 0.1) {
    ASSERT_GE(tight.cdf(r), loose.cdf(r));
    ASSERT_GE(oc_tight.cdf(r), oc_loose.cdf(r) - 1e-15);
  }
  for (double gamma : {2.0, 3.0, 4.0}) {
    for (double ratio : log_space(1e-2, 1e2, 9)) {
      const ConnectivitySpec spec{gamma, ratio};
      EXPECT_GE(pconn_numeric(tight, spec), pconn_numeric(loose, spec));
      EXPECT_GE(pconn_numeric(oc_tight, spec), pconn_numeric(oc_loose, spec));
    }
  }
}

TEST(Pconn, PathLossOrderingReversesPastUnitLengthScale) {
  // exp(-s R^gamma) grows with gamma wherever R < 1, so the ordering in gamma
  // only holds while B = s^(-1/gamma) keeps most of the mass beyond R = 1.
  const auto dist = RadialDistribution::from_lambdas(Lambdas(kLxy, kLxy, kLz));
  for (double ratio : log_space(1e-3, 0.3, 21)) {
    const double p2 = pconn_numeric(dist, ConnectivitySpec{2.0, ratio});
    const double p3 = pconn_numeric(dist, ConnectivitySpec{3.0, ratio});
    const double p4 = pconn_numeric(dist, ConnectivitySpec{4.0, ratio});
    EXPECT_GE(p2, p3);
    EXPECT_GE(p3, p4);
  }
  EXPECT_LT(pconn_numeric(dist, ConnectivitySpec{2.0, 10.0}), pconn_numeric(dist, ConnectivitySpec{4.0, 10.0}));
}

TEST(Pconn, AnalyticAvailability) {
  const auto partial = RadialDistribution::from_lambdas(Lambdas(kLxy, kLxy, kLz));
  EXPECT_TRUE(pconn_analytic(partial, at(2.0, 1.0)).has_value());
  EXPECT_FALSE(pconn_analytic(partial, at(3.0, 1.0)).has_value());
  const auto four = pconn_analytic(partial, at(4.0, 1.0));
  ASSERT_TRUE(four.has_value());
  EXPECT_NEAR(*four, pconn_numeric(partial, at(4.0, 1.0)), 1e-5);
  const auto series = RadialDistribution::from_lambdas(Lambdas(1.0, 0.5, 0.2));
  EXPECT_TRUE(pconn_analytic(series, at(4.0, 1.0)).has_value());
}

TEST(PconnMonteCarlo, MatchesQuadratureWithinBinomialError) {
  const auto radii = oracle::quadratic_form_radii(kLxy, kLxy, kLz, 1'000'000, 44);
  const auto dist = RadialDistribution::from_lambdas(Lambdas(kLxy, kLxy, kLz));
  for (double gamma : {2.0, 3.0, 4.0}) {
    for (double ratio : {0.1, 1.0, 10.0}) {
      const ConnectivitySpec spec{gamma, ratio};
      const auto estimate = pconn_monte_carlo(radii, spec, 7);
      const double p = pconn_numeric(dist, spec);
      EXPECT_EQ(estimate.samples, radii.size());
      EXPECT_NEAR(estimate.standard_error, std::sqrt(p * (1.0 - p) / 1e6), 1e-5);
      EXPECT_NEAR(estimate.probability, p, 3.0 * estimate.standard_error) << gamma << " " << ratio;
    }
  }
  EXPECT_THROW(pconn_monte_carlo(std::vector<double>{}, ConnectivitySpec{2.0, 1.0}, 1), std::invalid_argument);
}

} // namespace
