#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "oracles.hpp"
#include "uavmob/special_functions.hpp"

namespace {

using namespace uavmob;

TEST(Erf, ZeroAndSaturation) {
  EXPECT_EQ(uavmob::erf(0.0), 0.0);
  EXPECT_NEAR(uavmob::erf(6.0), 1.0, 1e-15);
  EXPECT_NEAR(uavmob::erf(-6.0), -1.0, 1e-15);
}

TEST(Erf, OneAgainstQuadrature) {
  const double oracle =
      2.0 / std::sqrt(M_PI) * oracle::finite_integral([](double t) { return std::exp(-t * t); }, 0.0, 1.0);
  EXPECT_NEAR(uavmob::erf(1.0), oracle, 1e-15);
  EXPECT_NEAR(uavmob::erf(1.0), 0.8427007929497149, 1e-15);
}

TEST(Erf, OddMonotoneBounded) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = u(rng);
    EXPECT_EQ(uavmob::erf(-x), -uavmob::erf(x));
    EXPECT_LE(std::abs(uavmob::erf(x)), 1.0);
    EXPECT_GE(1.0 - uavmob::erf(x), 0.0);
    const double y = x + std::abs(u(rng)) * 1e-3;
    EXPECT_LE(uavmob::erf(x), uavmob::erf(y));
  }
}

TEST(Erfcx, MatchesExtendedPrecisionReference) {
  for (double x = -3.0; x <= 80.0; x += 0.173) {
    const long double xl = x;
    const long double ref = boost::math::erfc(xl) * std::exp(xl * xl);
    EXPECT_NEAR(erfcx(x), static_cast<double>(ref), 2e-14 * static_cast<double>(ref)) << "x=" << x;
  }
}

TEST(Dawson, ZeroAndOdd) {
  EXPECT_EQ(dawson(0.0), 0.0);
  for (double x : {0.1, 1.0, 3.7, 6.4, 6.6, 20.0}) {
    EXPECT_EQ(dawson(-x), -dawson(x));
  }
}

TEST(Dawson, Maximum) {
  EXPECT_NEAR(dawson(0.92414), 0.54104, 1e-5);
  for (double x = 0.0; x < 30.0; x += 0.01) {
    EXPECT_LE(dawson(x), 0.541044 + 1e-9);
  }
}

TEST(Dawson, LargeArgumentAsymptote) { EXPECT_NEAR(dawson(100.0), 0.005, 1e-6); }

TEST(Dawson, AgainstQuadrature) {
  for (double x = 0.05; x < 12.0; x += 0.0913) {
    const double oracle =
        oracle::finite_integral([x](double t) { return std::exp((t - x) * (t + x)); }, 0.0, x);
    EXPECT_NEAR(dawson(x), oracle, 1e-14 + 1e-13 * oracle) << "x=" << x;
  }
}

TEST(Dawson, SatisfiesDifferentialEquation) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-15.0, 15.0);
  const double h = 1e-5;
  for (int i = 0; i < 500; ++i) {
    const double x = u(rng);
    const double derivative = (dawson(x + h) - dawson(x - h)) / (2.0 * h);
    EXPECT_NEAR(derivative, 1.0 - 2.0 * x * dawson(x), 1e-6) << "x=" << x;
  }
}

TEST(ErfiScaled, SpecExamples) {
  EXPECT_EQ(erfi_scaled(1.0, 0.0), 0.0);
  EXPECT_NEAR(erfi_scaled(1.0, 1.0), oracle::erfi_scaled(1.0, 1.0), 1e-14);
  EXPECT_NEAR(erfi_scaled(1.0, 1.0), 0.6071577058, 1e-10);
  EXPECT_NEAR(erfi_scaled(0.5, 0.25), oracle::erfi_scaled(0.5, 0.25), 1e-14);
}

TEST(ErfiScaled, AgainstQuadratureAcrossRange) {
  for (double b : {1e-6, 0.3, 2.0, 17.0, 40.0, 43.0, 90.0, 300.0}) {
    for (double slack : {0.0, 0.1, 3.0}) {
      const double a = b + slack;
      const double oracle = oracle::erfi_scaled(a, b);
      EXPECT_NEAR(erfi_scaled(a, b), oracle, 1e-12 * oracle) << "a=" << a << " b=" << b;
    }
  }
}

TEST(ErfiScaled, StaysFiniteWhereErfiOverflows) {
  const double value = erfi_scaled(1e6, 1e6);
  EXPECT_TRUE(std::isfinite(value));
  // exp(-x^2) erfi(x) -> 1 / (sqrt(pi) x)
  EXPECT_NEAR(value, 1.0 / std::sqrt(M_PI * 1e6), 1e-9);
}

TEST(ErfiScaled, RejectsInvertedArguments) {
  EXPECT_THROW(erfi_scaled(1.0, 2.0), std::invalid_argument);
  EXPECT_THROW(erfi_scaled(1.0, -1.0), std::invalid_argument);
}

TEST(RegLowerGamma, SpecExamples) {
  EXPECT_EQ(reg_lower_gamma(2.5, 0.0), 0.0);
  for (double x : {0.01, 0.5, 3.0, 40.0}) {
    EXPECT_NEAR(reg_lower_gamma(1.0, x), -std::expm1(-x), 1e-15);
  }
  EXPECT_NEAR(reg_lower_gamma(1.5, 1.5), 0.6083748237, 1e-10);
}

TEST(RegLowerGamma, AgainstBoost) {
  for (double s : {0.1, 0.5, 1.5, 3.5, 10.5, 57.5, 200.5}) {
    for (double x : {1e-4, 0.1, 1.0, 2.0, 5.0, 11.0, 60.0, 190.0, 260.0}) {
      const double ref = boost::math::gamma_p(s, x);
      EXPECT_NEAR(reg_lower_gamma(s, x), ref, 1e-14 + 1e-12 * ref) << "s=" << s << " x=" << x;
    }
  }
}

TEST(RegLowerGamma, MonotoneToOne) {
  for (double s : {0.5, 4.0, 30.0}) {
    double previous = 0.0;
    for (double x = 0.0; x < 200.0; x += 0.25) {
      const double p = reg_lower_gamma(s, x);
      EXPECT_GE(p, previous);
      previous = p;
    }
    EXPECT_NEAR(previous, 1.0, 1e-15);
  }
}

TEST(RegLowerGamma, RejectsNonPositiveShape) {
  EXPECT_THROW(reg_lower_gamma(0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(reg_lower_gamma(-1.0, 1.0), std::invalid_argument);
}

TEST(Chi2, SpecExamples) {
  EXPECT_EQ(chi2_cdf(3, 0.0), 0.0);
  for (double x : {0.2, 1.0, 7.0}) {
    EXPECT_NEAR(chi2_cdf(2, x), -std::expm1(-x / 2.0), 1e-15);
  }
  EXPECT_NEAR(chi2_cdf(3, 3.0), boost::math::gamma_p(1.5, 1.5), 1e-15);
  EXPECT_NEAR(chi2_cdf(3, 3.0), 0.6083748237, 1e-10);
}

TEST(Chi2, ThreeDegreesClosedForm) {
  for (double x = 0.0; x < 60.0; x += 0.37) {
    const double closed = std::erf(std::sqrt(x / 2.0)) - std::sqrt(2.0 * x / M_PI) * std::exp(-x / 2.0);
    EXPECT_NEAR(chi2_cdf(3, x), closed, 1e-12);
  }
}

TEST(Chi2, DensityAgainstBoost) {
  for (int k : {1, 3, 5, 21, 203}) {
    boost::math::chi_squared_distribution<double> law(k);
    for (double x : {0.3, 2.0, 9.0, 40.0, 200.0}) {
      EXPECT_NEAR(chi2_pdf(k, x), boost::math::pdf(law, x), 1e-13 * boost::math::pdf(law, x) + 1e-300);
      EXPECT_NEAR(chi2_cdf(k, x), boost::math::cdf(law, x), 1e-13);
    }
  }
}

TEST(Chi2, RejectsZeroDegrees) { EXPECT_THROW(chi2_cdf(0, 1.0), std::invalid_argument); }

TEST(ParabolicCylinder, MinusOneIdentity) {
  for (double z = 0.1; z <= 10.0; z += 0.1) {
    const double identity =
        std::exp(z * z / 4.0) * std::sqrt(M_PI / 2.0) * boost::math::erfc(z / std::sqrt(2.0));
    EXPECT_NEAR(parabolic_cylinder_d(-1.0, z), identity, 1e-10 * identity) << "z=" << z;
  }
  EXPECT_NEAR(parabolic_cylinder_d(-1.0, 1.0), 0.5106437411, 1e-10);
}

TEST(ParabolicCylinder, OriginValue) {
  // D_nu(0) = 2^(nu/2) sqrt(pi) / Gamma((1 - nu)/2)
  const double nu = -0.5;
  const double origin = std::pow(2.0, nu / 2.0) * std::sqrt(M_PI) / std::tgamma((1.0 - nu) / 2.0);
  EXPECT_NEAR(origin, std::tgamma(0.25) / (std::pow(2.0, 0.75) * std::sqrt(M_PI)), 1e-14);
  EXPECT_NEAR(parabolic_cylinder_d(nu, 1e-8), origin, 1e-7);
}

TEST(ParabolicCylinder, AgainstIntegralRepresentation) {
  for (double nu : {-0.5, -1.5, -2.5, -7.5, -20.5}) {
    for (double z : {0.01, 0.5, 1.0, 3.0, 10.0, 25.0}) {
      const double oracle = oracle::scaled_parabolic_cylinder(nu, z);
      const double value = std::exp(log_parabolic_cylinder_d_scaled(nu, z));
      EXPECT_NEAR(value, oracle, 1e-10 * oracle) << "nu=" << nu << " z=" << z;
    }
  }
  const double d32 = oracle::scaled_parabolic_cylinder(-1.5, 1.0) * std::exp(-0.25);
  EXPECT_NEAR(parabolic_cylinder_d(-1.5, 1.0), d32, 1e-10 * d32);
}

TEST(ParabolicCylinder, LargeArgumentAsymptote) {
  for (double nu : {-1.5, -4.5}) {
    for (double z : {150.0, 600.0, 5000.0}) {
      const double z2 = z * z;
      const double series = 1.0 - nu * (nu - 1.0) / (2.0 * z2) +
                            nu * (nu - 1.0) * (nu - 2.0) * (nu - 3.0) / (8.0 * z2 * z2) -
                            nu * (nu - 1.0) * (nu - 2.0) * (nu - 3.0) * (nu - 4.0) * (nu - 5.0) /
                                (48.0 * z2 * z2 * z2);
      EXPECT_NEAR(log_parabolic_cylinder_d_scaled(nu, z), nu * std::log(z) + std::log(series), 1e-10);
    }
  }
}

TEST(ParabolicCylinder, RejectsOutsideDomain) {
  EXPECT_THROW(parabolic_cylinder_d(0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(parabolic_cylinder_d(0.5, 1.0), std::invalid_argument);
  EXPECT_THROW(parabolic_cylinder_d(-1.0, 0.0), std::invalid_argument);
}

TEST(SpecialFnConfig, Validation) {
  SpecialFnConfig config;
  EXPECT_NO_THROW(config.validate());
  config.rel_tol = 1e-3;
  EXPECT_THROW(config.validate(), std::invalid_argument);
  config.rel_tol = 0.0;
  EXPECT_THROW(config.validate(), std::invalid_argument);
}

} // namespace
