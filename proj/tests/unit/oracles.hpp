// Independent reference computations shared by the unit tests. Nothing here
// calls into the library under test.
#ifndef UAVMOB_TESTS_ORACLES_HPP_
#define UAVMOB_TESTS_ORACLES_HPP_

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace oracle {

inline double finite_integral(const std::function<double(double)> &f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

inline double semi_infinite_integral(const std::function<double(double)> &f) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate(f, 1e-15);
}

/// exp(z^2/4) D_nu(z) for nu < 0 from its integral representation.
inline double scaled_parabolic_cylinder(double nu, double z) {
  const double p = -nu;
  auto f = [&](double t) {
    return t <= 0.0 ? 0.0 : std::exp((p - 1.0) * std::log(t) - 0.5 * t * t - z * t - std::lgamma(p));
  };
  boost::math::quadrature::tanh_sinh<double> inner;
  const double split = 1.0;
  return inner.integrate(f, 0.0, split, 1e-15) + semi_infinite_integral([&](double u) { return f(split + u); });
}

/// exp(-a) erfi(sqrt(b)) through erfi(x) = (2/sqrt(pi)) int_0^x exp(t^2) dt.
inline double erfi_scaled(double a, double b) {
  const double x = std::sqrt(b);
  if (x == 0.0) {
    return 0.0;
  }
  const double inner = finite_integral([&](double t) { return std::exp(t * t - a); }, 0.0, x);
  return 2.0 / std::sqrt(M_PI) * inner;
}

/// P(l1 W1^2 + l2 W2^2 + l3 W3^2 <= r^2) for l1 = l2, by quadrature over
/// W3^2 = t^2 of the exponential CDF of the planar part.
inline double partial_symmetry_cdf(double l1, double l3, double r) {
  if (r <= 0.0) {
    return 0.0;
  }
  auto f = [&](double t) {
    return -std::expm1((l3 * t * t - r * r) / (2.0 * l1)) * std::exp(-0.5 * t * t) *
           std::sqrt(2.0 / M_PI);
  };
  return finite_integral(f, 0.0, r / std::sqrt(l3));
}

/// sqrt(l1 W1^2 + l2 W2^2 + l3 W3^2) sampled with std::normal_distribution.
inline std::vector<double> quadratic_form_radii(double l1, double l2, double l3, std::size_t n,
                                                std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal;
  std::vector<double> out(n);
  for (auto &r : out) {
    const double a = normal(engine);
    const double b = normal(engine);
    const double c = normal(engine);
    r = std::sqrt(l1 * a * a + l2 * b * b + l3 * c * c);
  }
  return out;
}

/// E[exp(-(R/B)^gamma)] by quadrature against a density.
inline double pconn_from_pdf(const std::function<double(double)> &pdf, double b, double gamma,
                             double upper) {
  return finite_integral([&](double r) { return pdf(r) * std::exp(-std::pow(r / b, gamma)); }, 0.0,
                         upper);
}

} // namespace oracle

#endif // UAVMOB_TESTS_ORACLES_HPP_
