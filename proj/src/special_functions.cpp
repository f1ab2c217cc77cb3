#include "uavmob/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "uavmob/quadrature.hpp"

namespace uavmob {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kSqrtPi = 1.7724538509055160272981674833411;
constexpr double kTwoOverSqrtPi = 2.0 / kSqrtPi;

// Series and asymptotic branches of Dawson's integral meet here. At 6.5 the
// optimally truncated asymptotic series is accurate to ~exp(-42).
constexpr double kDawsonSwitch = 6.5;

double dawson_series(double x) {
  // exp(-x^2) * sum_n x^(2n+1) / (n! (2n+1)); all terms positive.
  const double x2 = x * x;
  double term = x;
  double sum = x;
  for (int n = 1; n < 500; ++n) {
    term *= x2 / n;
    const double contribution = term / (2 * n + 1);
    sum += contribution;
    if (contribution < kEps * 0.25 * sum) {
      break;
    }
  }
  return std::exp(-x2) * sum;
}

double dawson_asymptotic(double x) {
  // 1/(2x) * sum_n (2n-1)!! / (2x^2)^n, truncated at the smallest term.
  const double inv = 1.0 / (2.0 * x * x);
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < 200; ++n) {
    const double next = term * (2 * n - 1) * inv;
    if (next >= term) {
      break;
    }
    term = next;
    sum += term;
    if (term < kEps * 0.25 * sum) {
      break;
    }
  }
  return sum / (2.0 * x);
}

// exp(x^2) with the rounding error of x*x folded back in.
double exp_square(double x) {
  const double x2 = x * x;
  const double residual = std::fma(x, x, -x2);
  return std::exp(x2) * (1.0 + residual);
}

double lower_gamma_series(double s, double x) {
  double term = 1.0 / s;
  double sum = term;
  for (int n = 1; n < 100000; ++n) {
    term *= x / (s + n);
    sum += term;
    if (term < sum * kEps * 0.5) {
      break;
    }
  }
  return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// Q(s, x) by the modified Lentz continued fraction.
double upper_gamma_fraction(double s, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) {
      d = kTiny;
    }
    c = b + an / c;
    if (std::abs(c) < kTiny) {
      c = kTiny;
    }
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) {
      break;
    }
  }
  return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
}

} // namespace

void SpecialFnConfig::validate() const {
  if (!(rel_tol > 0.0 && rel_tol < 1e-3)) {
    throw std::invalid_argument("SpecialFnConfig: rel_tol must lie in (0, 1e-3)");
  }
  if (max_quadrature_nodes < 64) {
    throw std::invalid_argument("SpecialFnConfig: max_quadrature_nodes must be >= 64");
  }
}

double erf(double x) { return std::erf(x); }

double erfcx(double x) {
  if (x < 0.0) {
    return 2.0 * exp_square(x) - erfcx(-x);
  }
  if (x < 10.0) {
    return exp_square(x) * std::erfc(x);
  }
  const double inv = 1.0 / (2.0 * x * x);
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < 100; ++n) {
    const double next = -term * (2 * n - 1) * inv;
    if (std::abs(next) >= std::abs(term)) {
      break;
    }
    term = next;
    sum += term;
    if (std::abs(term) < kEps * 0.25) {
      break;
    }
  }
  return sum / (x * kSqrtPi);
}

double dawson(double x) {
  const double ax = std::abs(x);
  const double value = ax < kDawsonSwitch ? dawson_series(ax) : dawson_asymptotic(ax);
  return std::copysign(value, x);
}

double erfi_scaled(double a, double b) {
  if (!(b >= 0.0) || !(a >= b)) {
    throw std::invalid_argument("erfi_scaled: requires a >= b >= 0, got a=" +
                                std::to_string(a) + " b=" + std::to_string(b));
  }
  if (b == 0.0) {
    return 0.0;
  }
  // erfi(y) = 2/sqrt(pi) * exp(y^2) * F(y)
  return kTwoOverSqrtPi * std::exp(b - a) * dawson(std::sqrt(b));
}

double reg_lower_gamma(double s, double x) {
  if (!(s > 0.0)) {
    throw std::invalid_argument("reg_lower_gamma: s must be positive");
  }
  if (!(x >= 0.0)) {
    throw std::invalid_argument("reg_lower_gamma: x must be non-negative");
  }
  if (x == 0.0) {
    return 0.0;
  }
  if (std::isinf(x)) {
    return 1.0;
  }
  if (x < s + 1.0) {
    return std::min(1.0, lower_gamma_series(s, x));
  }
  return std::max(0.0, 1.0 - upper_gamma_fraction(s, x));
}

double chi2_cdf(int k, double x) {
  if (k < 1) {
    throw std::invalid_argument("chi2_cdf: degrees of freedom must be >= 1");
  }
  return reg_lower_gamma(0.5 * k, 0.5 * x);
}

double chi2_pdf(int k, double x) {
  if (k < 1) {
    throw std::invalid_argument("chi2_pdf: degrees of freedom must be >= 1");
  }
  if (!(x >= 0.0)) {
    throw std::invalid_argument("chi2_pdf: x must be non-negative");
  }
  const double half_k = 0.5 * k;
  if (x == 0.0) {
    if (k == 1) {
      return std::numeric_limits<double>::infinity();
    }
    return k == 2 ? 0.5 : 0.0;
  }
  return std::exp((half_k - 1.0) * std::log(x) - 0.5 * x -
                  half_k * std::numbers::ln2 - std::lgamma(half_k));
}

double log_parabolic_cylinder_d_scaled(double nu, double z,
                                       const SpecialFnConfig &config) {
  config.validate();
  if (!(nu < 0.0)) {
    throw std::invalid_argument("parabolic_cylinder_d: nu must be negative");
  }
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw std::invalid_argument("parabolic_cylinder_d: z must be positive and finite");
  }
  const double p = -nu;
  // log of the integrand t^(p-1) exp(-t^2/2 - z t)
  auto log_integrand = [p, z](double t) {
    return (p - 1.0) * std::log(t) - 0.5 * t * t - z * t;
  };
  // Split at the mode when it is interior, otherwise at a scale point.
  const double split = p > 1.0 ? 0.5 * (std::sqrt(z * z + 4.0 * (p - 1.0)) - z)
                               : 1.0 / (1.0 + z);
  const double reference = log_integrand(split);

  double upper = split + 1.0;
  while (log_integrand(upper) - reference > -60.0) {
    upper = split + 2.0 * (upper - split);
  }

  // tanh-sinh levels double the node count; cap them by the node budget.
  int levels = 1;
  while ((64 << levels) < config.max_quadrature_nodes && levels < 14) {
    ++levels;
  }
  // For p < 1 the substitution t = split * v^(1/p) absorbs t^(p-1).
  const double log_jacobian = p * std::log(split) - std::log(p);
  auto left_part = [&](double v, double from_zero, double) {
    if (p >= 1.0) {
      return std::exp(log_integrand(from_zero) - reference);
    }
    const double t = split * std::pow(v, 1.0 / p);
    return std::exp(log_jacobian - 0.5 * t * t - z * t - reference);
  };
  auto right_part = [&](double t, double, double) {
    return std::exp(log_integrand(t) - reference);
  };
  const auto left = p >= 1.0 ? tanh_sinh(left_part, 0.0, split, config.rel_tol, levels)
                             : tanh_sinh(left_part, 0.0, 1.0, config.rel_tol, levels);
  const auto right = tanh_sinh(right_part, split, upper, config.rel_tol, levels);
  const double integral = left.value + right.value;
  if (!(integral > 0.0) || !std::isfinite(integral)) {
    throw std::runtime_error("parabolic_cylinder_d: quadrature failed");
  }
  return reference + std::log(integral) - std::lgamma(p);
}

double parabolic_cylinder_d(double nu, double z, const SpecialFnConfig &config) {
  return std::exp(log_parabolic_cylinder_d_scaled(nu, z, config) - 0.25 * z * z);
}

} // namespace uavmob
