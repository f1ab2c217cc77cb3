#include "uavmob/connectivity.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/exponential_distribution.hpp>

#include "uavmob/quadrature.hpp"
#include "uavmob/special_functions.hpp"

namespace uavmob {

namespace {

constexpr double kSqrtPi = 1.7724538509055160272981674833411;

// e^-37 < 1e-16: the exponential weight beyond this is negligible.
constexpr double kUpperX = 37.0;

void require_gamma(const ConnectivitySpec &spec, double gamma, const char *who) {
  spec.validate();
  if (spec.gamma != gamma) {
    throw std::invalid_argument(std::string(who) + ": requires gamma = " + std::to_string(gamma));
  }
}

// int_0^mu u^2 exp(-u^2) du
double gaussian_second_moment(double mu) {
  if (mu < 0.5) {
    const double mu2 = mu * mu;
    double power = mu2 * mu;
    double sum = power / 3.0;
    for (int k = 1; k < 40; ++k) {
      power *= -mu2 / k;
      const double term = power / (2 * k + 3);
      sum += term;
      if (std::abs(term) < 1e-17 * sum) {
        break;
      }
    }
    return sum;
  }
  return 0.5 * (0.5 * kSqrtPi * erf(mu) - mu * std::exp(-mu * mu));
}

// G(u0) = (u0/2 - h) + sqrt(pi)/2 (1/2 + h^2) erfcx(u0), u0 = h + mu.
// The two parts cancel to O(u0^-3) for large u0, so the asymptotic expansion
// of erfcx is substituted and the cancelling orders removed analytically.
double on_off_tail_bracket(double h, double mu) {
  const double u0 = h + mu;
  if (u0 < 10.0) {
    return (0.5 * u0 - h) + 0.5 * kSqrtPi * (0.5 + h * h) * erfcx(u0);
  }
  const double inv2 = 1.0 / (u0 * u0);
  // c_n u0^-2n with c_n = (-1)^n (2n-1)!! / 2^n, n >= 1
  double coeff = 1.0;
  double t_sum = 0.0;      // sum_{n>=1}
  double t_sum_tail = 0.0; // sum_{n>=2}
  double previous = 1.0;
  for (int n = 1; n < 60; ++n) {
    coeff *= -(2.0 * n - 1.0) * 0.5 * inv2;
    if (std::abs(coeff) >= std::abs(previous)) {
      break;
    }
    previous = coeff;
    t_sum += coeff;
    if (n >= 2) {
      t_sum_tail += coeff;
    }
    if (std::abs(coeff) < 1e-18) {
      break;
    }
  }
  return mu * mu / (2.0 * u0) + 0.5 * u0 * t_sum_tail - mu * t_sum +
         (0.5 + mu * mu) * t_sum / (2.0 * u0);
}

} // namespace

ConnectivitySpec ConnectivitySpec::from_length_scale(double gamma, double b) {
  if (!(b > 0.0)) {
    throw std::invalid_argument("ConnectivitySpec: B must be positive");
  }
  ConnectivitySpec spec{gamma, std::pow(b, -gamma)};
  spec.validate();
  return spec;
}

double ConnectivitySpec::length_scale() const { return std::pow(snr_ratio, -1.0 / gamma); }

void ConnectivitySpec::validate() const {
  if (!(gamma >= 2.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("ConnectivitySpec: gamma must be >= 2");
  }
  if (!(snr_ratio > 0.0) || !std::isfinite(snr_ratio)) {
    throw std::invalid_argument("ConnectivitySpec: snr_ratio must be positive");
  }
}

double pconn_numeric(const std::function<double(double)> &cdf, const ConnectivitySpec &spec) {
  spec.validate();
  const double b = spec.length_scale();
  const double g = spec.gamma;
  // x = u^gamma removes the x^(3/gamma) behaviour at the origin.
  auto integrand = [&](double u) {
    if (u == 0.0) {
      return 0.0;
    }
    const double ug = std::pow(u, g);
    return cdf(b * u) * g * ug / u * std::exp(-ug);
  };
  const double upper = std::pow(kUpperX, 1.0 / g);
  const auto result = integrate(integrand, 0.0, upper, 1e-13, 1e-16);
  return std::clamp(result.value, 0.0, 1.0);
}

double pconn_numeric(const RadialDistribution &dist, const ConnectivitySpec &spec) {
  return pconn_numeric([&dist](double r) { return dist.cdf(r); }, spec);
}

double pconn_oc_gamma2(double c, double m, double sigma, const ConnectivitySpec &spec) {
  require_gamma(spec, 2.0, "pconn_oc_gamma2");
  if (!(c > 0.0) || !(m >= 0.0) || !(sigma > 0.0)) {
    throw std::invalid_argument("pconn_oc_gamma2: requires c > 0, m >= 0, sigma > 0");
  }
  const double b = spec.length_scale();
  const double k = OcRadial{c, m, sigma}.normalization();
  const double mu = m / b;
  const double h = c * b / (sigma * sigma);
  const double b3 = b * b * b;
  const double inner = k * b3 * gaussian_second_moment(mu);
  const double outer = k * b3 * std::exp(-mu * mu) * on_off_tail_bracket(h, mu);
  return std::clamp(inner + outer, 0.0, 1.0);
}

double pconn_series_gamma2(const QuadraticFormRadial &law, const ConnectivitySpec &spec, double tol) {
  require_gamma(spec, 2.0, "pconn_series_gamma2");
  const double b = spec.length_scale();
  const double q = 1.0 / (1.0 + 2.0 * law.eta() / (b * b));
  const auto &weights = law.weights();
  double factor = q * std::sqrt(q);
  double sum = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    sum += weights[j] * factor;
    factor *= q;
    if (law.tail_after(j + 1) * factor < tol) {
      break;
    }
  }
  return std::clamp(sum, 0.0, 1.0);
}

double pconn_series_gamma2(const Lambdas &lambdas, const ConnectivitySpec &spec, double tol) {
  return pconn_series_gamma2(QuadraticFormRadial(lambdas, tol), spec, tol);
}

double pconn_series_gamma4(const QuadraticFormRadial &law, const ConnectivitySpec &spec, double tol) {
  require_gamma(spec, 4.0, "pconn_series_gamma4");
  const double b = spec.length_scale();
  const double z = b * b / (2.0 * std::sqrt(2.0) * law.eta());
  const double log_z = std::log(z);
  SpecialFnConfig config;
  config.rel_tol = 1e-13;
  const auto &weights = law.weights();
  double sum = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    const double p = static_cast<double>(j) + 1.5;
    // z^p exp(z^2/4) D_{-p}(z) lies in (0, 1] and decreases with p.
    const double log_factor = p * log_z + log_parabolic_cylinder_d_scaled(-p, z, config);
    const double factor = std::exp(log_factor);
    if (!std::isfinite(factor)) {
      throw std::runtime_error("pconn_series_gamma4: non-finite term");
    }
    sum += weights[j] * factor;
    if (law.tail_after(j + 1) * factor < tol) {
      break;
    }
  }
  return std::clamp(sum, 0.0, 1.0);
}

double pconn_series_gamma4(const Lambdas &lambdas, const ConnectivitySpec &spec, double tol) {
  return pconn_series_gamma4(QuadraticFormRadial(lambdas, tol), spec, tol);
}

double pconn_partial_gamma2(double lambda_xy, double lambda_z, const ConnectivitySpec &spec) {
  require_gamma(spec, 2.0, "pconn_partial_gamma2");
  if (!(lambda_xy > 0.0) || !(lambda_z > 0.0)) {
    throw std::invalid_argument("pconn_partial_gamma2: lambdas must be positive");
  }
  const double b2 = std::pow(spec.length_scale(), 2);
  return std::sqrt(b2 / (b2 + 2.0 * lambda_z)) * (1.0 - 2.0 * lambda_xy / (b2 + 2.0 * lambda_xy));
}

double pconn_partial_general(double lambda_xy, double lambda_z, const ConnectivitySpec &spec) {
  return pconn_numeric(RadialDistribution(PartialSymmetryRadial{lambda_xy, lambda_z}), spec);
}

std::optional<double> pconn_analytic(const RadialDistribution &dist, const ConnectivitySpec &spec,
                                     double tol) {
  spec.validate();
  const bool gamma2 = spec.gamma == 2.0;
  const bool gamma4 = spec.gamma == 4.0;
  const auto &rep = dist.representation();
  auto symmetric = [&](double lambda) -> std::optional<double> {
    if (gamma2) {
      return std::pow(1.0 + 2.0 * lambda / std::pow(spec.length_scale(), 2), -1.5);
    }
    if (gamma4) {
      return pconn_series_gamma4(Lambdas(lambda, lambda, lambda), spec, tol);
    }
    return std::nullopt;
  };
  if (const auto *ou = std::get_if<OuRadial>(&rep)) {
    return symmetric(ou->sigma * ou->sigma / (2.0 * ou->alpha));
  }
  if (const auto *chi = std::get_if<Chi2ScaledRadial>(&rep)) {
    return symmetric(chi->lambda);
  }
  if (const auto *oc = std::get_if<OcRadial>(&rep)) {
    return gamma2 ? std::optional(pconn_oc_gamma2(oc->c, oc->m, oc->sigma, spec)) : std::nullopt;
  }
  if (const auto *qf = std::get_if<QuadraticFormRadial>(&rep)) {
    if (gamma2) {
      return pconn_series_gamma2(*qf, spec, tol);
    }
    if (gamma4) {
      return pconn_series_gamma4(*qf, spec, tol);
    }
    return std::nullopt;
  }
  if (const auto *ps = std::get_if<PartialSymmetryRadial>(&rep)) {
    if (gamma2) {
      return pconn_partial_gamma2(ps->lambda_xy, ps->lambda_z, spec);
    }
    if (gamma4) {
      return pconn_series_gamma4(Lambdas(ps->lambda_xy, ps->lambda_xy, ps->lambda_z), spec, tol);
    }
    return std::nullopt;
  }
  return std::nullopt;
}

MonteCarloEstimate pconn_monte_carlo(std::span<const double> radii, const ConnectivitySpec &spec,
                                     std::uint64_t seed) {
  spec.validate();
  if (radii.empty()) {
    throw std::invalid_argument("pconn_monte_carlo: no samples");
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0xfadeu};
  boost::random::mt19937_64 engine(seq);
  boost::random::exponential_distribution<double> fading(1.0);
  std::size_t connected = 0;
  for (double r : radii) {
    // A R^-gamma |h|^2 > SNR0  <=>  |h|^2 > snr_ratio R^gamma
    if (fading(engine) > spec.snr_ratio * std::pow(r, spec.gamma)) {
      ++connected;
    }
  }
  const double n = static_cast<double>(radii.size());
  const double p = static_cast<double>(connected) / n;
  return {p, std::sqrt(p * (1.0 - p) / n), radii.size()};
}

} // namespace uavmob
