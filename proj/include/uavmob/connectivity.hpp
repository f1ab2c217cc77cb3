#ifndef UAVMOB_CONNECTIVITY_HPP_
#define UAVMOB_CONNECTIVITY_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>

#include "uavmob/radial_distribution.hpp"

namespace uavmob {

/// SNR-threshold link criterion under Rayleigh fading:
/// connected iff A R^-gamma |h|^2 > SNR0 with |h|^2 ~ Exp(1).
///
/// B = (A / SNR0)^(1/gamma) = snr_ratio^(-1/gamma), where snr_ratio = SNR0/A.
struct ConnectivitySpec {
  double gamma;
  double snr_ratio;

  static ConnectivitySpec from_length_scale(double gamma, double b);
  double length_scale() const;
  void validate() const;
};

/// P_conn = int_0^inf F_R(B x^(1/gamma)) e^-x dx by adaptive quadrature.
double pconn_numeric(const std::function<double(double)> &cdf, const ConnectivitySpec &spec);
double pconn_numeric(const RadialDistribution &dist, const ConnectivitySpec &spec);

/// On-off control, gamma = 2. Closed form of E[exp(-R^2 / B^2)] using
/// erf and the scaled erfc.
double pconn_oc_gamma2(double c, double m, double sigma, const ConnectivitySpec &spec);

/// sum_j e_j (1 + 2 eta / B^2)^-(j + 3/2), gamma = 2.
double pconn_series_gamma2(const Lambdas &lambdas, const ConnectivitySpec &spec, double tol = 1e-12);
double pconn_series_gamma2(const QuadraticFormRadial &law, const ConnectivitySpec &spec, double tol = 1e-12);

/// sum_j e_j z^(j+3/2) exp(z^2/4) D_{-j-3/2}(z), z = B^2 / (2 sqrt(2) eta),
/// gamma = 4. Each term is assembled in log space.
double pconn_series_gamma4(const Lambdas &lambdas, const ConnectivitySpec &spec, double tol = 1e-12);
double pconn_series_gamma4(const QuadraticFormRadial &law, const ConnectivitySpec &spec, double tol = 1e-12);

/// l1 = l2 = lambda_xy, l3 = lambda_z, gamma = 2:
///   sqrt(B^2 / (B^2 + 2 l3)) * (1 - 2 l1 / (B^2 + 2 l1)).
double pconn_partial_gamma2(double lambda_xy, double lambda_z, const ConnectivitySpec &spec);

/// Partial symmetry at any gamma >= 2 by quadrature.
double pconn_partial_general(double lambda_xy, double lambda_z, const ConnectivitySpec &spec);

/// Closed form for the distribution when one exists at this gamma.
std::optional<double> pconn_analytic(const RadialDistribution &dist, const ConnectivitySpec &spec,
                                     double tol = 1e-12);

struct MonteCarloEstimate {
  double probability;
  double standard_error;
  std::size_t samples;
};

/// Pairs each radius with an independent unit-exponential fading draw.
MonteCarloEstimate pconn_monte_carlo(std::span<const double> radii, const ConnectivitySpec &spec,
                                     std::uint64_t seed);

} // namespace uavmob

#endif // UAVMOB_CONNECTIVITY_HPP_
