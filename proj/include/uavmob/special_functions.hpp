#ifndef UAVMOB_SPECIAL_FUNCTIONS_HPP_
#define UAVMOB_SPECIAL_FUNCTIONS_HPP_

namespace uavmob {

struct SpecialFnConfig {
  double rel_tol = 1e-12;
  int max_quadrature_nodes = 1 << 16;

  /// Throws std::invalid_argument unless 0 < rel_tol < 1e-3.
  void validate() const;
};

/// Error function.
double erf(double x);

/// Scaled complementary error function exp(x^2) * erfc(x).
double erfcx(double x);

/// Dawson's integral F(x) = exp(-x^2) * int_0^x exp(t^2) dt.
double dawson(double x);

/// exp(-a) * erfi(sqrt(b)) evaluated without forming erfi, which overflows
/// long before the product does. Requires a >= b >= 0.
double erfi_scaled(double a, double b);

/// Regularized lower incomplete gamma P(s, x), s > 0, x >= 0.
double reg_lower_gamma(double s, double x);

/// Chi-squared CDF with k >= 1 degrees of freedom.
double chi2_cdf(int k, double x);

/// Chi-squared density with k >= 1 degrees of freedom.
double chi2_pdf(int k, double x);

/// Parabolic cylinder function D_nu(z) for nu < 0, z > 0, from
///   D_nu(z) = exp(-z^2/4) / Gamma(-nu) * int_0^inf t^(-nu-1) exp(-t^2/2 - z t) dt.
double parabolic_cylinder_d(double nu, double z, const SpecialFnConfig &config = {});

/// log(exp(z^2/4) * D_nu(z)) for nu < 0, z > 0. Stays finite where
/// exp(z^2/4) overflows and D_nu(z) underflows.
double log_parabolic_cylinder_d_scaled(double nu, double z,
                                       const SpecialFnConfig &config = {});

} // namespace uavmob

#endif // UAVMOB_SPECIAL_FUNCTIONS_HPP_
