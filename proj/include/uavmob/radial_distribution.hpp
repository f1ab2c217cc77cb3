#ifndef UAVMOB_RADIAL_DISTRIBUTION_HPP_
#define UAVMOB_RADIAL_DISTRIBUTION_HPP_

#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "uavmob/mobility_models.hpp"

namespace uavmob {

struct SeriesDiagnostics {
  int terms_used = 0;
  double tail_bound = 0.0;
  double eta_used = 0.0;
  /// True when eta = 3 / (1/l1 + 1/l2 + 1/l3) was usable, false when the
  /// fallback eta = min(l) was taken.
  bool harmonic_eta = true;
};

/// Steady-state radius of an arbitrary symmetric model,
/// f(r) = K r^2 exp(-2 V(r) / sigma^2), with K found by quadrature.
class GeneralRadial {
public:
  /// Throws std::domain_error if the density cannot be normalised.
  explicit GeneralRadial(SymmetricModel model);

  double pdf(double r) const;
  double cdf(double r) const;
  double normalization() const { return k_; }
  const SymmetricModel &model() const { return model_; }
  /// Radius beyond which less than 1e-14 of the mass lies.
  double support() const { return support_; }

private:
  double unnormalized(double r) const;
  SymmetricModel model_;
  double k_ = 0.0;
  double support_ = 0.0;
};

/// Maxwell law of the OU model.
struct OuRadial {
  double alpha;
  double sigma;
  double pdf(double r) const;
  double cdf(double r) const;
};

/// Closed form for on-off control.
struct OcRadial {
  double c;
  double m;
  double sigma;
  double pdf(double r) const;
  double cdf(double r) const;
  double normalization() const;
};

/// R^2 = l1 W1^2 + l2 W2^2 + l3 W3^2 as the chi-squared mixture
///   F(r) = sum_j e_j P(chi2_{3+2j} <= r^2 / eta).
/// The weights are computed once and truncated when a rigorous bound on the
/// neglected mass drops below `tol`.
class QuadraticFormRadial {
public:
  /// Throws std::runtime_error if the bound is not met within max_terms.
  explicit QuadraticFormRadial(const Lambdas &lambdas, double tol = 1e-12,
                               int max_terms = 10000);

  double pdf(double r) const;
  double cdf(double r) const;

  const Lambdas &lambdas() const { return lambdas_; }
  const std::vector<double> &weights() const { return weights_; }
  /// Majorant weights bounding |e_j|.
  const std::vector<double> &weight_bounds() const { return bounds_; }
  /// Bound on sum_{j > k} |e_j|.
  double tail_after(std::size_t k) const;
  double eta() const { return diagnostics_.eta_used; }
  const SeriesDiagnostics &diagnostics() const { return diagnostics_; }

private:
  Lambdas lambdas_;
  std::vector<double> weights_;
  std::vector<double> bounds_;
  std::vector<double> bound_partial_; // prefix sums of bounds_
  double bound_total_ = 1.0;
  SeriesDiagnostics diagnostics_;
};

/// l1 = l2 = lambda_xy, l3 = lambda_z.
struct PartialSymmetryRadial {
  double lambda_xy;
  double lambda_z;
  double pdf(double r) const;
  double cdf(double r) const;
};

/// R^2 = lambda chi2_3.
struct Chi2ScaledRadial {
  double lambda;
  double pdf(double r) const;
  double cdf(double r) const;
};

/// Any of the representations above behind one value type.
class RadialDistribution {
public:
  using Variant = std::variant<GeneralRadial, OuRadial, OcRadial, QuadraticFormRadial,
                               PartialSymmetryRadial, Chi2ScaledRadial>;

  template <class T>
    requires std::is_constructible_v<Variant, T>
  RadialDistribution(T representation) : rep_(std::move(representation)) {}

  /// Picks the closed form for the symmetric model when one exists.
  static RadialDistribution from_model(const SymmetricModel &model);
  /// Chi-squared when all lambdas match, partial symmetry when two do,
  /// series otherwise.
  static RadialDistribution from_lambdas(const Lambdas &lambdas, double tol = 1e-12);
  static RadialDistribution from_model(const AsymmetricModel &model, double tol = 1e-12);

  double pdf(double r) const;
  double cdf(double r) const;
  /// Radius by which the cdf exceeds 1 - 1e-12; used to size grids.
  double upper_radius() const;
  std::string name() const;
  const Variant &representation() const { return rep_; }

private:
  Variant rep_;
};

double radial_pdf_general(const SymmetricModel &model, double r);
double radial_cdf_general(const SymmetricModel &model, double r);

/// erf(sqrt(a r^2 / s^2)) - sqrt(4 a r^2 / (pi s^2)) exp(-a r^2 / s^2)
double cdf_ou(double alpha, double sigma, double r);

double cdf_oc(double c, double m, double sigma, double r);

/// Returns the series value and its truncation diagnostics.
std::pair<double, SeriesDiagnostics> quadratic_form_cdf(const Lambdas &lambdas, double r,
                                                        double tol = 1e-12);

/// Relative width of the band |l_xy / l_z - 1| handled by the power series.
inline constexpr double kPartialSymmetryBand = 1e-6;

double partial_symmetry_cdf(double lambda_xy, double lambda_z, double r);

} // namespace uavmob

#endif // UAVMOB_RADIAL_DISTRIBUTION_HPP_
