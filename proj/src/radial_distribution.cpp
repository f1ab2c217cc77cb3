#include "uavmob/radial_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "uavmob/quadrature.hpp"
#include "uavmob/special_functions.hpp"

namespace uavmob {

namespace {

template <class... Ts> struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kSqrtPi = 1.7724538509055160272981674833411;
constexpr double kTwoOverSqrtPi = 2.0 / kSqrtPi;

double clamp_probability(double p) { return std::clamp(p, 0.0, 1.0); }

void require_radius(double r) {
  if (!(r >= 0.0)) {
    throw std::invalid_argument("radius must be non-negative");
  }
}

// sum_n (-w)^n / (n! (2n+1)) = int_0^1 exp(-w t^2) dt, for small |w|.
double gaussian_moment_series(double w) {
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < 60; ++n) {
    term *= -w / n;
    const double contribution = term / (2 * n + 1);
    sum += contribution;
    if (std::abs(contribution) < 1e-17 * std::abs(sum)) {
      break;
    }
  }
  return sum;
}

} // namespace

// ---------------------------------------------------------------------------
// General symmetric model

GeneralRadial::GeneralRadial(SymmetricModel model) : model_(std::move(model)) {
  const auto breaks = model_.control.breakpoints();
  auto integrand = [this](double r) { return unnormalized(r); };

  double radius;
  try {
    radius = model_.control.potential_inverse(model_.sigma * model_.sigma);
  } catch (const std::runtime_error &) {
    throw std::domain_error("GeneralRadial: potential too flat, density is not normalizable");
  }
  for (double b : breaks) {
    radius = std::max(radius, b);
  }

  double total = integrate_with_breaks(integrand, 0.0, radius, breaks, 1e-14).value;
  bool converged = false;
  for (int doubling = 0; doubling < 60; ++doubling) {
    const double piece =
        integrate_with_breaks(integrand, radius, 2.0 * radius, breaks, 1e-14).value;
    total += piece;
    radius *= 2.0;
    if (piece < 1e-14 * total) {
      converged = true;
      break;
    }
  }
  if (!converged || !(total > 0.0) || !std::isfinite(total)) {
    throw std::domain_error("GeneralRadial: tail quadrature did not converge, density is not normalizable");
  }
  k_ = 1.0 / total;
  support_ = radius;
}

double GeneralRadial::unnormalized(double r) const {
  const double s2 = model_.sigma * model_.sigma;
  return r * r * std::exp(-2.0 * model_.control.potential(r) / s2);
}

double GeneralRadial::pdf(double r) const {
  require_radius(r);
  return k_ * unnormalized(r);
}

double GeneralRadial::cdf(double r) const {
  require_radius(r);
  if (r == 0.0) {
    return 0.0;
  }
  const double upper = std::min(r, support_);
  auto integrand = [this](double t) { return unnormalized(t); };
  const double mass =
      integrate_with_breaks(integrand, 0.0, upper, model_.control.breakpoints(), 1e-14).value;
  return clamp_probability(k_ * mass);
}

double radial_pdf_general(const SymmetricModel &model, double r) {
  return GeneralRadial(model).pdf(r);
}

double radial_cdf_general(const SymmetricModel &model, double r) {
  return GeneralRadial(model).cdf(r);
}

// ---------------------------------------------------------------------------
// OU and on-off closed forms

double OuRadial::pdf(double r) const {
  require_radius(r);
  const double s2 = sigma * sigma;
  return 4.0 * std::pow(alpha, 1.5) / (kSqrtPi * s2 * sigma) * r * r * std::exp(-alpha * r * r / s2);
}

double OuRadial::cdf(double r) const { return cdf_ou(alpha, sigma, r); }

double cdf_ou(double alpha, double sigma, double r) {
  if (!(alpha > 0.0) || !(sigma > 0.0)) {
    throw std::invalid_argument("cdf_ou: alpha and sigma must be positive");
  }
  require_radius(r);
  const double u = alpha * r * r / (sigma * sigma);
  return clamp_probability(erf(std::sqrt(u)) - std::sqrt(4.0 * u / std::numbers::pi) * std::exp(-u));
}

double OcRadial::normalization() const {
  const double s2 = sigma * sigma;
  const double q = s2 * s2 + 2.0 * m * c * s2 + 2.0 * m * m * c * c;
  return 12.0 * c * c * c / (3.0 * s2 * q + 4.0 * m * m * m * c * c * c);
}

double OcRadial::pdf(double r) const {
  require_radius(r);
  const double v = r > m ? c * (r - m) : 0.0;
  return normalization() * r * r * std::exp(-2.0 * v / (sigma * sigma));
}

double OcRadial::cdf(double r) const { return cdf_oc(c, m, sigma, r); }

double cdf_oc(double c, double m, double sigma, double r) {
  if (!(c > 0.0) || !(m >= 0.0) || !(sigma > 0.0)) {
    throw std::invalid_argument("cdf_oc: requires c > 0, m >= 0, sigma > 0");
  }
  require_radius(r);
  const OcRadial law{c, m, sigma};
  const double k = law.normalization();
  if (r <= m) {
    return clamp_probability(k * r * r * r / 3.0);
  }
  const double s2 = sigma * sigma;
  const double at_m = s2 * s2 + 2.0 * m * c * s2 + 2.0 * m * m * c * c;
  const double at_r = s2 * s2 + 2.0 * r * c * s2 + 2.0 * r * r * c * c;
  const double decay = std::exp(-2.0 * c * (r - m) / s2);
  return clamp_probability(k * m * m * m / 3.0 + k * s2 / (4.0 * c * c * c) * (at_m - at_r * decay));
}

// ---------------------------------------------------------------------------
// Quadratic form series

QuadraticFormRadial::QuadraticFormRadial(const Lambdas &lambdas, double tol, int max_terms)
    : lambdas_(lambdas) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("QuadraticFormRadial: tol must be positive");
  }
  const std::array<double, 3> l = {lambdas.lambda1, lambdas.lambda2, lambdas.lambda3};
  const double min_l = lambdas.min();
  const double harmonic = 3.0 / (1.0 / l[0] + 1.0 / l[1] + 1.0 / l[2]);
  double eta = harmonic;
  diagnostics_.harmonic_eta = true;
  if (harmonic > 1.9 * min_l) {
    eta = min_l;
    diagnostics_.harmonic_eta = false;
  }
  diagnostics_.eta_used = eta;

  std::array<double, 3> ratio{}, magnitude{};
  double e0 = 1.0;
  bound_total_ = 1.0;
  for (int i = 0; i < 3; ++i) {
    ratio[i] = 1.0 - eta / l[i];
    magnitude[i] = std::abs(ratio[i]);
    e0 *= std::sqrt(eta / l[i]);
    bound_total_ /= std::sqrt(1.0 - magnitude[i]);
  }
  bound_total_ *= e0;

  weights_.push_back(e0);
  bounds_.push_back(e0);
  bound_partial_.push_back(e0);

  // H_s and its majorant, indexed by s (entry 0 unused).
  std::vector<double> h{0.0}, h_bound{0.0};
  std::array<double, 3> power{1.0, 1.0, 1.0}, power_bound{1.0, 1.0, 1.0};

  auto tail = [this] { return std::max(0.0, bound_total_ - bound_partial_.back()); };
  while (tail() > tol) {
    const auto s = weights_.size();
    if (static_cast<int>(s) >= max_terms) {
      throw std::runtime_error("quadratic_form_cdf: series did not converge within " +
                               std::to_string(max_terms) + " terms");
    }
    double hs = 0.0, hs_bound = 0.0;
    for (int i = 0; i < 3; ++i) {
      power[i] *= ratio[i];
      power_bound[i] *= magnitude[i];
      hs += power[i];
      hs_bound += power_bound[i];
    }
    h.push_back(hs);
    h_bound.push_back(hs_bound);

    double e = 0.0, e_bound = 0.0;
    for (std::size_t j = 0; j < s; ++j) {
      e += h[s - j] * weights_[j];
      e_bound += h_bound[s - j] * bounds_[j];
    }
    e /= 2.0 * static_cast<double>(s);
    e_bound /= 2.0 * static_cast<double>(s);
    weights_.push_back(e);
    bounds_.push_back(e_bound);
    bound_partial_.push_back(bound_partial_.back() + e_bound);
  }
  diagnostics_.terms_used = static_cast<int>(weights_.size());
  diagnostics_.tail_bound = tail();
}

double QuadraticFormRadial::tail_after(std::size_t k) const {
  if (k >= bound_partial_.size()) {
    return diagnostics_.tail_bound;
  }
  return std::max(0.0, bound_total_ - bound_partial_[k]);
}

double QuadraticFormRadial::cdf(double r) const {
  require_radius(r);
  if (r == 0.0) {
    return 0.0;
  }
  const double x = r * r / (2.0 * diagnostics_.eta_used);
  const double log_x = std::log(x);
  double s = 1.5;
  double p = reg_lower_gamma(s, x);
  // log of x^s e^-x / Gamma(s+1); P(s+1, x) = P(s, x) - that.
  double log_step = s * log_x - x - std::lgamma(s + 1.0);
  double sum = 0.0;
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    sum += weights_[j] * p;
    p -= std::exp(log_step);
    log_step += log_x - std::log(s + 1.0);
    s += 1.0;
    if (p * bound_total_ < 1e-17) {
      break;
    }
  }
  return clamp_probability(sum);
}

double QuadraticFormRadial::pdf(double r) const {
  require_radius(r);
  if (r == 0.0) {
    return 0.0;
  }
  const double eta = diagnostics_.eta_used;
  const double x = r * r / (2.0 * eta);
  const double log_x = std::log(x);
  // Gamma(s) density at x, starting from s = 3/2.
  double s = 1.5;
  double log_density = (s - 1.0) * log_x - x - std::lgamma(s);
  double sum = 0.0;
  for (double weight : weights_) {
    sum += weight * std::exp(log_density);
    log_density += log_x - std::log(s);
    s += 1.0;
  }
  return std::max(0.0, sum * r / eta);
}

std::pair<double, SeriesDiagnostics> quadratic_form_cdf(const Lambdas &lambdas, double r,
                                                        double tol) {
  const QuadraticFormRadial law(lambdas, tol);
  return {law.cdf(r), law.diagnostics()};
}

// ---------------------------------------------------------------------------
// Partial symmetry l1 = l2

double PartialSymmetryRadial::cdf(double r) const {
  return partial_symmetry_cdf(lambda_xy, lambda_z, r);
}

double partial_symmetry_cdf(double lambda_xy, double lambda_z, double r) {
  if (!(lambda_xy > 0.0) || !(lambda_z > 0.0)) {
    throw std::invalid_argument("partial_symmetry_cdf: lambdas must be positive");
  }
  require_radius(r);
  if (r == 0.0) {
    return 0.0;
  }
  const double l1 = lambda_xy;
  const double l3 = lambda_z;
  const double x3 = r / std::sqrt(2.0 * l3);
  const double a = r * r / (2.0 * l1);
  const double base = erf(x3);
  const double relative = l1 / l3 - 1.0;
  // exp(-a) underflows; only the erfi branch carries a compensating exp(b).
  if (a > 745.0 && relative > -kPartialSymmetryBand) {
    return clamp_probability(base);
  }
  double correction;
  if (std::abs(relative) <= kPartialSymmetryBand) {
    const double w = (l1 - l3) * r * r / (2.0 * l1 * l3);
    correction = kTwoOverSqrtPi * x3 * std::exp(-a) * gaussian_moment_series(w);
  } else if (l1 > l3) {
    const double w = r * r * (l1 - l3) / (2.0 * l1 * l3);
    correction = std::sqrt(l1) * std::exp(-a) / std::sqrt(l1 - l3) * erf(std::sqrt(w));
  } else {
    const double b = r * r * (l3 - l1) / (2.0 * l1 * l3);
    correction = std::sqrt(l1) / std::sqrt(l3 - l1) * erfi_scaled(a, b);
  }
  return clamp_probability(base - correction);
}

double PartialSymmetryRadial::pdf(double r) const {
  require_radius(r);
  if (r == 0.0) {
    return 0.0;
  }
  const double l1 = lambda_xy;
  const double l3 = lambda_z;
  const double a = r * r / (2.0 * l1);
  const double w = (l1 - l3) * r * r / (2.0 * l1 * l3);
  if (a > 745.0 && l1 / l3 - 1.0 > -kPartialSymmetryBand) {
    return 0.0;
  }
  // exp(-a) * int_0^1 exp(-w t^2) dt
  double damped;
  if (std::abs(l1 / l3 - 1.0) <= kPartialSymmetryBand) {
    damped = std::exp(-a) * gaussian_moment_series(w);
  } else if (w > 0.0) {
    damped = std::exp(-a) * 0.5 * kSqrtPi * erf(std::sqrt(w)) / std::sqrt(w);
  } else {
    damped = 0.5 * kSqrtPi * erfi_scaled(a, -w) / std::sqrt(-w);
  }
  return std::sqrt(2.0 / std::numbers::pi) * r * r / (l1 * std::sqrt(l3)) * damped;
}

// ---------------------------------------------------------------------------

double Chi2ScaledRadial::pdf(double r) const {
  require_radius(r);
  return chi2_pdf(3, r * r / lambda) * 2.0 * r / lambda;
}

double Chi2ScaledRadial::cdf(double r) const {
  require_radius(r);
  return chi2_cdf(3, r * r / lambda);
}

// ---------------------------------------------------------------------------

RadialDistribution RadialDistribution::from_model(const SymmetricModel &model) {
  return std::visit(
      overloaded{
          [&](const OuControl &law) -> RadialDistribution { return OuRadial{law.alpha, model.sigma}; },
          [&](const OnOffControl &law) -> RadialDistribution {
            return OcRadial{law.c, law.m, model.sigma};
          },
          [&](const auto &) -> RadialDistribution { return GeneralRadial(model); },
      },
      model.control.variant());
}

RadialDistribution RadialDistribution::from_lambdas(const Lambdas &l, double tol) {
  const double a = l.lambda1, b = l.lambda2, c = l.lambda3;
  if (a == b && b == c) {
    return Chi2ScaledRadial{a};
  }
  if (a == b) {
    return PartialSymmetryRadial{a, c};
  }
  if (a == c) {
    return PartialSymmetryRadial{a, b};
  }
  if (b == c) {
    return PartialSymmetryRadial{b, a};
  }
  return QuadraticFormRadial(l, tol);
}

RadialDistribution RadialDistribution::from_model(const AsymmetricModel &model, double tol) {
  return from_lambdas(lambdas(model), tol);
}

double RadialDistribution::pdf(double r) const {
  return std::visit([r](const auto &law) { return law.pdf(r); }, rep_);
}

double RadialDistribution::cdf(double r) const {
  return std::visit([r](const auto &law) { return law.cdf(r); }, rep_);
}

double RadialDistribution::upper_radius() const {
  constexpr double kSpan = 9.0; // chi2_3 survival at 81 is ~1e-17
  return std::visit(
      overloaded{
          [](const GeneralRadial &law) { return law.support(); },
          [](const OuRadial &law) { return kSpan * law.sigma / std::sqrt(2.0 * law.alpha); },
          [](const OcRadial &law) { return law.m + 40.0 * law.sigma * law.sigma / (2.0 * law.c); },
          [](const QuadraticFormRadial &law) { return kSpan * std::sqrt(law.lambdas().max()); },
          [](const PartialSymmetryRadial &law) {
            return kSpan * std::sqrt(std::max(law.lambda_xy, law.lambda_z));
          },
          [](const Chi2ScaledRadial &law) { return kSpan * std::sqrt(law.lambda); },
      },
      rep_);
}

std::string RadialDistribution::name() const {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const GeneralRadial &law) { out << "general[" << law.model().control.describe() << "]"; },
                 [&](const OuRadial &law) { out << "ou(alpha=" << law.alpha << ", sigma=" << law.sigma << ")"; },
                 [&](const OcRadial &law) {
                   out << "oc(c=" << law.c << ", m=" << law.m << ", sigma=" << law.sigma << ")";
                 },
                 [&](const QuadraticFormRadial &law) {
                   const auto &l = law.lambdas();
                   out << "quadratic_form(" << l.lambda1 << ", " << l.lambda2 << ", " << l.lambda3 << ")";
                 },
                 [&](const PartialSymmetryRadial &law) {
                   out << "partial_symmetry(" << law.lambda_xy << ", " << law.lambda_z << ")";
                 },
                 [&](const Chi2ScaledRadial &law) { out << "chi2_scaled(" << law.lambda << ")"; },
             },
             rep_);
  return out.str();
}

} // namespace uavmob
