#include "uavmob/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

#include "uavmob/connectivity.hpp"
#include "uavmob/csv.hpp"
#include "uavmob/quadrature.hpp"
#include "uavmob/special_functions.hpp"
#include "uavmob/statistics.hpp"

namespace uavmob {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310005024157652848110;

std::string number(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

ModelSpec on_off_spec(double c, double m, double sigma) {
  ModelSpec spec;
  spec.control = ControlKind::OnOff;
  spec.c = c;
  spec.m = m;
  spec.sigma = sigma;
  spec.label = "control=onoff,c=" + number(c) + ",m=" + number(m);
  return spec;
}

ModelSpec ou_spec(double alpha, double sigma) {
  ModelSpec spec;
  spec.alpha = alpha;
  spec.sigma = sigma;
  spec.label = "control=ou,alpha=" + number(alpha);
  return spec;
}

ModelSpec axis_spec(ModelKind kind, std::array<double, 3> sigmas, double beta) {
  ModelSpec spec;
  spec.kind = kind;
  for (int i = 0; i < 3; ++i) {
    spec.axes[i] = AxisParams{1.0, sigmas[i], beta, 1.0};
  }
  return spec;
}

std::vector<std::pair<std::string, std::string>> label_tags(const std::string &label) {
  std::vector<std::pair<std::string, std::string>> tags;
  std::istringstream in(label);
  std::string tag;
  while (std::getline(in, tag, ',')) {
    const auto eq = tag.find('=');
    if (eq == std::string::npos) {
      tags.emplace_back(tag, "");
    } else {
      tags.emplace_back(tag.substr(0, eq), tag.substr(eq + 1));
    }
  }
  return tags;
}

std::string join_tags(const std::vector<std::pair<std::string, std::string>> &tags) {
  std::string out;
  for (const auto &[key, value] : tags) {
    if (!out.empty()) {
      out += ',';
    }
    out += value.empty() ? key : key + "=" + value;
  }
  return out;
}

bool key_covers(const std::string &override_key, const std::string &tag_key) {
  if (override_key == tag_key) {
    return true;
  }
  for (const char *suffix : {"_x", "_y", "_z"}) {
    if (override_key + suffix == tag_key) {
      return true;
    }
  }
  return false;
}

std::string file_safe(std::string label) {
  std::replace(label.begin(), label.end(), ',', '_');
  return label;
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) {
    grid[i] = lo + (hi - lo) * i / (n - 1);
  }
  return grid;
}

double max_abs_difference(const std::vector<double> &points, const std::function<double(double)> &f,
                          const std::function<double(double)> &g) {
  double worst = 0.0;
  for (double x : points) {
    worst = std::max(worst, std::abs(f(x) - g(x)));
  }
  return worst;
}

// NaN never passes.
ValidationRecord error_record(std::string name, std::string metric, double value, double tol,
                              std::size_t count) {
  return {std::move(name), std::move(metric), value, tol, value <= tol, count};
}

/// Exact oracle for l1 = l2: 1-D quadrature over v = t^2 of
///   [1 - exp((l3 v - r^2) / (2 l1))] e^(-v/2) / sqrt(2 pi v).
double partial_symmetry_quadrature(double l1, double l3, double r) {
  if (r <= 0.0) {
    return 0.0;
  }
  const double upper = r / std::sqrt(l3);
  auto f = [&](double t) {
    return -std::expm1((l3 * t * t - r * r) / (2.0 * l1)) * std::exp(-0.5 * t * t) * 2.0 / kSqrt2Pi;
  };
  return integrate(f, 0.0, upper, 1e-13, 1e-16).value;
}

/// KS distance between `dist` and n brute-force draws of
/// l1 W1^2 + l2 W2^2 + l3 W3^2.
double quadratic_form_ks(const Lambdas &lambdas, const std::function<double(double)> &cdf,
                         double upper, std::size_t n, std::uint64_t seed) {
  boost::random::mt19937_64 engine(seed);
  boost::random::normal_distribution<double> normal;
  std::vector<double> radii(n);
  for (auto &r : radii) {
    const double w1 = normal(engine);
    const double w2 = normal(engine);
    const double w3 = normal(engine);
    r = std::sqrt(lambdas.lambda1 * w1 * w1 + lambdas.lambda2 * w2 * w2 + lambdas.lambda3 * w3 * w3);
  }
  return ks_distance(radii, TabulatedCdf(cdf, upper));
}

/// Closed form vs quadrature tolerance for a representation at gamma.
std::optional<double> pconn_tolerance(const RadialDistribution &dist, double gamma) {
  const auto &rep = dist.representation();
  const bool gamma2 = gamma == 2.0;
  const bool gamma4 = gamma == 4.0;
  if (std::holds_alternative<OuRadial>(rep) || std::holds_alternative<Chi2ScaledRadial>(rep)) {
    return gamma2 ? std::optional(1e-8) : gamma4 ? std::optional(1e-5) : std::nullopt;
  }
  if (std::holds_alternative<OcRadial>(rep)) {
    return gamma2 ? std::optional(1e-6) : std::nullopt;
  }
  if (std::holds_alternative<QuadraticFormRadial>(rep)) {
    return gamma2 ? std::optional(1e-6) : gamma4 ? std::optional(1e-5) : std::nullopt;
  }
  if (std::holds_alternative<PartialSymmetryRadial>(rep)) {
    return gamma2 ? std::optional(1e-8) : std::nullopt;
  }
  return std::nullopt;
}

std::string gamma_tag(double gamma) { return "gamma=" + number(gamma); }

void reference_battery(std::vector<ValidationRecord> &out) {
  const auto radii = linear_grid(0.0, 6.0, 121);

  const SymmetricModel ou(ControlLaw::ou(1.0), 1.0);
  out.push_back(error_record(
      "ou_cdf_vs_quadrature", "max_abs_error",
      max_abs_difference(radii, [](double r) { return cdf_ou(1.0, 1.0, r); },
                         [&](double r) { return radial_cdf_general(ou, r); }),
      1e-10, radii.size()));

  const SymmetricModel oc(ControlLaw::on_off(1.0, 1.0), 1.0);
  out.push_back(error_record(
      "onoff_cdf_vs_quadrature", "max_abs_error",
      max_abs_difference(radii, [](double r) { return cdf_oc(1.0, 1.0, 1.0, r); },
                         [&](double r) { return radial_cdf_general(oc, r); }),
      1e-10, radii.size()));

  const Chi2ScaledRadial chi{0.5};
  out.push_back(error_record(
      "chi2_scaled_cdf_vs_quadrature", "max_abs_error",
      max_abs_difference(
          radii, [&](double r) { return chi.cdf(r); },
          [&](double r) {
            return r == 0.0 ? 0.0
                            : integrate([&](double t) { return chi.pdf(t); }, 0.0, r, 1e-13, 1e-16)
                                  .value;
          }),
      1e-10, radii.size()));

  // Partial symmetry on both branches against quadrature.
  const auto short_radii = linear_grid(0.0, 4.0, 81);
  for (const auto &[l1, l3, name] : {std::tuple{0.5, 0.125, "partial_symmetry_erf_branch"},
                                     std::tuple{0.125, 0.5, "partial_symmetry_erfi_branch"}}) {
    out.push_back(error_record(
        std::string(name) + "_vs_quadrature", "max_abs_error",
        max_abs_difference(short_radii, [&](double r) { return partial_symmetry_cdf(l1, l3, r); },
                           [&](double r) { return partial_symmetry_quadrature(l1, l3, r); }),
        1e-8, short_radii.size()));
  }
  {
    double worst = 0.0;
    for (double side : {-1.0, 1.0}) {
      const double edge = 1.0 + side * kPartialSymmetryBand;
      for (double r : {0.3, 1.0, 2.5}) {
        worst = std::max(worst, std::abs(partial_symmetry_cdf(edge * (1.0 - 1e-9), 1.0, r) -
                                         partial_symmetry_cdf(edge * (1.0 + 1e-9), 1.0, r)));
      }
    }
    out.push_back(error_record("partial_symmetry_band_continuity", "max_abs_error", worst, 1e-9, 6));
  }

  // Series: brute-force sampling and the equal-lambda special case.
  const Lambdas fig4(1.095, 0.75, 0.495);
  const QuadraticFormRadial series(fig4, 1e-12);
  out.push_back(error_record(
      "quadratic_form_series_vs_monte_carlo", "ks",
      quadratic_form_ks(fig4, [&](double r) { return series.cdf(r); }, 8.0, 200000, 20240601),
      0.01, 200000));
  const QuadraticFormRadial equal_pair(Lambdas(0.5, 0.5, 0.125), 1e-12);
  out.push_back(error_record(
      "quadratic_form_series_vs_partial_symmetry", "max_abs_error",
      max_abs_difference(short_radii, [&](double r) { return equal_pair.cdf(r); },
                         [](double r) { return partial_symmetry_cdf(0.5, 0.125, r); }),
      1e-7, static_cast<std::size_t>(equal_pair.diagnostics().terms_used)));

  // Stationary variance: closed form against the Lyapunov solve.
  {
    double worst = 0.0;
    std::size_t n = 0;
    for (double sigma : {1.3, 1.0, 0.7, 0.5, 0.1, 0.01}) {
      for (double beta : {1.0, 3.0, 10.0}) {
        const AxisParams axis{1.0, sigma, beta, 1.0};
        worst = std::max(worst, std::abs(lambda_from_axis(axis) - lyapunov_solve(axis)(0, 0)));
        worst = std::max(worst, lyapunov_residual(axis, lyapunov_solve(axis)));
        ++n;
      }
    }
    out.push_back(error_record("lambda_vs_lyapunov", "max_abs_error", worst, 1e-12, n));
  }

  // Connectivity closed forms against the quadrature of the exponential
  // weighting.
  const auto lengths = log_space(0.1, 10.0, 21);
  auto pconn_record = [&](const std::string &name, double gamma, double tol,
                          const std::function<double(const ConnectivitySpec &)> &closed,
                          const RadialDistribution &dist) {
    double worst = 0.0;
    for (double b : lengths) {
      const auto spec = ConnectivitySpec::from_length_scale(gamma, b);
      worst = std::max(worst, std::abs(closed(spec) - pconn_numeric(dist, spec)));
    }
    out.push_back(error_record(name, "max_abs_error", worst, tol, lengths.size()));
  };
  pconn_record(
      "pconn_symmetric_gamma2_vs_quadrature", 2.0, 1e-8,
      [](const ConnectivitySpec &s) { return std::pow(1.0 + 1.0 / std::pow(s.length_scale(), 2), -1.5); },
      RadialDistribution(OuRadial{1.0, 1.0}));
  pconn_record(
      "pconn_onoff_gamma2_vs_quadrature", 2.0, 1e-6,
      [](const ConnectivitySpec &s) { return pconn_oc_gamma2(1.0, 1.0, 1.0, s); },
      RadialDistribution(OcRadial{1.0, 1.0, 1.0}));
  pconn_record(
      "pconn_series_gamma2_vs_quadrature", 2.0, 1e-6,
      [&](const ConnectivitySpec &s) { return pconn_series_gamma2(series, s); },
      RadialDistribution(series));
  pconn_record(
      "pconn_series_gamma4_vs_quadrature", 4.0, 1e-5,
      [&](const ConnectivitySpec &s) { return pconn_series_gamma4(series, s); },
      RadialDistribution(series));
  const double lxy = lambda_from_axis({1.0, 1.0, 10.0, 1.0});
  const double lz = lambda_from_axis({1.0, 0.01, 10.0, 1.0});
  pconn_record(
      "pconn_partial_symmetry_gamma2_vs_quadrature", 2.0, 1e-8,
      [&](const ConnectivitySpec &s) { return pconn_partial_gamma2(lxy, lz, s); },
      RadialDistribution(PartialSymmetryRadial{lxy, lz}));

  // Special functions against their defining integrals.
  {
    double worst = 0.0;
    std::size_t n = 0;
    for (double x : {0.1, 0.7, 1.5, 3.0, 6.0, 6.6, 9.0}) {
      for (double slack : {0.0, 0.5, 4.0}) {
        const double b = x * x;
        const double a = b + slack;
        // exp(-a) erfi(sqrt b) = exp(b - a) (2/sqrt(pi)) int_0^x exp(t^2 - x^2) dt
        const double integral =
            integrate([&](double t) { return std::exp((t - x) * (t + x)); }, 0.0, x, 1e-14).value;
        const double oracle = std::exp(b - a) * 2.0 / std::sqrt(M_PI) * integral;
        worst = std::max(worst, std::abs(erfi_scaled(a, b) - oracle) / oracle);
        ++n;
      }
    }
    out.push_back(error_record("erfi_scaled_vs_quadrature", "max_rel_error", worst, 1e-11, n));
  }
  {
    double worst = 0.0;
    std::size_t n = 0;
    for (double s : {0.5, 1.5, 2.5, 7.5, 30.5}) {
      for (double x : {0.2, 1.0, 4.0, 20.0, 45.0}) {
        const double log_norm = std::lgamma(s);
        const double oracle =
            integrate([&](double t) {
              return t == 0.0 ? 0.0 : std::exp((s - 1.0) * std::log(t) - t - log_norm);
            }, 0.0, x, 1e-14, 1e-300).value;
        worst = std::max(worst, std::abs(reg_lower_gamma(s, x) - oracle));
        ++n;
      }
    }
    out.push_back(error_record("reg_lower_gamma_vs_quadrature", "max_abs_error", worst, 1e-10, n));
  }
  {
    // D_{nu+1} - z D_nu + nu D_{nu-1} = 0, checked on the scaled values.
    double worst = 0.0;
    std::size_t n = 0;
    for (double nu : {-2.5, -5.5, -20.5}) {
      for (double z : {0.05, 1.0, 5.0, 40.0}) {
        const double lp = log_parabolic_cylinder_d_scaled(nu + 1.0, z);
        const double l0 = log_parabolic_cylinder_d_scaled(nu, z);
        const double lm = log_parabolic_cylinder_d_scaled(nu - 1.0, z);
        const double scale = std::max({lp, std::log(z) + l0, std::log(-nu) + lm});
        const double residual =
            std::exp(lp - scale) - z * std::exp(l0 - scale) + nu * std::exp(lm - scale);
        worst = std::max(worst, std::abs(residual));
        ++n;
      }
    }
    out.push_back(
        error_record("parabolic_cylinder_recurrence", "max_rel_error", worst, 1e-9, n));
  }
}

void model_records(const ExperimentConfig &config, const ModelSpec &spec,
                   std::vector<ValidationRecord> &out) {
  const std::string prefix = "model[" + spec.label + "].";
  const auto dist = spec.distribution(config.analysis.tol);
  const auto grid = config.grid_for({dist});
  const auto descriptor = spec.descriptor();

  if (spec.kind == ModelKind::Symmetric) {
    const auto &sym = std::get<SymmetricModel>(descriptor);
    if (spec.control != ControlKind::Piecewise) {
      out.push_back(error_record(
          prefix + "closed_form_cdf_vs_quadrature", "max_abs_error",
          max_abs_difference(grid, [&](double r) { return dist.cdf(r); },
                             [&](double r) { return radial_cdf_general(sym, r); }),
          1e-10, grid.size()));
    } else {
      const GeneralRadial general(sym);
      out.push_back(error_record(
          prefix + "cdf_vs_pdf_quadrature", "max_abs_error",
          max_abs_difference(
              grid, [&](double r) { return general.cdf(r); },
              [&](double r) {
                return r == 0.0 ? 0.0
                                : integrate([&](double t) { return general.pdf(t); }, 0.0, r,
                                            1e-12, 1e-15)
                                      .value;
              }),
          1e-8, grid.size()));
    }
  } else if (spec.kind == ModelKind::PartialSymmetry) {
    const double l1 = lambda_from_axis(spec.axes[0]);
    const double l3 = lambda_from_axis(spec.axes[2]);
    out.push_back(error_record(
        prefix + "partial_symmetry_cdf_vs_quadrature", "max_abs_error",
        max_abs_difference(grid, [&](double r) { return dist.cdf(r); },
                           [&](double r) { return partial_symmetry_quadrature(l1, l3, r); }),
        1e-8, grid.size()));
  } else {
    const auto lam = lambdas(std::get<AsymmetricModel>(descriptor));
    out.push_back(error_record(
        prefix + "radial_cdf_vs_monte_carlo", "ks",
        quadratic_form_ks(lam, [&](double r) { return dist.cdf(r); }, dist.upper_radius(), 200000,
                          config.sim.seed ^ 0x9e3779b97f4a7c15ULL),
        0.01, 200000));
  }

  for (double gamma : config.analysis.gammas) {
    const auto tol = pconn_tolerance(dist, gamma);
    if (!tol) {
      continue;
    }
    double worst = 0.0;
    for (double snr : config.analysis.snr_ratios) {
      const ConnectivitySpec cs{gamma, snr};
      worst = std::max(worst, std::abs(*pconn_analytic(dist, cs, config.analysis.tol) -
                                       pconn_numeric(dist, cs)));
    }
    out.push_back(error_record(prefix + "pconn_closed_form_vs_quadrature[" + gamma_tag(gamma) + "]",
                               "max_abs_error", worst, *tol, config.analysis.snr_ratios.size()));
  }

  const auto sim = config.sim_config(spec);
  const auto ensemble = sample_steady_state(descriptor, sim);
  const auto radii = ensemble.radii();
  out.push_back(error_record(prefix + "sde_ensemble_vs_analytic_cdf", "ks",
                             ks_distance(radii, TabulatedCdf([&](double r) { return dist.cdf(r); },
                                                             dist.upper_radius())),
                             ensemble_ks_tolerance(radii.size()), radii.size()));
  const double n = static_cast<double>(radii.size());
  for (std::size_t g = 0; g < config.analysis.gammas.size(); ++g) {
    const double gamma = config.analysis.gammas[g];
    double worst = 0.0;
    for (std::size_t k = 0; k < config.analysis.snr_ratios.size(); ++k) {
      const ConnectivitySpec cs{gamma, config.analysis.snr_ratios[k]};
      const auto mc = pconn_monte_carlo(radii, cs, sim.seed + 1000 * g + k);
      worst = std::max(worst, std::abs(mc.probability - pconn_numeric(dist, cs)));
    }
    // Four binomial standard errors at p = 1/2 plus an allowance for the
    // step-size bias of the ensemble.
    out.push_back(error_record(prefix + "sde_pconn_monte_carlo_vs_quadrature[" + gamma_tag(gamma) + "]",
                               "max_abs_error", worst, 4.0 * 0.5 / std::sqrt(n) + 0.005,
                               radii.size()));
  }
}

} // namespace

FigurePlan figure_plan(int id) {
  FigurePlan plan;
  plan.id = id;
  plan.sim.samples = 20000;
  switch (id) {
  case 3:
    plan.models = {on_off_spec(1.0, 1.0, 1.0), on_off_spec(0.5, 0.5, 1.0), ou_spec(1.0, 1.0)};
    break;
  case 4:
    for (double beta : {1.0, 3.0, 10.0}) {
      auto spec = axis_spec(ModelKind::AsymmetricOu, {1.3, 1.0, 0.7}, beta);
      spec.label = "beta=" + number(beta);
      plan.models.push_back(spec);
    }
    break;
  case 5:
    for (double sigma_z : {0.5, 0.1}) {
      for (double beta : {1.0, 10.0}) {
        auto spec = axis_spec(ModelKind::PartialSymmetry, {1.0, 1.0, sigma_z}, beta);
        spec.label = "sigma_z=" + number(sigma_z) + ",beta=" + number(beta);
        plan.models.push_back(spec);
      }
    }
    break;
  case 6: {
    auto spec = axis_spec(ModelKind::PartialSymmetry, {1.0, 1.0, 0.01}, 10.0);
    spec.label = "base";
    plan.models = {spec};
    plan.analysis.gammas = {2.0, 3.0, 4.0};
    plan.analysis.snr_ratios = log_space(1e-3, 0.3, 21);
    break;
  }
  default:
    throw std::invalid_argument("figure id must be 3, 4, 5 or 6");
  }
  return plan;
}

void apply_override(FigurePlan &plan, const std::string &key, double value) {
  std::size_t applied = 0;
  for (auto &model : plan.models) {
    try {
      model.set(key, value);
    } catch (const ConfigError &) {
      continue;
    }
    ++applied;
    auto tags = label_tags(model.label);
    for (auto &[tag, text] : tags) {
      if (key_covers(key, tag) || key_covers(tag, key)) {
        text = number(value);
        if (tag != key && key_covers(key, tag)) {
          tag = key;
        }
      }
    }
    model.label = join_tags(tags);
  }
  if (applied == 0) {
    throw ConfigError("no model in this figure has that parameter", 0, key);
  }
  std::vector<ModelSpec> unique;
  for (auto &model : plan.models) {
    const bool seen = std::any_of(unique.begin(), unique.end(),
                                  [&](const ModelSpec &m) { return m.label == model.label; });
    if (!seen) {
      unique.push_back(std::move(model));
    }
  }
  plan.models = std::move(unique);
  for (const auto &model : plan.models) {
    model.validate();
  }
}

std::vector<FigureCurve> run_figure(const FigurePlan &plan) {
  std::vector<FigureCurve> curves;
  std::vector<RadialDistribution> dists;
  for (const auto &model : plan.models) {
    dists.push_back(model.distribution(plan.analysis.tol));
  }

  if (plan.id == 6) {
    for (std::size_t i = 0; i < plan.models.size(); ++i) {
      const auto &model = plan.models[i];
      auto sim = resolve_sim(plan.sim, model);
      sim.seed += i;
      const auto radii = sample_steady_state(model.descriptor(), sim).radii();
      for (std::size_t g = 0; g < plan.analysis.gammas.size(); ++g) {
        const double gamma = plan.analysis.gammas[g];
        FigureCurve curve;
        curve.label = model.label == "base" ? gamma_tag(gamma) : model.label + "," + gamma_tag(gamma);
        for (std::size_t k = 0; k < plan.analysis.snr_ratios.size(); ++k) {
          const ConnectivitySpec cs{gamma, plan.analysis.snr_ratios[k]};
          curve.x.push_back(cs.snr_ratio);
          const auto closed = pconn_analytic(dists[i], cs, plan.analysis.tol);
          curve.analytic.push_back(closed ? *closed : pconn_numeric(dists[i], cs));
          curve.empirical.push_back(
              pconn_monte_carlo(radii, cs, sim.seed + 1000 * (g + 1) + k).probability);
        }
        curves.push_back(std::move(curve));
      }
    }
    return curves;
  }

  std::vector<double> grid = plan.analysis.grid;
  if (grid.empty()) {
    double upper = 0.0;
    for (const auto &d : dists) {
      upper = std::max(upper, d.upper_radius());
    }
    grid = linear_grid(0.0, upper, 201);
  }
  for (std::size_t i = 0; i < plan.models.size(); ++i) {
    const auto &model = plan.models[i];
    auto sim = resolve_sim(plan.sim, model);
    sim.seed += i;
    const auto radii = sample_steady_state(model.descriptor(), sim).radii();
    FigureCurve curve;
    curve.label = model.label;
    curve.x = grid;
    for (double r : grid) {
      curve.analytic.push_back(dists[i].cdf(r));
    }
    curve.empirical = empirical_cdf(radii, grid);
    curves.push_back(std::move(curve));
  }
  return curves;
}

std::vector<std::filesystem::path> write_figure(const FigurePlan &plan,
                                                const std::vector<FigureCurve> &curves,
                                                const std::filesystem::path &dir,
                                                const std::string &prefix) {
  std::filesystem::create_directories(dir);
  const bool connectivity = plan.id == 6;
  std::vector<std::filesystem::path> written;
  for (const auto &curve : curves) {
    const auto path =
        dir / (prefix + std::to_string(plan.id) + "_" + file_safe(curve.label) + ".csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      throw std::runtime_error("cannot write " + path.string());
    }
    if (connectivity) {
      csv::write_row(out, {"snr_ratio", "pconn_analytic", "pconn_empirical"});
    } else {
      csv::write_row(out, {"r", "cdf_analytic", "cdf_empirical"});
    }
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
      csv::write_row(out, {csv::format(curve.x[i]), csv::format(curve.analytic[i]),
                           csv::format(curve.empirical[i])});
    }
    written.push_back(path);
  }
  return written;
}

bool ValidationReport::passed() const { return failures() == 0; }

std::size_t ValidationReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const auto &r) { return !r.passed; }));
}

void ValidationReport::write_text(std::ostream &out) const {
  std::size_t width = 0;
  for (const auto &r : records) {
    width = std::max(width, r.name.size());
  }
  for (const auto &r : records) {
    out << (r.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width) + 2)
        << r.name << std::setw(15) << r.metric << std::scientific << std::setprecision(3)
        << r.value << "  tol " << r.tolerance << std::defaultfloat << "  n=" << r.count << '\n';
  }
  out << records.size() - failures() << "/" << records.size() << " records passed\n";
}

void ValidationReport::write_csv(std::ostream &out) const {
  csv::write_row(out, {"name", "metric", "value", "tolerance", "pass", "count"});
  for (const auto &r : records) {
    csv::write_row(out, {r.name, r.metric, csv::format(r.value), csv::format(r.tolerance),
                         r.passed ? "1" : "0", std::to_string(r.count)});
  }
}

double ensemble_ks_tolerance(std::size_t n) {
  return std::max(0.01, 2.0 / std::sqrt(static_cast<double>(n)));
}

ValidationReport validate(const ExperimentConfig &config) {
  config.validate();
  ValidationReport report;
  reference_battery(report.records);
  for (const auto &spec : config.models()) {
    model_records(config, spec, report.records);
  }
  return report;
}

IngestResult ingest_trajectory(std::istream &csv_in, const Eigen::Vector3d &target) {
  auto trim = [](std::string s) {
    const auto first = s.find_first_not_of(" \t\r\"");
    const auto last = s.find_last_not_of(" \t\r\"");
    return first == std::string::npos ? std::string() : s.substr(first, last - first + 1);
  };
  auto fields = [&](const std::string &line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string field;
    while (std::getline(in, field, ',')) {
      out.push_back(trim(field));
    }
    if (!line.empty() && line.back() == ',') {
      out.emplace_back();
    }
    return out;
  };

  std::string line;
  if (!std::getline(csv_in, line) || trim(line).empty()) {
    throw std::runtime_error("trajectory file is empty");
  }
  const auto header = fields(line);
  std::array<std::size_t, 3> column{};
  const std::array<const char *, 3> names{"x", "y", "z"};
  for (int axis = 0; axis < 3; ++axis) {
    auto it = std::find_if(header.begin(), header.end(), [&](std::string h) {
      std::transform(h.begin(), h.end(), h.begin(), [](unsigned char ch) { return std::tolower(ch); });
      return h == names[axis];
    });
    if (it == header.end()) {
      throw std::runtime_error(std::string("trajectory header has no '") + names[axis] + "' column");
    }
    column[axis] = static_cast<std::size_t>(it - header.begin());
  }

  IngestResult result;
  std::size_t row = 1;
  while (std::getline(csv_in, line)) {
    ++row;
    if (trim(line).empty()) {
      continue;
    }
    const auto values = fields(line);
    Eigen::Vector3d p;
    for (int axis = 0; axis < 3; ++axis) {
      if (column[axis] >= values.size()) {
        throw std::runtime_error("row " + std::to_string(row) + ": missing '" + names[axis] +
                                 "' value");
      }
      const auto &text = values[column[axis]];
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw std::runtime_error("row " + std::to_string(row) + ": non-numeric '" + names[axis] +
                                 "' value '" + text + "'");
      }
      p(axis) = v;
    }
    result.relative.push_back(p - target);
  }
  if (result.relative.empty()) {
    throw std::runtime_error("trajectory file has no data rows");
  }
  std::vector<double> planar;
  for (const auto &p : result.relative) {
    for (int axis = 0; axis < 3; ++axis) {
      result.axes[axis].push_back(p(axis));
    }
    result.radii.push_back(p.norm());
    planar.push_back(std::hypot(p(0), p(1)));
  }
  result.xy_z_correlation = std::numeric_limits<double>::quiet_NaN();
  if (result.relative.size() >= 2) {
    try {
      result.xy_z_correlation = pearson_correlation(planar, result.axes[2]);
    } catch (const std::domain_error &) {
      // constant series: correlation undefined
    }
  }
  return result;
}

void write_ingest_cdfs(const IngestResult &data, std::ostream &out) {
  csv::write_row(out, {"quantity", "value", "cdf_empirical", "cdf_fit"});
  std::array<double, 3> second_moment{};
  for (int axis = 0; axis < 3; ++axis) {
    double sum = 0.0;
    for (double v : data.axes[axis]) {
      sum += v * v;
    }
    second_moment[axis] = sum / static_cast<double>(data.axes[axis].size());
  }
  auto emit = [&](const char *name, const std::vector<double> &samples, double lo, double hi,
                  const std::function<std::optional<double>(double)> &fit) {
    if (!(hi > lo)) {
      hi = lo + 1.0;
    }
    const auto grid = linear_grid(lo, hi, 201);
    const auto cdf = empirical_cdf(samples, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      csv::write_row(out, {name, csv::format(grid[i]), csv::format(cdf[i]), csv::format(fit(grid[i]))});
    }
  };
  const std::array<const char *, 3> names{"x", "y", "z"};
  for (int axis = 0; axis < 3; ++axis) {
    const auto [lo, hi] = std::minmax_element(data.axes[axis].begin(), data.axes[axis].end());
    const double lambda = second_moment[axis];
    emit(names[axis], data.axes[axis], *lo, *hi, [lambda](double v) -> std::optional<double> {
      if (!(lambda > 0.0)) {
        return std::nullopt;
      }
      return 0.5 * (1.0 + erf(v / std::sqrt(2.0 * lambda)));
    });
  }
  std::optional<RadialDistribution> radial;
  if (second_moment[0] > 0.0 && second_moment[1] > 0.0 && second_moment[2] > 0.0) {
    radial = RadialDistribution::from_lambdas(
        Lambdas(second_moment[0], second_moment[1], second_moment[2]));
  }
  const double r_max = *std::max_element(data.radii.begin(), data.radii.end());
  emit("r", data.radii, 0.0, r_max, [&](double r) -> std::optional<double> {
    if (!radial) {
      return std::nullopt;
    }
    return radial->cdf(r);
  });
}

} // namespace uavmob
