#ifndef UAVMOB_EXPERIMENT_CONFIG_HPP_
#define UAVMOB_EXPERIMENT_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "uavmob/radial_distribution.hpp"
#include "uavmob/sde_engine.hpp"

namespace uavmob {

/// Parse or validation failure. `line` is 0 when the problem is not tied to
/// one line; `field` names the offending key when there is one.
class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string &message, int line = 0, std::string field = {});
  int line() const { return line_; }
  const std::string &field() const { return field_; }

private:
  int line_;
  std::string field_;
};

enum class ModelKind { Symmetric, AsymmetricOu, PartialSymmetry };
enum class ControlKind { Ou, OnOff, Piecewise };

/// One fully specified model as read from the [model] section.
struct ModelSpec {
  ModelKind kind = ModelKind::Symmetric;
  // symmetric
  ControlKind control = ControlKind::Ou;
  double alpha = 1.0;
  double sigma = 1.0;
  double c = 1.0;
  double m = 1.0;
  std::vector<std::pair<double, double>> knots;
  // asymmetric-ou and partial-symmetry
  std::array<AxisParams, 3> axes{AxisParams{1, 1, 1, 0}, AxisParams{1, 1, 1, 0},
                                 AxisParams{1, 1, 1, 0}};
  /// Short name used in file names and reports, e.g. "beta=3".
  std::string label = "base";

  /// Throws ConfigError naming the first parameter that breaks an invariant.
  void validate() const;
  ModelDescriptor descriptor() const;
  RadialDistribution distribution(double tol) const;
  /// Sets a scalar parameter by config key (alpha, sigma_z, beta, c, ...).
  void set(const std::string &key, double value);
};

struct SimSection {
  std::optional<double> dt;
  std::optional<double> burn_in;
  std::optional<double> sample_interval;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  std::size_t trajectories = 8;
  unsigned threads = 0;
};

/// SimConfig for one model: explicit values from `sim`, model-based defaults
/// for the rest.
SimConfig resolve_sim(const SimSection &sim, const ModelSpec &model);

struct AnalysisSection {
  /// Radii for CDF output. Empty means 201 points on [0, upper radius].
  std::vector<double> grid;
  std::vector<double> snr_ratios{0.01, 0.1, 1.0, 10.0, 100.0};
  std::vector<double> gammas{2.0};
  double tol = 1e-10;
};

struct OutputSection {
  std::filesystem::path dir = ".";
  std::string prefix = "uavmob";
};

struct ExperimentConfig {
  ModelSpec model;
  /// [sweep] entries in file order; the model list is their Cartesian product.
  std::vector<std::pair<std::string, std::vector<double>>> sweep;
  SimSection sim;
  AnalysisSection analysis;
  OutputSection output;

  std::vector<ModelSpec> models() const;
  SimConfig sim_config(const ModelSpec &model) const { return resolve_sim(sim, model); }
  /// CDF grid for a set of distributions (explicit grid or the default).
  std::vector<double> grid_for(const std::vector<RadialDistribution> &dists) const;
  void validate() const;
};

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path &path);

/// n points from lo to hi inclusive, evenly spaced in log10.
std::vector<double> log_space(double lo, double hi, std::size_t n);

} // namespace uavmob

#endif // UAVMOB_EXPERIMENT_CONFIG_HPP_
