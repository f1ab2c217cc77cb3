#ifndef UAVMOB_EXPERIMENT_HPP_
#define UAVMOB_EXPERIMENT_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "uavmob/experiment_config.hpp"

namespace uavmob {

/// Models and analysis settings behind one reproduced figure.
struct FigurePlan {
  int id = 3;
  std::vector<ModelSpec> models;
  SimSection sim;
  AnalysisSection analysis;
};

/// Built-in parameter sets for figures 3 to 6. Throws std::invalid_argument for
/// any other id.
FigurePlan figure_plan(int id);

/// Sets `key` on every model that has it and relabels. Models that become
/// identical are merged. Throws ConfigError if no model has the key.
void apply_override(FigurePlan &plan, const std::string &key, double value);

/// One curve: x is r (CDF figures) or snr_ratio (connectivity figure).
struct FigureCurve {
  std::string label;
  std::vector<double> x;
  std::vector<double> analytic;
  std::vector<double> empirical;
};

std::vector<FigureCurve> run_figure(const FigurePlan &plan);

/// Writes one CSV per curve into `dir`, named <prefix><id>_<label>.csv.
std::vector<std::filesystem::path> write_figure(const FigurePlan &plan,
                                                const std::vector<FigureCurve> &curves,
                                                const std::filesystem::path &dir,
                                                const std::string &prefix = "fig");

struct ValidationRecord {
  std::string name;
  std::string metric; // "ks", "max_abs_error" or "max_rel_error"
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::size_t count = 0; // samples, grid points or series terms
};

struct ValidationReport {
  std::vector<ValidationRecord> records;

  bool passed() const;
  std::size_t failures() const;
  void write_text(std::ostream &out) const;
  void write_csv(std::ostream &out) const;
};

/// Fixed battery over every closed form at reference parameters, then
/// model-specific records (closed form vs quadrature, connectivity at each
/// configured gamma and snr_ratio, SDE ensemble vs analytic CDF) for each
/// model in `config`. Comparison failures are recorded; only
/// infrastructure errors throw.
ValidationReport validate(const ExperimentConfig &config);

/// KS tolerance used for an n-sample ensemble: max(0.01, 2 / sqrt(n)).
double ensemble_ks_tolerance(std::size_t n);

/// Positions relative to a target read from a trajectory CSV.
struct IngestResult {
  std::vector<Eigen::Vector3d> relative;
  std::array<std::vector<double>, 3> axes;
  std::vector<double> radii;
  /// Pearson correlation of sqrt(x^2 + y^2) with z.
  double xy_z_correlation = 0.0;
};

/// Reads a CSV whose header names x, y and z columns (other columns are
/// ignored). Throws std::runtime_error naming the row for missing columns,
/// non-numeric or non-finite values, and for files without data rows.
IngestResult ingest_trajectory(std::istream &csv, const Eigen::Vector3d &target);

/// Empirical CDFs of x, y, z and r on 201-point grids together with a
/// zero-mean Gaussian fit (axes) and the matching quadratic-form law (r).
/// Header: quantity,value,cdf_empirical,cdf_fit
void write_ingest_cdfs(const IngestResult &data, std::ostream &out);

} // namespace uavmob

#endif // UAVMOB_EXPERIMENT_HPP_
