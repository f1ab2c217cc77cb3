// uavmob: steady-state UAV position and connectivity experiments.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "uavmob/connectivity.hpp"
#include "uavmob/csv.hpp"
#include "uavmob/experiment.hpp"
#include "uavmob/experiment_config.hpp"
#include "uavmob/sde_engine.hpp"

namespace fs = std::filesystem;
using namespace uavmob;

namespace {

constexpr const char *kDefaultValidateConfig =
    "[model]\ntype = symmetric\ncontrol = ou\nalpha = 1\nsigma = 1\n";

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> tol;
  std::optional<std::size_t> samples;
  std::vector<std::string> overrides;
};

std::pair<std::string, double> split_override(const std::string &text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("--set expects key=value, got '" + text + "'");
  }
  const std::string key = text.substr(0, eq);
  try {
    std::size_t used = 0;
    const double value = std::stod(text.substr(eq + 1), &used);
    if (used != text.size() - eq - 1) {
      throw std::invalid_argument(text);
    }
    return {key, value};
  } catch (const std::exception &) {
    throw ConfigError("not a number", 0, key);
  }
}

bool apply_sim_override(SimSection &sim, const std::string &key, double value) {
  if (key == "dt") {
    sim.dt = value;
  } else if (key == "burn_in") {
    sim.burn_in = value;
  } else if (key == "sample_interval") {
    sim.sample_interval = value;
  } else if (key == "trajectories") {
    sim.trajectories = static_cast<std::size_t>(value);
  } else {
    return false;
  }
  return true;
}

ExperimentConfig load(const Common &common, bool required) {
  ExperimentConfig config;
  if (!common.config.empty()) {
    config = load_config(common.config);
  } else if (required) {
    throw ConfigError("this command needs --config <path>");
  } else {
    config = parse_config(kDefaultValidateConfig);
  }
  if (common.seed) {
    config.sim.seed = *common.seed;
  }
  if (common.samples) {
    config.sim.samples = *common.samples;
  }
  if (common.tol) {
    config.analysis.tol = *common.tol;
  }
  if (common.out) {
    config.output.dir = *common.out;
  }
  for (const auto &text : common.overrides) {
    const auto [key, value] = split_override(text);
    if (!apply_sim_override(config.sim, key, value)) {
      config.model.set(key, value);
    }
  }
  config.validate();
  return config;
}

std::ofstream open_output(const fs::path &path) {
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  return out;
}

std::string file_label(std::string label) {
  std::replace(label.begin(), label.end(), ',', '_');
  return label;
}

fs::path output_path(const ExperimentConfig &config, const ModelSpec &model, const std::string &what) {
  return config.output.dir / (config.output.prefix + "_" + file_label(model.label) + "_" + what + ".csv");
}

int run_simulate(const Common &common) {
  const auto config = load(common, true);
  for (const auto &model : config.models()) {
    const auto ensemble = sample_steady_state(model.descriptor(), config.sim_config(model));
    const auto path = output_path(config, model, "ensemble");
    auto out = open_output(path);
    write_ensemble_csv(ensemble, out);
    std::cout << path.string() << '\n';
  }
  return 0;
}

int run_cdf(const Common &common) {
  const auto config = load(common, true);
  for (const auto &model : config.models()) {
    const auto dist = model.distribution(config.analysis.tol);
    const auto path = output_path(config, model, "cdf");
    auto out = open_output(path);
    csv::write_row(out, {"r", "cdf"});
    for (double r : config.grid_for({dist})) {
      csv::write_row(out, {csv::format(r), csv::format(dist.cdf(r))});
    }
    std::cout << path.string() << '\n';
  }
  return 0;
}

int run_pconn(const Common &common, bool monte_carlo) {
  const auto config = load(common, true);
  for (const auto &model : config.models()) {
    const auto dist = model.distribution(config.analysis.tol);
    std::vector<double> radii;
    if (monte_carlo) {
      radii = sample_steady_state(model.descriptor(), config.sim_config(model)).radii();
    }
    const auto path = output_path(config, model, "pconn");
    auto out = open_output(path);
    csv::write_row(out, {"snr_ratio", "gamma", "pconn_analytic", "pconn_numeric", "pconn_mc"});
    for (std::size_t g = 0; g < config.analysis.gammas.size(); ++g) {
      for (std::size_t k = 0; k < config.analysis.snr_ratios.size(); ++k) {
        const ConnectivitySpec spec{config.analysis.gammas[g], config.analysis.snr_ratios[k]};
        std::optional<double> mc;
        if (monte_carlo) {
          mc = pconn_monte_carlo(radii, spec, config.sim.seed + 1000 * g + k).probability;
        }
        csv::write_row(out, {csv::format(spec.snr_ratio), csv::format(spec.gamma),
                             csv::format(pconn_analytic(dist, spec, config.analysis.tol)),
                             csv::format(pconn_numeric(dist, spec)), csv::format(mc)});
      }
    }
    std::cout << path.string() << '\n';
  }
  return 0;
}

int run_figure_command(const Common &common, int id) {
  if (!common.config.empty()) {
    throw ConfigError("figure uses built-in parameters; use --set key=value");
  }
  auto plan = figure_plan(id);
  if (common.seed) {
    plan.sim.seed = *common.seed;
  }
  if (common.samples) {
    plan.sim.samples = *common.samples;
  }
  if (common.tol) {
    plan.analysis.tol = *common.tol;
  }
  for (const auto &text : common.overrides) {
    const auto [key, value] = split_override(text);
    if (!apply_sim_override(plan.sim, key, value)) {
      apply_override(plan, key, value);
    }
  }
  const auto curves = run_figure(plan);
  for (const auto &path : write_figure(plan, curves, common.out.value_or("."))) {
    std::cout << path.string() << '\n';
  }
  return 0;
}

int run_validate(const Common &common) {
  const auto config = load(common, false);
  const auto report = validate(config);
  report.write_text(std::cout);
  const auto base = config.output.dir / (config.output.prefix + "_validation");
  {
    auto text = open_output(fs::path(base.string() + ".txt"));
    report.write_text(text);
  }
  {
    auto table = open_output(fs::path(base.string() + ".csv"));
    report.write_csv(table);
  }
  return static_cast<int>(std::min<std::size_t>(report.failures(), 254));
}

int run_ingest(const Common &common, const std::string &file, const std::vector<double> &target) {
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + file);
  }
  const auto data = ingest_trajectory(in, Eigen::Vector3d(target[0], target[1], target[2]));
  const fs::path dir = common.out.value_or(".");
  const auto stem = fs::path(file).stem().string();
  const auto path = dir / (stem + "_ingest_cdf.csv");
  auto out = open_output(path);
  write_ingest_cdfs(data, out);
  std::cout << "rows " << data.relative.size() << '\n';
  const char *names[] = {"x", "y", "z"};
  for (int axis = 0; axis < 3; ++axis) {
    double sum = 0.0;
    for (double v : data.axes[axis]) {
      sum += v * v;
    }
    std::cout << names[axis] << " mean square " << sum / static_cast<double>(data.relative.size())
              << '\n';
  }
  std::cout << "xy-distance vs z correlation " << data.xy_z_correlation << '\n';
  std::cout << path.string() << '\n';
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Steady-state UAV position and connectivity experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--config", common.config, "Sectioned key=value config file");
  app.add_option("--seed", common.seed, "Random seed");
  app.add_option("--out", common.out, "Output directory");
  app.add_option("--tol", common.tol, "Analytic series tolerance");
  app.add_option("--samples", common.samples, "Ensemble size");
  app.add_option("--set", common.overrides, "Parameter override key=value (repeatable)");

  auto *simulate = app.add_subcommand("simulate", "Write steady-state ensembles");
  auto *cdf = app.add_subcommand("cdf", "Write analytic radial CDFs");
  auto *pconn = app.add_subcommand("pconn", "Write connectivity probability sweeps");
  bool monte_carlo = false;
  pconn->add_flag("--mc", monte_carlo, "Add a Monte Carlo column from a simulated ensemble");
  auto *figure = app.add_subcommand("figure", "Reproduce one of figures 3 to 6");
  int figure_id = 0;
  figure->add_option("id", figure_id, "Figure number")->required()->check(CLI::Range(3, 6));
  auto *validate_cmd = app.add_subcommand("validate", "Cross-check closed forms and simulation");
  auto *ingest = app.add_subcommand("ingest", "Empirical CDFs of a trajectory CSV");
  std::string ingest_file;
  std::vector<double> target{0.0, 0.0, 0.0};
  ingest->add_option("file", ingest_file, "CSV with x,y,z columns")->required();
  ingest->add_option("--target", target, "Target position x y z")->expected(3);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      return run_simulate(common);
    }
    if (*cdf) {
      return run_cdf(common);
    }
    if (*pconn) {
      return run_pconn(common, monte_carlo);
    }
    if (*figure) {
      return run_figure_command(common, figure_id);
    }
    if (*validate_cmd) {
      return run_validate(common);
    }
    if (*ingest) {
      return run_ingest(common, ingest_file, target);
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 255;
  }
  return 0;
}
