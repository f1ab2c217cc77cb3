#include "uavmob/experiment_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace uavmob {

namespace {

struct Entry {
  std::string value;
  int line;
};

using Section = std::map<std::string, Entry>;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, sep)) {
    parts.push_back(trim(part));
  }
  if (!s.empty() && s.back() == sep) {
    parts.emplace_back();
  }
  return parts;
}

double to_double(const std::string &text, const std::string &key, int line) {
  double value = 0.0;
  const char *begin = text.data();
  const char *end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ConfigError("'" + text + "' is not a finite number", line, key);
  }
  return value;
}

std::uint64_t to_unsigned(const std::string &text, const std::string &key, int line) {
  std::uint64_t value = 0;
  const char *begin = text.data();
  const char *end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("'" + text + "' is not a non-negative integer", line, key);
  }
  return value;
}

std::vector<double> to_list(const std::string &text, const std::string &key, int line) {
  std::vector<double> values;
  for (const auto &part : split(text, ',')) {
    values.push_back(to_double(part, key, line));
  }
  if (values.empty()) {
    throw ConfigError("empty list", line, key);
  }
  return values;
}

constexpr std::array<const char *, 3> kAxisSuffix{"_x", "_y", "_z"};

bool is_axis_key(const std::string &base) {
  return base == "alpha" || base == "sigma" || base == "beta" || base == "s";
}

double axis_value(const AxisParams &axis, const std::string &base) {
  if (base == "alpha") {
    return axis.alpha;
  }
  if (base == "sigma") {
    return axis.sigma;
  }
  if (base == "beta") {
    return axis.beta;
  }
  return axis.s;
}

double &axis_field(AxisParams &axis, const std::string &base) {
  if (base == "alpha") {
    return axis.alpha;
  }
  if (base == "sigma") {
    return axis.sigma;
  }
  if (base == "beta") {
    return axis.beta;
  }
  return axis.s;
}

// Splits "sigma_z" into ("sigma", 2); returns -1 for keys without a suffix.
std::pair<std::string, int> axis_key(const std::string &key) {
  for (int i = 0; i < 3; ++i) {
    const std::string suffix = kAxisSuffix[i];
    if (key.size() > suffix.size() && key.ends_with(suffix)) {
      return {key.substr(0, key.size() - suffix.size()), i};
    }
  }
  return {key, -1};
}

std::string format_value(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

std::map<std::string, Section> read_sections(std::string_view text) {
  static const std::vector<std::string> known{"model", "sweep", "sim", "analysis", "output"};
  std::map<std::string, Section> sections;
  std::string current;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (content.empty()) {
      continue;
    }
    if (content.front() == '[') {
      if (content.back() != ']') {
        throw ConfigError("unterminated section header", line);
      }
      current = trim(content.substr(1, content.size() - 2));
      if (std::find(known.begin(), known.end(), current) == known.end()) {
        throw ConfigError("unknown section [" + current + "]", line);
      }
      if (sections.count(current) != 0) {
        throw ConfigError("section [" + current + "] appears twice", line);
      }
      sections[current];
      continue;
    }
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected key = value", line);
    }
    if (current.empty()) {
      throw ConfigError("key outside of any section", line);
    }
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("missing key", line);
    }
    if (value.empty()) {
      throw ConfigError("missing value", line, key);
    }
    auto &section = sections[current];
    if (section.count(key) != 0) {
      throw ConfigError("duplicate key", line, key);
    }
    section[key] = {value, line};
  }
  return sections;
}

ModelSpec read_model(const Section &section) {
  ModelSpec spec;
  std::map<std::string, bool> used;
  auto take = [&](const std::string &key) -> const Entry * {
    auto it = section.find(key);
    if (it == section.end()) {
      return nullptr;
    }
    used[key] = true;
    return &it->second;
  };

  if (const auto *e = take("type")) {
    if (e->value == "symmetric") {
      spec.kind = ModelKind::Symmetric;
    } else if (e->value == "asymmetric-ou") {
      spec.kind = ModelKind::AsymmetricOu;
    } else if (e->value == "partial-symmetry") {
      spec.kind = ModelKind::PartialSymmetry;
    } else {
      throw ConfigError("expected symmetric, asymmetric-ou or partial-symmetry", e->line, "type");
    }
  }

  auto require = [&](const std::string &key) -> const Entry & {
    const auto *e = take(key);
    if (e == nullptr) {
      throw ConfigError("required key is missing", 0, key);
    }
    return *e;
  };

  if (spec.kind == ModelKind::Symmetric) {
    if (const auto *e = take("control")) {
      if (e->value == "ou") {
        spec.control = ControlKind::Ou;
      } else if (e->value == "onoff") {
        spec.control = ControlKind::OnOff;
      } else if (e->value == "piecewise") {
        spec.control = ControlKind::Piecewise;
      } else {
        throw ConfigError("expected ou, onoff or piecewise", e->line, "control");
      }
    }
    const auto &sigma = require("sigma");
    spec.sigma = to_double(sigma.value, "sigma", sigma.line);
    switch (spec.control) {
    case ControlKind::Ou: {
      const auto &alpha = require("alpha");
      spec.alpha = to_double(alpha.value, "alpha", alpha.line);
      break;
    }
    case ControlKind::OnOff: {
      const auto &c = require("c");
      const auto &m = require("m");
      spec.c = to_double(c.value, "c", c.line);
      spec.m = to_double(m.value, "m", m.line);
      break;
    }
    case ControlKind::Piecewise: {
      const auto &knots = require("knots");
      for (const auto &pair : split(knots.value, ',')) {
        const auto rv = split(pair, ':');
        if (rv.size() != 2) {
          throw ConfigError("knots are written r:v, comma separated", knots.line, "knots");
        }
        spec.knots.emplace_back(to_double(rv[0], "knots", knots.line),
                                to_double(rv[1], "knots", knots.line));
      }
      break;
    }
    }
  } else {
    for (const std::string base : {"alpha", "sigma", "beta", "s"}) {
      const auto *all = take(base);
      std::array<const Entry *, 3> per_axis{};
      for (int i = 0; i < 3; ++i) {
        per_axis[i] = take(base + kAxisSuffix[i]);
      }
      if (all != nullptr) {
        const auto values = to_list(all->value, base, all->line);
        if (values.size() != 1 && values.size() != 3) {
          throw ConfigError("give one value or three (x, y, z)", all->line, base);
        }
        for (int i = 0; i < 3; ++i) {
          axis_field(spec.axes[i], base) = values.size() == 1 ? values[0] : values[i];
        }
      } else if (std::any_of(per_axis.begin(), per_axis.end(), [](auto *e) { return e == nullptr; })) {
        throw ConfigError("required key is missing", 0, base);
      }
      for (int i = 0; i < 3; ++i) {
        if (per_axis[i] != nullptr) {
          const std::string key = base + kAxisSuffix[i];
          axis_field(spec.axes[i], base) = to_double(per_axis[i]->value, key, per_axis[i]->line);
        }
      }
    }
  }
  for (const auto &[key, entry] : section) {
    if (!used[key]) {
      throw ConfigError("key not used by this model type", entry.line, key);
    }
  }
  return spec;
}

} // namespace

ConfigError::ConfigError(const std::string &message, int line, std::string field)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         (field.empty() ? std::string() : "`" + field + "`: ") + message),
      line_(line), field_(std::move(field)) {}

void ModelSpec::validate() const {
  auto positive = [](double v, const char *name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError("must be positive", 0, name);
    }
  };
  if (kind == ModelKind::Symmetric) {
    positive(sigma, "sigma");
    switch (control) {
    case ControlKind::Ou:
      positive(alpha, "alpha");
      break;
    case ControlKind::OnOff:
      positive(c, "c");
      if (!(m >= 0.0) || !std::isfinite(m)) {
        throw ConfigError("must be non-negative", 0, "m");
      }
      break;
    case ControlKind::Piecewise:
      try {
        (void)ControlLaw::piecewise_linear(knots);
      } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what(), 0, "knots");
      }
      if (!(knots.back().second > 0.0)) {
        throw ConfigError("final velocity must be positive or the density cannot be normalised",
                          0, "knots");
      }
      break;
    }
    return;
  }
  for (int i = 0; i < 3; ++i) {
    const auto &axis = axes[i];
    const std::string suffix = kAxisSuffix[i];
    positive(axis.alpha, ("alpha" + suffix).c_str());
    positive(axis.sigma, ("sigma" + suffix).c_str());
    positive(axis.beta, ("beta" + suffix).c_str());
    if (!(axis.s >= 0.0) || !std::isfinite(axis.s)) {
      throw ConfigError("must be non-negative", 0, "s" + suffix);
    }
  }
  if (kind == ModelKind::PartialSymmetry) {
    for (const std::string base : {"alpha", "sigma", "beta", "s"}) {
      if (axis_value(axes[0], base) != axis_value(axes[1], base)) {
        throw ConfigError("partial-symmetry requires equal x and y values", 0, base);
      }
    }
  }
}

ModelDescriptor ModelSpec::descriptor() const {
  validate();
  if (kind != ModelKind::Symmetric) {
    return AsymmetricModel(axes);
  }
  switch (control) {
  case ControlKind::Ou:
    return SymmetricModel(ControlLaw::ou(alpha), sigma);
  case ControlKind::OnOff:
    return SymmetricModel(ControlLaw::on_off(c, m), sigma);
  case ControlKind::Piecewise:
    break;
  }
  return SymmetricModel(ControlLaw::piecewise_linear(knots), sigma);
}

RadialDistribution ModelSpec::distribution(double tol) const {
  const auto model = descriptor();
  if (const auto *sym = std::get_if<SymmetricModel>(&model)) {
    return RadialDistribution::from_model(*sym);
  }
  const auto &asym = std::get<AsymmetricModel>(model);
  if (kind == ModelKind::PartialSymmetry) {
    return RadialDistribution(
        PartialSymmetryRadial{lambda_from_axis(asym.axes[0]), lambda_from_axis(asym.axes[2])});
  }
  return RadialDistribution::from_model(asym, tol);
}

void ModelSpec::set(const std::string &key, double value) {
  if (kind == ModelKind::Symmetric) {
    if (key == "alpha" && control == ControlKind::Ou) {
      alpha = value;
    } else if (key == "sigma") {
      sigma = value;
    } else if (key == "c" && control == ControlKind::OnOff) {
      c = value;
    } else if (key == "m" && control == ControlKind::OnOff) {
      m = value;
    } else {
      throw ConfigError("not a scalar parameter of this model", 0, key);
    }
    return;
  }
  const auto [base, index] = axis_key(key);
  if (!is_axis_key(base)) {
    throw ConfigError("not a scalar parameter of this model", 0, key);
  }
  if (index >= 0) {
    axis_field(axes[index], base) = value;
  } else {
    for (auto &axis : axes) {
      axis_field(axis, base) = value;
    }
  }
}

std::vector<ModelSpec> ExperimentConfig::models() const {
  std::vector<ModelSpec> out{model};
  for (const auto &[key, values] : sweep) {
    std::vector<ModelSpec> next;
    for (const auto &base : out) {
      for (double v : values) {
        ModelSpec spec = base;
        spec.set(key, v);
        const std::string tag = key + "=" + format_value(v);
        spec.label = spec.label == "base" ? tag : spec.label + "," + tag;
        next.push_back(std::move(spec));
      }
    }
    out = std::move(next);
  }
  return out;
}

SimConfig resolve_sim(const SimSection &sim, const ModelSpec &spec) {
  const auto descriptor = spec.descriptor();
  SimConfig config = SimConfig::defaults_for(descriptor, sim.samples, sim.seed);
  if (sim.dt) {
    config.dt = *sim.dt;
  }
  if (sim.burn_in) {
    config.burn_in = *sim.burn_in;
  }
  if (sim.sample_interval) {
    config.sample_interval = *sim.sample_interval;
  }
  config.trajectories = std::min(sim.trajectories, sim.samples);
  config.threads = sim.threads;
  return config;
}

std::vector<double> ExperimentConfig::grid_for(const std::vector<RadialDistribution> &dists) const {
  if (!analysis.grid.empty()) {
    return analysis.grid;
  }
  double upper = 0.0;
  for (const auto &d : dists) {
    upper = std::max(upper, d.upper_radius());
  }
  constexpr int kPoints = 201;
  std::vector<double> grid(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    grid[i] = upper * i / (kPoints - 1);
  }
  return grid;
}

void ExperimentConfig::validate() const {
  for (const auto &spec : models()) {
    spec.validate();
  }
  if (!analysis.grid.empty()) {
    if (analysis.grid.size() < 2) {
      throw ConfigError("needs at least two points", 0, "grid");
    }
    for (std::size_t i = 1; i < analysis.grid.size(); ++i) {
      if (!(analysis.grid[i] > analysis.grid[i - 1])) {
        throw ConfigError("must be strictly increasing", 0, "grid");
      }
    }
    if (analysis.grid.front() < 0.0) {
      throw ConfigError("radii must be non-negative", 0, "grid");
    }
  }
  for (double s : analysis.snr_ratios) {
    if (!(s > 0.0)) {
      throw ConfigError("must be positive", 0, "snr_ratios");
    }
  }
  for (double g : analysis.gammas) {
    if (!(g >= 2.0)) {
      throw ConfigError("path-loss exponents must be >= 2", 0, "gammas");
    }
  }
  if (!(analysis.tol > 0.0 && analysis.tol < 1.0)) {
    throw ConfigError("must lie in (0, 1)", 0, "tol");
  }
  if (sim.samples < 1) {
    throw ConfigError("must be at least 1", 0, "samples");
  }
  if (sim.trajectories < 1) {
    throw ConfigError("must be at least 1", 0, "trajectories");
  }
  auto optional_positive = [](const std::optional<double> &v, const char *name) {
    if (v && !(*v > 0.0)) {
      throw ConfigError("must be positive", 0, name);
    }
  };
  optional_positive(sim.dt, "dt");
  optional_positive(sim.sample_interval, "sample_interval");
  if (sim.burn_in && !(*sim.burn_in >= 0.0)) {
    throw ConfigError("must be non-negative", 0, "burn_in");
  }
  if (output.prefix.empty()) {
    throw ConfigError("must not be empty", 0, "prefix");
  }
}

ExperimentConfig parse_config(std::string_view text) {
  const auto sections = read_sections(text);
  const auto model_it = sections.find("model");
  if (model_it == sections.end()) {
    throw ConfigError("missing [model] section");
  }
  ExperimentConfig config;
  config.model = read_model(model_it->second);

  if (auto it = sections.find("sweep"); it != sections.end()) {
    std::vector<std::pair<int, std::string>> order;
    for (const auto &[key, entry] : it->second) {
      order.emplace_back(entry.line, key);
    }
    std::sort(order.begin(), order.end());
    for (const auto &[line, key] : order) {
      const auto values = to_list(it->second.at(key).value, key, line);
      try {
        ModelSpec probe = config.model;
        probe.set(key, values.front());
      } catch (const ConfigError &e) {
        throw ConfigError("not a scalar parameter of this model", line, key);
      }
      config.sweep.emplace_back(key, values);
    }
  }

  if (auto it = sections.find("sim"); it != sections.end()) {
    for (const auto &[key, entry] : it->second) {
      if (key == "dt") {
        config.sim.dt = to_double(entry.value, key, entry.line);
      } else if (key == "burn_in") {
        config.sim.burn_in = to_double(entry.value, key, entry.line);
      } else if (key == "sample_interval") {
        config.sim.sample_interval = to_double(entry.value, key, entry.line);
      } else if (key == "samples") {
        config.sim.samples = to_unsigned(entry.value, key, entry.line);
      } else if (key == "seed") {
        config.sim.seed = to_unsigned(entry.value, key, entry.line);
      } else if (key == "trajectories") {
        config.sim.trajectories = to_unsigned(entry.value, key, entry.line);
      } else if (key == "threads") {
        config.sim.threads = static_cast<unsigned>(to_unsigned(entry.value, key, entry.line));
      } else {
        throw ConfigError("unknown key", entry.line, key);
      }
    }
  }

  if (auto it = sections.find("analysis"); it != sections.end()) {
    const auto &section = it->second;
    std::optional<double> lo;
    std::optional<double> hi;
    std::optional<std::uint64_t> points;
    for (const auto &[key, entry] : section) {
      if (key == "grid") {
        config.analysis.grid = to_list(entry.value, key, entry.line);
      } else if (key == "grid_min") {
        lo = to_double(entry.value, key, entry.line);
      } else if (key == "grid_max") {
        hi = to_double(entry.value, key, entry.line);
      } else if (key == "grid_points") {
        points = to_unsigned(entry.value, key, entry.line);
      } else if (key == "snr_ratios") {
        config.analysis.snr_ratios = to_list(entry.value, key, entry.line);
      } else if (key == "gammas") {
        config.analysis.gammas = to_list(entry.value, key, entry.line);
      } else if (key == "tol") {
        config.analysis.tol = to_double(entry.value, key, entry.line);
      } else {
        throw ConfigError("unknown key", entry.line, key);
      }
    }
    if (lo || hi || points) {
      if (section.count("grid") != 0) {
        throw ConfigError("give either grid or grid_min/grid_max/grid_points", 0, "grid");
      }
      if (!hi) {
        throw ConfigError("required when grid_min or grid_points is set", 0, "grid_max");
      }
      const double a = lo.value_or(0.0);
      const auto n = points.value_or(201);
      if (n < 2) {
        throw ConfigError("needs at least two points", 0, "grid_points");
      }
      config.analysis.grid.resize(n);
      for (std::uint64_t i = 0; i < n; ++i) {
        config.analysis.grid[i] = a + (*hi - a) * static_cast<double>(i) / static_cast<double>(n - 1);
      }
    }
  }

  if (auto it = sections.find("output"); it != sections.end()) {
    for (const auto &[key, entry] : it->second) {
      if (key == "dir") {
        config.output.dir = entry.value;
      } else if (key == "prefix") {
        config.output.prefix = entry.value;
      } else {
        throw ConfigError("unknown key", entry.line, key);
      }
    }
  }

  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::vector<double> log_space(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) {
    throw std::invalid_argument("log_space: need 0 < lo < hi and n >= 2");
  }
  std::vector<double> out(n);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return out;
}

} // namespace uavmob
