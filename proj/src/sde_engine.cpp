#include "uavmob/sde_engine.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <type_traits>
#include <stdexcept>
#include <thread>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

#include "uavmob/csv.hpp"

namespace uavmob {

namespace {

template <class... Ts> struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

double fastest_time_scale(const ModelDescriptor &model) {
  return std::visit(
      overloaded{
          [](const SymmetricModel &m) {
            double scale = relaxation_time(m);
            if (const auto *ou = std::get_if<OuControl>(&m.control.variant())) {
              scale = 1.0 / ou->alpha;
            }
            return scale;
          },
          [](const AsymmetricModel &m) {
            double scale = std::numeric_limits<double>::infinity();
            for (const auto &axis : m.axes) {
              scale = std::min({scale, 1.0 / axis.alpha, 1.0 / axis.beta});
            }
            return scale;
          },
          [](const GeneralAsymmetricModel &m) {
            double scale = relaxation_time(m);
            for (const auto &axis : m.errors) {
              scale = std::min(scale, 1.0 / axis.beta);
            }
            return scale;
          },
      },
      model);
}

double max_on_off_step(const ControlLaw &control) {
  if (const auto *oc = std::get_if<OnOffControl>(&control.variant()); oc && oc->m > 0.0) {
    return 0.01 * oc->m / oc->c;
  }
  return std::numeric_limits<double>::infinity();
}

// Independent engine per chain, keyed on (seed, chain index).
boost::random::mt19937_64 chain_engine(std::uint64_t seed, std::size_t chain) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chain),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(chain) >> 32),
                    0x5eedu};
  return boost::random::mt19937_64(seq);
}

bool finite(const State3D &state) {
  return state.position.allFinite() && state.error.allFinite();
}

// Draws the noise for one step of model type M and advances the state.
template <class M> class Stepper {
public:
  explicit Stepper(const M &model) : model_(model) {}

  template <class Engine> void advance(State3D &state, double dt, Engine &engine) {
    if constexpr (std::is_same_v<M, SymmetricModel>) {
      const Eigen::Vector3d noise(normal_(engine), normal_(engine), normal_(engine));
      state = step_symmetric(model_, state, dt, noise);
    } else if constexpr (std::is_same_v<M, AsymmetricModel>) {
      state = step_asymmetric_ou(model_, state, dt, draw6(engine));
    } else {
      state = step_asymmetric_general(model_.controls, model_.sigmas, model_.errors, state, dt,
                                      draw6(engine));
    }
  }

private:
  template <class Engine> Vector6d draw6(Engine &engine) {
    Vector6d noise;
    for (int i = 0; i < 6; ++i) {
      noise(i) = normal_(engine);
    }
    return noise;
  }

  const M &model_;
  boost::random::normal_distribution<double> normal_;
};

} // namespace

double relaxation_time(const ModelDescriptor &model) {
  return std::visit([](const auto &m) { return relaxation_time(m); }, model);
}

SimConfig SimConfig::defaults_for(const ModelDescriptor &model, std::size_t n_samples,
                                  std::uint64_t seed) {
  SimConfig config;
  const double tau = relaxation_time(model);
  config.dt = 1e-3 * fastest_time_scale(model);
  if (const auto *sym = std::get_if<SymmetricModel>(&model)) {
    config.dt = std::min(config.dt, max_on_off_step(sym->control));
  } else if (const auto *gen = std::get_if<GeneralAsymmetricModel>(&model)) {
    for (const auto &control : gen->controls) {
      config.dt = std::min(config.dt, max_on_off_step(control));
    }
  }
  config.burn_in = 10.0 * tau;
  config.sample_interval = 2.0 * tau;
  config.n_samples = n_samples;
  config.seed = seed;
  config.trajectories = std::min<std::size_t>(8, std::max<std::size_t>(1, n_samples));
  return config;
}

void SimConfig::validate(const ModelDescriptor &model) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("SimConfig: dt must be positive");
  }
  if (!(sample_interval > 0.0) || !std::isfinite(sample_interval)) {
    throw std::invalid_argument("SimConfig: sample_interval must be positive");
  }
  if (!(burn_in >= 0.0) || !std::isfinite(burn_in)) {
    throw std::invalid_argument("SimConfig: burn_in must be non-negative");
  }
  if (n_samples < 1) {
    throw std::invalid_argument("SimConfig: n_samples must be >= 1");
  }
  if (trajectories < 1 || trajectories > n_samples) {
    throw std::invalid_argument("SimConfig: trajectories must lie in [1, n_samples]");
  }
  if (check_burn_in) {
    const double tau = relaxation_time(model);
    if (burn_in < 10.0 * tau * (1.0 - 1e-12)) {
      throw std::invalid_argument("SimConfig: burn_in must be at least 10 relaxation times (" +
                                  std::to_string(10.0 * tau) + ")");
    }
  }
}

std::vector<double> Ensemble::radii() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto &s : samples) {
    out.push_back(s.radius());
  }
  return out;
}

std::vector<double> Ensemble::axis(int index) const {
  if (index < 0 || index > 2) {
    throw std::out_of_range("Ensemble::axis: index must be 0, 1 or 2");
  }
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto &s : samples) {
    out.push_back(s.position(index));
  }
  return out;
}

State3D step_symmetric(const SymmetricModel &model, const State3D &state, double dt,
                       const Eigen::Vector3d &noise) {
  State3D next = state;
  const double sqrt_dt = std::sqrt(dt);
  Eigen::Vector3d drift = Eigen::Vector3d::Zero();
  if (const auto *ou = std::get_if<OuControl>(&model.control.variant())) {
    drift = -ou->alpha * state.position;
  } else {
    const double r = state.radius();
    if (r >= kOriginGuard) {
      drift = -(model.control.velocity(r) / r) * state.position;
    }
  }
  next.position = state.position + drift * dt + model.sigma * sqrt_dt * noise;
  return next;
}

double step_error_process(const AxisParams &axis, double e, double dt, double noise) {
  return e - axis.beta * e * dt + axis.s * std::sqrt(dt) * noise;
}

State3D step_asymmetric_general(const std::array<ControlLaw, 3> &controls,
                                const std::array<double, 3> &sigmas,
                                const std::array<AxisParams, 3> &axes, const State3D &state,
                                double dt, const Vector6d &noise) {
  State3D next;
  const double sqrt_dt = std::sqrt(dt);
  const Eigen::Vector3d estimate = state.errored();
  const double r_hat = estimate.norm();
  for (int i = 0; i < 3; ++i) {
    double drift = 0.0;
    if (const auto *ou = std::get_if<OuControl>(&controls[i].variant())) {
      drift = -ou->alpha * estimate(i);
    } else if (r_hat >= kOriginGuard) {
      drift = -controls[i].velocity(r_hat) / r_hat * estimate(i);
    }
    next.position(i) = state.position(i) + drift * dt + sigmas[i] * sqrt_dt * noise(i);
    next.error(i) = step_error_process(axes[i], state.error(i), dt, noise(3 + i));
  }
  return next;
}

State3D step_asymmetric_ou(const AsymmetricModel &model, const State3D &state, double dt,
                           const Vector6d &noise) {
  State3D next;
  const double sqrt_dt = std::sqrt(dt);
  for (int i = 0; i < 3; ++i) {
    const auto &axis = model.axes[i];
    const double estimate = state.position(i) + state.error(i);
    next.position(i) = state.position(i) - axis.alpha * estimate * dt + axis.sigma * sqrt_dt * noise(i);
    next.error(i) = step_error_process(axis, state.error(i), dt, noise(3 + i));
  }
  return next;
}

Ensemble sample_steady_state(const ModelDescriptor &model, const SimConfig &config) {
  config.validate(model);
  const auto burn_steps = static_cast<std::size_t>(std::ceil(config.burn_in / config.dt - 1e-9));
  const auto interval_steps =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(config.sample_interval / config.dt)));

  Ensemble ensemble{std::vector<State3D>(config.n_samples),
                    std::vector<double>(config.n_samples), model, config};

  const std::size_t chains = config.trajectories;
  const std::size_t base = config.n_samples / chains;
  const std::size_t extra = config.n_samples % chains;
  auto chain_offset = [&](std::size_t k) { return k * base + std::min(k, extra); };

  auto run_chain = [&](std::size_t k) {
    std::visit(
        [&](const auto &typed) {
          auto engine = chain_engine(config.seed, k);
          Stepper stepper(typed);
          State3D state;
          for (std::size_t i = 0; i < burn_steps; ++i) {
            stepper.advance(state, config.dt, engine);
          }
          const std::size_t begin = chain_offset(k);
          const std::size_t end = chain_offset(k + 1);
          std::size_t step = burn_steps;
          for (std::size_t slot = begin; slot < end; ++slot) {
            for (std::size_t i = 0; i < interval_steps; ++i) {
              stepper.advance(state, config.dt, engine);
            }
            step += interval_steps;
            if (!finite(state)) {
              throw std::runtime_error("sample_steady_state: non-finite state, dt is too large");
            }
            ensemble.samples[slot] = state;
            ensemble.times[slot] = static_cast<double>(step) * config.dt;
          }
        },
        model);
  };

  unsigned workers = config.threads != 0 ? config.threads : std::thread::hardware_concurrency();
  workers = static_cast<unsigned>(std::clamp<std::size_t>(workers, 1, chains));
  if (workers == 1) {
    for (std::size_t k = 0; k < chains; ++k) {
      run_chain(k);
    }
    return ensemble;
  }

  std::vector<std::exception_ptr> failures(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t k = w; k < chains; k += workers) {
          run_chain(k);
        }
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (auto &thread : pool) {
    thread.join();
  }
  for (const auto &failure : failures) {
    if (failure) {
      std::rethrow_exception(failure);
    }
  }
  return ensemble;
}

std::vector<double> empirical_cdf(std::span<const double> samples, std::span<const double> grid) {
  if (samples.empty()) {
    throw std::invalid_argument("empirical_cdf: empty sample set");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(grid.size());
  const double n = static_cast<double>(sorted.size());
  for (double x : grid) {
    const auto count = std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
    out.push_back(static_cast<double>(count) / n);
  }
  return out;
}

std::vector<double> empirical_cdf(const Ensemble &ensemble, Quantity quantity,
                                  std::span<const double> grid) {
  switch (quantity) {
  case Quantity::Radial:
    return empirical_cdf(ensemble.radii(), grid);
  case Quantity::X:
    return empirical_cdf(ensemble.axis(0), grid);
  case Quantity::Y:
    return empirical_cdf(ensemble.axis(1), grid);
  case Quantity::Z:
    return empirical_cdf(ensemble.axis(2), grid);
  }
  throw std::invalid_argument("empirical_cdf: unknown quantity");
}

void write_ensemble_csv(const Ensemble &ensemble, std::ostream &out) {
  out << "t,x,y,z,e1,e2,e3\n";
  for (std::size_t i = 0; i < ensemble.samples.size(); ++i) {
    const auto &s = ensemble.samples[i];
    out << csv::format(ensemble.times[i]);
    for (int k = 0; k < 3; ++k) {
      out << ',' << csv::format(s.position(k));
    }
    for (int k = 0; k < 3; ++k) {
      out << ',' << csv::format(s.error(k));
    }
    out << '\n';
  }
}

} // namespace uavmob
