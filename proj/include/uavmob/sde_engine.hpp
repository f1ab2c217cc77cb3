#ifndef UAVMOB_SDE_ENGINE_HPP_
#define UAVMOB_SDE_ENGINE_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "uavmob/mobility_models.hpp"

namespace uavmob {

using Vector6d = Eigen::Matrix<double, 6, 1>;

using ModelDescriptor = std::variant<SymmetricModel, AsymmetricModel, GeneralAsymmetricModel>;

struct SimConfig {
  double dt = 1e-3;
  double burn_in = 10.0;
  double sample_interval = 2.0;
  std::size_t n_samples = 1000;
  std::uint64_t seed = 1;
  /// Independent chains; samples are split evenly across them.
  std::size_t trajectories = 8;
  /// Worker threads, 0 = hardware concurrency. Never affects the output.
  unsigned threads = 0;
  /// Enforce burn_in >= 10 relaxation times. Disable only for transient runs.
  bool check_burn_in = true;

  /// Recommended settings: dt = 1e-3 of the fastest time scale (and at most
  /// 0.01 m/c for on-off control), burn-in of 10 relaxation times and a
  /// sample spacing of 2 relaxation times.
  static SimConfig defaults_for(const ModelDescriptor &model, std::size_t n_samples,
                                std::uint64_t seed);

  void validate(const ModelDescriptor &model) const;
};

/// True position and positioning error of one UAV.
struct State3D {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d error = Eigen::Vector3d::Zero();

  double radius() const { return position.norm(); }
  Eigen::Vector3d errored() const { return position + error; }
};

struct Ensemble {
  std::vector<State3D> samples;
  std::vector<double> times;
  ModelDescriptor model;
  SimConfig config;

  std::vector<double> radii() const;
  std::vector<double> axis(int index) const;
};

/// Radius below which the drift v(R) X / R is taken as zero.
inline constexpr double kOriginGuard = 1e-12;

double relaxation_time(const ModelDescriptor &model);

/// One Euler-Maruyama step of the symmetric model; `noise` holds three
/// standard normal draws.
State3D step_symmetric(const SymmetricModel &model, const State3D &state, double dt,
                       const Eigen::Vector3d &noise);

/// One Euler-Maruyama step of de = -beta e dt + s dB.
double step_error_process(const AxisParams &axis, double e, double dt, double noise);

/// Joint step of position and error with drift -v_i(R^) X^_i / R^ computed
/// from the errored coordinates. noise(0..2) drive the position, noise(3..5)
/// the errors.
State3D step_asymmetric_general(const std::array<ControlLaw, 3> &controls,
                                const std::array<double, 3> &sigmas,
                                const std::array<AxisParams, 3> &axes, const State3D &state,
                                double dt, const Vector6d &noise);

/// OU specialisation of step_asymmetric_general (drift -alpha_i X^_i).
State3D step_asymmetric_ou(const AsymmetricModel &model, const State3D &state, double dt,
                           const Vector6d &noise);

/// Burn in, then record one state every sample_interval. Output depends on
/// (model, config) only, never on the number of threads. Throws
/// std::runtime_error on a non-finite state.
Ensemble sample_steady_state(const ModelDescriptor &model, const SimConfig &config);

enum class Quantity { Radial, X, Y, Z };

/// Right-continuous empirical CDF of `samples` evaluated at `grid`.
std::vector<double> empirical_cdf(std::span<const double> samples, std::span<const double> grid);
std::vector<double> empirical_cdf(const Ensemble &ensemble, Quantity quantity,
                                  std::span<const double> grid);

/// CSV with header t,x,y,z,e1,e2,e3 and round-trip decimal values.
void write_ensemble_csv(const Ensemble &ensemble, std::ostream &out);

} // namespace uavmob

#endif // UAVMOB_SDE_ENGINE_HPP_
