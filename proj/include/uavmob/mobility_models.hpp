#ifndef UAVMOB_MOBILITY_MODELS_HPP_
#define UAVMOB_MOBILITY_MODELS_HPP_

#include <array>
#include <string>

#include <Eigen/Core>

#include "uavmob/control_law.hpp"

namespace uavmob {

/// Radially symmetric model: every axis sees drift -v(R) X / R and
/// perturbation sigma dW.
struct SymmetricModel {
  ControlLaw control;
  double sigma;

  SymmetricModel(ControlLaw control, double sigma);
};

/// Per-axis OU control with an OU positioning error.
///   dX = -alpha (X + e) dt + sigma dW,   de = -beta e dt + s dB
/// s = 0 means perfect positioning on that axis.
struct AxisParams {
  double alpha;
  double sigma;
  double beta;
  double s;

  void validate() const;
};

/// Three independent axes (x, y, z) of the separable OU model.
struct AsymmetricModel {
  std::array<AxisParams, 3> axes;

  explicit AsymmetricModel(std::array<AxisParams, 3> axes);
  static AsymmetricModel uniform(const AxisParams &axis) { return AsymmetricModel({axis, axis, axis}); }
};

/// Arbitrary per-axis control laws driven by the errored position. Only
/// simulated; no steady-state law is known for it. The alpha field of each
/// AxisParams is unused.
struct GeneralAsymmetricModel {
  std::array<ControlLaw, 3> controls;
  std::array<double, 3> sigmas;
  std::array<AxisParams, 3> errors;
};

/// Steady-state per-axis variances.
struct Lambdas {
  double lambda1;
  double lambda2;
  double lambda3;

  Lambdas(double l1, double l2, double l3);
  Eigen::Vector3d as_vector() const { return {lambda1, lambda2, lambda3}; }
  double min() const;
  double max() const;
};

/// lambda = sigma^2/(2 alpha) + alpha/(alpha+beta) * s^2/(2 beta).
double lambda_from_axis(const AxisParams &axis);

Lambdas lambdas(const AsymmetricModel &model);

/// Stationary covariance of (X, e) from A Sigma + Sigma A^T = B B^T with
/// A = [[alpha, alpha], [0, beta]] and B = diag(sigma, s). Solved as the
/// 3x3 linear system in (Sigma11, Sigma12, Sigma22).
Eigen::Matrix2d lyapunov_solve(const AxisParams &axis);

/// max-norm of A Sigma + Sigma A^T - B B^T.
double lyapunov_residual(const AxisParams &axis, const Eigen::Matrix2d &sigma);

/// Slowest relaxation time of a model: 1/alpha for OU, max(1/alpha_i,
/// 1/beta_i) for the asymmetric model and the squared potential scale
/// r_s^2/sigma^2 with V(r_s) = sigma^2 for other control laws.
double relaxation_time(const SymmetricModel &model);
double relaxation_time(const AsymmetricModel &model);
double relaxation_time(const GeneralAsymmetricModel &model);

} // namespace uavmob

#endif // UAVMOB_MOBILITY_MODELS_HPP_
