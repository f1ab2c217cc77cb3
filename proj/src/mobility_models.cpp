#include "uavmob/mobility_models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/LU>

namespace uavmob {

namespace {

bool positive(double x) { return x > 0.0 && std::isfinite(x); }

double potential_scale_time(const ControlLaw &control, double sigma) {
  if (const auto *ou = std::get_if<OuControl>(&control.variant())) {
    return 1.0 / ou->alpha;
  }
  const double radius = control.potential_inverse(sigma * sigma);
  return radius * radius / (sigma * sigma);
}

} // namespace

SymmetricModel::SymmetricModel(ControlLaw control_law, double perturbation)
    : control(std::move(control_law)), sigma(perturbation) {
  if (!positive(sigma)) {
    throw std::invalid_argument("SymmetricModel: sigma must be positive");
  }
}

void AxisParams::validate() const {
  if (!positive(alpha)) {
    throw std::invalid_argument("AxisParams: alpha must be positive");
  }
  if (!positive(sigma)) {
    throw std::invalid_argument("AxisParams: sigma must be positive");
  }
  if (!positive(beta)) {
    throw std::invalid_argument("AxisParams: beta must be positive");
  }
  if (!(s >= 0.0) || !std::isfinite(s)) {
    throw std::invalid_argument("AxisParams: s must be non-negative");
  }
}

AsymmetricModel::AsymmetricModel(std::array<AxisParams, 3> params) : axes(params) {
  for (const auto &axis : axes) {
    axis.validate();
  }
}

Lambdas::Lambdas(double l1, double l2, double l3) : lambda1(l1), lambda2(l2), lambda3(l3) {
  if (!(positive(l1) && positive(l2) && positive(l3))) {
    throw std::invalid_argument("Lambdas: all variances must be positive");
  }
}

double Lambdas::min() const { return std::min({lambda1, lambda2, lambda3}); }
double Lambdas::max() const { return std::max({lambda1, lambda2, lambda3}); }

double lambda_from_axis(const AxisParams &axis) {
  axis.validate();
  const auto [alpha, sigma, beta, s] = axis;
  return sigma * sigma / (2.0 * alpha) + alpha / (alpha + beta) * s * s / (2.0 * beta);
}

Lambdas lambdas(const AsymmetricModel &model) {
  return {lambda_from_axis(model.axes[0]), lambda_from_axis(model.axes[1]),
          lambda_from_axis(model.axes[2])};
}

Eigen::Matrix2d lyapunov_solve(const AxisParams &axis) {
  axis.validate();
  const auto [alpha, sigma, beta, s] = axis;
  // Unknowns (S11, S12, S22):
  //   2 alpha S11 + 2 alpha S12              = sigma^2
  //   (alpha + beta) S12 + alpha S22          = 0
  //   2 beta S22                              = s^2
  Eigen::Matrix3d system;
  system << 2.0 * alpha, 2.0 * alpha, 0.0,
            0.0, alpha + beta, alpha,
            0.0, 0.0, 2.0 * beta;
  const Eigen::Vector3d rhs(sigma * sigma, 0.0, s * s);
  Eigen::FullPivLU<Eigen::Matrix3d> lu(system);
  if (!lu.isInvertible()) {
    throw std::domain_error("lyapunov_solve: singular system");
  }
  const Eigen::Vector3d x = lu.solve(rhs);
  Eigen::Matrix2d cov;
  cov << x(0), x(1), x(1), x(2);
  return cov;
}

double lyapunov_residual(const AxisParams &axis, const Eigen::Matrix2d &sigma) {
  Eigen::Matrix2d a;
  a << axis.alpha, axis.alpha, 0.0, axis.beta;
  const Eigen::Matrix2d b = Eigen::Vector2d(axis.sigma, axis.s).asDiagonal();
  return (a * sigma + sigma * a.transpose() - b * b.transpose()).cwiseAbs().maxCoeff();
}

double relaxation_time(const SymmetricModel &model) {
  double tau = potential_scale_time(model.control, model.sigma);
  if (const auto *oc = std::get_if<OnOffControl>(&model.control.variant())) {
    tau = std::max({tau, oc->m / oc->c, oc->m * oc->m / (model.sigma * model.sigma)});
  }
  return tau;
}

double relaxation_time(const AsymmetricModel &model) {
  double tau = 0.0;
  for (const auto &axis : model.axes) {
    tau = std::max({tau, 1.0 / axis.alpha, 1.0 / axis.beta});
  }
  return tau;
}

double relaxation_time(const GeneralAsymmetricModel &model) {
  double tau = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    tau = std::max({tau, potential_scale_time(model.controls[i], model.sigmas[i]),
                    1.0 / model.errors[i].beta});
  }
  return tau;
}

} // namespace uavmob
