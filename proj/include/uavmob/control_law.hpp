#ifndef UAVMOB_CONTROL_LAW_HPP_
#define UAVMOB_CONTROL_LAW_HPP_

#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace uavmob {

/// Proportional control, v(r) = alpha * r.
struct OuControl {
  double alpha;
};

/// Constant speed c toward the target whenever r > m, off otherwise.
struct OnOffControl {
  double c;
  double m;
};

/// Linear interpolation between (r, v) knots, constant past the last knot.
struct PiecewiseLinearControl {
  std::vector<std::pair<double, double>> knots;
  std::vector<double> cumulative; // V at each knot, filled on construction
};

/// Arbitrary v(r), held at v(r_max) for r > r_max.
struct CustomControl {
  std::function<double(double)> velocity;
  double r_max;
};

/// Radial control velocity v(r) >= 0 and its potential V(r) = int_0^r v.
///
/// Immutable after construction; the factory functions throw
/// std::invalid_argument when parameters break the law's invariants.
class ControlLaw {
public:
  using Variant =
      std::variant<OuControl, OnOffControl, PiecewiseLinearControl, CustomControl>;

  static ControlLaw ou(double alpha);
  static ControlLaw on_off(double c, double m);
  static ControlLaw piecewise_linear(std::vector<std::pair<double, double>> knots);
  static ControlLaw custom(std::function<double(double)> velocity, double r_max);

  double velocity(double r) const;
  double potential(double r) const;

  /// Radii where v is not smooth; quadratures split there.
  std::vector<double> breakpoints() const;

  /// Radius where V(r) reaches `level`, found by bracketing and bisection.
  double potential_inverse(double level) const;

  const Variant &variant() const { return law_; }
  bool is_ou() const { return std::holds_alternative<OuControl>(law_); }
  std::string describe() const;

private:
  explicit ControlLaw(Variant law) : law_(std::move(law)) {}
  Variant law_;
};

/// V(r) = int_0^r v(t) dt.
inline double potential(const ControlLaw &control, double r) {
  return control.potential(r);
}

} // namespace uavmob

#endif // UAVMOB_CONTROL_LAW_HPP_
