#include "uavmob/control_law.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "uavmob/quadrature.hpp"

namespace uavmob {

namespace {

template <class... Ts> struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

void require(bool condition, const char *message) {
  if (!condition) {
    throw std::invalid_argument(message);
  }
}

} // namespace

ControlLaw ControlLaw::ou(double alpha) {
  require(alpha > 0.0 && std::isfinite(alpha), "OU control: alpha must be positive");
  return ControlLaw(OuControl{alpha});
}

ControlLaw ControlLaw::on_off(double c, double m) {
  require(c > 0.0 && std::isfinite(c), "on-off control: c must be positive");
  require(m >= 0.0 && std::isfinite(m), "on-off control: m must be non-negative");
  return ControlLaw(OnOffControl{c, m});
}

ControlLaw ControlLaw::piecewise_linear(std::vector<std::pair<double, double>> knots) {
  require(!knots.empty(), "piecewise-linear control: at least one knot required");
  require(knots.front().first == 0.0, "piecewise-linear control: first knot must be at r=0");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    require(knots[i].second >= 0.0 && std::isfinite(knots[i].second),
            "piecewise-linear control: velocities must be non-negative");
    if (i > 0) {
      require(knots[i].first > knots[i - 1].first,
              "piecewise-linear control: knot radii must be strictly increasing");
    }
  }
  PiecewiseLinearControl law{std::move(knots), {}};
  law.cumulative.resize(law.knots.size(), 0.0);
  for (std::size_t i = 1; i < law.knots.size(); ++i) {
    const auto [r0, v0] = law.knots[i - 1];
    const auto [r1, v1] = law.knots[i];
    law.cumulative[i] = law.cumulative[i - 1] + 0.5 * (v0 + v1) * (r1 - r0);
  }
  return ControlLaw(std::move(law));
}

ControlLaw ControlLaw::custom(std::function<double(double)> velocity, double r_max) {
  require(static_cast<bool>(velocity), "custom control: velocity function is empty");
  require(r_max > 0.0 && std::isfinite(r_max), "custom control: r_max must be positive");
  constexpr int kChecks = 1000;
  for (int i = 0; i <= kChecks; ++i) {
    const double v = velocity(r_max * i / kChecks);
    require(v >= 0.0 && std::isfinite(v), "custom control: v(r) must be non-negative");
  }
  return ControlLaw(CustomControl{std::move(velocity), r_max});
}

double ControlLaw::velocity(double r) const {
  return std::visit(
      overloaded{
          [r](const OuControl &law) { return law.alpha * r; },
          [r](const OnOffControl &law) { return r > law.m ? law.c : 0.0; },
          [r](const PiecewiseLinearControl &law) {
            const auto &k = law.knots;
            if (r >= k.back().first) {
              return k.back().second;
            }
            auto upper = std::upper_bound(k.begin(), k.end(), r,
                                          [](double x, const auto &knot) { return x < knot.first; });
            const auto &[r1, v1] = *upper;
            const auto &[r0, v0] = *(upper - 1);
            return v0 + (v1 - v0) * (r - r0) / (r1 - r0);
          },
          [r](const CustomControl &law) { return law.velocity(std::min(r, law.r_max)); },
      },
      law_);
}

double ControlLaw::potential(double r) const {
  if (!(r >= 0.0)) {
    throw std::invalid_argument("potential: r must be non-negative");
  }
  return std::visit(
      overloaded{
          [r](const OuControl &law) { return 0.5 * law.alpha * r * r; },
          [r](const OnOffControl &law) { return law.c * std::max(0.0, r - law.m); },
          [r](const PiecewiseLinearControl &law) {
            const auto &k = law.knots;
            if (r >= k.back().first) {
              return law.cumulative.back() + k.back().second * (r - k.back().first);
            }
            auto upper = std::upper_bound(k.begin(), k.end(), r,
                                          [](double x, const auto &knot) { return x < knot.first; });
            const std::size_t i = static_cast<std::size_t>(upper - k.begin()) - 1;
            const auto [r0, v0] = k[i];
            const auto [r1, v1] = k[i + 1];
            const double vr = v0 + (v1 - v0) * (r - r0) / (r1 - r0);
            return law.cumulative[i] + 0.5 * (v0 + vr) * (r - r0);
          },
          [r](const CustomControl &law) {
            const double inner = std::min(r, law.r_max);
            const double body =
                integrate([&law](double t) { return law.velocity(t); }, 0.0, inner, 1e-13, 1e-300)
                    .value;
            return body + law.velocity(law.r_max) * std::max(0.0, r - law.r_max);
          },
      },
      law_);
}

std::vector<double> ControlLaw::breakpoints() const {
  return std::visit(overloaded{
                        [](const OuControl &) { return std::vector<double>{}; },
                        [](const OnOffControl &law) {
                          return law.m > 0.0 ? std::vector<double>{law.m} : std::vector<double>{};
                        },
                        [](const PiecewiseLinearControl &law) {
                          std::vector<double> out;
                          for (std::size_t i = 1; i < law.knots.size(); ++i) {
                            out.push_back(law.knots[i].first);
                          }
                          return out;
                        },
                        [](const CustomControl &law) { return std::vector<double>{law.r_max}; },
                    },
                    law_);
}

double ControlLaw::potential_inverse(double level) const {
  if (!(level >= 0.0)) {
    throw std::invalid_argument("potential_inverse: level must be non-negative");
  }
  double hi = 1.0;
  int guard = 0;
  while (potential(hi) < level) {
    hi *= 2.0;
    if (++guard > 200) {
      throw std::runtime_error("potential_inverse: potential does not reach level");
    }
  }
  double lo = 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (potential(mid) < level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::string ControlLaw::describe() const {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const OuControl &law) { out << "ou(alpha=" << law.alpha << ")"; },
                 [&](const OnOffControl &law) {
                   out << "on_off(c=" << law.c << ", m=" << law.m << ")";
                 },
                 [&](const PiecewiseLinearControl &law) {
                   out << "piecewise_linear(" << law.knots.size() << " knots)";
                 },
                 [&](const CustomControl &law) { out << "custom(r_max=" << law.r_max << ")"; },
             },
             law_);
  return out.str();
}

} // namespace uavmob
