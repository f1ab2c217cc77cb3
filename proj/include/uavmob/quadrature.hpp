#ifndef UAVMOB_QUADRATURE_HPP_
#define UAVMOB_QUADRATURE_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <vector>

namespace uavmob {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule, positive half.
inline constexpr std::array<double, 11> kKronrodNodes = {
    0.0,
    1.4887433898163121088482600112971998e-01,
    2.9439286270146019813112660310386556e-01,
    4.3339539412924719079926594316578416e-01,
    5.6275713466860468333900009927269414e-01,
    6.7940956829902440623432736511487357e-01,
    7.8081772658641689706371757834504237e-01,
    8.6506336668898451073209668842349304e-01,
    9.3015749135570822600120718005950834e-01,
    9.7390652851717172007796401208445205e-01,
    9.9565716302580808073552728068900284e-01};

inline constexpr std::array<double, 11> kKronrodWeights = {
    1.4944555400291690566493646838982120e-01,
    1.4773910490133849137484151597206804e-01,
    1.4277593857706008079709427313871706e-01,
    1.3470921731147332592805400177170683e-01,
    1.2349197626206585107795810983107415e-01,
    1.0938715880229764189921059032580496e-01,
    9.3125454583697605535065465083366344e-02,
    7.5039674810919952767043140916190009e-02,
    5.4755896574351996031381300244580176e-02,
    3.2558162307964727478818972459389760e-02,
    1.1694638867371874278064396062192048e-02};

// Gauss weights for the odd Kronrod nodes 1, 3, 5, 7, 9.
inline constexpr std::array<double, 5> kGaussWeights = {
    2.9552422471475287017389299465133832e-01,
    2.6926671930999635509122692156946935e-01,
    2.1908636251598204399553493422816319e-01,
    1.4945134915058059314577633965769733e-01,
    6.6671344308688137593568809893331792e-02};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment &other) const { return error < other.error; }
};

template <class F> Segment kronrod21(F &f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[0];
  double gauss = 0.0;
  for (std::size_t i = 1; i < kKronrodNodes.size(); ++i) {
    const double dx = half * kKronrodNodes[i];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1) {
      gauss += kGaussWeights[i / 2] * pair;
    }
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

} // namespace detail

/// Globally adaptive 21-point Gauss-Kronrod quadrature on a finite interval.
///
/// The interval with the largest error estimate is bisected until the summed
/// error drops below max(abs_tol, rel_tol * |I|) or `max_segments` is reached.
template <class F>
QuadratureResult integrate(F &&f, double a, double b, double rel_tol = 1e-12,
                           double abs_tol = 0.0, int max_segments = 4000) {
  QuadratureResult result;
  if (a == b) {
    result.converged = true;
    return result;
  }
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw std::invalid_argument("integrate: interval limits must be finite");
  }
  const double sign = b < a ? -1.0 : 1.0;
  if (b < a) {
    std::swap(a, b);
  }

  std::priority_queue<detail::Segment> heap;
  auto first = detail::kronrod21(f, a, b);
  heap.push(first);
  double total = first.value;
  double error = first.error;
  int segments = 1;

  while (error > std::max(abs_tol, rel_tol * std::abs(total)) &&
         segments < max_segments) {
    const auto worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      break; // interval exhausted at machine resolution
    }
    heap.pop();
    const auto left = detail::kronrod21(f, worst.a, mid);
    const auto right = detail::kronrod21(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++segments;
  }

  // Re-sum from the leaves to drop accumulated update round-off.
  total = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  result.value = sign * total;
  result.error = error;
  result.evaluations = 21 * (2 * segments - 1);
  result.converged = error <= std::max(abs_tol, rel_tol * std::abs(total)) ||
                     error <= 64 * std::numeric_limits<double>::epsilon() *
                                  std::abs(total);
  return result;
}

/// Same as integrate() but splits the interval at the given interior points
/// first (kinks or discontinuities of the integrand).
template <class F>
QuadratureResult integrate_with_breaks(F &&f, double a, double b,
                                       std::vector<double> breaks,
                                       double rel_tol = 1e-12,
                                       double abs_tol = 0.0) {
  std::sort(breaks.begin(), breaks.end());
  QuadratureResult total;
  total.converged = true;
  double left = a;
  auto add = [&](double lo, double hi) {
    if (hi <= lo) {
      return;
    }
    const auto piece = integrate(f, lo, hi, rel_tol, abs_tol);
    total.value += piece.value;
    total.error += piece.error;
    total.evaluations += piece.evaluations;
    total.converged = total.converged && piece.converged;
  };
  for (double point : breaks) {
    if (point > left && point < b) {
      add(left, point);
      left = point;
    }
  }
  add(left, b);
  return total;
}

/// Integral over [a, inf) through the map t = a + u / (1 - u), u in [0, 1).
/// The Kronrod rule never samples u = 1.
template <class F>
QuadratureResult integrate_to_infinity(F &&f, double a, double rel_tol = 1e-12,
                                       double abs_tol = 0.0) {
  auto mapped = [&](double u) {
    const double one_minus = 1.0 - u;
    const double t = a + u / one_minus;
    const double value = f(t);
    return value == 0.0 ? 0.0 : value / (one_minus * one_minus);
  };
  return integrate(mapped, 0.0, 1.0, rel_tol, abs_tol);
}

/// Tanh-sinh (double exponential) quadrature on [a, b] with level doubling.
///
/// The integrand is called as f(x, distance_to_a, distance_to_b) so that
/// endpoint singularities such as t^(p-1) can be evaluated from the exact
/// offset instead of a rounded abscissa.
template <class F>
QuadratureResult tanh_sinh(F &&f, double a, double b, double rel_tol = 1e-12,
                           int max_levels = 10) {
  QuadratureResult result;
  if (a == b) {
    result.converged = true;
    return result;
  }
  const double half = 0.5 * (b - a);
  constexpr double kHalfPi = 0.5 * std::numbers::pi;
  constexpr double kTMax = 6.0;

  auto sample = [&](double t) {
    const double sh = std::sinh(t);
    const double ch = std::cosh(t);
    const double u = kHalfPi * sh;
    const double e = std::exp(-2.0 * std::abs(u));
    // 1 - tanh|u| without cancellation.
    const double complement = 2.0 * e / (1.0 + e);
    const double sech2 = 4.0 * e / ((1.0 + e) * (1.0 + e));
    const double weight = kHalfPi * ch * sech2;
    if (weight == 0.0) {
      return 0.0;
    }
    double from_a, from_b;
    if (u < 0) {
      from_a = half * complement;
      from_b = 2.0 * half - from_a;
    } else {
      from_b = half * complement;
      from_a = 2.0 * half - from_b;
    }
    if (from_a <= 0.0 || from_b <= 0.0) {
      return 0.0;
    }
    const double x = u < 0 ? a + from_a : b - from_b;
    ++result.evaluations;
    return weight * f(x, from_a, from_b);
  };

  double h = 1.0;
  double sum = sample(0.0);
  for (double t = h; t <= kTMax; t += h) {
    sum += sample(t) + sample(-t);
  }
  double estimate = half * h * sum;
  for (int level = 1; level <= max_levels; ++level) {
    h *= 0.5;
    double odd = 0.0;
    for (double t = h; t <= kTMax; t += 2.0 * h) {
      odd += sample(t) + sample(-t);
    }
    sum += odd;
    const double refined = half * h * sum;
    result.error = std::abs(refined - estimate);
    estimate = refined;
    if (level >= 3 && result.error <= rel_tol * std::abs(estimate)) {
      result.converged = true;
      break;
    }
  }
  result.value = estimate;
  return result;
}

} // namespace uavmob

#endif // UAVMOB_QUADRATURE_HPP_
