#include "uavmob/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace uavmob {

double ks_distance(std::span<const double> samples, const std::function<double(double)> &cdf) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  return ks_distance_sorted(sorted, cdf);
}

double ks_distance_sorted(std::span<const double> sorted, const std::function<double(double)> &cdf) {
  if (sorted.empty()) {
    throw std::invalid_argument("ks_distance: empty sample set");
  }
  const double n = static_cast<double>(sorted.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    worst = std::max({worst, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return worst;
}

TabulatedCdf::TabulatedCdf(std::function<double(double)> cdf, double upper, std::size_t points)
    : cdf_(std::move(cdf)), upper_(upper) {
  if (!(upper > 0.0) || points < 2) {
    throw std::invalid_argument("TabulatedCdf: need upper > 0 and at least two points");
  }
  step_ = upper / static_cast<double>(points - 1);
  values_.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    values_.push_back(cdf_(step_ * static_cast<double>(i)));
  }
}

double TabulatedCdf::operator()(double r) const {
  if (r >= upper_) {
    return cdf_(r);
  }
  if (r <= 0.0) {
    return values_.front();
  }
  const double position = r / step_;
  const auto index = std::min(static_cast<std::size_t>(position), values_.size() - 2);
  const double frac = position - static_cast<double>(index);
  return values_[index] + frac * (values_[index + 1] - values_[index]);
}

double mean(std::span<const double> values) {
  if (values.empty()) {
    throw std::invalid_argument("mean: empty input");
  }
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double variance(std::span<const double> values) {
  if (values.size() < 2) {
    throw std::invalid_argument("variance: need at least two values");
  }
  const double mu = mean(values);
  double sum = 0.0;
  for (double v : values) {
    sum += (v - mu) * (v - mu);
  }
  return sum / static_cast<double>(values.size() - 1);
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("pearson_correlation: need two equal-length series");
  }
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw std::domain_error("pearson_correlation: constant series");
  }
  return sxy / std::sqrt(sxx * syy);
}

} // namespace uavmob
