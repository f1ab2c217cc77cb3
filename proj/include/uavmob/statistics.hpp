#ifndef UAVMOB_STATISTICS_HPP_
#define UAVMOB_STATISTICS_HPP_

#include <functional>
#include <span>
#include <vector>

namespace uavmob {

/// sup |F_n - F| between the empirical CDF of `samples` and `cdf`, checked on
/// both sides of every jump.
double ks_distance(std::span<const double> samples, const std::function<double(double)> &cdf);

/// Same, for samples already sorted ascending.
double ks_distance_sorted(std::span<const double> sorted, const std::function<double(double)> &cdf);

/// Piecewise-linear table of a CDF on [0, upper] for bulk evaluation. Past
/// `upper` the wrapped function is called directly.
class TabulatedCdf {
public:
  TabulatedCdf(std::function<double(double)> cdf, double upper, std::size_t points = 4001);
  double operator()(double r) const;

private:
  std::function<double(double)> cdf_;
  double upper_;
  double step_;
  std::vector<double> values_;
};

double mean(std::span<const double> values);
/// Unbiased sample variance.
double variance(std::span<const double> values);
double pearson_correlation(std::span<const double> x, std::span<const double> y);

} // namespace uavmob

#endif // UAVMOB_STATISTICS_HPP_
