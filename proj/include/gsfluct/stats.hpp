#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace gsfluct {

struct MeanSE {
  double mean = 0.0;
  double se = 0.0;
  std::size_t count = 0;
};

MeanSE mean_se(std::span<const double> xs);

struct VarianceEstimate {
  double value = 0.0;  // unbiased sample variance
  double se = 0.0;     // moment-based large-sample standard error
};

VarianceEstimate variance_se(std::span<const double> xs);

/// (1/M) sum |x - mean|^3 with a plug-in standard error.
MeanSE third_abs_moment(std::span<const double> xs);

double normal_cdf(double x);

/// Two-sided Kolmogorov-Smirnov statistic of the samples against `cdf`.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Shortest-width decimal that round-trips a double ("%.17g").
std::string fmt_g17(double v);

}  // namespace gsfluct
