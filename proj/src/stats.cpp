#include "gsfluct/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace gsfluct {

namespace {

double kahan_sum(std::span<const double> xs) {
  double sum = 0.0, carry = 0.0;
  for (double x : xs) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

MeanSE mean_se(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n == 0) throw std::invalid_argument("gsfluct: empty sample");
  const double mean = kahan_sum(xs) / static_cast<double>(n);
  if (n == 1) return MeanSE{mean, 0.0, 1};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = ss / static_cast<double>(n - 1);
  return MeanSE{mean, std::sqrt(var / static_cast<double>(n)), n};
}

VarianceEstimate variance_se(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("gsfluct: variance needs >= 2 samples");
  const double mean = kahan_sum(xs) / static_cast<double>(n);
  double m2 = 0.0, m4 = 0.0;
  for (double x : xs) {
    const double d = x - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  VarianceEstimate out;
  out.value = m2 * static_cast<double>(n) / static_cast<double>(n - 1);
  out.se = std::sqrt(std::max(0.0, m4 - m2 * m2) / static_cast<double>(n));
  return out;
}

MeanSE third_abs_moment(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n == 0) throw std::invalid_argument("gsfluct: empty sample");
  const double mean = kahan_sum(xs) / static_cast<double>(n);
  std::vector<double> cubes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::abs(xs[i] - mean);
    cubes[i] = d * d * d;
  }
  return mean_se(cubes);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("gsfluct: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::max((static_cast<double>(i) + 1.0) / n - f,
                             f - static_cast<double>(i) / n));
  }
  return d;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("gsfluct: slope fit needs >= 2 matching points");
  }
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  return sxy / sxx;
}

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

}  // namespace gsfluct
