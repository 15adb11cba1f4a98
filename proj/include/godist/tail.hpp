#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "godist/histogram.hpp"

namespace godist {

enum class FitErrorKind { InvalidThreshold, InsufficientTail, InsufficientVariation };

class FitError : public std::runtime_error {
 public:
  FitError(FitErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  FitErrorKind kind() const { return kind_; }

 private:
  FitErrorKind kind_;
};

struct PowerLawFit {
  double alpha = 0.0;      // tail exponent, > 1
  double std_error = 0.0;  // (alpha - 1) / sqrt(n_tail)
  double x_min = 0.0;
  uint64_t n_tail = 0;
};

struct SeparationReport {
  GroupKey group_a;
  GroupKey group_b;
  double ks = 0.0;  // sup |cdf_a - cdf_b| over the union bin axis
  uint64_t n_a = 0;
  uint64_t n_b = 0;
};

namespace detail {

inline PowerLawFit finish_fit(double log_sum, uint64_t n_tail, double x_min) {
  if (n_tail < 2)
    throw FitError(FitErrorKind::InsufficientTail,
                   "power-law fit needs at least 2 tail samples, got " + std::to_string(n_tail));
  if (log_sum <= 0.0)
    throw FitError(FitErrorKind::InsufficientVariation,
                   "all tail samples sit at x_min; the tail exponent diverges");
  PowerLawFit fit;
  fit.x_min = x_min;
  fit.n_tail = n_tail;
  fit.alpha = 1.0 + static_cast<double>(n_tail) / log_sum;
  fit.std_error = (fit.alpha - 1.0) / std::sqrt(static_cast<double>(n_tail));
  return fit;
}

inline void check_threshold(double x_min) {
  if (!(x_min > 0.0))
    throw FitError(FitErrorKind::InvalidThreshold,
                   "x_min must be positive, got " + std::to_string(x_min));
}

}  // namespace detail

// Continuous maximum-likelihood tail exponent (Hill estimator):
//   alpha = 1 + n / sum ln(x_i / x_min)   over samples x_i >= x_min.
inline PowerLawFit fit_power_law_samples(std::span<const double> samples, double x_min) {
  detail::check_threshold(x_min);
  const double log_x_min = std::log(x_min);
  double log_sum = 0.0;
  uint64_t n_tail = 0;
  for (double x : samples) {
    if (x < x_min) continue;
    log_sum += std::log(x) - log_x_min;
    ++n_tail;
  }
  return detail::finish_fit(log_sum, n_tail, x_min);
}

// Histogram form: each occupied bin contributes count samples at sqrt(d2).
// Depends only on the multiset of tail samples, so it is invariant under any
// merge order of the input histogram.
inline PowerLawFit fit_power_law(const DistanceHistogram& hist, double x_min) {
  detail::check_threshold(x_min);
  const double x_min_sq = x_min * x_min;
  const double log_x_min = std::log(x_min);
  double log_sum = 0.0;
  uint64_t n_tail = 0;
  for (int d2 : detail::distance_axis().values) {
    const uint64_t count = hist.counts[d2];
    if (count == 0 || static_cast<double>(d2) < x_min_sq) continue;
    log_sum += static_cast<double>(count) * (0.5 * std::log(static_cast<double>(d2)) - log_x_min);
    n_tail += count;
  }
  return detail::finish_fit(log_sum, n_tail, x_min);
}

// Two-sample Kolmogorov-Smirnov statistic: both CDFs as step functions on the
// union of their bin axes, supremum of the absolute difference.
inline SeparationReport ks_statistic(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  if (a.points.empty() || b.points.empty())
    throw EmptyDistributionError("KS statistic needs two non-empty distributions");
  SeparationReport rep;
  rep.group_a = a.group;
  rep.group_b = b.group;
  rep.n_a = a.total_pairs;
  rep.n_b = b.total_pairs;
  size_t ia = 0, ib = 0;
  double cdf_a = 0.0, cdf_b = 0.0, sup = 0.0;
  while (ia < a.points.size() || ib < b.points.size()) {
    const int da = ia < a.points.size() ? a.points[ia].d2 : kMaxSquaredDistance + 1;
    const int db = ib < b.points.size() ? b.points[ib].d2 : kMaxSquaredDistance + 1;
    const int d = std::min(da, db);
    if (da == d) cdf_a = a.points[ia++].cdf;
    if (db == d) cdf_b = b.points[ib++].cdf;
    sup = std::max(sup, std::fabs(cdf_a - cdf_b));
  }
  rep.ks = std::min(sup, 1.0);
  return rep;
}

// All pairwise KS separations, most separated first.
inline std::vector<SeparationReport> compare_cohorts(std::span<const DistanceHistogram> hists) {
  if (hists.size() < 2)
    throw std::invalid_argument("cohort comparison needs at least 2 histograms, got " +
                                std::to_string(hists.size()));
  std::vector<EmpiricalDistribution> dists;
  dists.reserve(hists.size());
  for (const DistanceHistogram& h : hists) dists.push_back(to_distribution(h));
  std::vector<SeparationReport> reports;
  for (size_t i = 0; i < dists.size(); ++i)
    for (size_t j = i + 1; j < dists.size(); ++j) reports.push_back(ks_statistic(dists[i], dists[j]));
  std::sort(reports.begin(), reports.end(), [](const SeparationReport& x, const SeparationReport& y) {
    if (x.ks != y.ks) return x.ks > y.ks;
    if (x.group_a != y.group_a) return x.group_a < y.group_a;
    return x.group_b < y.group_b;
  });
  return reports;
}

}  // namespace godist
