#pragma once

// Convergence and comparison statistics.

#include <functional>
#include <span>
#include <vector>

namespace ofi {

struct RHat {
  double value;     ///< NaN when degenerate
  bool degenerate;  ///< some chain half has zero variance
};

/// Split-chain potential scale reduction factor. Each chain is halved, giving
/// 2m sequences of length floor(n/2).
RHat split_rhat(const std::vector<std::vector<double>>& chains);

/// sup_x |F_n(x) - cdf(x)|.
double ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf);
double ks_two_sample(std::span<const double> a, std::span<const double> b);
/// Asymptotic Kolmogorov survival probability P(K > sqrt(n_eff) * d).
double ks_p_value(double d, double n_eff);

/// Batch-means Monte Carlo standard error of the mean.
double mcse_mean(std::span<const double> x, std::size_t batches = 0);
/// Batch-means MCSE of the sample covariance of (x, y).
double mcse_covariance(std::span<const double> x, std::span<const double> y, std::size_t batches = 0);

double mean(std::span<const double> x);
double variance(std::span<const double> x);  ///< divisor n - 1
double covariance(std::span<const double> x, std::span<const double> y);
/// Linear-interpolation quantile of an unsorted sample.
double quantile(std::span<const double> x, double prob);

struct Histogram {
  std::vector<double> edges;    ///< bin_count + 1 edges
  std::vector<double> heights;  ///< density-normalized: sum(height * width) == 1
  std::size_t counted = 0;      ///< values that fell inside the range
};

/// Density histogram over [lo, hi]; values outside are ignored. When no value
/// falls inside, all heights are zero.
Histogram hist_bins(std::span<const double> sample, std::size_t bin_count, double lo, double hi);

}  // namespace ofi
