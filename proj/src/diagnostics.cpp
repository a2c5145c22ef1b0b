#include "ofi/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ofi/error.hpp"
#include "ofi/parallel.hpp"

namespace ofi {

double mean(std::span<const double> x) {
  require(!x.empty(), ErrorCode::InvalidArgument, "mean of an empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  require(x.size() >= 2, ErrorCode::InvalidArgument, "variance needs two values");
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

double covariance(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, ErrorCode::InvalidArgument,
          "covariance needs two equal-length samples");
  const double mx = mean(x), my = mean(y);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
  return s / static_cast<double>(x.size() - 1);
}

double quantile(std::span<const double> x, double prob) {
  require(!x.empty(), ErrorCode::InvalidArgument, "quantile of an empty sample");
  require(prob >= 0.0 && prob <= 1.0, ErrorCode::InvalidArgument, "probability out of range");
  std::vector<double> s(x.begin(), x.end());
  const double pos = prob * static_cast<double>(s.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, s.size() - 1);
  std::nth_element(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(lo), s.end());
  const double a = s[lo];
  if (hi == lo) return a;
  const double b = *std::min_element(s.begin() + static_cast<std::ptrdiff_t>(hi), s.end());
  return a + (pos - static_cast<double>(lo)) * (b - a);
}

RHat split_rhat(const std::vector<std::vector<double>>& chains) {
  require(chains.size() >= 2, ErrorCode::InvalidArgument, "split R-hat needs at least two chains");
  std::size_t n = std::numeric_limits<std::size_t>::max();
  for (const auto& c : chains) n = std::min(n, c.size());
  require(n >= 4, ErrorCode::InvalidArgument, "split R-hat needs chains of length >= 4");
  const std::size_t half = n / 2;

  std::vector<double> means;
  std::vector<double> vars;
  for (const auto& c : chains) {
    for (std::size_t part = 0; part < 2; ++part) {
      // Second half is taken from the end so an odd middle draw is dropped.
      const std::size_t offset = part == 0 ? 0 : n - half;
      const std::span<const double> seq(c.data() + offset, half);
      means.push_back(mean(seq));
      vars.push_back(variance(seq));
    }
  }
  const bool degenerate = std::any_of(vars.begin(), vars.end(), [](double v) { return !(v > 0.0); });
  if (degenerate) return {std::numeric_limits<double>::quiet_NaN(), true};

  const double len = static_cast<double>(half);
  const double within = mean(vars);
  const double between_over_len = variance(means);
  const double var_plus = (len - 1.0) / len * within + between_over_len;
  return {std::sqrt(var_plus / within), false};
}

double ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf) {
  require(!sample.empty(), ErrorCode::InvalidArgument, "KS test on an empty sample");
  std::vector<double> s(sample.begin(), sample.end());
  std::sort(s.begin(), s.end());
  std::vector<double> f(s.size());
  for_each_index(s.size(), Exec::Parallel, [&](std::size_t i) { f[i] = cdf(s[i]); });
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    // Ties: the empirical CDF jumps once past the last copy of a value.
    std::size_t j = i;
    while (j + 1 < s.size() && s[j + 1] == s[i]) ++j;
    d = std::max(d, std::max(f[i] - static_cast<double>(i) / n,
                             static_cast<double>(j + 1) / n - f[i]));
    i = j;
  }
  return std::clamp(d, 0.0, 1.0);
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  require(!a.empty() && !b.empty(), ErrorCode::InvalidArgument, "KS test on an empty sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

double ks_p_value(double d, double n_eff) {
  require(n_eff > 0.0, ErrorCode::InvalidArgument, "effective sample size must be positive");
  const double rn = std::sqrt(n_eff);
  const double lambda = (rn + 0.12 + 0.11 / rn) * d;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 1.0 : -1.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double mcse_mean(std::span<const double> x, std::size_t batches) {
  require(x.size() >= 4, ErrorCode::InvalidArgument, "MCSE needs at least four values");
  if (batches == 0) batches = static_cast<std::size_t>(std::sqrt(static_cast<double>(x.size())));
  batches = std::clamp<std::size_t>(batches, 2, x.size() / 2);
  const std::size_t size = x.size() / batches;
  std::vector<double> bm(batches);
  for (std::size_t b = 0; b < batches; ++b) bm[b] = mean(x.subspan(b * size, size));
  return std::sqrt(variance(bm) / static_cast<double>(batches));
}

double mcse_covariance(std::span<const double> x, std::span<const double> y, std::size_t batches) {
  require(x.size() == y.size(), ErrorCode::InvalidArgument, "samples differ in length");
  const double mx = mean(x), my = mean(y);
  std::vector<double> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = (x[i] - mx) * (y[i] - my);
  return mcse_mean(z, batches);
}

Histogram hist_bins(std::span<const double> sample, std::size_t bin_count, double lo, double hi) {
  require(bin_count >= 1, ErrorCode::InvalidArgument, "need at least one bin");
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, ErrorCode::EmptyInterval,
          "histogram range is empty");
  Histogram h;
  h.edges.resize(bin_count + 1);
  const double width = (hi - lo) / static_cast<double>(bin_count);
  for (std::size_t i = 0; i <= bin_count; ++i) h.edges[i] = lo + width * static_cast<double>(i);
  h.edges.back() = hi;
  std::vector<std::size_t> counts(bin_count, 0);
  for (double v : sample) {
    if (!(v >= lo && v <= hi)) continue;
    auto bin = static_cast<std::size_t>((v - lo) / width);
    counts[std::min(bin, bin_count - 1)]++;
    ++h.counted;
  }
  h.heights.assign(bin_count, 0.0);
  if (h.counted == 0) return h;
  for (std::size_t i = 0; i < bin_count; ++i)
    h.heights[i] = static_cast<double>(counts[i]) /
                   (static_cast<double>(h.counted) * (h.edges[i + 1] - h.edges[i]));
  return h;
}

}  // namespace ofi
