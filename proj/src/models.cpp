#include "ofi/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace ofi {

namespace {

constexpr int kDirectSumLimit = 10000;
constexpr int kMaxBisection = 200;

double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

/// Root of a decreasing function on [lo, hi]: Newton steps on f - target with
/// derivative df, falling back to bisection whenever a step leaves the bracket.
template <class F, class D>
double solve_decreasing(F&& f, D&& df, double target, double lo, double hi) {
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < kMaxBisection; ++it) {
    const double g = f(x) - target;
    if (g == 0.0) return x;
    if (g > 0.0)
      lo = x;
    else
      hi = x;
    if (hi - lo <= kRootTolerance * std::max(1.0, hi)) break;
    const double slope = df(x);
    double next = slope < 0.0 ? x - g / slope : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= kRootTolerance * std::max(1.0, std::abs(x))) return next;
    x = next;
  }
  return 0.5 * (lo + hi);
}

/// log of C(n, k).
double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

void check_gamma(double gamma) {
  require(gamma > 0.0 && gamma < 1.0, ErrorCode::InvalidArgument, "gamma must lie in (0,1)");
}

}  // namespace

// ---------------------------------------------------------------------------
// Problems

NormalMeanProblem::NormalMeanProblem(std::vector<double> x, double s2)
    : data(std::move(x)), sigma2(s2) {
  require(!data.empty(), ErrorCode::InvalidArgument, "normal data must have n >= 1");
  require(std::isfinite(sigma2) && sigma2 > 0.0, ErrorCode::InvalidArgument,
          "variance must be positive");
  n_ = static_cast<int>(data.size());
  xbar_ = std::accumulate(data.begin(), data.end(), 0.0) / n_;
}

NormalMeanProblem NormalMeanProblem::from_summary(double xbar, double sigma2, int n) {
  require(n >= 1, ErrorCode::InvalidArgument, "n must be >= 1");
  return NormalMeanProblem(std::vector<double>(static_cast<std::size_t>(n), xbar), sigma2);
}

NormalVarianceProblem::NormalVarianceProblem(std::vector<double> x, double m)
    : data(std::move(x)), mu(m) {
  require(!data.empty(), ErrorCode::InvalidArgument, "normal data must have n >= 1");
  n_ = static_cast<int>(data.size());
  double ss = 0.0;
  for (double v : data) ss += (v - mu) * (v - mu);
  sigma_hat2_ = ss / n_;
}

NormalVarianceProblem NormalVarianceProblem::from_summary(double sigma_hat2, double mu, int n) {
  require(n >= 1 && sigma_hat2 >= 0.0, ErrorCode::InvalidArgument,
          "need n >= 1 and a non-negative statistic");
  std::vector<double> x(static_cast<std::size_t>(n), mu);
  x[0] = mu + std::sqrt(n * sigma_hat2);
  return NormalVarianceProblem(std::move(x), mu);
}

BinomialProblem::BinomialProblem(int trials, int successes) : n(trials), x(successes) {
  require(n >= 1, ErrorCode::InvalidArgument, "binomial needs n >= 1");
  require(x >= 0 && x <= n, ErrorCode::InvalidArgument, "binomial needs 0 <= x <= n");
}

PoissonProblem::PoissonProblem(int count, double expo) : x(count), exposure(expo) {
  require(x >= 0, ErrorCode::InvalidArgument, "Poisson count must be >= 0");
  require(std::isfinite(exposure) && exposure > 0.0, ErrorCode::InvalidArgument,
          "exposure must be positive");
}

MultinomialProblem::MultinomialProblem(std::vector<int> c) : counts(std::move(c)) {
  require(counts.size() >= 2, ErrorCode::InvalidArgument, "multinomial needs k + 1 >= 2 cells");
  for (int v : counts) require(v >= 0, ErrorCode::InvalidArgument, "counts must be >= 0");
}

int MultinomialProblem::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), 0);
}

BinomialProblem MultinomialProblem::conditional(std::size_t j) const {
  require(j + 1 < counts.size(), ErrorCode::InvalidArgument, "slot out of range");
  const int trials = counts[j] + counts.back();
  if (trials == 0)
    fail(ErrorCode::ConditionalFailure,
         "conditional undefined: x_j + x_{k+1} == 0 for slot " + std::to_string(j + 1));
  return BinomialProblem(trials, counts[j]);
}

// ---------------------------------------------------------------------------
// CDFs

double binomial_cdf(int z, int n, double p) {
  require(n >= 0 && z >= 0 && z <= n, ErrorCode::InvalidArgument, "binomial_cdf needs 0<=z<=n");
  require(p >= 0.0 && p <= 1.0, ErrorCode::InvalidArgument, "binomial_cdf needs 0<=p<=1");
  if (z == n || p == 0.0) return 1.0;
  if (p == 1.0) return 0.0;
  if (n > kDirectSumLimit) return boost::math::ibeta(n - z, z + 1, 1.0 - p);
  // Upward log-space summation of the mass function.
  const double log_odds = std::log(p) - std::log1p(-p);
  double term = n * std::log1p(-p);
  double acc = term;
  for (int y = 0; y < z; ++y) {
    term += std::log(static_cast<double>(n - y) / (y + 1)) + log_odds;
    acc = log_add(acc, term);
  }
  return std::min(1.0, std::exp(acc));
}

double poisson_cdf(int z, double mean) {
  require(z >= 0, ErrorCode::InvalidArgument, "poisson_cdf needs z >= 0");
  require(mean >= 0.0 && !std::isnan(mean), ErrorCode::InvalidArgument,
          "poisson_cdf needs a non-negative mean");
  if (mean == 0.0) return 1.0;
  if (std::isinf(mean)) return 0.0;
  if (z > kDirectSumLimit) return boost::math::gamma_q(z + 1.0, mean);
  const double log_m = std::log(mean);
  double term = -mean;
  double acc = term;
  for (int y = 1; y <= z; ++y) {
    term += log_m - std::log(static_cast<double>(y));
    acc = log_add(acc, term);
  }
  return std::min(1.0, std::exp(acc));
}

int binomial_quantile(double u, int n, double p) {
  check_gamma(u);
  for (int z = 0; z < n; ++z)
    if (u < binomial_cdf(z, n, p)) return z;
  return n;
}

int poisson_quantile(double u, double mean) {
  check_gamma(u);
  for (int z = 0;; ++z) {
    if (u < poisson_cdf(z, mean)) return z;
    require(z < 100000000, ErrorCode::InvalidArgument, "Poisson quantile diverged");
  }
}

// ---------------------------------------------------------------------------
// Set-valued inverses

Interval binomial_theta_set(double gamma, int n, int x) {
  check_gamma(gamma);
  (void)BinomialProblem(n, x);
  auto solve = [n, gamma](int z) {
    // dF(z; n, p)/dp = -n * b(z; n-1, p)
    const double lc = log_choose(n - 1, z);
    auto slope = [n, z, lc](double p) {
      if (p <= 0.0 || p >= 1.0) return 0.0;
      return -n * std::exp(lc + z * std::log(p) + (n - 1 - z) * std::log1p(-p));
    };
    return solve_decreasing([n, z](double p) { return binomial_cdf(z, n, p); }, slope, gamma, 0.0, 1.0);
  };
  const double p_lo = x == 0 ? 0.0 : solve(x - 1);
  const double p_hi = x == n ? 1.0 : solve(x);
  return x == n ? Interval::closed(p_lo, p_hi) : Interval::right_open(p_lo, p_hi);
}

PoissonThetaSet poisson_theta_set(double gamma, int x, double exposure) {
  check_gamma(gamma);
  (void)PoissonProblem(x, exposure);
  auto solve = [gamma](int z) {
    double hi = z + 1.0;
    while (poisson_cdf(z, hi) >= gamma) {
      hi *= 2.0;
      require(std::isfinite(hi), ErrorCode::RootNotBracketed, "Poisson bracket overflow");
    }
    // dF(z; m)/dm = -Poisson(z; m)
    const double lf = std::lgamma(z + 1.0);
    auto slope = [z, lf](double m) { return m <= 0.0 ? 0.0 : -std::exp(z * std::log(m) - m - lf); };
    return solve_decreasing([z](double m) { return poisson_cdf(z, m); }, slope, gamma, 0.0, hi);
  };
  const double m_lo = x == 0 ? 0.0 : solve(x - 1);
  const double m_hi = solve(x);
  PoissonThetaSet out;
  out.mean = Interval::right_open(m_lo, m_hi);
  out.rate = Interval::right_open(m_lo / exposure, m_hi / exposure);
  return out;
}

// ---------------------------------------------------------------------------
// Bijective maps

double normal_mean_forward(double gamma, double mu, double sigma2, int n) {
  require(sigma2 > 0.0 && n >= 1, ErrorCode::InvalidArgument, "need sigma2 > 0 and n >= 1");
  return mu + std::sqrt(sigma2 / n) * gamma;
}

double normal_mean_inverse(double gamma, double xbar, double sigma2, int n) {
  require(sigma2 > 0.0 && n >= 1, ErrorCode::InvalidArgument, "need sigma2 > 0 and n >= 1");
  return xbar - std::sqrt(sigma2 / n) * gamma;
}

double normal_variance_forward(double gamma, double sigma2, int n) {
  require(gamma > 0.0, ErrorCode::InvalidArgument, "chi-squared gamma must be positive");
  require(sigma2 > 0.0 && n >= 1, ErrorCode::InvalidArgument, "need sigma2 > 0 and n >= 1");
  return sigma2 / n * gamma;
}

double normal_variance_inverse(double gamma, double sigma_hat2, int n) {
  require(gamma > 0.0, ErrorCode::InvalidArgument, "chi-squared gamma must be positive");
  require(n >= 1, ErrorCode::InvalidArgument, "need n >= 1");
  return n * sigma_hat2 / gamma;
}

std::pair<double, double> BijectiveMap::gamma_range(const Interval& theta) const {
  const double a = gamma_of(theta.lo);
  const double b = gamma_of(theta.hi);
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

BijectiveMap bijective_map(const NormalMeanProblem& p) {
  const double xbar = p.xbar();
  const double scale = std::sqrt(p.sigma2 / p.n());
  BijectiveMap m{PrimaryRvLaw::standard_normal(), ParamDomain::real_line(), {}, {}, {}, true,
                 "normal-mean"};
  m.theta_of = [xbar, scale](double g) { return xbar - scale * g; };
  m.gamma_of = [xbar, scale](double mu) { return (xbar - mu) / scale; };
  m.jacobian = [scale](double) { return 1.0 / scale; };
  return m;
}

BijectiveMap bijective_map(const NormalVarianceProblem& p) {
  require(p.sigma_hat2() > 0.0, ErrorCode::Condition1Violated,
          "sigma_hat2 == 0: the variance map is not bijective on the feasible sets");
  const double ns = p.n() * p.sigma_hat2();
  BijectiveMap m{PrimaryRvLaw::chi_squared(p.n()), ParamDomain::positive(), {}, {}, {}, true,
                 "normal-variance"};
  m.theta_of = [ns](double g) { return ns / g; };
  m.gamma_of = [ns](double s2) {
    if (s2 <= 0.0) return kInf;
    return ns / s2;
  };
  m.jacobian = [ns](double s2) { return ns / (s2 * s2); };
  return m;
}

}  // namespace ofi
