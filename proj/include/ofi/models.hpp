#pragma once

// Built-in sampling models: fiducial statistics, structural maps and the CDF
// machinery that inverts them.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ofi/core.hpp"

namespace ofi {

// ---------------------------------------------------------------------------
// Problems

/// Normal sample with known variance; fiducial statistic is the sample mean.
struct NormalMeanProblem {
  std::vector<double> data;
  double sigma2 = 1.0;

  NormalMeanProblem(std::vector<double> x, double sigma2);
  /// Summary-statistic form: n observations with mean xbar.
  static NormalMeanProblem from_summary(double xbar, double sigma2, int n);

  int n() const noexcept { return n_; }
  double xbar() const noexcept { return xbar_; }

 private:
  int n_ = 0;
  double xbar_ = 0.0;
};

/// Normal sample with known mean; fiducial statistic is (1/n) sum (x_i - mu)^2.
struct NormalVarianceProblem {
  std::vector<double> data;
  double mu = 0.0;

  NormalVarianceProblem(std::vector<double> x, double mu);
  static NormalVarianceProblem from_summary(double sigma_hat2, double mu, int n);

  int n() const noexcept { return n_; }
  double sigma_hat2() const noexcept { return sigma_hat2_; }

 private:
  int n_ = 0;
  double sigma_hat2_ = 0.0;
};

struct BinomialProblem {
  int n = 1;
  int x = 0;
  BinomialProblem(int n, int x);
};

/// Count x whose Poisson mean is exposure * rate.
struct PoissonProblem {
  int x = 0;
  double exposure = 1.0;
  PoissonProblem(int x, double exposure = 1.0);
};

struct MultinomialProblem {
  std::vector<int> counts;
  explicit MultinomialProblem(std::vector<int> counts);
  int total() const noexcept;
  /// Binomial problem of the conditional for slot j (0-based, j < k):
  /// x_j successes out of x_j + x_{k+1}.
  BinomialProblem conditional(std::size_t j) const;
};

// ---------------------------------------------------------------------------
// CDFs

/// P(Y <= z) for Y ~ Binomial(n, p).
double binomial_cdf(int z, int n, double p);
/// P(Y <= z) for Y ~ Poisson(mean).
double poisson_cdf(int z, double mean);

/// min { z : u < F(z) }, the data generating step for the discrete models.
int binomial_quantile(double u, int n, double p);
int poisson_quantile(double u, double mean);

// ---------------------------------------------------------------------------
// Set-valued inverses

inline constexpr double kRootTolerance = 1e-13;

/// { p : F(x-1; n, p) <= gamma < F(x; n, p) } = [p_lo, p_hi).
Interval binomial_theta_set(double gamma, int n, int x);

struct PoissonThetaSet {
  Interval mean;  ///< [m_lo, m_hi) in units of the Poisson mean
  Interval rate;  ///< mean interval divided by the exposure
};

PoissonThetaSet poisson_theta_set(double gamma, int x, double exposure = 1.0);

// ---------------------------------------------------------------------------
// Bijective structural maps

/// xbar = mu + (sigma / sqrt(n)) * gamma
double normal_mean_forward(double gamma, double mu, double sigma2, int n);
double normal_mean_inverse(double gamma, double xbar, double sigma2, int n);

/// sigma_hat2 = (sigma2 / n) * gamma
double normal_variance_forward(double gamma, double sigma2, int n);
double normal_variance_inverse(double gamma, double sigma_hat2, int n);

/// Structural equation that is one-to-one between gamma and the parameter
/// once the statistic is fixed.
struct BijectiveMap {
  PrimaryRvLaw law;
  ParamDomain natural;
  std::function<double(double)> theta_of;  ///< gamma -> theta
  std::function<double(double)> gamma_of;  ///< theta -> gamma
  std::function<double(double)> jacobian;  ///< |d gamma / d theta| at theta
  bool decreasing = true;                  ///< theta_of decreasing in gamma
  std::string label;

  /// gamma-image of a theta interval, oriented low-to-high.
  std::pair<double, double> gamma_range(const Interval& theta) const;
};

BijectiveMap bijective_map(const NormalMeanProblem& p);
/// Throws Condition1Violated when sigma_hat2 == 0.
BijectiveMap bijective_map(const NormalVarianceProblem& p);

}  // namespace ofi
