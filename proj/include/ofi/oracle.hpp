#pragma once

// Reference distributions: conjugate posteriors under uniform, Jeffreys and
// Perks priors, classical densities and their truncations. These are the
// overlay curves and the independent checks for the fiducial samplers.

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "ofi/core.hpp"
#include "ofi/models.hpp"
#include "ofi/parallel.hpp"

namespace ofi {

class UnivariateDensity {
 public:
  virtual ~UnivariateDensity() = default;

  virtual double pdf(double x) const = 0;
  virtual double cdf(double x) const = 0;
  virtual double ccdf(double x) const { return 1.0 - cdf(x); }
  virtual double quantile(double u) const = 0;
  /// Upper-tail quantile: x with ccdf(x) = q.
  virtual double cquantile(double q) const { return quantile(1.0 - q); }
  virtual Interval support() const = 0;
  virtual std::string describe() const = 0;

  double sample(Rng& rng) const { return quantile(rng.uniform()); }
  std::vector<double> sample(std::size_t n, std::uint64_t seed, Exec exec = Exec::Parallel) const;
};

using DensityPtr = std::shared_ptr<const UnivariateDensity>;

DensityPtr normal_density(double mean, double sd);
DensityPtr beta_density(double a, double b);
/// Gamma with shape and rate (mean shape / rate).
DensityPtr gamma_density(double shape, double rate);
/// Non-standardised Student t: location + scale * T_df.
DensityPtr student_t_density(double df, double location, double scale);
/// Scaled inverse chi-squared with df degrees of freedom and scale^2 = scale2.
DensityPtr scaled_inv_chi2_density(double df, double scale2);

/// Base density conditioned to `domain`. Throws ZeroMass if it carries none.
DensityPtr truncated_density(DensityPtr base, Interval domain);

enum class Prior { Uniform, Jeffreys, Perks, FlatImproper };

const char* to_string(Prior p) noexcept;

/// Marginal of component `index` (0-based over all k+1 cells).
struct MultinomialMarginal {
  MultinomialProblem problem;
  std::size_t index = 0;
};

/// Normal sample with both parameters unknown; the quantity is the mean.
struct NormalMeanMarginal {
  std::vector<double> data;
};

using PosteriorModel = std::variant<BinomialProblem, PoissonProblem, MultinomialMarginal,
                                    NormalMeanProblem, NormalMeanMarginal, NormalVarianceProblem>;

struct PosteriorSpec {
  PosteriorModel model;
  Prior prior = Prior::Jeffreys;
};

/// Conjugate posterior:
///   binomial   uniform -> Beta(x+1, n-x+1), Jeffreys/Perks -> Beta(x+1/2, n-x+1/2)
///   Poisson    flat -> Gamma(x+1, exposure), Jeffreys -> Gamma(x+1/2, exposure)
///   multinomial Dirichlet(x + alpha) marginal, alpha = 1, 1/2 or 1/(k+1)
///   normal     flat priors -> N(xbar, sigma2/n), t_{n-1}(xbar, s/sqrt n),
///              scaled-inv-chi2(n, sigma_hat2)
DensityPtr posterior_density(const PosteriorSpec& spec);

/// Symmetric-prior Dirichlet posterior over all k+1 proportions.
class Dirichlet {
 public:
  explicit Dirichlet(std::vector<double> alpha);
  static Dirichlet posterior(const MultinomialProblem& problem, Prior prior);

  const std::vector<double>& alpha() const noexcept { return alpha_; }
  double mean(std::size_t i) const;
  double covariance(std::size_t i, std::size_t j) const;
  DensityPtr marginal(std::size_t i) const;
  std::vector<double> sample(Rng& rng) const;

 private:
  std::vector<double> alpha_;
  double total_;
};

double prior_concentration(Prior prior, std::size_t cells);

}  // namespace ofi
