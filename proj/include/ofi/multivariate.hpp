#pragma once

// Joint fiducial densities assembled from full conditionals and sampled by
// Gibbs cycles. Chains run independently; diagnostics are computed after the
// chains join.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ofi/core.hpp"
#include "ofi/diagnostics.hpp"
#include "ofi/lpd.hpp"
#include "ofi/models.hpp"
#include "ofi/parallel.hpp"

namespace ofi {

/// One draw of slot j given the current state (other slots fixed).
using Conditional = std::function<double(std::span<const double> state, Rng& rng)>;

struct FullConditionalSet {
  std::vector<std::string> names;
  std::vector<Conditional> conditionals;
  std::function<std::vector<double>()> initializer;
  /// Extra columns computed from each kept state (e.g. the last simplex cell).
  std::vector<std::string> derived_names;
  std::function<void(std::span<const double> state, std::span<double> out)> derive;
  /// Called after every cycle; throws to stop the run.
  std::function<void(std::span<const double> state)> invariant;
  Argument argument = Argument::Strong;
};

enum class Scan { FixedAscending, RandomPermutationPerCycle };

const char* to_string(Scan s) noexcept;

struct GibbsConfig {
  std::size_t chains = 4;
  std::size_t burn_in = 500;
  std::size_t draws = 1000;  ///< kept draws per chain
  Scan scan = Scan::FixedAscending;
  std::uint64_t seed = 0;
  Exec exec = Exec::Parallel;
};

struct GibbsResult {
  std::vector<SampleBatch> chains;
  std::vector<std::string> names;  ///< parameter and derived columns
  std::vector<RHat> rhat;          ///< one per name

  /// All chains of one column concatenated in chain order.
  std::vector<double> pooled(const std::string& name) const;
  std::vector<std::vector<double>> per_chain(const std::string& name) const;
  /// True when every R-hat is finite and below `limit`.
  bool converged(double limit = 1.01) const;
};

/// Runs cfg.chains chains. A conditional that throws is reported as
/// ConditionalFailure carrying the cycle (counted from 0, burn-in included).
GibbsResult gibbs_run(const FullConditionalSet& fcs, const GibbsConfig& cfg);

// ---------------------------------------------------------------------------
// Normal model with both parameters unknown

/// Conditionals for (mu, sigma2): mu | sigma2 ~ N(xbar, sigma2/n), optionally
/// restricted to mu > mu0, and sigma2 | mu = n * sigma_hat2(mu) / chi2_n.
FullConditionalSet normal_conditionals(std::vector<double> data,
                                       std::optional<double> mu0 = std::nullopt);

struct JointCheckReport {
  double mu_variation = 0.0;      ///< max - min log ratio over the mu grid
  double sigma2_variation = 0.0;  ///< same over the sigma2 grid
  double tolerance = 0.0;
  bool passed = false;
};

/// Checks that the normal-times-scaled-inverse-chi2 joint reproduces both
/// conditionals on a grid. `sigma2_df` is the df of the sigma2 conditional
/// being checked (n for the correct one).
JointCheckReport analytic_joint_check_normal(const std::vector<double>& data,
                                             std::optional<int> sigma2_df = std::nullopt);

// ---------------------------------------------------------------------------
// Multinomial

struct ReparamGuard {
  std::vector<int> counts;         ///< permuted counts, maximal count last
  std::vector<std::size_t> order;  ///< order[i] = original index of slot i
};

/// Moves a maximal count to the last slot. Ties keep the later index.
ReparamGuard multinomial_reparam_guard(const std::vector<int>& counts);

/// Conditionals for p_1..p_k of a (k+1)-cell multinomial; the last cell is
/// derived. Each conditional is a binomial fiducial draw on p_j / (p_j + p_last)
/// scaled onto the remaining mass. Counts are used as given (no guard).
FullConditionalSet multinomial_conditionals(const MultinomialProblem& problem,
                                            Lpd lpd = Lpd::uniform());

/// Guard, Gibbs, then columns relabelled p1..p{k+1} in the original order.
GibbsResult multinomial_gibbs(const MultinomialProblem& problem, const GibbsConfig& cfg,
                              Lpd lpd = Lpd::uniform());

inline constexpr double kSimplexTolerance = 1e-12;

}  // namespace ofi
