#pragma once

// Restricted parameter spaces: truncation of the normal mean, conditioning
// the unrestricted set-valued density after the fact, the background plus
// signal Poisson model and reweighting by a non-neutral GPD.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ofi/core.hpp"
#include "ofi/multivariate.hpp"
#include "ofi/oracle.hpp"
#include "ofi/principle1.hpp"
#include "ofi/principle2.hpp"

namespace ofi {

/// Normal mean known to exceed mu0.
struct BoundedNormalProblem {
  std::vector<double> data;
  double mu0 = 0.0;
  std::optional<double> sigma2;  ///< empty when the variance is unknown
};

inline constexpr double kLowMassWarning = 1e-6;

struct BoundedNormalDensity {
  FiducialDensityP1 density;
  double gamma0;      ///< (sqrt(n) / sigma) (xbar - mu0)
  double mass;        ///< untruncated probability of mu > mu0
  bool low_mass;      ///< mass below kLowMassWarning
};

/// Variance known: neutral GPD on (mu0, inf), i.e. the moderate argument.
BoundedNormalDensity bounded_normal_density(const BoundedNormalProblem& problem);
/// Variance unknown: Gibbs with the mu conditional truncated to (mu0, inf).
GibbsResult bounded_normal_gibbs(const BoundedNormalProblem& problem, const GibbsConfig& cfg);
/// t_{n-1}(xbar, s / sqrt n) truncated to (mu0, inf).
DensityPtr bounded_normal_t_oracle(const BoundedNormalProblem& problem);

struct RejectionStats {
  std::uint64_t attempts = 0;
  std::uint64_t accepted = 0;
  double acceptance() const noexcept {
    return attempts == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(attempts);
  }
};

struct RejectionOptions {
  double min_acceptance = 1e-6;
  std::uint64_t budget = 100'000'000;  ///< total proposals allowed
  Exec exec = Exec::Parallel;
  RejectionStats* stats = nullptr;     ///< filled when set (pilot excluded)
};

/// Unrestricted draws kept only inside `restriction`. A pilot run estimates
/// the acceptance rate first; NegligibleAcceptance is thrown when it falls
/// below options.min_acceptance.
SampleBatch conditioned_p2_sampler(const P2Problem& base, const ParamDomain& restriction,
                                   std::size_t n_draws, std::uint64_t seed,
                                   const RejectionOptions& options = {});

struct SignalNoiseProblem {
  int x0 = 0;            ///< background count over exposure alpha
  int x = 0;             ///< count over unit exposure with the signal present
  double alpha = 1.0;
  Lpd lpd = Lpd::uniform();
};

inline constexpr std::uint64_t kSignalNoiseAttempts = 1'000'000;

/// Columns tau, tau0 and tau1 = tau - tau0. Each draw takes tau0 from the
/// background fiducial density, then tau from the signal-window density
/// conditioned on tau > tau0.
SampleBatch signal_noise_joint_sampler(const SignalNoiseProblem& problem, std::size_t n_draws,
                                       std::uint64_t seed, Exec exec = Exec::Parallel);

/// Draws from the neutral-GPD density times `target` (normalized) by
/// rejection with bound sup(target).
SampleBatch reweight_p2_density(const P2Problem& base, const Gpd& target, std::size_t n_draws,
                                std::uint64_t seed, const RejectionOptions& options = {});

/// CDF of the grid oracle reweighted by a step or neutral GPD.
class ReweightedGridCdf {
 public:
  ReweightedGridCdf(const P2GridOracle& oracle, const Gpd& target);
  double operator()(double theta) const;

 private:
  const P2GridOracle* oracle_;
  std::vector<WeightedInterval> pieces_;
  std::vector<double> mass_;  ///< oracle mass of each piece times its weight
  double total_ = 0.0;
};

/// CDF of the grid oracle conditioned to `restriction`.
class ConditionedGridCdf {
 public:
  ConditionedGridCdf(const P2GridOracle& oracle, const ParamDomain& restriction);
  double operator()(double theta) const;
  double mass() const noexcept { return total_; }

 private:
  const P2GridOracle* oracle_;
  std::vector<Interval> segments_;
  double total_ = 0.0;
};

}  // namespace ofi
