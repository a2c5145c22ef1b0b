#pragma once

// Data generation through the primary random variable, and a check that it
// reproduces direct sampling from the model.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ofi/core.hpp"
#include "ofi/parallel.hpp"

namespace ofi {

enum class DataModel { Binomial, Poisson, Normal };

const char* to_string(DataModel m) noexcept;
DataModel parse_data_model(const std::string& name);

struct DataParams {
  int n = 10;          ///< trials (binomial) or sample size (normal)
  double p = 0.3;
  double tau = 2.0;    ///< Poisson mean
  double mu = 1.0;
  double sigma = 2.0;
};

struct GeneratedData {
  std::vector<double> x;
  double q = 0.0;                     ///< fiducial statistic
  std::array<std::uint64_t, 4> calls{};  ///< engine calls used by each step
};

/// Steps: ancillary complement, gamma ~ pi0, q = phi(gamma, theta), then the
/// data given q and the complement.
GeneratedData generate_via_assumption1(DataModel model, const DataParams& params, Rng& rng);

/// Fiducial statistic of data drawn directly from the model.
double direct_statistic(DataModel model, const DataParams& params, Rng& rng);

struct ValidationReport {
  DataModel model = DataModel::Binomial;
  std::size_t reps = 0;
  std::vector<double> p_values;  ///< one per trial
  std::size_t passed_trials = 0;
  bool passed = false;
};

inline constexpr std::size_t kValidationTrials = 20;
inline constexpr double kValidationAlpha = 1e-3;

/// Two-sample chi-squared (discrete models) or KS (normal) between statistics
/// from both generators; passes when at least 19 of 20 trials give p > 1e-3.
ValidationReport validate_assumption11(DataModel model, const DataParams& params, std::size_t reps,
                                       std::uint64_t seed, Exec exec = Exec::Parallel);

/// p-value of the chi-squared homogeneity test between two count samples.
/// Sparse cells are merged until each expected count is at least 5.
double chi2_two_sample_p(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace ofi
