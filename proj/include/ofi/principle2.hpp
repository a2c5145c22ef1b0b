#pragma once

// Fiducial densities for set-valued structural maps (discrete data).
//
// Each draw takes gamma from pi1 (uniform on (0,1) for the built-in models),
// resolves the interval theta(gamma) and draws theta from the LPD restricted
// to that interval. P2GridOracle evaluates the same law by stratified
// quadrature over gamma and is used to check the sampler.

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "ofi/core.hpp"
#include "ofi/lpd.hpp"
#include "ofi/models.hpp"
#include "ofi/parallel.hpp"

namespace ofi {

using P2Model = std::variant<BinomialProblem, PoissonProblem>;

struct P2Problem {
  P2Model model;
  Gpd gpd;
  Lpd lpd;
};

/// Problem with the neutral GPD on the model's natural space.
P2Problem make_p2(P2Model model, Lpd lpd);

/// Natural parameter space: [0,1] for proportions, (0,inf) for rates.
ParamDomain natural_space(const P2Model& model);
/// theta(gamma) in parameter units (rate units for Poisson).
Interval theta_set(const P2Model& model, double gamma);
std::string describe(const P2Model& model);

/// Throws Condition2Violated unless the GPD is one positive constant over the
/// whole natural space (spillage or a non-constant GPD both fail).
void check_conditions(const P2Problem& problem);

/// One draw (gamma, then theta); consumes two uniforms.
double draw_p2(const P2Problem& problem, Rng& rng);

SampleBatch sample_p2(const P2Problem& problem, std::size_t n_draws, std::uint64_t seed,
                      Exec exec = Exec::Parallel);

/// Stratified midpoint-rule evaluator of the marginal fiducial law.
class P2GridOracle {
 public:
  P2GridOracle(const P2Problem& problem, std::size_t gamma_resolution = 2000);

  double density(double theta) const;
  double cdf(double theta) const;
  std::size_t resolution() const noexcept { return lo_.size(); }

 private:
  /// Index range [first, last) of strata whose interval straddles theta.
  std::pair<std::size_t, std::size_t> straddling(double theta) const;

  std::unique_ptr<Lpd> lpd_;
  // Interval endpoints, both decreasing in the stratum index.
  std::vector<double> lo_;
  std::vector<double> hi_;
  std::vector<RestrictedLpd> within_;
};

std::vector<double> density_p2_grid(const P2Problem& problem, const std::vector<double>& grid,
                                    std::size_t gamma_resolution = 2000,
                                    Exec exec = Exec::Parallel);

struct KsTable {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> distance;  ///< symmetric, zero diagonal
};

/// Pairwise two-sample KS distances between marginals sampled under each LPD.
/// All LPDs share the seed.
KsTable lpd_sensitivity_report(const P2Model& model, const std::vector<Lpd>& lpds,
                               std::size_t n_draws, std::uint64_t seed,
                               Exec exec = Exec::Parallel);

}  // namespace ofi
