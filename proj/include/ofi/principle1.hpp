#pragma once

// Fiducial densities for bijective structural maps.
//
// The post-data density of the primary r.v. is
//   pi1(gamma) = c1 * w_G(theta(gamma)) * pi0(gamma)   on G_x,
// and theta is obtained by pushing pi1 through the inverse map. Neutral and
// step GPDs are handled exactly as a finite mixture of truncated pi0 pieces;
// General GPDs use rejection against pi0 with the GPD's sup-bound.

#include <cstdint>
#include <vector>

#include "ofi/core.hpp"
#include "ofi/models.hpp"
#include "ofi/parallel.hpp"

namespace ofi {

/// Strong / moderate / weak classification of the fiducial argument.
Argument classify_argument(const BijectiveMap& map, const Gpd& gpd);

/// One constant-weight piece of H_x together with its gamma-image.
struct GammaPiece {
  Interval theta;
  double gamma_lo;
  double gamma_hi;
  double weight;     ///< GPD height on the piece
  double base_mass;  ///< pi0 probability of (gamma_lo, gamma_hi)
};

class FiducialDensityP1 {
 public:
  FiducialDensityP1(BijectiveMap map, Gpd gpd);

  Argument argument() const noexcept { return argument_; }
  const BijectiveMap& map() const noexcept { return map_; }
  const Gpd& gpd() const noexcept { return gpd_; }
  /// Pieces of H_x (empty for General GPDs).
  const std::vector<GammaPiece>& pieces() const noexcept { return pieces_; }
  /// Integral of w_G(theta(gamma)) pi0(gamma) over G_x, i.e. 1 / c1.
  double normalizer() const noexcept { return normalizer_; }

  /// pi1 at gamma.
  double gamma_pdf(double gamma) const;
  /// Fiducial density of theta.
  double pdf(double theta) const;
  double cdf(double theta) const;

  double sample(Rng& rng) const;
  /// n draws in fixed blocks; block b uses stream (seed, b).
  std::vector<double> sample(std::size_t n, std::uint64_t seed, Exec exec = Exec::Parallel) const;
  SampleBatch sample_batch(std::size_t n, std::uint64_t seed, Exec exec = Exec::Parallel) const;

 private:
  BijectiveMap map_;
  Gpd gpd_;
  Argument argument_;
  std::vector<GammaPiece> pieces_;
  std::vector<double> cumulative_;  ///< normalized cumulative piece probabilities
  double normalizer_ = 1.0;
  double sup_ = 1.0;
};

inline FiducialDensityP1 fiducial_density_p1(BijectiveMap map, Gpd gpd) {
  return FiducialDensityP1(std::move(map), std::move(gpd));
}

/// d / e with d = int_D w_G(theta(gamma)) pi0(gamma) dgamma and likewise e.
/// D and E must carry the same pi0 probability (relative 1e-9), which under
/// the probability integral transform is the uniform-pi0 construction.
double weight_ratio(const Gpd& gpd, const Interval& d, const Interval& e, const BijectiveMap& map);

}  // namespace ofi
