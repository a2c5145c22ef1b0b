#include "ofi/principle1.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace ofi {

namespace {

constexpr std::uint64_t kMaxRejections = 100000000;

void check_map(const BijectiveMap& map) {
  require(map.theta_of && map.gamma_of && map.jacobian, ErrorCode::Condition1Violated,
          "structural map is missing its inverse");
  const double g = map.law.quantile(0.5);
  const double back = map.gamma_of(map.theta_of(g));
  require(std::abs(back - g) <= 1e-9 * std::max(1.0, std::abs(g)), ErrorCode::Condition1Violated,
          "structural map is not bijective on the feasible sets");
}

/// Integral of w_G(theta(gamma)) pi0(gamma) over (lo, hi) by adaptive quadrature.
double weighted_mass_general(const Gpd& gpd, const BijectiveMap& map, double lo, double hi) {
  const Interval sup = map.law.support();
  lo = std::max(lo, sup.lo);
  hi = std::min(hi, sup.hi);
  if (!(lo < hi)) return 0.0;
  auto integrand = [&](double g) {
    const double theta = map.theta_of(g);
    if (!map.natural.contains(theta)) return 0.0;
    return gpd(theta) * map.law.pdf(g);
  };
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, lo, hi, 20, 1e-10, &err);
  require(std::isfinite(v), ErrorCode::ZeroMass, "GPD-weighted mass is not finite");
  return v;
}

std::vector<GammaPiece> build_pieces(const BijectiveMap& map, const Gpd& gpd) {
  std::vector<GammaPiece> out;
  for (const auto& piece : gpd.pieces()) {
    for (const auto& span : map.natural.clip(piece.span)) {
      const auto [glo, ghi] = map.gamma_range(span);
      const double mass = map.law.mass(glo, ghi);
      if (mass > 0.0) out.push_back({span, glo, ghi, piece.weight, mass});
    }
  }
  // Order by gamma so the mixture layout does not depend on GPD orientation.
  std::sort(out.begin(), out.end(),
            [](const GammaPiece& a, const GammaPiece& b) { return a.gamma_lo < b.gamma_lo; });
  return out;
}

}  // namespace

Argument classify_argument(const BijectiveMap& map, const Gpd& gpd) {
  check_map(map);
  if (gpd.kind() == GpdKind::General) return Argument::Weak;
  std::vector<double> weights;
  for (const auto& piece : gpd.pieces())
    if (!map.natural.clip(piece.span).empty()) weights.push_back(piece.weight);
  require(!weights.empty(), ErrorCode::ZeroWeight, "GPD vanishes on the parameter space");
  const bool constant = std::all_of(weights.begin(), weights.end(),
                                    [&](double w) { return w == weights.front(); });
  if (!constant) return Argument::Weak;
  // Neutral on H_x: strong iff nothing in the natural space was excluded (G_x = {pi0 > 0}).
  const auto& segs = map.natural.segments();
  const bool full = std::all_of(segs.begin(), segs.end(),
                                [&](const Interval& s) { return gpd.domain().covers(s); });
  return full ? Argument::Strong : Argument::Moderate;
}

FiducialDensityP1::FiducialDensityP1(BijectiveMap map, Gpd gpd)
    : map_(std::move(map)), gpd_(std::move(gpd)), argument_(classify_argument(map_, gpd_)) {
  if (gpd_.kind() == GpdKind::General) {
    const auto sup = gpd_.sup_bound();
    require(sup.has_value(), ErrorCode::UnboundedGpd,
            "general GPD needs a sup-bound for rejection sampling");
    sup_ = *sup;
    const Interval s = map_.law.support();
    normalizer_ = weighted_mass_general(gpd_, map_, s.lo, s.hi);
  } else {
    pieces_ = build_pieces(map_, gpd_);
    normalizer_ = 0.0;
    for (const auto& p : pieces_) normalizer_ += p.weight * p.base_mass;
    double acc = 0.0;
    for (const auto& p : pieces_) {
      acc += p.weight * p.base_mass;
      cumulative_.push_back(acc / normalizer_);
    }
    if (!cumulative_.empty()) cumulative_.back() = 1.0;
  }
  require(normalizer_ > 0.0, ErrorCode::ZeroWeight, "post-data density has zero mass");
}

double FiducialDensityP1::gamma_pdf(double gamma) const {
  if (!map_.law.support().contains(gamma)) return 0.0;
  const double theta = map_.theta_of(gamma);
  if (!map_.natural.contains(theta)) return 0.0;
  return gpd_(theta) * map_.law.pdf(gamma) / normalizer_;
}

double FiducialDensityP1::pdf(double theta) const {
  if (!map_.natural.contains(theta)) return 0.0;
  return gamma_pdf(map_.gamma_of(theta)) * map_.jacobian(theta);
}

double FiducialDensityP1::cdf(double theta) const {
  const Interval below{-kInf, theta, false, true};
  if (gpd_.kind() == GpdKind::General) {
    // P(Theta <= theta) is the pi1 mass of the gamma-image of (-inf, theta].
    double mass = 0.0;
    for (const auto& span : map_.natural.clip(below)) {
      const auto [glo, ghi] = map_.gamma_range(span);
      mass += weighted_mass_general(gpd_, map_, glo, ghi);
    }
    return std::clamp(mass / normalizer_, 0.0, 1.0);
  }
  double mass = 0.0;
  for (const auto& p : pieces_) {
    const Interval part = p.theta.intersect(below);
    if (part.empty() || !(part.lo < part.hi)) continue;
    const auto [glo, ghi] = map_.gamma_range(part);
    mass += p.weight * map_.law.mass(glo, ghi);
  }
  return std::clamp(mass / normalizer_, 0.0, 1.0);
}

double FiducialDensityP1::sample(Rng& rng) const {
  if (gpd_.kind() != GpdKind::General) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto& piece = pieces_[std::min<std::size_t>(
        static_cast<std::size_t>(it - cumulative_.begin()), pieces_.size() - 1)];
    const double g = map_.law.sample_between(rng, piece.gamma_lo, piece.gamma_hi);
    return std::clamp(map_.theta_of(g), piece.theta.lo, piece.theta.hi);
  }
  for (std::uint64_t attempt = 0; attempt < kMaxRejections; ++attempt) {
    const double g = map_.law.sample(rng);
    const double theta = map_.theta_of(g);
    if (!map_.natural.contains(theta)) continue;
    const double w = gpd_(theta);
    require(w <= sup_ * (1.0 + 1e-12), ErrorCode::UnboundedGpd,
            "GPD exceeds its declared sup-bound");
    if (rng.uniform() * sup_ < w) return theta;
  }
  throw NegligibleAcceptance(0.0, "GPD rejection sampler exhausted its draw budget");
}

std::vector<double> FiducialDensityP1::sample(std::size_t n, std::uint64_t seed, Exec exec) const {
  std::vector<double> out(n);
  for_blocks(n, exec, [&](std::size_t b, std::size_t begin, std::size_t end) {
    Rng rng(seed, b);
    for (std::size_t i = begin; i < end; ++i) out[i] = sample(rng);
  });
  return out;
}

SampleBatch FiducialDensityP1::sample_batch(std::size_t n, std::uint64_t seed, Exec exec) const {
  auto batch = make_batch("theta", sample(n, seed, exec), seed, argument_,
                          map_.label + "/p1/" + to_string(argument_));
  check_containment(batch, "theta", map_.natural);
  return batch;
}

double weight_ratio(const Gpd& gpd, const Interval& d, const Interval& e, const BijectiveMap& map) {
  check_map(map);
  require(!d.empty() && !e.empty(), ErrorCode::EmptyInterval, "D and E must be non-empty");
  const double pd = map.law.mass(d.lo, d.hi);
  const double pe = map.law.mass(e.lo, e.hi);
  require(std::abs(pd - pe) <= 1e-9 * std::max(pd, pe), ErrorCode::InvalidArgument,
          "D and E must have equal pre-data probability");
  auto weighted = [&](const Interval& window) {
    if (gpd.kind() == GpdKind::General) return weighted_mass_general(gpd, map, window.lo, window.hi);
    double total = 0.0;
    for (const auto& piece : build_pieces(map, gpd)) {
      const double lo = std::max(piece.gamma_lo, window.lo);
      const double hi = std::min(piece.gamma_hi, window.hi);
      if (lo < hi) total += piece.weight * map.law.mass(lo, hi);
    }
    return total;
  };
  const double num = weighted(d);
  const double den = weighted(e);
  require(den > 0.0, ErrorCode::ZeroWeight, "weight of E is zero");
  return num / den;
}

}  // namespace ofi
