#include "ofi/restricted.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ofi {

namespace {

constexpr std::uint64_t kPilotStream = 0xfffffffffff0ULL;
constexpr std::uint64_t kPilotAccepts = 100;

/// Blocked rejection sampler shared by the conditioning and reweighting
/// strategies. `draw(rng, out)` returns true when it produced an accepted value.
template <class Draw>
std::vector<double> rejection_fill(std::size_t n, std::uint64_t seed, const RejectionOptions& opt,
                                   const Draw& draw, const std::string& what) {
  require(opt.min_acceptance > 0.0 && opt.min_acceptance < 1.0, ErrorCode::InvalidArgument,
          "min_acceptance must be in (0,1)");
  require(opt.budget >= n, ErrorCode::InvalidArgument, "proposal budget is smaller than the draw count");

  // Pilot: stop at kPilotAccepts acceptances or after enough proposals to
  // resolve the acceptance floor.
  {
    Rng rng(seed, kPilotStream);
    const auto cap = static_cast<std::uint64_t>(
        std::min<double>(static_cast<double>(opt.budget), std::ceil(10.0 / opt.min_acceptance)));
    std::uint64_t attempts = 0, accepted = 0;
    double value = 0.0;
    while (attempts < cap && accepted < kPilotAccepts) {
      ++attempts;
      if (draw(rng, value)) ++accepted;
    }
    const double est = static_cast<double>(accepted) / static_cast<double>(attempts);
    if (accepted < kPilotAccepts &&
        static_cast<double>(accepted + 1) / static_cast<double>(attempts) < opt.min_acceptance) {
      std::ostringstream os;
      os << what << ": estimated acceptance " << est << " is below " << opt.min_acceptance;
      throw NegligibleAcceptance(est, os.str());
    }
  }

  std::vector<double> out(n);
  std::vector<RejectionStats> per_block(block_count(n));
  for_blocks(n, opt.exec, [&](std::size_t b, std::size_t begin, std::size_t end) {
    Rng rng(seed, b);
    const std::size_t len = end - begin;
    const auto cap = std::max<std::uint64_t>(
        len, static_cast<std::uint64_t>(static_cast<double>(opt.budget) * len / static_cast<double>(n)));
    RejectionStats& st = per_block[b];
    std::size_t i = begin;
    while (i < end) {
      if (st.attempts >= cap) {
        std::ostringstream os;
        os << what << ": proposal budget exhausted at acceptance " << st.acceptance();
        throw NegligibleAcceptance(st.acceptance(), os.str());
      }
      ++st.attempts;
      if (draw(rng, out[i])) {
        ++st.accepted;
        ++i;
      }
    }
  });

  if (opt.stats) {
    *opt.stats = {};
    for (const auto& st : per_block) {
      opt.stats->attempts += st.attempts;
      opt.stats->accepted += st.accepted;
    }
  }
  return out;
}

double gpd_sup_on(const Gpd& g, const ParamDomain& natural) {
  if (g.kind() == GpdKind::General) {
    const auto sup = g.sup_bound();
    if (!sup || !(*sup > 0.0) || !std::isfinite(*sup))
      fail(ErrorCode::UnboundedGpd, "reweighting needs a finite sup-bound for the GPD");
    return *sup;
  }
  double sup = 0.0;
  for (const auto& piece : g.pieces())
    for (const auto& seg : natural.segments())
      if (!piece.span.intersect(seg).empty()) sup = std::max(sup, piece.weight);
  require(sup > 0.0, ErrorCode::ZeroWeight, "GPD is zero over the natural space");
  return sup;
}

}  // namespace

// ---------------------------------------------------------------------------
// Bounded normal mean

BoundedNormalDensity bounded_normal_density(const BoundedNormalProblem& problem) {
  require(std::isfinite(problem.mu0), ErrorCode::InvalidArgument, "mu0 must be finite");
  require(problem.sigma2.has_value(), ErrorCode::InvalidArgument,
          "known-variance density needs sigma2; use bounded_normal_gibbs otherwise");
  const NormalMeanProblem base(problem.data, *problem.sigma2);
  const double gamma0 = std::sqrt(static_cast<double>(base.n()) / *problem.sigma2) * (base.xbar() - problem.mu0);
  const double mass = PrimaryRvLaw::standard_normal().mass(-kInf, gamma0);
  FiducialDensityP1 density(bijective_map(base), Gpd::neutral(ParamDomain::above(problem.mu0)));
  return {std::move(density), gamma0, mass, mass < kLowMassWarning};
}

GibbsResult bounded_normal_gibbs(const BoundedNormalProblem& problem, const GibbsConfig& cfg) {
  require(std::isfinite(problem.mu0), ErrorCode::InvalidArgument, "mu0 must be finite");
  return gibbs_run(normal_conditionals(problem.data, problem.mu0), cfg);
}

DensityPtr bounded_normal_t_oracle(const BoundedNormalProblem& problem) {
  return truncated_density(posterior_density({NormalMeanMarginal{problem.data}, Prior::FlatImproper}),
                           Interval::open(problem.mu0, kInf));
}

// ---------------------------------------------------------------------------
// Conditioning and reweighting

SampleBatch conditioned_p2_sampler(const P2Problem& base, const ParamDomain& restriction,
                                   std::size_t n_draws, std::uint64_t seed,
                                   const RejectionOptions& options) {
  check_conditions(base);
  auto draw = [&](Rng& rng, double& out) {
    out = draw_p2(base, rng);
    return restriction.contains(out);
  };
  auto values = rejection_fill(n_draws, seed, options, draw, "conditioned sampler");
  auto batch = make_batch(std::holds_alternative<BinomialProblem>(base.model) ? "p" : "tau",
                          std::move(values), seed, Argument::ConditionedStrategy,
                          describe(base.model) + "/conditioned/" + base.lpd.label());
  check_containment(batch, batch.names.front(), restriction);
  return batch;
}

SampleBatch reweight_p2_density(const P2Problem& base, const Gpd& target, std::size_t n_draws,
                                std::uint64_t seed, const RejectionOptions& options) {
  check_conditions(base);
  const double sup = gpd_sup_on(target, natural_space(base.model));
  auto draw = [&](Rng& rng, double& out) {
    out = draw_p2(base, rng);
    const double ratio = target(out) / sup;
    if (ratio >= 1.0) return true;
    return rng.uniform() < ratio;
  };
  auto values = rejection_fill(n_draws, seed, options, draw, "reweighted sampler");
  return make_batch(std::holds_alternative<BinomialProblem>(base.model) ? "p" : "tau",
                    std::move(values), seed, Argument::Weak,
                    describe(base.model) + "/reweighted/" + base.lpd.label());
}

SampleBatch signal_noise_joint_sampler(const SignalNoiseProblem& problem, std::size_t n_draws,
                                       std::uint64_t seed, Exec exec) {
  require(problem.alpha > 0.0, ErrorCode::InvalidArgument, "alpha must be positive");
  const P2Problem background = make_p2(PoissonProblem(problem.x0, problem.alpha), problem.lpd);
  const P2Problem window = make_p2(PoissonProblem(problem.x, 1.0), problem.lpd);
  check_conditions(background);
  check_conditions(window);

  std::vector<double> tau(n_draws), tau0(n_draws), tau1(n_draws);
  for_blocks(n_draws, exec, [&](std::size_t b, std::size_t begin, std::size_t end) {
    Rng rng(seed, b);
    for (std::size_t i = begin; i < end; ++i) {
      const double t0 = draw_p2(background, rng);
      double t = 0.0;
      std::uint64_t attempts = 0;
      do {
        if (++attempts > kSignalNoiseAttempts)
          throw NegligibleAcceptance(0.0, "signal window density has negligible mass above tau0");
        t = draw_p2(window, rng);
      } while (!(t > t0));
      tau[i] = t;
      tau0[i] = t0;
      tau1[i] = t - t0;
    }
  });

  SampleBatch batch;
  batch.names = {"tau", "tau0", "tau1"};
  batch.columns = {std::move(tau), std::move(tau0), std::move(tau1)};
  batch.seed = seed;
  batch.argument = Argument::ConditionedStrategy;
  std::ostringstream os;
  os << "signal-noise(alpha=" << problem.alpha << ",x0=" << problem.x0 << ",x=" << problem.x
     << ")/" << problem.lpd.label();
  batch.fingerprint = os.str();
  check_containment(batch, "tau1", ParamDomain::positive());
  return batch;
}

// ---------------------------------------------------------------------------
// Grid-oracle companions

ReweightedGridCdf::ReweightedGridCdf(const P2GridOracle& oracle, const Gpd& target)
    : oracle_(&oracle) {
  require(target.kind() != GpdKind::General, ErrorCode::InvalidArgument,
          "grid reweighting supports neutral and step GPDs");
  for (const auto& piece : target.pieces()) {
    pieces_.push_back(piece);
    const double m = piece.weight * (oracle.cdf(piece.span.hi) - oracle.cdf(piece.span.lo));
    mass_.push_back(m);
    total_ += m;
  }
  require(total_ > 0.0, ErrorCode::ZeroMass, "reweighted density has no mass");
}

double ReweightedGridCdf::operator()(double theta) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const Interval& s = pieces_[i].span;
    if (theta <= s.lo) continue;
    if (theta >= s.hi) {
      acc += mass_[i];
      continue;
    }
    acc += pieces_[i].weight * (oracle_->cdf(theta) - oracle_->cdf(s.lo));
  }
  return std::clamp(acc / total_, 0.0, 1.0);
}

ConditionedGridCdf::ConditionedGridCdf(const P2GridOracle& oracle, const ParamDomain& restriction)
    : oracle_(&oracle), segments_(restriction.segments()) {
  for (const auto& s : segments_) total_ += oracle.cdf(s.hi) - oracle.cdf(s.lo);
  require(total_ > 0.0, ErrorCode::ZeroMass, "restriction has no mass under the grid oracle");
}

double ConditionedGridCdf::operator()(double theta) const {
  double acc = 0.0;
  for (const auto& s : segments_) {
    if (theta <= s.lo) continue;
    acc += oracle_->cdf(std::min(theta, s.hi)) - oracle_->cdf(s.lo);
  }
  return std::clamp(acc / total_, 0.0, 1.0);
}

}  // namespace ofi
