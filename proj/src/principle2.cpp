#include "ofi/principle2.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include "ofi/diagnostics.hpp"

namespace ofi {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

ParamDomain natural_space(const P2Model& model) {
  return std::visit(Overloaded{[](const BinomialProblem&) { return ParamDomain::unit(); },
                               [](const PoissonProblem&) { return ParamDomain::positive(); }},
                    model);
}

Interval theta_set(const P2Model& model, double gamma) {
  return std::visit(
      Overloaded{[gamma](const BinomialProblem& b) { return binomial_theta_set(gamma, b.n, b.x); },
                 [gamma](const PoissonProblem& p) {
                   return poisson_theta_set(gamma, p.x, p.exposure).rate;
                 }},
      model);
}

std::string describe(const P2Model& model) {
  std::ostringstream os;
  std::visit(Overloaded{[&](const BinomialProblem& b) { os << "binomial(n=" << b.n << ",x=" << b.x << ")"; },
                        [&](const PoissonProblem& p) {
                          os << "poisson(x=" << p.x << ",exposure=" << p.exposure << ")";
                        }},
             model);
  return os.str();
}

P2Problem make_p2(P2Model model, Lpd lpd) {
  auto domain = natural_space(model);
  return P2Problem{std::move(model), Gpd::neutral(std::move(domain)), std::move(lpd)};
}

void check_conditions(const P2Problem& problem) {
  const ParamDomain natural = natural_space(problem.model);
  for (const auto& seg : natural.segments()) {
    if (!problem.gpd.domain().covers(seg))
      fail(ErrorCode::Condition2Violated,
           "GPD excludes part of the natural space (spillage); condition the unrestricted "
           "density instead");
    if (!problem.gpd.constant_on(seg))
      fail(ErrorCode::Condition2Violated,
           "GPD is not constant over H_x; reweight the neutral-GPD density instead");
  }
}

double draw_p2(const P2Problem& problem, Rng& rng) {
  const double gamma = rng.uniform();
  const Interval set = theta_set(problem.model, gamma);
  const RestrictedLpd within(problem.lpd, set.lo, set.hi);
  const double theta = within.sample(rng);
  assert(theta >= set.lo && theta <= set.hi);
  return theta;
}

SampleBatch sample_p2(const P2Problem& problem, std::size_t n_draws, std::uint64_t seed, Exec exec) {
  check_conditions(problem);
  std::vector<double> out(n_draws);
  for_blocks(n_draws, exec, [&](std::size_t b, std::size_t begin, std::size_t end) {
    Rng rng(seed, b);
    for (std::size_t i = begin; i < end; ++i) out[i] = draw_p2(problem, rng);
  });
  auto batch = make_batch(std::holds_alternative<BinomialProblem>(problem.model) ? "p" : "tau",
                          std::move(out), seed, Argument::Strong,
                          describe(problem.model) + "/p2/" + problem.lpd.label());
  check_containment(batch, batch.names.front(), natural_space(problem.model));
  return batch;
}

// ---------------------------------------------------------------------------
// Grid oracle

P2GridOracle::P2GridOracle(const P2Problem& problem, std::size_t gamma_resolution)
    : lpd_(std::make_unique<Lpd>(problem.lpd)) {
  check_conditions(problem);
  require(gamma_resolution >= 1000, ErrorCode::InvalidArgument,
          "gamma resolution must be at least 1000 strata");
  lo_.resize(gamma_resolution);
  hi_.resize(gamma_resolution);
  within_.reserve(gamma_resolution);
  for (std::size_t i = 0; i < gamma_resolution; ++i) {
    const double gamma = (static_cast<double>(i) + 0.5) / static_cast<double>(gamma_resolution);
    const Interval set = theta_set(problem.model, gamma);
    within_.emplace_back(*lpd_, set.lo, set.hi);
    lo_[i] = within_.back().lo();
    hi_[i] = within_.back().hi();
  }
}

std::pair<std::size_t, std::size_t> P2GridOracle::straddling(double theta) const {
  const auto last = std::partition_point(hi_.begin(), hi_.end(), [theta](double h) { return h > theta; });
  const auto first = std::partition_point(lo_.begin(), lo_.end(), [theta](double l) { return l >= theta; });
  return {static_cast<std::size_t>(first - lo_.begin()), static_cast<std::size_t>(last - hi_.begin())};
}

double P2GridOracle::density(double theta) const {
  const auto [first, last] = straddling(theta);
  double acc = 0.0;
  for (std::size_t i = first; i < last; ++i) acc += within_[i].pdf(theta);
  return acc / static_cast<double>(lo_.size());
}

double P2GridOracle::cdf(double theta) const {
  const auto [first, last] = straddling(theta);
  double acc = static_cast<double>(lo_.size() - last);
  for (std::size_t i = first; i < last; ++i) acc += within_[i].cdf(theta);
  return std::clamp(acc / static_cast<double>(lo_.size()), 0.0, 1.0);
}

std::vector<double> density_p2_grid(const P2Problem& problem, const std::vector<double>& grid,
                                    std::size_t gamma_resolution, Exec exec) {
  const P2GridOracle oracle(problem, gamma_resolution);
  std::vector<double> out(grid.size());
  for_each_index(grid.size(), exec, [&](std::size_t i) { out[i] = oracle.density(grid[i]); });
  return out;
}

KsTable lpd_sensitivity_report(const P2Model& model, const std::vector<Lpd>& lpds,
                               std::size_t n_draws, std::uint64_t seed, Exec exec) {
  require(lpds.size() >= 2, ErrorCode::InvalidArgument, "need at least two LPDs to compare");
  std::vector<std::vector<double>> samples;
  KsTable table;
  for (const auto& lpd : lpds) {
    samples.push_back(sample_p2(make_p2(model, lpd), n_draws, seed, exec).columns.front());
    table.labels.push_back(lpd.label());
  }
  const std::size_t k = lpds.size();
  table.distance.assign(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      table.distance[i][j] = table.distance[j][i] = ks_two_sample(samples[i], samples[j]);
  return table;
}

}  // namespace ofi
