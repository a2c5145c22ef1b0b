#include "ofi/multivariate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ofi/principle2.hpp"

namespace ofi {

const char* to_string(Scan s) noexcept {
  switch (s) {
    case Scan::FixedAscending: return "fixed-ascending";
    case Scan::RandomPermutationPerCycle: return "random-permutation";
  }
  return "unknown";
}

std::vector<std::vector<double>> GibbsResult::per_chain(const std::string& name) const {
  std::vector<std::vector<double>> out;
  for (const auto& c : chains) out.push_back(c.column(name));
  return out;
}

std::vector<double> GibbsResult::pooled(const std::string& name) const {
  std::vector<double> out;
  for (const auto& c : chains) {
    const auto& col = c.column(name);
    out.insert(out.end(), col.begin(), col.end());
  }
  return out;
}

bool GibbsResult::converged(double limit) const {
  return std::all_of(rhat.begin(), rhat.end(),
                     [limit](const RHat& r) { return !r.degenerate && r.value < limit; });
}

GibbsResult gibbs_run(const FullConditionalSet& fcs, const GibbsConfig& cfg) {
  const std::size_t k = fcs.conditionals.size();
  require(k >= 1 && fcs.names.size() == k, ErrorCode::InvalidArgument,
          "need one name per conditional");
  require(cfg.chains >= 2, ErrorCode::InvalidArgument, "Gibbs needs at least two chains");
  require(cfg.draws >= 1, ErrorCode::InvalidArgument, "Gibbs needs at least one kept draw");
  require(static_cast<bool>(fcs.initializer), ErrorCode::InvalidArgument, "missing initializer");
  const std::size_t extra = fcs.derived_names.size();
  require(extra == 0 || static_cast<bool>(fcs.derive), ErrorCode::InvalidArgument,
          "derived columns need a derive function");

  GibbsResult result;
  result.names = fcs.names;
  result.names.insert(result.names.end(), fcs.derived_names.begin(), fcs.derived_names.end());
  result.chains.resize(cfg.chains);

  for_each_index(cfg.chains, cfg.exec, [&](std::size_t c) {
    Rng rng(cfg.seed, c);
    std::vector<double> state = fcs.initializer();
    require(state.size() == k, ErrorCode::InvalidArgument, "initializer returned the wrong size");
    std::vector<std::vector<double>> cols(k + extra, std::vector<double>(cfg.draws));
    std::vector<double> derived(extra);
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);

    const std::size_t cycles = cfg.burn_in + cfg.draws;
    for (std::size_t t = 0; t < cycles; ++t) {
      if (cfg.scan == Scan::RandomPermutationPerCycle) std::shuffle(order.begin(), order.end(), rng);
      for (std::size_t j : order) {
        try {
          state[j] = fcs.conditionals[j](state, rng);
        } catch (const ConditionalFailure&) {
          throw;
        } catch (const std::exception& e) {
          throw ConditionalFailure(t, j, "conditional for " + fcs.names[j] + " failed at cycle " +
                                             std::to_string(t) + ": " + e.what());
        }
      }
      if (fcs.invariant) fcs.invariant(state);
      if (t < cfg.burn_in) continue;
      const std::size_t row = t - cfg.burn_in;
      for (std::size_t j = 0; j < k; ++j) cols[j][row] = state[j];
      if (extra > 0) {
        fcs.derive(state, derived);
        for (std::size_t j = 0; j < extra; ++j) cols[k + j][row] = derived[j];
      }
    }

    SampleBatch& b = result.chains[c];
    b.names = result.names;
    b.columns = std::move(cols);
    b.seed = cfg.seed;
    b.chain = static_cast<int>(c);
    b.argument = fcs.argument;
    b.fingerprint = std::string("gibbs/") + to_string(cfg.scan);
  });

  for (const auto& name : result.names) {
    if (cfg.draws < 4) {
      result.rhat.push_back({std::numeric_limits<double>::quiet_NaN(), true});
      continue;
    }
    result.rhat.push_back(split_rhat(result.per_chain(name)));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Normal

namespace {

struct NormalSummary {
  int n;
  double xbar;
};

NormalSummary summarize(const std::vector<double>& data) {
  require(data.size() >= 2, ErrorCode::InvalidArgument, "need at least two observations");
  const double xbar = std::accumulate(data.begin(), data.end(), 0.0) / static_cast<double>(data.size());
  return {static_cast<int>(data.size()), xbar};
}

double sigma_hat2_at(const std::vector<double>& data, double mu) {
  double ss = 0.0;
  for (double v : data) ss += (v - mu) * (v - mu);
  return ss / static_cast<double>(data.size());
}

double log_normal_pdf(double x, double mean, double var) {
  return -0.5 * std::log(2.0 * M_PI * var) - (x - mean) * (x - mean) / (2.0 * var);
}

double log_scaled_inv_chi2_pdf(double s, double df, double scale2) {
  const double h = df / 2.0;
  return h * std::log(h * scale2) - std::lgamma(h) - (h + 1.0) * std::log(s) - df * scale2 / (2.0 * s);
}

}  // namespace

FullConditionalSet normal_conditionals(std::vector<double> data, std::optional<double> mu0) {
  const NormalSummary sm = summarize(data);
  const double start_s2 = sigma_hat2_at(data, sm.xbar);
  require(start_s2 > 0.0, ErrorCode::Condition1Violated, "data have zero spread");
  auto shared = std::make_shared<const std::vector<double>>(std::move(data));

  FullConditionalSet fcs;
  fcs.names = {"mu", "sigma2"};
  fcs.argument = mu0 ? Argument::Moderate : Argument::Strong;

  const PrimaryRvLaw normal = PrimaryRvLaw::standard_normal();
  fcs.conditionals.push_back([sm, mu0, normal](std::span<const double> state, Rng& rng) {
    const double s2 = state[1];
    if (!mu0) return normal_mean_inverse(normal.sample(rng), sm.xbar, s2, sm.n);
    const double gamma0 = (sm.xbar - *mu0) / std::sqrt(s2 / sm.n);
    const double mu = normal_mean_inverse(normal.sample_between(rng, -kInf, gamma0), sm.xbar, s2, sm.n);
    return std::max(mu, std::nextafter(*mu0, kInf));
  });

  const PrimaryRvLaw chi2 = PrimaryRvLaw::chi_squared(sm.n);
  fcs.conditionals.push_back([shared, sm, chi2](std::span<const double> state, Rng& rng) {
    const double s2hat = sigma_hat2_at(*shared, state[0]);
    return normal_variance_inverse(chi2.sample(rng), s2hat, sm.n);
  });

  fcs.initializer = [sm, mu0, start_s2]() {
    double mu = sm.xbar;
    if (mu0 && mu <= *mu0) mu = *mu0 + std::sqrt(start_s2 / sm.n);
    return std::vector<double>{mu, start_s2};
  };
  return fcs;
}

JointCheckReport analytic_joint_check_normal(const std::vector<double>& data,
                                             std::optional<int> sigma2_df) {
  const NormalSummary sm = summarize(data);
  const double s2hat = sigma_hat2_at(data, sm.xbar);
  require(s2hat > 0.0, ErrorCode::InvalidArgument, "data have zero spread");
  const int df = sigma2_df.value_or(sm.n);
  require(df >= 1, ErrorCode::InvalidArgument, "df must be positive");
  const double n = sm.n;

  // Proposed joint, up to a constant.
  auto log_joint = [&](double mu, double s2) {
    return -(n / 2.0 + 1.0) * std::log(s2) - n * sigma_hat2_at(data, mu) / (2.0 * s2);
  };

  constexpr int kGrid = 201;
  const double spread = std::sqrt(s2hat / n);
  JointCheckReport rep;

  for (double factor : {0.5, 1.0, 2.0}) {
    const double s2 = factor * s2hat;
    double lo = kInf, hi = -kInf;
    for (int i = 0; i < kGrid; ++i) {
      const double mu = sm.xbar + spread * (-5.0 + 10.0 * i / (kGrid - 1));
      const double r = log_joint(mu, s2) - log_normal_pdf(mu, sm.xbar, s2 / n);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    rep.mu_variation = std::max(rep.mu_variation, hi - lo);
  }

  for (double shift : {-1.0, 0.0, 1.0}) {
    const double mu = sm.xbar + shift * spread;
    const double scale = sigma_hat2_at(data, mu);
    double lo = kInf, hi = -kInf;
    for (int i = 0; i < kGrid; ++i) {
      const double s2 = scale * std::exp(std::log(0.1) + std::log(100.0) * i / (kGrid - 1));
      const double r = log_joint(mu, s2) - log_scaled_inv_chi2_pdf(s2, df, scale);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    rep.sigma2_variation = std::max(rep.sigma2_variation, hi - lo);
  }

  rep.tolerance = sm.n == 2 ? 1e-6 : 1e-8;
  rep.passed = rep.mu_variation < rep.tolerance && rep.sigma2_variation < rep.tolerance;
  return rep;
}

// ---------------------------------------------------------------------------
// Multinomial

ReparamGuard multinomial_reparam_guard(const std::vector<int>& counts) {
  const MultinomialProblem checked(counts);
  require(checked.total() >= 1, ErrorCode::AllZeroCounts, "all multinomial counts are zero");
  ReparamGuard g;
  g.order.resize(counts.size());
  std::iota(g.order.begin(), g.order.end(), 0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i] >= counts[best]) best = i;
  std::swap(g.order[best], g.order.back());
  for (std::size_t i : g.order) g.counts.push_back(counts[i]);
  return g;
}

FullConditionalSet multinomial_conditionals(const MultinomialProblem& problem, Lpd lpd) {
  const std::size_t cells = problem.counts.size();
  const std::size_t k = cells - 1;
  const int total = problem.total();

  FullConditionalSet fcs;
  fcs.argument = Argument::Strong;
  for (std::size_t j = 0; j < k; ++j) {
    fcs.names.push_back("p" + std::to_string(j + 1));
    std::shared_ptr<const P2Problem> slot;
    std::string reason;
    try {
      slot = std::make_shared<const P2Problem>(make_p2(problem.conditional(j), lpd));
    } catch (const std::exception& e) {
      reason = e.what();
    }
    fcs.conditionals.push_back([slot, reason, j, k](std::span<const double> state, Rng& rng) {
      if (!slot) fail(ErrorCode::ConditionalFailure, reason);
      double rest = 1.0;
      for (std::size_t i = 0; i < k; ++i)
        if (i != j) rest -= state[i];
      require(rest > 0.0, ErrorCode::ConditionalFailure, "remaining simplex mass is not positive");
      return draw_p2(*slot, rng) * rest;
    });
  }

  const std::vector<int> counts = problem.counts;
  fcs.initializer = [counts, total, k]() {
    std::vector<double> p(k);
    const double denom = total + (k + 1) / 2.0;
    for (std::size_t i = 0; i < k; ++i) p[i] = (counts[i] + 0.5) / denom;
    return p;
  };
  fcs.derived_names = {"p" + std::to_string(cells)};
  fcs.derive = [](std::span<const double> state, std::span<double> out) {
    out[0] = 1.0 - std::accumulate(state.begin(), state.end(), 0.0);
  };
  fcs.invariant = [](std::span<const double> state) {
    double sum = 0.0;
    for (double p : state) {
      if (!(p > 0.0 && p < 1.0)) fail(ErrorCode::InvalidArgument, "simplex violated: proportion outside (0,1)");
      sum += p;
    }
    const double last = 1.0 - sum;
    if (!(last > 0.0) || std::abs(sum + last - 1.0) > kSimplexTolerance)
      fail(ErrorCode::InvalidArgument, "simplex violated: proportions do not sum to one");
  };
  return fcs;
}

GibbsResult multinomial_gibbs(const MultinomialProblem& problem, const GibbsConfig& cfg, Lpd lpd) {
  const ReparamGuard guard = multinomial_reparam_guard(problem.counts);
  const FullConditionalSet fcs = multinomial_conditionals(MultinomialProblem(guard.counts), std::move(lpd));
  GibbsResult permuted = gibbs_run(fcs, cfg);

  const std::size_t cells = guard.order.size();
  GibbsResult out;
  out.names.resize(cells);
  out.rhat.resize(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    out.names[guard.order[i]] = "p" + std::to_string(guard.order[i] + 1);
    out.rhat[guard.order[i]] = permuted.rhat[i];
  }
  for (auto& chain : permuted.chains) {
    SampleBatch b = chain;
    b.names = out.names;
    for (std::size_t i = 0; i < cells; ++i) b.columns[guard.order[i]] = std::move(chain.columns[i]);
    out.chains.push_back(std::move(b));
  }
  return out;
}

}  // namespace ofi
