#include "ofi/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include <boost/math/distributions/chi_squared.hpp>

#include "ofi/diagnostics.hpp"
#include "ofi/models.hpp"
#include "ofi/parallel.hpp"

namespace ofi {

const char* to_string(DataModel m) noexcept {
  switch (m) {
    case DataModel::Binomial: return "binomial";
    case DataModel::Poisson: return "poisson";
    case DataModel::Normal: return "normal";
  }
  return "unknown";
}

DataModel parse_data_model(const std::string& name) {
  if (name == "binomial") return DataModel::Binomial;
  if (name == "poisson") return DataModel::Poisson;
  if (name == "normal") return DataModel::Normal;
  fail(ErrorCode::UnsupportedModel, "data generation supports binomial, poisson and normal, not " + name);
}

namespace {

void check_params(DataModel model, const DataParams& p) {
  switch (model) {
    case DataModel::Binomial:
      require(p.n >= 1 && p.p >= 0.0 && p.p <= 1.0, ErrorCode::InvalidArgument,
              "binomial needs n >= 1 and p in [0,1]");
      break;
    case DataModel::Poisson:
      require(p.tau > 0.0, ErrorCode::InvalidArgument, "Poisson mean must be positive");
      break;
    case DataModel::Normal:
      require(p.n >= 2 && p.sigma > 0.0, ErrorCode::InvalidArgument, "normal needs n >= 2 and sigma > 0");
      break;
  }
}

}  // namespace

GeneratedData generate_via_assumption1(DataModel model, const DataParams& params, Rng& rng) {
  check_params(model, params);
  GeneratedData out;
  const PrimaryRvLaw normal = PrimaryRvLaw::standard_normal();
  auto step = [&](int s, auto&& fn) {
    const std::uint64_t before = rng.calls();
    fn();
    out.calls[s] = rng.calls() - before;
  };

  std::vector<double> residual;
  double gamma = 0.0;
  step(0, [&] {
    if (model != DataModel::Normal) return;
    residual.resize(params.n);
    for (double& r : residual) r = normal.sample(rng);
    const double m = mean(residual);
    for (double& r : residual) r = params.sigma * (r - m);
  });
  step(1, [&] { gamma = model == DataModel::Normal ? normal.sample(rng) : rng.uniform(); });
  step(2, [&] {
    switch (model) {
      case DataModel::Binomial: out.q = binomial_quantile(gamma, params.n, params.p); break;
      case DataModel::Poisson: out.q = poisson_quantile(gamma, params.tau); break;
      case DataModel::Normal:
        out.q = normal_mean_forward(gamma, params.mu, params.sigma * params.sigma, params.n);
        break;
    }
  });
  step(3, [&] {
    if (model == DataModel::Normal) {
      for (double r : residual) out.x.push_back(out.q + r);
    } else {
      out.x = {out.q};
    }
  });
  return out;
}

double direct_statistic(DataModel model, const DataParams& params, Rng& rng) {
  check_params(model, params);
  switch (model) {
    case DataModel::Binomial: return std::binomial_distribution<int>(params.n, params.p)(rng);
    case DataModel::Poisson: return std::poisson_distribution<int>(params.tau)(rng);
    case DataModel::Normal: {
      std::normal_distribution<double> g(params.mu, params.sigma);
      double s = 0.0;
      for (int i = 0; i < params.n; ++i) s += g(rng);
      return s / params.n;
    }
  }
  return 0.0;
}

double chi2_two_sample_p(const std::vector<int>& a, const std::vector<int>& b) {
  require(!a.empty() && !b.empty(), ErrorCode::InvalidArgument, "empty sample");
  std::map<int, std::pair<double, double>> table;
  for (int v : a) table[v].first += 1.0;
  for (int v : b) table[v].second += 1.0;
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double ntot = na + nb;

  // Merge neighbouring cells (in value order) until every expected count >= 5.
  std::vector<std::pair<double, double>> cells;
  std::pair<double, double> acc{0.0, 0.0};
  auto small = [&](const std::pair<double, double>& c) {
    const double row = c.first + c.second;
    return row * std::min(na, nb) / ntot < 5.0;
  };
  for (const auto& [value, c] : table) {
    acc.first += c.first;
    acc.second += c.second;
    if (!small(acc)) {
      cells.push_back(acc);
      acc = {0.0, 0.0};
    }
  }
  if (acc.first + acc.second > 0.0) {
    if (cells.empty()) {
      cells.push_back(acc);
    } else {
      cells.back().first += acc.first;
      cells.back().second += acc.second;
    }
  }
  if (cells.size() < 2) return 1.0;

  double stat = 0.0;
  for (const auto& [ca, cb] : cells) {
    const double row = ca + cb;
    const double ea = row * na / ntot, eb = row * nb / ntot;
    stat += (ca - ea) * (ca - ea) / ea + (cb - eb) * (cb - eb) / eb;
  }
  const boost::math::chi_squared_distribution<double> dist(static_cast<double>(cells.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

ValidationReport validate_assumption11(DataModel model, const DataParams& params, std::size_t reps,
                                       std::uint64_t seed, Exec exec) {
  check_params(model, params);
  require(reps >= 10'000, ErrorCode::InvalidArgument, "validation needs at least 10^4 repetitions");
  ValidationReport rep;
  rep.model = model;
  rep.reps = reps;
  rep.p_values.resize(kValidationTrials);

  for (std::size_t trial = 0; trial < kValidationTrials; ++trial) {
    std::vector<double> algo(reps), direct(reps);
    const std::uint64_t trial_seed = mix64(seed + 0x9e37 * (trial + 1));
    // Two disjoint stream ranges: even blocks for the algorithm, odd for direct draws.
    for_blocks(reps, exec, [&](std::size_t b, std::size_t begin, std::size_t end) {
      Rng ra(trial_seed, 2 * b), rd(trial_seed, 2 * b + 1);
      for (std::size_t i = begin; i < end; ++i) {
        algo[i] = generate_via_assumption1(model, params, ra).q;
        direct[i] = direct_statistic(model, params, rd);
      }
    });
    double p;
    if (model == DataModel::Normal) {
      const double n = static_cast<double>(reps);
      p = ks_p_value(ks_two_sample(algo, direct), n * n / (2.0 * n));
    } else {
      std::vector<int> a(algo.begin(), algo.end()), d(direct.begin(), direct.end());
      p = chi2_two_sample_p(a, d);
    }
    rep.p_values[trial] = p;
    if (p > kValidationAlpha) ++rep.passed_trials;
  }
  rep.passed = rep.passed_trials * 100 >= kValidationTrials * 95;
  return rep;
}

}  // namespace ofi
