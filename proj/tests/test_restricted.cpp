#include <doctest.h>

#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "ofi/restricted.hpp"

using namespace ofi;

namespace {

const std::vector<double> kData = {1.42, -0.37, 2.95, 0.81, 1.66, 3.20, -1.12, 0.58, 2.31, 1.07};

}  // namespace

TEST_CASE("known-variance bounded mean") {
  SUBCASE("distant bound leaves the normal untouched") {
    const auto b = bounded_normal_density({kData, -1e9, 2.0});
    CHECK(b.mass == doctest::Approx(1.0));
    CHECK_FALSE(b.low_mass);
    const NormalMeanProblem p(kData, 2.0);
    const boost::math::normal_distribution<double> ref(p.xbar(), std::sqrt(0.2));
    for (double t : {0.0, 1.0, 1.5, 2.5}) CHECK(b.density.cdf(t) == doctest::Approx(boost::math::cdf(ref, t)).epsilon(1e-12));
  }
  SUBCASE("bound at the mean gives the half-normal") {
    const auto b = bounded_normal_density({{0.0}, 0.0, 1.0});
    CHECK(b.gamma0 == 0.0);
    CHECK(b.mass == doctest::Approx(0.5));
    CHECK(b.density.argument() == Argument::Moderate);
    CHECK(b.density.cdf(1.0) == doctest::Approx(0.682689492137086).epsilon(1e-12));
    const auto x = b.density.sample(50000, 4);
    for (double v : x) CHECK(v > 0.0);
  }
  SUBCASE("ratio to the untruncated density is constant") {
    const auto b = bounded_normal_density({kData, 1.5, 2.0});
    const FiducialDensityP1 full(bijective_map(NormalMeanProblem(kData, 2.0)),
                                 Gpd::neutral(ParamDomain::real_line()));
    for (double t = 1.6; t < 4.0; t += 0.1) {
      CHECK(std::abs(b.density.pdf(t) / full.pdf(t) - 1.0 / b.mass) * b.mass < 1e-10);
    }
    CHECK(b.density.pdf(1.4) == 0.0);
  }
  SUBCASE("low mass is flagged") {
    const auto b = bounded_normal_density({{0.0}, 6.0, 1.0});
    CHECK(b.low_mass);
    CHECK(b.mass < kLowMassWarning);
  }
  CHECK_THROWS(bounded_normal_density({kData, 0.0, std::nullopt}));
}

TEST_CASE("unknown-variance bounded mean matches a truncated t") {
  const BoundedNormalProblem prob{kData, 1.2, std::nullopt};
  GibbsConfig cfg;
  cfg.draws = 15000;
  cfg.seed = 6;
  const GibbsResult r = bounded_normal_gibbs(prob, cfg);
  CHECK(r.converged());
  const auto mu = r.pooled("mu");
  for (double v : mu) CHECK(v > 1.2);
  const auto oracle = bounded_normal_t_oracle(prob);
  CHECK(ks_one_sample(mu, [&](double m) { return oracle->cdf(m); }) < 0.02);
  CHECK(r.chains[0].argument == Argument::Moderate);
}

TEST_CASE("conditioning on the whole space changes nothing") {
  const P2Problem p = make_p2(PoissonProblem(2), Lpd::uniform());
  const auto a = conditioned_p2_sampler(p, ParamDomain::positive(), 20000, 5);
  const auto b = sample_p2(p, 20000, 5);
  CHECK(a.columns == b.columns);
  CHECK(a.argument == Argument::ConditionedStrategy);
}

TEST_CASE("conditioned sampler agrees with the conditioned oracle") {
  const P2Problem p = make_p2(PoissonProblem(2), Lpd::uniform());
  const ParamDomain above = ParamDomain::above(0.75);
  RejectionStats stats;
  RejectionOptions opt;
  opt.stats = &stats;
  const auto s = conditioned_p2_sampler(p, above, 100000, 9, opt);
  const P2GridOracle oracle(p);
  const ConditionedGridCdf cdf(oracle, above);
  CHECK(ks_one_sample(s.columns.front(), cdf) < 0.01);
  CHECK(stats.accepted == 100000);
  CHECK(stats.acceptance() == doctest::Approx(cdf.mass()).epsilon(0.01));
  for (double v : s.columns.front()) CHECK(v > 0.75);
}

TEST_CASE("negligible acceptance depends on the floor") {
  const P2Problem p = make_p2(PoissonProblem(0), Lpd::uniform());
  const ParamDomain far = ParamDomain::above(5.0);
  const ConditionedGridCdf cdf(P2GridOracle(p), far);
  CHECK(cdf.mass() < 1e-2);
  CHECK(cdf.mass() > 1e-6);
  RejectionOptions strict;
  strict.min_acceptance = 1e-2;
  try {
    conditioned_p2_sampler(p, far, 100, 1, strict);
    FAIL("expected NegligibleAcceptance");
  } catch (const NegligibleAcceptance& e) {
    CHECK(e.estimated_mass() < 1e-2);
  }
  CHECK_NOTHROW(conditioned_p2_sampler(p, far, 100, 1));
  RejectionOptions tiny;
  tiny.budget = 1000;
  CHECK_THROWS_AS(conditioned_p2_sampler(p, far, 100, 1, tiny), NegligibleAcceptance);
  CHECK_THROWS_AS(conditioned_p2_sampler(p, far, 100, 1, RejectionOptions{0.0}), Error);
}

TEST_CASE("signal plus background") {
  const SignalNoiseProblem prob{3, 2, 4.0, Lpd::uniform()};
  const auto s = signal_noise_joint_sampler(prob, 100000, 12);
  REQUIRE(s.names == std::vector<std::string>{"tau", "tau0", "tau1"});
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s.columns[2][i] > 0.0);
    CHECK(s.columns[0][i] == doctest::Approx(s.columns[1][i] + s.columns[2][i]).epsilon(1e-12));
  }

  // P(tau <= q) = integral of f0(t0) * (G(q) - G(t0))+ / (1 - G(t0)).
  const P2GridOracle background(make_p2(PoissonProblem(3, 4.0), Lpd::uniform()));
  const P2GridOracle window(make_p2(PoissonProblem(2), Lpd::uniform()));
  auto cdf = [&](double q) {
    const int m = 4000;
    const double top = 6.0, h = top / m;
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
      const double t0 = (i + 0.5) * h;
      if (t0 >= q) break;
      const double g0 = window.cdf(t0);
      acc += background.density(t0) * h * (window.cdf(q) - g0) / (1.0 - g0);
    }
    return acc;
  };
  std::vector<double> tau = s.columns[0];
  std::sort(tau.begin(), tau.end());
  double worst = 0.0;
  for (double prob_level = 0.05; prob_level < 1.0; prob_level += 0.05) {
    const double q = tau[static_cast<std::size_t>(prob_level * tau.size())];
    worst = std::max(worst, std::abs(cdf(q) - prob_level));
  }
  CHECK(worst < 0.01);

  const auto serial = signal_noise_joint_sampler(prob, 5000, 3, Exec::Serial);
  const auto parallel = signal_noise_joint_sampler(prob, 5000, 3, Exec::Parallel);
  CHECK(serial.columns == parallel.columns);
}

TEST_CASE("signal plus background with no background count") {
  const SignalNoiseProblem prob{0, 2, 20.0, Lpd::uniform()};
  const auto s = signal_noise_joint_sampler(prob, 50000, 2);
  const P2GridOracle window(make_p2(PoissonProblem(2), Lpd::uniform()));
  CHECK(ks_one_sample(s.columns[0], [&](double t) { return window.cdf(t); }) < 0.03);
  CHECK_THROWS(signal_noise_joint_sampler({0, 2, 0.0, Lpd::uniform()}, 10, 1));
}

TEST_CASE("reweighting by a step GPD") {
  SUBCASE("neutral target keeps the draws") {
    const P2Problem p = make_p2(BinomialProblem(10, 1), Lpd::uniform());
    const auto a = reweight_p2_density(p, Gpd::neutral(ParamDomain::unit()), 5000, 4);
    CHECK(a.columns == sample_p2(p, 5000, 4).columns);
    CHECK(a.argument == Argument::Weak);
  }
  SUBCASE("binomial favouring small p") {
    const P2Problem p = make_p2(BinomialProblem(10, 1), Lpd::uniform());
    const Gpd g = Gpd::step({0.2}, {2.0, 1.0}, ParamDomain::unit());
    const auto s = reweight_p2_density(p, g, 100000, 8);
    const P2GridOracle oracle(p);
    CHECK(ks_one_sample(s.columns.front(), ReweightedGridCdf(oracle, g)) < 0.01);
  }
  SUBCASE("Poisson favouring large rates") {
    const P2Problem p = make_p2(PoissonProblem(2), Lpd::reciprocal_sqrt());
    const Gpd g = Gpd::step({1.0}, {1.0, 3.0}, ParamDomain::positive());
    const auto s = reweight_p2_density(p, g, 100000, 8);
    const P2GridOracle oracle(p);
    CHECK(ks_one_sample(s.columns.front(), ReweightedGridCdf(oracle, g)) < 0.01);
  }
  SUBCASE("unbounded general GPD") {
    const P2Problem p = make_p2(PoissonProblem(2), Lpd::uniform());
    try {
      reweight_p2_density(p, Gpd::general([](double t) { return t; }, std::nullopt), 10, 1);
      FAIL("expected UnboundedGpd");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnboundedGpd);
    }
    const auto bounded = reweight_p2_density(
        p, Gpd::general([](double t) { return std::exp(-t); }, 1.0, ParamDomain::positive()), 1000, 1);
    CHECK(bounded.size() == 1000);
  }
}
