#include <doctest.h>

#include <cmath>

#include <boost/math/special_functions/expint.hpp>

#include "ofi/diagnostics.hpp"
#include "ofi/principle2.hpp"

using namespace ofi;

TEST_CASE("sampler agrees with the grid oracle") {
  struct Case {
    P2Model model;
    Lpd lpd;
  };
  const std::vector<Case> cases = {{BinomialProblem(10, 1), Lpd::uniform()},
                                   {BinomialProblem(10, 1), Lpd::reciprocal_sqrt_bernoulli()},
                                   {BinomialProblem(5, 5), Lpd::uniform()},
                                   {PoissonProblem(2), Lpd::reciprocal_sqrt()},
                                   {PoissonProblem(0, 3.0), Lpd::uniform()}};
  for (const auto& c : cases) {
    const P2Problem p = make_p2(c.model, c.lpd);
    const SampleBatch s = sample_p2(p, 100000, 17);
    const P2GridOracle oracle(p);
    INFO(describe(c.model) << " " << c.lpd.label());
    CHECK(ks_one_sample(s.columns.front(), [&](double t) { return oracle.cdf(t); }) < 0.01);
  }
}

TEST_CASE("grid oracle matches a closed form for a zero count") {
  // x = 0, uniform LPD: theta ~ U(0, L) with L ~ Exp(1), so
  // P(theta > t) = exp(-t) - t E1(t).
  const P2GridOracle oracle(make_p2(PoissonProblem(0), Lpd::uniform()), 4000);
  for (double t : {0.05, 0.5, 1.0, 2.0, 5.0}) {
    const double tail = std::exp(-t) - t * boost::math::expint(1, t);
    CHECK(1.0 - oracle.cdf(t) == doctest::Approx(tail).epsilon(2e-4));
  }
  // Density is E1(t).
  for (double t : {0.5, 1.0, 3.0}) CHECK(oracle.density(t) == doctest::Approx(boost::math::expint(1, t)).epsilon(2e-3));
}

TEST_CASE("grid oracle is a proper distribution") {
  const P2GridOracle oracle(make_p2(BinomialProblem(10, 3), Lpd::uniform()), 2000);
  CHECK(oracle.resolution() == 2000);
  CHECK(oracle.cdf(0.0) == 0.0);
  CHECK(oracle.cdf(1.0) == 1.0);
  double prev = 0.0, integral = 0.0;
  const int n = 4000;
  for (int i = 1; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    const double c = oracle.cdf(t);
    CHECK(c >= prev);
    prev = c;
    integral += oracle.density((i - 0.5) / n) / n;
  }
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(oracle.cdf(0.3) == doctest::Approx([&] {
          double acc = 0.0;
          for (int i = 0; i < 3000; ++i) acc += oracle.density((i + 0.5) * 0.3 / 3000) * 0.3 / 3000;
          return acc;
        }()).epsilon(1e-3));
  CHECK_THROWS(P2GridOracle(make_p2(BinomialProblem(10, 3), Lpd::uniform()), 999));
}

TEST_CASE("uniform LPD mean when x = n") {
  // Sets are [u^(1/n), 1] with u uniform, so E = (1 + n/(n+1)) / 2.
  const P2Problem p = make_p2(BinomialProblem(4, 4), Lpd::uniform());
  const auto x = sample_p2(p, 200000, 2).columns.front();
  CHECK(mean(x) == doctest::Approx((1.0 + 4.0 / 5.0) / 2.0).epsilon(2e-3));
}

TEST_CASE("constant-GPD conditions") {
  P2Problem spill = make_p2(BinomialProblem(10, 1), Lpd::uniform());
  spill.gpd = Gpd::neutral(ParamDomain(Interval::open(0.0, 0.5)));
  try {
    check_conditions(spill);
    FAIL("expected Condition2Violated");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Condition2Violated);
  }
  P2Problem tilted = make_p2(PoissonProblem(2), Lpd::uniform());
  tilted.gpd = Gpd::step({1.0}, {1.0, 2.0}, ParamDomain::positive());
  CHECK_THROWS_AS(sample_p2(tilted, 10, 1), Error);
  P2Problem scaled = make_p2(PoissonProblem(2), Lpd::uniform());
  scaled.gpd = Gpd::neutral(ParamDomain::positive(), 4.0);
  CHECK_NOTHROW(check_conditions(scaled));
}

TEST_CASE("each draw uses gamma then theta") {
  const P2Problem p = make_p2(PoissonProblem(3), Lpd::uniform());
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto before = rng.calls();
    const double t = draw_p2(p, rng);
    CHECK(rng.calls() - before == 2);
    CHECK(t > 0.0);
  }
}

TEST_CASE("exposure rescales the rate") {
  const auto a = sample_p2(make_p2(PoissonProblem(2, 1.0), Lpd::uniform()), 5000, 3).columns.front();
  const auto b = sample_p2(make_p2(PoissonProblem(2, 4.0), Lpd::uniform()), 5000, 3).columns.front();
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == doctest::Approx(a[i] / 4.0).epsilon(1e-12));
}

TEST_CASE("serial and parallel paths are bit-identical") {
  const P2Problem p = make_p2(BinomialProblem(10, 1), Lpd::reciprocal_sqrt_bernoulli());
  const auto s = sample_p2(p, 3 * kBlockSize + 17, 99, Exec::Serial);
  const auto q = sample_p2(p, 3 * kBlockSize + 17, 99, Exec::Parallel);
  CHECK(s.columns == q.columns);
  CHECK(s.names.front() == "p");
  CHECK(s.argument == Argument::Strong);
  CHECK(sample_p2(make_p2(PoissonProblem(1), Lpd::uniform()), 10, 1).names.front() == "tau");
}

TEST_CASE("LPD sensitivity table") {
  const KsTable t = lpd_sensitivity_report(BinomialProblem(10, 1),
                                           {Lpd::uniform(), Lpd::reciprocal_sqrt_bernoulli()}, 50000, 4);
  REQUIRE(t.distance.size() == 2);
  CHECK(t.distance[0][0] == 0.0);
  CHECK(t.distance[0][1] == t.distance[1][0]);
  CHECK(t.distance[0][1] > 0.0);
  CHECK(t.distance[0][1] < 0.05);
  CHECK(t.labels[1] == "jeffreys-shape");
  CHECK_THROWS(lpd_sensitivity_report(PoissonProblem(1), {Lpd::uniform()}, 10, 1));
}
