#include <doctest.h>

#include <cmath>

#include "ofi/diagnostics.hpp"
#include "ofi/oracle.hpp"

using namespace ofi;

namespace {

double mean_of(const UnivariateDensity& d) {
  // Mean as the integral of the quantile function.
  const int m = 200000;
  double acc = 0.0;
  for (int i = 0; i < m; ++i) acc += d.quantile((i + 0.5) / m);
  return acc / m;
}

}  // namespace

TEST_CASE("conjugate posteriors") {
  const auto beta = posterior_density({BinomialProblem(10, 1), Prior::Jeffreys});
  CHECK(mean_of(*beta) == doctest::Approx(1.5 / 11.0).epsilon(1e-4));
  CHECK(beta->describe().find("Beta") != std::string::npos);
  const auto flat = posterior_density({BinomialProblem(10, 1), Prior::Uniform});
  CHECK(mean_of(*flat) == doctest::Approx(2.0 / 12.0).epsilon(1e-4));
  const auto gam = posterior_density({PoissonProblem(2), Prior::Jeffreys});
  CHECK(mean_of(*gam) == doctest::Approx(2.5).epsilon(1e-3));
  const auto rate = posterior_density({PoissonProblem(2, 4.0), Prior::FlatImproper});
  CHECK(mean_of(*rate) == doctest::Approx(3.0 / 4.0).epsilon(1e-3));
  CHECK_THROWS(posterior_density({PoissonProblem(2), Prior::Perks}));
  const auto perks = posterior_density({BinomialProblem(10, 1), Prior::Perks});
  CHECK(perks->cdf(0.1) == doctest::Approx(beta->cdf(0.1)));
}

TEST_CASE("normal posteriors") {
  const std::vector<double> x = {1.0, 2.0, 4.0, 5.0};
  const auto known = posterior_density({NormalMeanProblem(x, 2.0), Prior::FlatImproper});
  CHECK(known->cdf(3.0) == doctest::Approx(0.5));
  CHECK(known->quantile(0.8413447460685429) == doctest::Approx(3.0 + std::sqrt(0.5)).epsilon(1e-10));
  const auto t = posterior_density({NormalMeanMarginal{x}, Prior::FlatImproper});
  // s^2 = 10/3, scale = sqrt(10/12); t_3 upper 2.5% point 3.182446.
  CHECK(t->cdf(3.0 + 3.182446305284263 * std::sqrt(10.0 / 12.0)) == doctest::Approx(0.975).epsilon(1e-9));
  const auto v = posterior_density({NormalVarianceProblem(x, 3.0), Prior::FlatImproper});
  CHECK(mean_of(*v) == doctest::Approx(4 * 2.5 / 2.0).epsilon(1e-3));
}

TEST_CASE("Dirichlet moments and marginals") {
  const Dirichlet d = Dirichlet::posterior(MultinomialProblem({0, 1, 2, 3, 4}), Prior::Jeffreys);
  CHECK(d.alpha() == std::vector<double>{0.5, 1.5, 2.5, 3.5, 4.5});
  CHECK(d.mean(0) == doctest::Approx(0.5 / 12.5));
  CHECK(d.covariance(1, 2) == doctest::Approx(-1.5 * 2.5 / (12.5 * 12.5 * 13.5)));
  CHECK(d.covariance(3, 3) == doctest::Approx(3.5 * 9.0 / (12.5 * 12.5 * 13.5)));
  const auto m = d.marginal(4);
  CHECK(mean_of(*m) == doctest::Approx(4.5 / 12.5).epsilon(1e-4));
  const auto uni = Dirichlet::posterior(MultinomialProblem({0, 1, 2, 3, 4}), Prior::Uniform);
  CHECK(uni.alpha().front() == 1.0);
  const auto perks = Dirichlet::posterior(MultinomialProblem({0, 1, 2, 3, 4}), Prior::Perks);
  CHECK(perks.alpha().front() == doctest::Approx(0.2));

  Rng rng(3);
  std::vector<double> first, second;
  for (int i = 0; i < 40000; ++i) {
    const auto s = d.sample(rng);
    double sum = 0.0;
    for (double v : s) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    first.push_back(s[1]);
    second.push_back(s[2]);
  }
  CHECK(ks_one_sample(first, [&](double v) { return d.marginal(1)->cdf(v); }) < 0.01);
  CHECK(covariance(first, second) == doctest::Approx(d.covariance(1, 2)).epsilon(0.1));
  const auto joint = posterior_density({MultinomialMarginal{MultinomialProblem({0, 1, 2, 3, 4}), 1},
                                        Prior::Jeffreys});
  CHECK(joint->cdf(0.1) == doctest::Approx(d.marginal(1)->cdf(0.1)));
}

TEST_CASE("truncation") {
  const auto t = truncated_density(normal_density(0.0, 1.0), Interval::open(0.0, kInf));
  CHECK(t->quantile(0.5) == doctest::Approx(0.6744897501960817).epsilon(1e-10));
  CHECK(t->cdf(-1.0) == 0.0);
  CHECK(t->pdf(0.5) == doctest::Approx(2.0 * normal_density(0.0, 1.0)->pdf(0.5)));
  const auto far = truncated_density(normal_density(0.0, 1.0), Interval::open(9.0, kInf));
  CHECK(far->cdf(9.5) > 0.9);
  CHECK(far->cdf(9.5) < 1.0);
  const auto base = beta_density(2.0, 3.0);
  CHECK(truncated_density(base, Interval::closed(0.0, 1.0)) == base);
  CHECK_THROWS(truncated_density(beta_density(2.0, 3.0), Interval::open(2.0, 3.0)));
}

TEST_CASE("quantile and CDF round trip") {
  const std::vector<DensityPtr> ds = {normal_density(1.0, 2.0),
                                      beta_density(1.5, 9.5),
                                      gamma_density(2.5, 1.0),
                                      student_t_density(4.0, 1.0, 0.5),
                                      scaled_inv_chi2_density(10.0, 2.0),
                                      truncated_density(student_t_density(9.0, 1.0, 0.5),
                                                        Interval::open(1.2, kInf))};
  for (const auto& d : ds) {
    INFO(d->describe());
    for (double u : {1e-6, 0.01, 0.3, 0.5, 0.9, 0.999}) {
      CHECK(std::abs(d->cdf(d->quantile(u)) - u) < 1e-10);
      CHECK(std::abs(d->ccdf(d->cquantile(u)) - u) < 1e-10 * std::max(1.0, u));
    }
    const auto x = d->sample(50000, 7);
    CHECK(ks_one_sample(x, [&](double v) { return d->cdf(v); }) < 0.01);
  }
  CHECK(std::string(to_string(Prior::Jeffreys)) == "jeffreys");
  CHECK(prior_concentration(Prior::Perks, 4) == 0.25);
}
