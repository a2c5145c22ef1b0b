#include <doctest.h>

#include <cmath>

#include "ofi/datagen.hpp"
#include "ofi/diagnostics.hpp"
#include "ofi/models.hpp"

using namespace ofi;

TEST_CASE("primary variable is drawn in one call") {
  Rng rng(4);
  for (DataModel m : {DataModel::Binomial, DataModel::Poisson, DataModel::Normal}) {
    const GeneratedData g = generate_via_assumption1(m, DataParams{}, rng);
    INFO(to_string(m));
    CHECK(g.calls[1] == 1);
    CHECK(g.calls[0] == (m == DataModel::Normal ? 10u : 0u));
  }
}

TEST_CASE("generated data reproduce the statistic") {
  Rng rng(8);
  DataParams p;
  const GeneratedData b = generate_via_assumption1(DataModel::Binomial, p, rng);
  REQUIRE(b.x.size() == 1);
  CHECK(b.x[0] == b.q);
  CHECK(b.q >= 0.0);
  CHECK(b.q <= 10.0);
  const GeneratedData n = generate_via_assumption1(DataModel::Normal, p, rng);
  REQUIRE(n.x.size() == 10);
  CHECK(mean(n.x) == doctest::Approx(n.q).epsilon(1e-12));
}

TEST_CASE("normal data have the model moments") {
  DataParams p;
  p.n = 5;
  Rng rng(9);
  std::vector<double> first, xbar;
  for (int i = 0; i < 40000; ++i) {
    const GeneratedData g = generate_via_assumption1(DataModel::Normal, p, rng);
    first.push_back(g.x[0]);
    xbar.push_back(g.q);
  }
  CHECK(mean(first) == doctest::Approx(p.mu).epsilon(0.03));
  CHECK(variance(first) == doctest::Approx(p.sigma * p.sigma).epsilon(0.03));
  CHECK(variance(xbar) == doctest::Approx(p.sigma * p.sigma / p.n).epsilon(0.03));
}

TEST_CASE("validation against direct sampling") {
  for (DataModel m : {DataModel::Binomial, DataModel::Poisson, DataModel::Normal}) {
    const ValidationReport r = validate_assumption11(m, DataParams{}, 10000, 77);
    INFO(to_string(m));
    CHECK(r.passed);
    CHECK(r.p_values.size() == kValidationTrials);
    CHECK(r.passed_trials >= 19);
  }
  CHECK_THROWS(validate_assumption11(DataModel::Poisson, DataParams{}, 100, 1));
}

TEST_CASE("chi-squared homogeneity") {
  auto sample = [](std::vector<std::pair<int, int>> value_count) {
    std::vector<int> out;
    for (auto [v, c] : value_count) out.insert(out.end(), c, v);
    return out;
  };
  const auto a = sample({{0, 10}, {1, 20}, {2, 30}, {3, 40}});
  CHECK(chi2_two_sample_p(a, a) == doctest::Approx(1.0));
  CHECK(chi2_two_sample_p(sample({{0, 100}}), sample({{1, 100}})) < 1e-10);
  // 2x2 table, chi2 = 2.0202 on one df.
  const double p = chi2_two_sample_p(sample({{0, 50}, {1, 50}}), sample({{0, 60}, {1, 40}}));
  CHECK(p == doctest::Approx(0.1552).epsilon(1e-3));
  // Sparse values are merged into their neighbours.
  CHECK(chi2_two_sample_p(sample({{0, 50}, {1, 50}, {9, 1}}), sample({{0, 50}, {1, 50}})) > 0.5);
}

TEST_CASE("model names") {
  CHECK(parse_data_model("poisson") == DataModel::Poisson);
  CHECK(std::string(to_string(DataModel::Normal)) == "normal");
  try {
    parse_data_model("gamma");
    FAIL("expected UnsupportedModel");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedModel);
  }
}
