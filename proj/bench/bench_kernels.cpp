// Serial reference vs OpenMP kernels: wall time and bit-identity.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "ofi/multivariate.hpp"
#include "ofi/principle1.hpp"
#include "ofi/principle2.hpp"
#include "ofi/restricted.hpp"

namespace {

double seconds(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool report(const char* name, const std::vector<double>& serial, const std::vector<double>& parallel,
            double ts, double tp) {
  const bool same = serial == parallel;
  std::printf("%-28s serial %8.3fs  parallel %8.3fs  speedup %5.2fx  identical %s\n", name, ts, tp,
              ts / tp, same ? "yes" : "NO");
  return same;
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t scale = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1;
  std::printf("threads: %d\n", ofi::max_threads());
  bool ok = true;

  {
    const auto p = ofi::make_p2(ofi::BinomialProblem(10, 1), ofi::Lpd::reciprocal_sqrt_bernoulli());
    const std::size_t n = 1'000'000 * scale;
    std::vector<double> s, q;
    const double ts = seconds([&] { s = ofi::sample_p2(p, n, 7, ofi::Exec::Serial).columns[0]; });
    const double tp = seconds([&] { q = ofi::sample_p2(p, n, 7, ofi::Exec::Parallel).columns[0]; });
    ok &= report("p2 binomial", s, q, ts, tp);
  }
  {
    const auto p = ofi::make_p2(ofi::PoissonProblem(2), ofi::Lpd::uniform());
    const std::size_t n = 500'000 * scale;
    std::vector<double> s, q;
    const double ts = seconds([&] { s = ofi::sample_p2(p, n, 7, ofi::Exec::Serial).columns[0]; });
    const double tp = seconds([&] { q = ofi::sample_p2(p, n, 7, ofi::Exec::Parallel).columns[0]; });
    ok &= report("p2 poisson", s, q, ts, tp);
  }
  {
    const ofi::FiducialDensityP1 f(ofi::bijective_map(ofi::NormalMeanProblem::from_summary(0.0, 1.0, 1)),
                                   ofi::Gpd::positive_favoured(2.0));
    const std::size_t n = 2'000'000 * scale;
    std::vector<double> s, q;
    const double ts = seconds([&] { s = f.sample(n, 7, ofi::Exec::Serial); });
    const double tp = seconds([&] { q = f.sample(n, 7, ofi::Exec::Parallel); });
    ok &= report("p1 step gpd", s, q, ts, tp);
  }
  {
    const ofi::SignalNoiseProblem sn{3, 2, 4.0, ofi::Lpd::uniform()};
    const std::size_t n = 200'000 * scale;
    std::vector<double> s, q;
    const double ts = seconds([&] { s = ofi::signal_noise_joint_sampler(sn, n, 7, ofi::Exec::Serial).columns[0]; });
    const double tp = seconds([&] { q = ofi::signal_noise_joint_sampler(sn, n, 7, ofi::Exec::Parallel).columns[0]; });
    ok &= report("signal-noise", s, q, ts, tp);
  }
  {
    ofi::GibbsConfig cfg;
    cfg.draws = 20'000 * scale;
    cfg.seed = 7;
    std::vector<double> s, q;
    const ofi::MultinomialProblem m({0, 1, 2, 3, 4});
    cfg.exec = ofi::Exec::Serial;
    const double ts = seconds([&] { s = ofi::multinomial_gibbs(m, cfg).pooled("p1"); });
    cfg.exec = ofi::Exec::Parallel;
    const double tp = seconds([&] { q = ofi::multinomial_gibbs(m, cfg).pooled("p1"); });
    ok &= report("gibbs multinomial chains", s, q, ts, tp);
  }
  return ok ? 0 : 1;
}
