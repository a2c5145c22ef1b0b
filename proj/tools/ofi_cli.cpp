// ofi: command-line front end for the organic fiducial library.
//
// Every sampling subcommand writes into --out:
//   <cmd>_samples.csv            one column per parameter
//   <cmd>_summary.json           quantiles, mean, MCSE, R-hat, seed, tags
//   <cmd>_hist_<param>.csv       density histogram (edges repeated in the JSON)
//   <cmd>_overlay_<curve>.csv    512-point (theta, density) reference curves

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ofi/datagen.hpp"
#include "ofi/diagnostics.hpp"
#include "ofi/multivariate.hpp"
#include "ofi/oracle.hpp"
#include "ofi/principle1.hpp"
#include "ofi/principle2.hpp"
#include "ofi/restricted.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr std::size_t kOverlayPoints = 512;
constexpr double kQuantileLevels[] = {0.01, 0.025, 0.05, 0.25, 0.5, 0.75, 0.95, 0.975, 0.99};

struct Common {
  std::uint64_t seed = 1;
  std::string out = ".";
  int threads = 0;
  std::size_t bins = 100;
};

struct Curve {
  std::string name;
  std::function<double(double)> density;
};

class Payload {
 public:
  Payload(const Common& c, std::string cmd) : dir_(c.out), cmd_(std::move(cmd)), bins_(c.bins) {
    fs::create_directories(dir_);
    summary_["tool"] = "ofi";
    summary_["version"] = OFI_VERSION;
    summary_["subcommand"] = cmd_;
    summary_["seed"] = c.seed;
    summary_["threads"] = ofi::max_threads();
  }

  json& summary() { return summary_; }

  void samples(const std::vector<std::string>& names, const std::vector<const std::vector<double>*>& cols,
               const std::vector<int>* chain = nullptr) {
    const fs::path path = dir_ / (cmd_ + "_samples.csv");
    std::ofstream os(path);
    os.precision(std::numeric_limits<double>::max_digits10);
    if (chain) os << "chain,";
    for (std::size_t j = 0; j < names.size(); ++j) os << (j ? "," : "") << names[j];
    os << '\n';
    const std::size_t n = cols.front()->size();
    for (std::size_t i = 0; i < n; ++i) {
      if (chain) os << (*chain)[i] << ',';
      for (std::size_t j = 0; j < cols.size(); ++j) os << (j ? "," : "") << (*cols[j])[i];
      os << '\n';
    }
    summary_["files"]["samples"] = path.filename().string();
  }

  /// Summary statistics and histogram for one parameter; returns the histogram range.
  std::pair<double, double> parameter(const std::string& name, const std::vector<double>& x,
                                      const ofi::RHat* rhat = nullptr,
                                      std::optional<std::pair<double, double>> range = std::nullopt) {
    json p;
    p["mean"] = ofi::mean(x);
    p["mcse"] = ofi::mcse_mean(x);
    json q;
    for (double level : kQuantileLevels) {
      std::ostringstream key;
      key << level * 100.0;
      q[key.str()] = ofi::quantile(x, level);
    }
    p["quantiles"] = q;
    if (rhat) {
      p["rhat"] = rhat->degenerate ? json(nullptr) : json(rhat->value);
      p["rhat_degenerate"] = rhat->degenerate;
    }

    const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
    const auto r = range.value_or(std::make_pair(*mn, *mx));
    const double lo = r.first, hi = r.second > r.first ? r.second : r.first + 1.0;
    const ofi::Histogram h = ofi::hist_bins(x, bins_, lo, hi);
    const fs::path path = dir_ / (cmd_ + "_hist_" + name + ".csv");
    std::ofstream os(path);
    os.precision(std::numeric_limits<double>::max_digits10);
    os << "left,right,height\n";
    for (std::size_t i = 0; i < h.heights.size(); ++i)
      os << h.edges[i] << ',' << h.edges[i + 1] << ',' << h.heights[i] << '\n';
    p["histogram"] = {{"file", path.filename().string()}, {"bins", bins_}, {"edges", h.edges},
                      {"counted", h.counted}};
    summary_["parameters"][name] = p;
    return {lo, hi};
  }

  void overlay(const std::string& param, const Curve& curve, double lo, double hi) {
    const std::string stem = cmd_ + "_overlay_" + param + "_" + curve.name;
    const fs::path path = dir_ / (stem + ".csv");
    std::ofstream os(path);
    os.precision(std::numeric_limits<double>::max_digits10);
    os << "theta,density\n";
    for (std::size_t i = 0; i < kOverlayPoints; ++i) {
      const double t = lo + (hi - lo) * static_cast<double>(i) / (kOverlayPoints - 1);
      os << t << ',' << curve.density(t) << '\n';
    }
    summary_["overlays"][param][curve.name] = path.filename().string();
  }

  void finish() {
    const fs::path path = dir_ / (cmd_ + "_summary.json");
    std::ofstream(path) << summary_.dump(2) << '\n';
    std::cout << summary_.dump(2) << '\n';
  }

 private:
  fs::path dir_;
  std::string cmd_;
  std::size_t bins_;
  json summary_;
};

Curve density_curve(const std::string& name, const ofi::DensityPtr& d) {
  return {name, [d](double t) { return d->pdf(t); }};
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  sub->add_option("--out", c.out, "Output directory")->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker threads (0 = OpenMP default)");
  sub->add_option("--bins", c.bins, "Histogram bins")->capture_default_str()->check(CLI::PositiveNumber);
}

std::vector<double> read_column(const std::string& file) {
  std::ifstream is(file);
  ofi::require(is.good(), ofi::ErrorCode::InvalidArgument, "cannot open data file " + file);
  std::vector<double> out;
  std::string line;
  while (std::getline(is, line)) {
    const auto cut = line.find(',');
    if (cut != std::string::npos) line.resize(cut);
    if (line.empty()) continue;
    try {
      std::size_t used = 0;
      const double v = std::stod(line, &used);
      out.push_back(v);
    } catch (const std::exception&) {
      ofi::require(out.empty(), ofi::ErrorCode::InvalidArgument, "non-numeric value in " + file);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

int run_p2(const Common& c, const std::string& cmd, ofi::P2Model model, const std::string& lpd_name,
           std::size_t draws) {
  const ofi::P2Problem problem = ofi::make_p2(model, ofi::parse_lpd(lpd_name));
  const ofi::SampleBatch batch = ofi::sample_p2(problem, draws, c.seed);
  const auto& x = batch.columns.front();
  const std::string name = batch.names.front();

  Payload pay(c, cmd);
  pay.summary()["model"] = ofi::describe(model);
  pay.summary()["lpd"] = lpd_name;
  pay.summary()["draws"] = draws;
  pay.summary()["argument_used"] = ofi::to_string(batch.argument);
  pay.samples({name}, {&x});
  const auto [lo, hi] = pay.parameter(name, x);

  const auto oracle = std::make_shared<ofi::P2GridOracle>(problem);
  pay.overlay(name, {"fiducial_grid", [oracle](double t) { return oracle->density(t); }}, lo, hi);
  if (const auto* b = std::get_if<ofi::BinomialProblem>(&model)) {
    pay.overlay(name, density_curve("posterior_uniform", ofi::posterior_density({*b, ofi::Prior::Uniform})), lo, hi);
    pay.overlay(name, density_curve("posterior_jeffreys", ofi::posterior_density({*b, ofi::Prior::Jeffreys})), lo, hi);
  } else {
    const auto& p = std::get<ofi::PoissonProblem>(model);
    pay.overlay(name, density_curve("posterior_flat", ofi::posterior_density({p, ofi::Prior::FlatImproper})), lo, hi);
    pay.overlay(name, density_curve("posterior_jeffreys", ofi::posterior_density({p, ofi::Prior::Jeffreys})), lo, hi);
  }
  pay.finish();
  return kExitOk;
}

std::vector<int> parse_counts(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      ofi::require(used == item.size(), ofi::ErrorCode::InvalidArgument, "bad count '" + item + "'");
    } catch (const std::logic_error&) {
      ofi::fail(ofi::ErrorCode::InvalidArgument, "bad count '" + item + "'");
    }
  }
  return out;
}

int run_multinomial(const Common& c, const std::string& counts_text, std::size_t chains,
                    std::size_t burn_in, std::size_t draws, const std::string& scan,
                    const std::string& lpd_name) {
  const ofi::MultinomialProblem problem(parse_counts(counts_text));
  ofi::GibbsConfig cfg;
  cfg.chains = chains;
  cfg.burn_in = burn_in;
  cfg.draws = draws;
  cfg.seed = c.seed;
  cfg.scan = scan == "random" ? ofi::Scan::RandomPermutationPerCycle : ofi::Scan::FixedAscending;
  const ofi::GibbsResult res = ofi::multinomial_gibbs(problem, cfg, ofi::parse_lpd(lpd_name));
  const ofi::ReparamGuard guard = ofi::multinomial_reparam_guard(problem.counts);

  Payload pay(c, "multinomial");
  pay.summary()["counts"] = problem.counts;
  pay.summary()["reparam_order"] = guard.order;
  pay.summary()["lpd"] = lpd_name;
  pay.summary()["chains"] = chains;
  pay.summary()["burn_in"] = burn_in;
  pay.summary()["draws_per_chain"] = draws;
  pay.summary()["scan"] = ofi::to_string(cfg.scan);
  pay.summary()["argument_used"] = ofi::to_string(res.chains.front().argument);
  pay.summary()["converged"] = res.converged();

  std::vector<std::vector<double>> pooled;
  std::vector<int> chain_ids;
  for (std::size_t ch = 0; ch < res.chains.size(); ++ch)
    chain_ids.insert(chain_ids.end(), res.chains[ch].size(), static_cast<int>(ch));
  for (const auto& name : res.names) pooled.push_back(res.pooled(name));
  std::vector<const std::vector<double>*> cols;
  for (const auto& v : pooled) cols.push_back(&v);
  pay.samples(res.names, cols, &chain_ids);

  const std::size_t cells = problem.counts.size();
  for (std::size_t i = 0; i < cells; ++i) {
    const auto [lo, hi] = pay.parameter(res.names[i], pooled[i], &res.rhat[i], std::make_pair(0.0, 1.0));
    for (ofi::Prior prior : {ofi::Prior::Jeffreys, ofi::Prior::Uniform, ofi::Prior::Perks}) {
      const ofi::Dirichlet d = ofi::Dirichlet::posterior(problem, prior);
      pay.overlay(res.names[i], density_curve(std::string("posterior_") + ofi::to_string(prior), d.marginal(i)),
                  lo, hi);
    }
  }
  pay.finish();
  return kExitOk;
}

int run_normal(const Common& c, const std::string& file, std::optional<double> sigma2,
               std::optional<double> mu0, const std::string& gpd_text, std::size_t chains,
               std::size_t burn_in, std::size_t draws) {
  const std::vector<double> data = read_column(file);
  ofi::require(data.size() >= 2, ofi::ErrorCode::InvalidArgument, "normal needs at least two observations");
  Payload pay(c, "normal");
  pay.summary()["n"] = data.size();

  if (sigma2) {
    const ofi::NormalMeanProblem base(data, *sigma2);
    ofi::require(!(mu0 && !gpd_text.empty()), ofi::ErrorCode::InvalidArgument,
                 "--mu0 and --gpd cannot be combined");
    ofi::Gpd gpd = ofi::Gpd::neutral(ofi::ParamDomain::real_line());
    std::vector<std::string> warnings;
    if (mu0) {
      const ofi::BoundedNormalDensity b = ofi::bounded_normal_density({data, *mu0, *sigma2});
      gpd = b.density.gpd();
      pay.summary()["gamma0"] = b.gamma0;
      pay.summary()["truncation_mass"] = b.mass;
      if (b.low_mass) warnings.push_back("truncation mass below 1e-6");
    } else if (!gpd_text.empty()) {
      gpd = ofi::parse_gpd(gpd_text);
    }
    const ofi::FiducialDensityP1 fid(ofi::bijective_map(base), gpd);
    const ofi::SampleBatch batch = fid.sample_batch(draws, c.seed);
    pay.summary()["sigma2"] = *sigma2;
    pay.summary()["xbar"] = base.xbar();
    pay.summary()["draws"] = draws;
    pay.summary()["argument_used"] = ofi::to_string(fid.argument());
    pay.summary()["warnings"] = warnings;
    if (mu0) pay.summary()["mu0"] = *mu0;
    if (!gpd_text.empty()) pay.summary()["gpd"] = gpd_text;
    const auto& x = batch.columns.front();
    pay.samples({"mu"}, {&x});
    const auto [lo, hi] = pay.parameter("mu", x);
    pay.overlay("mu", {"fiducial", [&fid](double t) { return fid.pdf(t); }}, lo, hi);
    pay.overlay("mu", density_curve("normal_untruncated", ofi::normal_density(base.xbar(), std::sqrt(*sigma2 / base.n()))),
                lo, hi);
    pay.finish();
    return kExitOk;
  }

  ofi::require(gpd_text.empty(), ofi::ErrorCode::UnsupportedModel,
               "--gpd needs a known variance (--sigma2)");
  ofi::GibbsConfig cfg;
  cfg.chains = chains;
  cfg.burn_in = burn_in;
  cfg.draws = draws;
  cfg.seed = c.seed;
  const ofi::GibbsResult res = mu0 ? ofi::bounded_normal_gibbs({data, *mu0, std::nullopt}, cfg)
                                   : ofi::gibbs_run(ofi::normal_conditionals(data), cfg);
  pay.summary()["chains"] = chains;
  pay.summary()["burn_in"] = burn_in;
  pay.summary()["draws_per_chain"] = draws;
  pay.summary()["argument_used"] = ofi::to_string(res.chains.front().argument);
  pay.summary()["converged"] = res.converged();
  if (mu0) pay.summary()["mu0"] = *mu0;
  if (!mu0) {
    const ofi::JointCheckReport jc = ofi::analytic_joint_check_normal(data);
    pay.summary()["joint_check"] = {{"mu_variation", jc.mu_variation},
                                    {"sigma2_variation", jc.sigma2_variation},
                                    {"tolerance", jc.tolerance},
                                    {"passed", jc.passed}};
  }

  const std::vector<double> mu = res.pooled("mu"), s2 = res.pooled("sigma2");
  std::vector<int> chain_ids;
  for (std::size_t ch = 0; ch < res.chains.size(); ++ch)
    chain_ids.insert(chain_ids.end(), res.chains[ch].size(), static_cast<int>(ch));
  pay.samples({"mu", "sigma2"}, {&mu, &s2}, &chain_ids);

  const auto [mlo, mhi] = pay.parameter("mu", mu, &res.rhat[0]);
  ofi::DensityPtr t = ofi::posterior_density({ofi::NormalMeanMarginal{data}, ofi::Prior::FlatImproper});
  if (mu0) t = ofi::truncated_density(t, ofi::Interval::open(*mu0, ofi::kInf));
  pay.overlay("mu", density_curve(mu0 ? "t_truncated" : "t", t), mlo, mhi);
  const auto [slo, shi] = pay.parameter("sigma2", s2, &res.rhat[1],
                                        std::make_pair(0.0, ofi::quantile(s2, 0.995)));
  if (!mu0) {
    const double n = static_cast<double>(data.size());
    const double s2hat = ofi::variance(data);
    pay.overlay("sigma2", density_curve("scaled_inv_chi2", ofi::scaled_inv_chi2_density(n - 1.0, s2hat)), slo, shi);
  }
  pay.finish();
  return kExitOk;
}

int run_signal_noise(const Common& c, double alpha, int x0, int x, const std::string& lpd_name,
                     std::size_t draws) {
  const ofi::SignalNoiseProblem problem{x0, x, alpha, ofi::parse_lpd(lpd_name)};
  const ofi::SampleBatch batch = ofi::signal_noise_joint_sampler(problem, draws, c.seed);

  Payload pay(c, "signal-noise");
  pay.summary()["alpha"] = alpha;
  pay.summary()["x0"] = x0;
  pay.summary()["x"] = x;
  pay.summary()["lpd"] = lpd_name;
  pay.summary()["draws"] = draws;
  pay.summary()["argument_used"] = ofi::to_string(batch.argument);
  const auto& tau = batch.column("tau");
  const auto& tau0 = batch.column("tau0");
  const auto& tau1 = batch.column("tau1");
  pay.samples(batch.names, {&tau, &tau0, &tau1});

  const double hi_tau = ofi::quantile(tau, 0.999);
  const auto [lo, hi] = pay.parameter("tau", tau, nullptr, std::make_pair(0.0, hi_tau));
  pay.parameter("tau0", tau0, nullptr, std::make_pair(0.0, ofi::quantile(tau0, 0.999)));
  pay.parameter("tau1", tau1, nullptr, std::make_pair(0.0, ofi::quantile(tau1, 0.999)));

  const double t0_hat = static_cast<double>(x0) / alpha;
  const ofi::PoissonProblem window(x, 1.0);
  const auto jeffreys = ofi::posterior_density({window, ofi::Prior::Jeffreys});
  pay.overlay("tau", density_curve("posterior_jeffreys", jeffreys), lo, hi);
  if (t0_hat > 0.0) {
    pay.overlay("tau", density_curve("posterior_jeffreys_above_mle",
                                     ofi::truncated_density(jeffreys, ofi::Interval::open(t0_hat, ofi::kInf))),
                lo, hi);
    const auto oracle = std::make_shared<ofi::P2GridOracle>(ofi::make_p2(window, problem.lpd));
    const double mass = 1.0 - oracle->cdf(t0_hat);
    pay.overlay("tau", {"fiducial_fixed_tau0", [oracle, t0_hat, mass](double t) {
                          return t > t0_hat ? oracle->density(t) / mass : 0.0;
                        }},
                lo, hi);
    pay.summary()["tau0_mle"] = t0_hat;
  }
  pay.finish();
  return kExitOk;
}

int run_datagen(const Common& c, const std::string& model_name, std::size_t reps, const ofi::DataParams& params) {
  const ofi::DataModel model = ofi::parse_data_model(model_name);
  const ofi::ValidationReport rep = ofi::validate_assumption11(model, params, reps, c.seed);
  Payload pay(c, "datagen-check");
  pay.summary()["model"] = model_name;
  pay.summary()["reps"] = reps;
  pay.summary()["p_values"] = rep.p_values;
  pay.summary()["passed_trials"] = rep.passed_trials;
  pay.summary()["trials"] = ofi::kValidationTrials;
  pay.summary()["passed"] = rep.passed;
  pay.finish();
  return rep.passed ? kExitOk : kExitNumeric;
}

int run_oracle_check(const Common& c, std::size_t draws, std::size_t resolution) {
  Payload pay(c, "oracle-check");
  bool all = true;
  json cases = json::array();
  const std::vector<std::pair<ofi::P2Model, std::string>> suite = {
      {ofi::BinomialProblem(10, 1), "uniform"},
      {ofi::BinomialProblem(10, 1), "jeffreys-shape"},
      {ofi::PoissonProblem(2), "uniform"},
      {ofi::PoissonProblem(2), "reciprocal-sqrt"},
  };
  for (const auto& [model, lpd] : suite) {
    const ofi::P2Problem p = ofi::make_p2(model, ofi::parse_lpd(lpd));
    const auto sample = ofi::sample_p2(p, draws, c.seed);
    const ofi::P2GridOracle oracle(p, resolution);
    const double ks = ofi::ks_one_sample(sample.columns.front(), [&](double t) { return oracle.cdf(t); });
    const bool ok = ks < 0.01;
    all = all && ok;
    cases.push_back({{"model", ofi::describe(model)}, {"lpd", lpd}, {"ks", ks}, {"passed", ok}});
  }
  pay.summary()["draws"] = draws;
  pay.summary()["gamma_resolution"] = resolution;
  pay.summary()["cases"] = cases;
  pay.summary()["passed"] = all;
  pay.finish();
  return all ? kExitOk : kExitNumeric;
}

int report_error(ofi::ErrorCode code, const std::string& what) {
  const bool validation = ofi::error_class(code) == ofi::ErrorClass::Validation;
  json err{{"error", ofi::to_string(code)}, {"class", validation ? "validation" : "numeric"},
           {"message", what}};
  std::cerr << err.dump() << '\n';
  return validation ? kExitValidation : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Organic fiducial inference: samplers, oracles and figure payloads"};
  app.set_version_flag("--version", std::string(OFI_VERSION));
  app.require_subcommand(1);

  Common c;
  std::size_t draws = 100'000;
  std::string lpd = "uniform";

  auto* bin = app.add_subcommand("binomial", "Binomial proportion");
  int bn = 10, bx = 1;
  bin->add_option("--n", bn, "Trials")->required();
  bin->add_option("--x", bx, "Successes")->required();
  bin->add_option("--lpd", lpd, "uniform | jeffreys-shape")->capture_default_str();
  bin->add_option("--draws", draws, "Draws")->capture_default_str();
  add_common(bin, c);

  auto* poi = app.add_subcommand("poisson", "Poisson rate");
  int px = 2;
  double exposure = 1.0;
  poi->add_option("--x", px, "Count")->required();
  poi->add_option("--exposure", exposure, "Exposure multiplying the rate")->capture_default_str();
  poi->add_option("--lpd", lpd, "uniform | reciprocal-sqrt")->capture_default_str();
  poi->add_option("--draws", draws, "Draws")->capture_default_str();
  add_common(poi, c);

  auto* mul = app.add_subcommand("multinomial", "Multinomial proportions (Gibbs over full conditionals)");
  std::string counts = "0,1,2,3,4", scan = "fixed";
  std::size_t chains = 4, burn_in = 500, chain_draws = 50'000;
  mul->add_option("--counts", counts, "Comma-separated cell counts")->capture_default_str();
  mul->add_option("--chains", chains, "Chains")->capture_default_str();
  mul->add_option("--burnin", burn_in, "Burn-in cycles per chain")->capture_default_str();
  mul->add_option("--draws", chain_draws, "Kept draws per chain")->capture_default_str();
  mul->add_option("--scan", scan, "fixed | random")->capture_default_str()->check(CLI::IsMember({"fixed", "random"}));
  mul->add_option("--lpd", lpd, "LPD of each binomial conditional")->capture_default_str();
  add_common(mul, c);

  auto* nor = app.add_subcommand(
      "normal",
      "Normal mean. With --sigma2 the variance is known; otherwise (mu, sigma2) are\n"
      "sampled jointly by Gibbs.\n"
      "GPD grammar for --gpd:\n"
      "  neutral\n"
      "  step:h0@(-inf,b1],h1@(b1,b2],...,hm@(bm,inf)\n"
      "  e.g. step:1@(-inf,0],2@(0,inf)  (weight 2 on mu > 0)");
  std::string data_file, gpd_text;
  std::optional<double> sigma2, mu0;
  std::size_t normal_draws = 25'000;
  nor->add_option("--data", data_file, "CSV file, first column holds the observations")->required();
  nor->add_option("--sigma2", sigma2, "Known variance");
  nor->add_option("--mu0", mu0, "Lower bound on the mean");
  nor->add_option("--gpd", gpd_text, "Step GPD over the mean (needs --sigma2)");
  nor->add_option("--chains", chains, "Chains (variance unknown)")->capture_default_str();
  nor->add_option("--burnin", burn_in, "Burn-in (variance unknown)")->capture_default_str();
  nor->add_option("--draws", normal_draws, "Draws (per chain when the variance is unknown)")->capture_default_str();
  add_common(nor, c);

  auto* sig = app.add_subcommand("signal-noise", "Background plus signal Poisson rates");
  double alpha = 4.0;
  int x0 = 3, sx = 2;
  std::size_t sig_draws = 1'000'000;
  sig->add_option("--alpha", alpha, "Background exposure relative to the signal window")->capture_default_str();
  sig->add_option("--x0", x0, "Background count")->capture_default_str();
  sig->add_option("--x", sx, "Signal-window count")->capture_default_str();
  sig->add_option("--lpd", lpd, "uniform | reciprocal-sqrt")->capture_default_str();
  sig->add_option("--draws", sig_draws, "Draws")->capture_default_str();
  add_common(sig, c);

  auto* dg = app.add_subcommand("datagen-check", "Compare generation through gamma with direct sampling");
  std::string model = "binomial";
  std::size_t reps = 100'000;
  ofi::DataParams params;
  dg->add_option("--model", model, "binomial | poisson | normal")->capture_default_str();
  dg->add_option("--reps", reps, "Data sets per trial")->capture_default_str();
  dg->add_option("--n", params.n, "Trials or sample size")->capture_default_str();
  dg->add_option("--p", params.p, "Binomial proportion")->capture_default_str();
  dg->add_option("--tau", params.tau, "Poisson mean")->capture_default_str();
  dg->add_option("--mu", params.mu, "Normal mean")->capture_default_str();
  dg->add_option("--sigma", params.sigma, "Normal standard deviation")->capture_default_str();
  add_common(dg, c);

  auto* oc = app.add_subcommand("oracle-check", "Sampler vs grid-oracle KS suite");
  std::size_t resolution = 2000;
  oc->add_option("--draws", draws, "Draws per case")->capture_default_str();
  oc->add_option("--resolution", resolution, "Gamma strata of the oracle")->capture_default_str();
  add_common(oc, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(ofi::ErrorCode::InvalidArgument, e.what());
  }

  try {
    ofi::set_threads(c.threads);
    if (*bin) return run_p2(c, "binomial", ofi::BinomialProblem(bn, bx), lpd, draws);
    if (*poi) return run_p2(c, "poisson", ofi::PoissonProblem(px, exposure), lpd, draws);
    if (*mul) return run_multinomial(c, counts, chains, burn_in, chain_draws, scan, lpd);
    if (*nor) return run_normal(c, data_file, sigma2, mu0, gpd_text, chains, burn_in, normal_draws);
    if (*sig) return run_signal_noise(c, alpha, x0, sx, lpd, sig_draws);
    if (*dg) return run_datagen(c, model, reps, params);
    if (*oc) return run_oracle_check(c, draws, resolution);
  } catch (const ofi::Error& e) {
    return report_error(e.code(), e.what());
  } catch (const std::exception& e) {
    return report_error(ofi::ErrorCode::InvalidArgument, e.what());
  }
  return kExitValidation;
}
