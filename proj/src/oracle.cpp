#include "ofi/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/inverse_chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace ofi {

namespace {

namespace bm = boost::math;
using Policy = bm::policies::policy<bm::policies::overflow_error<bm::policies::ignore_error>>;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

/// Boost distribution behind the UnivariateDensity interface, with an
/// optional affine map x = location + scale * z.
template <class Dist>
class BoostDensity final : public UnivariateDensity {
 public:
  BoostDensity(Dist dist, std::string label, double location = 0.0, double scale = 1.0)
      : dist_(dist), label_(std::move(label)), loc_(location), scale_(scale) {}

  double pdf(double x) const override {
    const double z = (x - loc_) / scale_;
    const auto [lo, hi] = bm::support(dist_);
    if (!(z > lo && z < hi)) return 0.0;
    return bm::pdf(dist_, z) / scale_;
  }
  double cdf(double x) const override {
    const double z = (x - loc_) / scale_;
    const auto [lo, hi] = bm::support(dist_);
    if (z <= lo) return 0.0;
    if (z >= hi) return 1.0;
    return bm::cdf(dist_, z);
  }
  double ccdf(double x) const override {
    const double z = (x - loc_) / scale_;
    const auto [lo, hi] = bm::support(dist_);
    if (z <= lo) return 1.0;
    if (z >= hi) return 0.0;
    return bm::cdf(bm::complement(dist_, z));
  }
  double quantile(double u) const override {
    require(u > 0.0 && u < 1.0, ErrorCode::InvalidArgument, "quantile level must be in (0,1)");
    return loc_ + scale_ * bm::quantile(dist_, u);
  }
  double cquantile(double q) const override {
    require(q > 0.0 && q < 1.0, ErrorCode::InvalidArgument, "quantile level must be in (0,1)");
    return loc_ + scale_ * bm::quantile(bm::complement(dist_, q));
  }
  Interval support() const override {
    auto [lo, hi] = bm::support(dist_);
    const double big = std::numeric_limits<double>::max();
    return Interval::open(lo <= -big ? -kInf : loc_ + scale_ * lo,
                          hi >= big ? kInf : loc_ + scale_ * hi);
  }
  std::string describe() const override { return label_; }

 private:
  Dist dist_;
  std::string label_;
  double loc_;
  double scale_;
};

class Truncated final : public UnivariateDensity {
 public:
  Truncated(DensityPtr base, Interval domain) : base_(std::move(base)) {
    const Interval s = base_->support();
    lo_ = std::max(domain.lo, s.lo);
    hi_ = std::min(domain.hi, s.hi);
    require(lo_ < hi_, ErrorCode::ZeroMass, "truncation window misses the support");
    // Keep precision by working in whichever tail the window sits in.
    upper_ = base_->cdf(lo_) > 0.5;
    if (upper_) {
      a_ = base_->ccdf(hi_);
      b_ = base_->ccdf(lo_);
    } else {
      a_ = base_->cdf(lo_);
      b_ = base_->cdf(hi_);
    }
    mass_ = b_ - a_;
    require(mass_ > 0.0, ErrorCode::ZeroMass, "base density has no mass on the window");
  }

  double pdf(double x) const override {
    if (x < lo_ || x > hi_) return 0.0;
    return base_->pdf(x) / mass_;
  }
  double cdf(double x) const override {
    if (x <= lo_) return 0.0;
    if (x >= hi_) return 1.0;
    const double v = upper_ ? (b_ - base_->ccdf(x)) : (base_->cdf(x) - a_);
    return std::clamp(v / mass_, 0.0, 1.0);
  }
  double ccdf(double x) const override {
    if (x <= lo_) return 1.0;
    if (x >= hi_) return 0.0;
    const double v = upper_ ? (base_->ccdf(x) - a_) : (b_ - base_->cdf(x));
    return std::clamp(v / mass_, 0.0, 1.0);
  }
  double quantile(double u) const override {
    require(u > 0.0 && u < 1.0, ErrorCode::InvalidArgument, "quantile level must be in (0,1)");
    const double x = upper_ ? base_->cquantile(b_ - u * mass_) : base_->quantile(a_ + u * mass_);
    return std::clamp(x, lo_, hi_);
  }
  Interval support() const override { return Interval::open(lo_, hi_); }
  std::string describe() const override {
    std::ostringstream os;
    os << base_->describe() << " | (" << lo_ << ", " << hi_ << ")";
    return os.str();
  }

 private:
  DensityPtr base_;
  double lo_, hi_;
  bool upper_ = false;
  double a_ = 0.0, b_ = 1.0, mass_ = 1.0;
};

std::string fmt(const char* name, double a, double b) {
  std::ostringstream os;
  os.precision(12);
  os << name << "(" << a << ", " << b << ")";
  return os.str();
}

}  // namespace

std::vector<double> UnivariateDensity::sample(std::size_t n, std::uint64_t seed, Exec exec) const {
  std::vector<double> out(n);
  for_blocks(n, exec, [&](std::size_t b, std::size_t begin, std::size_t end) {
    Rng rng(seed, b);
    for (std::size_t i = begin; i < end; ++i) out[i] = sample(rng);
  });
  return out;
}

DensityPtr normal_density(double mean, double sd) {
  require(sd > 0.0, ErrorCode::InvalidArgument, "normal sd must be positive");
  return std::make_shared<BoostDensity<bm::normal_distribution<double, Policy>>>(
      bm::normal_distribution<double, Policy>(0.0, 1.0), fmt("Normal", mean, sd), mean, sd);
}

DensityPtr beta_density(double a, double b) {
  require(a > 0.0 && b > 0.0, ErrorCode::InvalidArgument, "beta parameters must be positive");
  return std::make_shared<BoostDensity<bm::beta_distribution<double, Policy>>>(
      bm::beta_distribution<double, Policy>(a, b), fmt("Beta", a, b));
}

DensityPtr gamma_density(double shape, double rate) {
  require(shape > 0.0 && rate > 0.0, ErrorCode::InvalidArgument, "gamma parameters must be positive");
  return std::make_shared<BoostDensity<bm::gamma_distribution<double, Policy>>>(
      bm::gamma_distribution<double, Policy>(shape, 1.0 / rate), fmt("Gamma", shape, rate));
}

DensityPtr student_t_density(double df, double location, double scale) {
  require(df > 0.0 && scale > 0.0, ErrorCode::InvalidArgument, "t needs df > 0 and scale > 0");
  std::ostringstream os;
  os.precision(12);
  os << "t_" << df << "(" << location << ", " << scale << ")";
  return std::make_shared<BoostDensity<bm::students_t_distribution<double, Policy>>>(
      bm::students_t_distribution<double, Policy>(df), os.str(), location, scale);
}

DensityPtr scaled_inv_chi2_density(double df, double scale2) {
  require(df > 0.0 && scale2 > 0.0, ErrorCode::InvalidArgument,
          "scaled inverse chi-squared needs df > 0 and scale > 0");
  return std::make_shared<BoostDensity<bm::inverse_chi_squared_distribution<double, Policy>>>(
      bm::inverse_chi_squared_distribution<double, Policy>(df, scale2),
      fmt("ScaledInvChi2", df, scale2));
}

DensityPtr truncated_density(DensityPtr base, Interval domain) {
  require(base != nullptr, ErrorCode::InvalidArgument, "null base density");
  const Interval s = base->support();
  if (domain.lo <= s.lo && domain.hi >= s.hi) return base;
  return std::make_shared<Truncated>(std::move(base), domain);
}

const char* to_string(Prior p) noexcept {
  switch (p) {
    case Prior::Uniform: return "uniform";
    case Prior::Jeffreys: return "jeffreys";
    case Prior::Perks: return "perks";
    case Prior::FlatImproper: return "flat";
  }
  return "unknown";
}

double prior_concentration(Prior prior, std::size_t cells) {
  switch (prior) {
    case Prior::Uniform:
    case Prior::FlatImproper:
      return 1.0;
    case Prior::Jeffreys:
      return 0.5;
    case Prior::Perks:
      return 1.0 / static_cast<double>(cells);
  }
  return 1.0;
}

DensityPtr posterior_density(const PosteriorSpec& spec) {
  const Prior prior = spec.prior;
  return std::visit(
      Overloaded{
          [prior](const BinomialProblem& b) -> DensityPtr {
            const double a = prior_concentration(prior, 2);
            return beta_density(b.x + a, b.n - b.x + a);
          },
          [prior](const PoissonProblem& p) -> DensityPtr {
            require(prior != Prior::Perks, ErrorCode::InvalidArgument,
                    "Perks prior is defined for multinomial cells only");
            const double shape = p.x + (prior == Prior::Jeffreys ? 0.5 : 1.0);
            return gamma_density(shape, p.exposure);
          },
          [prior](const MultinomialMarginal& m) -> DensityPtr {
            return Dirichlet::posterior(m.problem, prior).marginal(m.index);
          },
          [](const NormalMeanProblem& p) -> DensityPtr {
            return normal_density(p.xbar(), std::sqrt(p.sigma2 / p.n()));
          },
          [](const NormalMeanMarginal& m) -> DensityPtr {
            const auto n = static_cast<double>(m.data.size());
            require(m.data.size() >= 2, ErrorCode::InvalidArgument, "t marginal needs n >= 2");
            const double xbar = std::accumulate(m.data.begin(), m.data.end(), 0.0) / n;
            double ss = 0.0;
            for (double v : m.data) ss += (v - xbar) * (v - xbar);
            require(ss > 0.0, ErrorCode::InvalidArgument, "data have zero spread");
            const double s = std::sqrt(ss / (n - 1.0));
            return student_t_density(n - 1.0, xbar, s / std::sqrt(n));
          },
          [](const NormalVarianceProblem& p) -> DensityPtr {
            require(p.sigma_hat2() > 0.0, ErrorCode::InvalidArgument, "data have zero spread");
            return scaled_inv_chi2_density(p.n(), p.sigma_hat2());
          }},
      spec.model);
}

// ---------------------------------------------------------------------------
// Dirichlet

Dirichlet::Dirichlet(std::vector<double> alpha) : alpha_(std::move(alpha)) {
  require(alpha_.size() >= 2, ErrorCode::InvalidArgument, "Dirichlet needs two or more cells");
  for (double a : alpha_) require(a > 0.0, ErrorCode::InvalidArgument, "Dirichlet alpha must be > 0");
  total_ = std::accumulate(alpha_.begin(), alpha_.end(), 0.0);
}

Dirichlet Dirichlet::posterior(const MultinomialProblem& problem, Prior prior) {
  const double a = prior_concentration(prior, problem.counts.size());
  std::vector<double> alpha;
  for (int c : problem.counts) alpha.push_back(c + a);
  return Dirichlet(std::move(alpha));
}

double Dirichlet::mean(std::size_t i) const { return alpha_.at(i) / total_; }

double Dirichlet::covariance(std::size_t i, std::size_t j) const {
  const double ai = alpha_.at(i), aj = alpha_.at(j);
  const double denom = total_ * total_ * (total_ + 1.0);
  if (i == j) return ai * (total_ - ai) / denom;
  return -ai * aj / denom;
}

DensityPtr Dirichlet::marginal(std::size_t i) const {
  return beta_density(alpha_.at(i), total_ - alpha_.at(i));
}

std::vector<double> Dirichlet::sample(Rng& rng) const {
  std::vector<double> out(alpha_.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < alpha_.size(); ++i) {
    std::gamma_distribution<double> g(alpha_[i], 1.0);
    out[i] = g(rng);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

}  // namespace ofi
