#include "ofi/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/erf.hpp>

namespace ofi {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::EmptyInterval: return "EmptyInterval";
    case ErrorCode::NonIntegrableLpd: return "NonIntegrableLpd";
    case ErrorCode::UnboundedGpd: return "UnboundedGpd";
    case ErrorCode::Condition1Violated: return "Condition1Violated";
    case ErrorCode::Condition2Violated: return "Condition2Violated";
    case ErrorCode::ZeroWeight: return "ZeroWeight";
    case ErrorCode::NegligibleAcceptance: return "NegligibleAcceptance";
    case ErrorCode::ConditionalFailure: return "ConditionalFailure";
    case ErrorCode::AllZeroCounts: return "AllZeroCounts";
    case ErrorCode::UnsupportedModel: return "UnsupportedModel";
    case ErrorCode::RootNotBracketed: return "RootNotBracketed";
    case ErrorCode::ZeroMass: return "ZeroMass";
  }
  return "Unknown";
}

ErrorClass error_class(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonIntegrableLpd:
    case ErrorCode::NegligibleAcceptance:
    case ErrorCode::ConditionalFailure:
    case ErrorCode::RootNotBracketed:
    case ErrorCode::ZeroMass:
    case ErrorCode::ZeroWeight:
      return ErrorClass::Numeric;
    default:
      return ErrorClass::Validation;
  }
}

const char* to_string(Argument a) noexcept {
  switch (a) {
    case Argument::Strong: return "strong";
    case Argument::Moderate: return "moderate";
    case Argument::Weak: return "weak";
    case Argument::ConditionedStrategy: return "conditioned";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Interval / ParamDomain

bool Interval::contains(double x) const noexcept {
  if (std::isnan(x)) return false;
  const bool above = lo_closed ? x >= lo : x > lo;
  const bool below = hi_closed ? x <= hi : x < hi;
  return above && below;
}

bool Interval::empty() const noexcept {
  if (lo < hi) return false;
  return !(lo == hi && lo_closed && hi_closed);
}

Interval Interval::intersect(const Interval& other) const noexcept {
  Interval out;
  if (lo > other.lo) {
    out.lo = lo;
    out.lo_closed = lo_closed;
  } else if (other.lo > lo) {
    out.lo = other.lo;
    out.lo_closed = other.lo_closed;
  } else {
    out.lo = lo;
    out.lo_closed = lo_closed && other.lo_closed;
  }
  if (hi < other.hi) {
    out.hi = hi;
    out.hi_closed = hi_closed;
  } else if (other.hi < hi) {
    out.hi = other.hi;
    out.hi_closed = other.hi_closed;
  } else {
    out.hi = hi;
    out.hi_closed = hi_closed && other.hi_closed;
  }
  return out;
}

ParamDomain::ParamDomain(std::vector<Interval> segments) : segments_(std::move(segments)) {
  std::erase_if(segments_, [](const Interval& s) { return s.empty(); });
  require(!segments_.empty(), ErrorCode::EmptyDomain, "parameter domain is empty");
  for (auto& s : segments_) {
    require(!std::isnan(s.lo) && !std::isnan(s.hi), ErrorCode::InvalidArgument,
            "domain endpoints must not be NaN");
    if (std::isinf(s.lo)) s.lo_closed = false;
    if (std::isinf(s.hi)) s.hi_closed = false;
  }
  std::sort(segments_.begin(), segments_.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < segments_.size(); ++i) {
    const auto& prev = segments_[i - 1];
    const auto& cur = segments_[i];
    const bool overlap = cur.lo < prev.hi || (cur.lo == prev.hi && cur.lo_closed && prev.hi_closed);
    require(!overlap, ErrorCode::InvalidArgument, "domain segments must be disjoint");
  }
}

bool ParamDomain::contains(double x) const noexcept {
  return std::any_of(segments_.begin(), segments_.end(),
                     [x](const Interval& s) { return s.contains(x); });
}

std::vector<Interval> ParamDomain::clip(const Interval& window) const {
  std::vector<Interval> out;
  for (const auto& s : segments_) {
    Interval piece = s.intersect(window);
    if (!piece.empty()) out.push_back(piece);
  }
  return out;
}

bool ParamDomain::covers(const Interval& window) const noexcept {
  // Endpoint conventions are measure-zero; compare the real-number spans.
  for (const auto& s : segments_) {
    if (s.lo <= window.lo && window.hi <= s.hi) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Gpd

Gpd Gpd::neutral(ParamDomain domain, double level) {
  require(std::isfinite(level) && level > 0.0, ErrorCode::InvalidArgument,
          "neutral GPD level must be finite and positive");
  Gpd g(GpdKind::Neutral, std::move(domain));
  g.heights_ = {level};
  return g;
}

Gpd Gpd::step(std::vector<double> breakpoints, std::vector<double> heights, ParamDomain domain) {
  require(heights.size() == breakpoints.size() + 1, ErrorCode::InvalidArgument,
          "step GPD needs one more height than breakpoints");
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    require(std::isfinite(breakpoints[i]), ErrorCode::InvalidArgument,
            "step breakpoints must be finite");
    if (i > 0)
      require(breakpoints[i] > breakpoints[i - 1], ErrorCode::InvalidArgument,
              "step breakpoints must be strictly increasing");
  }
  for (double h : heights)
    require(std::isfinite(h) && h > 0.0, ErrorCode::InvalidArgument,
            "step heights must be finite and positive");
  Gpd g(GpdKind::Step, std::move(domain));
  g.breakpoints_ = std::move(breakpoints);
  g.heights_ = std::move(heights);
  return g;
}

Gpd Gpd::general(Evaluator fn, std::optional<double> sup_bound, ParamDomain domain) {
  require(static_cast<bool>(fn), ErrorCode::InvalidArgument, "general GPD needs an evaluator");
  if (sup_bound)
    require(std::isfinite(*sup_bound) && *sup_bound > 0.0, ErrorCode::InvalidArgument,
            "GPD sup-bound must be finite and positive");
  Gpd g(GpdKind::General, std::move(domain));
  g.fn_ = std::move(fn);
  g.sup_ = sup_bound;
  return g;
}

Gpd Gpd::positive_favoured(double a) { return step({0.0}, {1.0, a}); }

Gpd Gpd::centre_favoured(double a, double b) {
  require(b > 0.0, ErrorCode::InvalidArgument, "half-width must be positive");
  return step({-b, b}, {1.0, a, 1.0});
}

double Gpd::operator()(double theta) const {
  if (!domain_.contains(theta)) return 0.0;
  switch (kind_) {
    case GpdKind::Neutral:
      return heights_.front();
    case GpdKind::Step: {
      // Pieces are (b[i-1], b[i]]: count breakpoints strictly below theta.
      const auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), theta);
      return heights_[static_cast<std::size_t>(it - breakpoints_.begin())];
    }
    case GpdKind::General: {
      const double v = fn_(theta);
      require(v >= 0.0 && !std::isnan(v), ErrorCode::InvalidArgument,
              "GPD evaluator returned a negative or NaN weight");
      return v;
    }
  }
  return 0.0;
}

std::optional<double> Gpd::sup_bound() const {
  if (kind_ == GpdKind::General) return sup_;
  return *std::max_element(heights_.begin(), heights_.end());
}

std::vector<WeightedInterval> Gpd::pieces() const {
  require(kind_ != GpdKind::General, ErrorCode::InvalidArgument,
          "general GPD has no piecewise-constant description");
  std::vector<WeightedInterval> out;
  if (kind_ == GpdKind::Neutral) {
    for (const auto& s : domain_.segments()) out.push_back({s, heights_.front()});
    return out;
  }
  double lo = -kInf;
  for (std::size_t i = 0; i <= breakpoints_.size(); ++i) {
    const double hi = i < breakpoints_.size() ? breakpoints_[i] : kInf;
    const Interval piece{lo, hi, false, std::isfinite(hi)};
    for (const auto& clipped : domain_.clip(piece)) out.push_back({clipped, heights_[i]});
    lo = hi;
  }
  return out;
}

bool Gpd::constant_on(const Interval& window) const {
  if (kind_ == GpdKind::General) return false;
  if (!domain_.covers(window)) return false;
  if (kind_ == GpdKind::Neutral) return true;
  std::optional<double> level;
  for (const auto& piece : pieces()) {
    const Interval overlap = piece.span.intersect(window);
    if (overlap.empty() || overlap.lo == overlap.hi) continue;
    if (level && *level != piece.weight) return false;
    level = piece.weight;
  }
  return level.has_value();
}

Gpd Gpd::scaled(double c) const {
  require(std::isfinite(c) && c > 0.0, ErrorCode::InvalidArgument, "scale must be positive");
  Gpd g = *this;
  for (auto& h : g.heights_) h *= c;
  if (kind_ == GpdKind::General) {
    g.fn_ = [fn = fn_, c](double t) { return c * fn(t); };
    if (sup_) g.sup_ = *sup_ * c;
  }
  return g;
}

// ---------------------------------------------------------------------------
// PrimaryRvLaw

namespace {

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double norm_ccdf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }
double norm_quantile(double u) { return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u); }
double norm_cquantile(double u) { return std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u); }

}  // namespace

PrimaryRvLaw PrimaryRvLaw::chi_squared(int df) {
  require(df >= 1, ErrorCode::InvalidArgument, "chi-squared degrees of freedom must be >= 1");
  return PrimaryRvLaw(Kind::ChiSquared, df);
}

Interval PrimaryRvLaw::support() const noexcept {
  switch (kind_) {
    case Kind::StandardNormal: return Interval::open(-kInf, kInf);
    case Kind::ChiSquared: return Interval::open(0.0, kInf);
    case Kind::UniformUnit: return Interval::open(0.0, 1.0);
  }
  return {};
}

double PrimaryRvLaw::pdf(double g) const {
  switch (kind_) {
    case Kind::StandardNormal:
      return std::exp(-0.5 * g * g) / std::sqrt(2.0 * M_PI);
    case Kind::ChiSquared:
      if (g <= 0.0) return 0.0;
      return boost::math::pdf(boost::math::chi_squared_distribution<>(df_), g);
    case Kind::UniformUnit:
      return (g > 0.0 && g < 1.0) ? 1.0 : 0.0;
  }
  return 0.0;
}

double PrimaryRvLaw::cdf(double g) const {
  switch (kind_) {
    case Kind::StandardNormal:
      if (std::isinf(g)) return g > 0 ? 1.0 : 0.0;
      return norm_cdf(g);
    case Kind::ChiSquared:
      if (g <= 0.0) return 0.0;
      if (std::isinf(g)) return 1.0;
      return boost::math::cdf(boost::math::chi_squared_distribution<>(df_), g);
    case Kind::UniformUnit:
      return std::clamp(g, 0.0, 1.0);
  }
  return 0.0;
}

double PrimaryRvLaw::ccdf(double g) const {
  switch (kind_) {
    case Kind::StandardNormal:
      if (std::isinf(g)) return g > 0 ? 0.0 : 1.0;
      return norm_ccdf(g);
    case Kind::ChiSquared:
      if (g <= 0.0) return 1.0;
      if (std::isinf(g)) return 0.0;
      return boost::math::cdf(
          boost::math::complement(boost::math::chi_squared_distribution<>(df_), g));
    case Kind::UniformUnit:
      return 1.0 - std::clamp(g, 0.0, 1.0);
  }
  return 0.0;
}

double PrimaryRvLaw::quantile(double u) const {
  require(u > 0.0 && u < 1.0, ErrorCode::InvalidArgument, "quantile level must be in (0,1)");
  switch (kind_) {
    case Kind::StandardNormal:
      return norm_quantile(u);
    case Kind::ChiSquared:
      return boost::math::quantile(boost::math::chi_squared_distribution<>(df_), u);
    case Kind::UniformUnit:
      return u;
  }
  return 0.0;
}

double PrimaryRvLaw::mass(double lo, double hi) const {
  if (!(lo < hi)) return 0.0;
  const double median = kind_ == Kind::StandardNormal ? 0.0 : quantile(0.5);
  if (lo >= median) return std::max(0.0, ccdf(lo) - ccdf(hi));
  return std::max(0.0, cdf(hi) - cdf(lo));
}

double PrimaryRvLaw::sample_between(Rng& rng, double lo, double hi) const {
  const Interval sup = support();
  lo = std::max(lo, sup.lo);
  hi = std::min(hi, sup.hi);
  require(lo < hi, ErrorCode::EmptyInterval, "empty sampling window for the primary r.v.");
  const double u = rng.uniform();
  double g;
  if (kind_ == Kind::UniformUnit) {
    g = lo + u * (hi - lo);
  } else {
    const double median = kind_ == Kind::StandardNormal ? 0.0 : quantile(0.5);
    if (lo >= median) {
      // Work in the upper tail so deep truncations keep precision.
      const double a = ccdf(hi), b = ccdf(lo);
      const double p = a + u * (b - a);
      g = kind_ == Kind::StandardNormal
              ? norm_cquantile(p)
              : boost::math::quantile(
                    boost::math::complement(boost::math::chi_squared_distribution<>(df_), p));
    } else {
      const double a = cdf(lo), b = cdf(hi);
      g = quantile(std::clamp(a + u * (b - a), 1e-300, 1.0 - 1e-16));
    }
  }
  return std::clamp(g, lo, hi);
}

double PrimaryRvLaw::sample(Rng& rng) const {
  const Interval sup = support();
  return sample_between(rng, sup.lo, sup.hi);
}

// ---------------------------------------------------------------------------
// SampleBatch

const std::vector<double>& SampleBatch::column(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return columns[i];
  fail(ErrorCode::InvalidArgument, "no column named " + std::string(name));
}

SampleBatch make_batch(std::string name, std::vector<double> values, std::uint64_t seed,
                       Argument argument, std::string fingerprint) {
  SampleBatch b;
  b.names = {std::move(name)};
  b.columns = {std::move(values)};
  b.seed = seed;
  b.argument = argument;
  b.fingerprint = std::move(fingerprint);
  return b;
}

void check_containment(const SampleBatch& batch, std::string_view column,
                       const ParamDomain& domain) {
  const auto& values = batch.column(column);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!domain.contains(values[i])) {
      std::ostringstream os;
      os << "draw " << i << " of column " << column << " (" << values[i]
         << ") lies outside the parameter domain";
      fail(ErrorCode::InvalidArgument, os.str());
    }
  }
}

// ---------------------------------------------------------------------------
// GPD text form

namespace {

double parse_bound(std::string_view t) {
  const std::string s(t);
  if (s == "-inf") return -kInf;
  if (s == "inf" || s == "+inf") return kInf;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == s.size() && !s.empty(), ErrorCode::InvalidArgument, "bad number '" + s + "' in GPD");
  return v;
}

std::string_view trim(std::string_view t) {
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.remove_prefix(1);
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.remove_suffix(1);
  return t;
}

}  // namespace

Gpd parse_gpd(std::string_view text) {
  text = trim(text);
  if (text == "neutral") return Gpd::neutral(ParamDomain::real_line());
  require(text.substr(0, 5) == "step:", ErrorCode::InvalidArgument,
          "GPD must be 'neutral' or 'step:h@(lo,hi],...'");
  text.remove_prefix(5);

  std::vector<std::string_view> items;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      items.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  items.push_back(text.substr(start));

  std::vector<double> heights, breaks;
  double first_lo = 0.0, prev_hi = 0.0;
  for (std::size_t k = 0; k < items.size(); ++k) {
    const std::string_view item = trim(items[k]);
    const auto at = item.find('@');
    require(at != std::string_view::npos && item.size() > at + 4, ErrorCode::InvalidArgument,
            "GPD piece must look like h@(lo,hi]");
    const std::string_view span = trim(item.substr(at + 1));
    require((span.front() == '(' || span.front() == '[') && (span.back() == ')' || span.back() == ']'),
            ErrorCode::InvalidArgument, "GPD span must be bracketed");
    const std::string_view inner = span.substr(1, span.size() - 2);
    const auto comma = inner.find(',');
    require(comma != std::string_view::npos, ErrorCode::InvalidArgument, "GPD span needs two ends");
    const double h = parse_bound(trim(item.substr(0, at)));
    const double lo = parse_bound(trim(inner.substr(0, comma)));
    const double hi = parse_bound(trim(inner.substr(comma + 1)));
    require(std::isfinite(h) && h > 0.0, ErrorCode::InvalidArgument, "GPD heights must be positive");
    require(lo < hi, ErrorCode::EmptyInterval, "GPD span is empty");
    if (k == 0) {
      first_lo = lo;
    } else {
      require(lo == prev_hi, ErrorCode::InvalidArgument, "GPD spans must be contiguous");
      breaks.push_back(lo);
    }
    heights.push_back(h);
    prev_hi = hi;
  }
  return Gpd::step(std::move(breaks), std::move(heights), ParamDomain(Interval::open(first_lo, prev_hi)));
}

}  // namespace ofi
