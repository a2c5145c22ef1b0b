#pragma once

// Shared domain types: parameter domains, pre-data weight functions, laws of
// the primary random variable and tagged sample containers.

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ofi/error.hpp"
#include "ofi/rng.hpp"

namespace ofi {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Real interval with per-end open/closed flags. Infinite ends are always open.
struct Interval {
  double lo = -kInf;
  double hi = kInf;
  bool lo_closed = false;
  bool hi_closed = false;

  static Interval open(double lo, double hi) { return {lo, hi, false, false}; }
  static Interval closed(double lo, double hi) { return {lo, hi, true, true}; }
  static Interval left_open(double lo, double hi) { return {lo, hi, false, true}; }
  static Interval right_open(double lo, double hi) { return {lo, hi, true, false}; }

  bool contains(double x) const noexcept;
  bool empty() const noexcept;
  double length() const noexcept { return hi - lo; }
  bool bounded() const noexcept { return lo > -kInf && hi < kInf; }
  /// Intersection; may be empty.
  Interval intersect(const Interval& other) const noexcept;
};

/// Natural or restricted space of a scalar parameter: a sorted union of
/// disjoint intervals. Never empty.
class ParamDomain {
 public:
  explicit ParamDomain(std::vector<Interval> segments);
  ParamDomain(Interval segment) : ParamDomain(std::vector<Interval>{segment}) {}

  static ParamDomain real_line() { return ParamDomain(Interval::open(-kInf, kInf)); }
  static ParamDomain positive() { return ParamDomain(Interval::open(0.0, kInf)); }
  static ParamDomain non_negative() { return ParamDomain(Interval::right_open(0.0, kInf)); }
  static ParamDomain unit() { return ParamDomain(Interval::closed(0.0, 1.0)); }
  static ParamDomain above(double bound) { return ParamDomain(Interval::open(bound, kInf)); }

  const std::vector<Interval>& segments() const noexcept { return segments_; }
  bool contains(double x) const noexcept;
  double lower() const noexcept { return segments_.front().lo; }
  double upper() const noexcept { return segments_.back().hi; }
  /// Non-empty pieces of the domain inside `window`.
  std::vector<Interval> clip(const Interval& window) const;
  /// True when `window` is covered by the domain up to endpoints.
  bool covers(const Interval& window) const noexcept;

 private:
  std::vector<Interval> segments_;
};

/// Piece of a piecewise-constant weight function.
struct WeightedInterval {
  Interval span;
  double weight;
};

enum class GpdKind { Neutral, Step, General };

/// Global pre-data function: non-negative weight over a parameter, defined up
/// to proportionality. Zero outside its domain.
class Gpd {
 public:
  using Evaluator = std::function<double(double)>;

  /// Constant `level` on `domain`, zero elsewhere.
  static Gpd neutral(ParamDomain domain, double level = 1.0);
  /// heights.size() == breakpoints.size() + 1. Pieces are (b[i-1], b[i]].
  static Gpd step(std::vector<double> breakpoints, std::vector<double> heights,
                  ParamDomain domain = ParamDomain::real_line());
  static Gpd general(Evaluator fn, std::optional<double> sup_bound,
                     ParamDomain domain = ParamDomain::real_line());

  /// a on (0, inf), 1 elsewhere.
  static Gpd positive_favoured(double a);
  /// a on (-b, b], 1 elsewhere.
  static Gpd centre_favoured(double a, double b);

  double operator()(double theta) const;

  GpdKind kind() const noexcept { return kind_; }
  const ParamDomain& domain() const noexcept { return domain_; }
  std::optional<double> sup_bound() const;

  /// Piecewise-constant description restricted to the domain. Throws for General.
  std::vector<WeightedInterval> pieces() const;
  /// True when the weight is one positive constant over `window`.
  /// General functions are never assumed constant.
  bool constant_on(const Interval& window) const;
  /// Copy with every height multiplied by c > 0.
  Gpd scaled(double c) const;

  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  const std::vector<double>& heights() const noexcept { return heights_; }

 private:
  Gpd(GpdKind kind, ParamDomain domain) : kind_(kind), domain_(std::move(domain)) {}

  GpdKind kind_;
  ParamDomain domain_;
  std::vector<double> breakpoints_;
  std::vector<double> heights_;
  Evaluator fn_;
  std::optional<double> sup_;
};

inline double gpd_eval(const Gpd& g, double theta) { return g(theta); }

/// Text form used on the command line:
///   neutral
///   step:h0@(-inf,b1],h1@(b1,b2],...,hm@(bm,inf)
/// Heights are positive numbers; consecutive spans must share their endpoint.
/// The first and last ends set the domain.
Gpd parse_gpd(std::string_view text);

/// Law of the primary random variable.
class PrimaryRvLaw {
 public:
  enum class Kind { StandardNormal, ChiSquared, UniformUnit };

  static PrimaryRvLaw standard_normal() { return PrimaryRvLaw(Kind::StandardNormal, 0); }
  static PrimaryRvLaw chi_squared(int df);
  static PrimaryRvLaw uniform_unit() { return PrimaryRvLaw(Kind::UniformUnit, 0); }

  Kind kind() const noexcept { return kind_; }
  int df() const noexcept { return df_; }
  Interval support() const noexcept;

  double pdf(double g) const;
  double cdf(double g) const;
  double ccdf(double g) const;
  double quantile(double u) const;
  /// Probability of (lo, hi), computed on the tail that keeps precision.
  double mass(double lo, double hi) const;
  /// Inverse-CDF draw restricted to (lo, hi); one engine call.
  double sample_between(Rng& rng, double lo, double hi) const;
  double sample(Rng& rng) const;

 private:
  PrimaryRvLaw(Kind kind, int df) : kind_(kind), df_(df) {}

  Kind kind_;
  int df_;
};

enum class Argument { Strong, Moderate, Weak, ConditionedStrategy };

const char* to_string(Argument a) noexcept;

/// Draws from a fiducial density, one column per parameter.
struct SampleBatch {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  std::uint64_t seed = 0;
  int chain = 0;
  Argument argument = Argument::Strong;
  std::string fingerprint;

  std::size_t size() const noexcept { return columns.empty() ? 0 : columns.front().size(); }
  const std::vector<double>& column(std::string_view name) const;
};

SampleBatch make_batch(std::string name, std::vector<double> values, std::uint64_t seed,
                       Argument argument, std::string fingerprint);

/// Throws InvalidArgument when a value of `column` falls outside `domain`.
void check_containment(const SampleBatch& batch, std::string_view column,
                       const ParamDomain& domain);

}  // namespace ofi
