#pragma once

// Local pre-data functions and their normalized restrictions to an interval.

#include <functional>
#include <string>

#include "ofi/core.hpp"

namespace ofi {

enum class LpdKind { Uniform, ReciprocalSqrtBernoulli, ReciprocalSqrt, General };

/// Local pre-data weight, defined up to proportionality.
///   Uniform                  : constant
///   ReciprocalSqrtBernoulli  : 1 / sqrt(p (1 - p)) on [0, 1]
///   ReciprocalSqrt           : 1 / sqrt(t) on t > 0
class Lpd {
 public:
  using Evaluator = std::function<double(double)>;

  static Lpd uniform() { return Lpd(LpdKind::Uniform); }
  static Lpd reciprocal_sqrt_bernoulli() { return Lpd(LpdKind::ReciprocalSqrtBernoulli); }
  static Lpd reciprocal_sqrt() { return Lpd(LpdKind::ReciprocalSqrt); }
  /// Non-negative evaluator supported on `support`.
  static Lpd general(Evaluator fn, Interval support = Interval::open(-kInf, kInf),
                     std::string label = "general");

  double operator()(double theta) const;
  LpdKind kind() const noexcept { return kind_; }
  Interval support() const noexcept;
  const std::string& label() const noexcept { return label_; }

 private:
  explicit Lpd(LpdKind kind);

  LpdKind kind_;
  std::string label_;
  Evaluator fn_;
  Interval support_;
};

/// The normalized density c2 * w_L on [lo, hi] with CDF, quantile and sampler.
/// Closed-form inverse CDFs for the built-in kinds; General falls back to
/// adaptive quadrature plus bisection.
class RestrictedLpd {
 public:
  RestrictedLpd(const Lpd& lpd, double lo, double hi);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  /// Integral of the unnormalized weight over [lo, hi].
  double normalizer() const noexcept { return norm_; }

  double pdf(double theta) const;
  double cdf(double theta) const;
  double quantile(double u) const;
  double sample(Rng& rng) const { return quantile(rng.uniform()); }

 private:
  double antiderivative(double theta) const;

  const Lpd* lpd_;
  double lo_;
  double hi_;
  double base_ = 0.0;
  double norm_ = 0.0;
};

/// "uniform", "jeffreys-shape" (1/sqrt(p(1-p))) or "reciprocal-sqrt" (1/sqrt(t)).
Lpd parse_lpd(const std::string& name);

inline RestrictedLpd lpd_restricted_sampler(const Lpd& lpd, double lo, double hi) {
  return RestrictedLpd(lpd, lo, hi);
}

}  // namespace ofi
