#include "ofi/lpd.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace ofi {

Lpd::Lpd(LpdKind kind) : kind_(kind) {
  switch (kind) {
    case LpdKind::Uniform: label_ = "uniform"; break;
    case LpdKind::ReciprocalSqrtBernoulli: label_ = "jeffreys-shape"; break;
    case LpdKind::ReciprocalSqrt: label_ = "reciprocal-sqrt"; break;
    case LpdKind::General: label_ = "general"; break;
  }
}

Lpd Lpd::general(Evaluator fn, Interval support, std::string label) {
  require(static_cast<bool>(fn), ErrorCode::InvalidArgument, "general LPD needs an evaluator");
  Lpd l(LpdKind::General);
  l.fn_ = std::move(fn);
  l.support_ = support;
  l.label_ = std::move(label);
  return l;
}

Interval Lpd::support() const noexcept {
  switch (kind_) {
    case LpdKind::Uniform: return Interval::open(-kInf, kInf);
    case LpdKind::ReciprocalSqrtBernoulli: return Interval::closed(0.0, 1.0);
    case LpdKind::ReciprocalSqrt: return Interval::open(0.0, kInf);
    case LpdKind::General: return support_;
  }
  return {};
}

double Lpd::operator()(double theta) const {
  switch (kind_) {
    case LpdKind::Uniform:
      return 1.0;
    case LpdKind::ReciprocalSqrtBernoulli:
      if (theta < 0.0 || theta > 1.0) return 0.0;
      return 1.0 / std::sqrt(theta * (1.0 - theta));
    case LpdKind::ReciprocalSqrt:
      return theta > 0.0 ? 1.0 / std::sqrt(theta) : 0.0;
    case LpdKind::General:
      return support_.contains(theta) ? fn_(theta) : 0.0;
  }
  return 0.0;
}

namespace {

double integrate(const Lpd::Evaluator& f, double a, double b) {
  if (!(a < b)) return 0.0;
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, a, b, 15, 1e-12, &err);
  if (!std::isfinite(v) || !std::isfinite(err) || err > 1e-6 * std::max(1.0, std::abs(v)))
    fail(ErrorCode::NonIntegrableLpd, "LPD integral does not converge on the interval");
  return v;
}

}  // namespace

RestrictedLpd::RestrictedLpd(const Lpd& lpd, double lo, double hi) : lpd_(&lpd) {
  require(!std::isnan(lo) && !std::isnan(hi) && lo < hi, ErrorCode::EmptyInterval,
          "restricted LPD needs lo < hi");
  const Interval sup = lpd.support();
  lo_ = std::max(lo, sup.lo);
  hi_ = std::min(hi, sup.hi);
  require(lo_ < hi_, ErrorCode::EmptyInterval, "interval misses the LPD support");
  switch (lpd.kind()) {
    case LpdKind::Uniform:
    case LpdKind::ReciprocalSqrt:
      if (!std::isfinite(hi_) || !std::isfinite(lo_))
        fail(ErrorCode::NonIntegrableLpd, "LPD is not integrable over an unbounded interval");
      break;
    default:
      break;
  }
  base_ = lpd.kind() == LpdKind::General ? 0.0 : antiderivative(lo_);
  norm_ = antiderivative(hi_) - base_;
  if (!(norm_ > 0.0) || !std::isfinite(norm_))
    fail(ErrorCode::NonIntegrableLpd, "LPD has zero or infinite mass on the interval");
}

double RestrictedLpd::antiderivative(double theta) const {
  switch (lpd_->kind()) {
    case LpdKind::Uniform:
      return theta;
    case LpdKind::ReciprocalSqrtBernoulli:
      return 2.0 * std::asin(std::sqrt(std::clamp(theta, 0.0, 1.0)));
    case LpdKind::ReciprocalSqrt:
      return 2.0 * std::sqrt(std::max(theta, 0.0));
    case LpdKind::General:
      return integrate([this](double t) { return (*lpd_)(t); }, lo_, theta);
  }
  return 0.0;
}

double RestrictedLpd::pdf(double theta) const {
  if (theta < lo_ || theta > hi_) return 0.0;
  return (*lpd_)(theta) / norm_;
}

double RestrictedLpd::cdf(double theta) const {
  if (theta <= lo_) return 0.0;
  if (theta >= hi_) return 1.0;
  return std::clamp((antiderivative(theta) - base_) / norm_, 0.0, 1.0);
}

double RestrictedLpd::quantile(double u) const {
  switch (lpd_->kind()) {
    case LpdKind::Uniform:
      return std::clamp(lo_ + u * (hi_ - lo_), lo_, hi_);
    case LpdKind::ReciprocalSqrtBernoulli: {
      const double s = std::sin(0.5 * (base_ + u * norm_));
      return std::clamp(s * s, lo_, hi_);
    }
    case LpdKind::ReciprocalSqrt: {
      const double r = 0.5 * (base_ + u * norm_);
      return std::clamp(r * r, lo_, hi_);
    }
    case LpdKind::General:
      break;
  }
  double a = lo_, b = hi_;
  if (!std::isfinite(a)) {
    a = std::isfinite(b) ? b - 1.0 : -1.0;
    while (cdf(a) > u) a -= std::abs(a) + 1.0;
  }
  if (!std::isfinite(b)) {
    b = a + 1.0;
    while (cdf(b) < u) b += std::abs(b) + 1.0;
  }
  // Newton on cdf - u inside the bracket [a, b]; bisect when a step leaves it.
  double x = 0.5 * (a + b);
  for (int it = 0; it < 200; ++it) {
    const double f = cdf(x) - u;
    if (f == 0.0) return x;
    (f < 0.0 ? a : b) = x;
    const double d = pdf(x);
    double next = d > 0.0 ? x - f / d : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    const double tol = 1e-13 * std::max(1.0, std::abs(next));
    if (std::abs(next - x) < tol || b - a < tol) return next;
    x = next;
  }
  return x;
}

Lpd parse_lpd(const std::string& name) {
  if (name == "uniform") return Lpd::uniform();
  if (name == "jeffreys-shape") return Lpd::reciprocal_sqrt_bernoulli();
  if (name == "reciprocal-sqrt") return Lpd::reciprocal_sqrt();
  fail(ErrorCode::InvalidArgument, "unknown LPD '" + name + "'");
}

}  // namespace ofi
