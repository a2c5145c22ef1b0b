#pragma once

#include <stdexcept>
#include <string>

namespace ofi {

/// Broad failure class; the CLI maps it onto its exit code.
enum class ErrorClass { Validation, Numeric };

enum class ErrorCode {
  InvalidArgument,
  EmptyDomain,
  EmptyInterval,
  NonIntegrableLpd,
  UnboundedGpd,
  Condition1Violated,
  Condition2Violated,
  ZeroWeight,
  NegligibleAcceptance,
  ConditionalFailure,
  AllZeroCounts,
  UnsupportedModel,
  RootNotBracketed,
  ZeroMass,
};

const char* to_string(ErrorCode code) noexcept;
ErrorClass error_class(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorClass error_class() const noexcept { return ofi::error_class(code_); }

 private:
  ErrorCode code_;
};

/// Thrown when a rejection sampler cannot reach its acceptance floor.
class NegligibleAcceptance : public Error {
 public:
  NegligibleAcceptance(double estimated_mass, const std::string& what)
      : Error(ErrorCode::NegligibleAcceptance, what), estimated_mass_(estimated_mass) {}

  double estimated_mass() const noexcept { return estimated_mass_; }

 private:
  double estimated_mass_;
};

/// A Gibbs full conditional failed; carries the cycle it failed on.
class ConditionalFailure : public Error {
 public:
  ConditionalFailure(std::size_t cycle, std::size_t slot, const std::string& what)
      : Error(ErrorCode::ConditionalFailure, what), cycle_(cycle), slot_(slot) {}

  std::size_t cycle() const noexcept { return cycle_; }
  std::size_t slot() const noexcept { return slot_; }

 private:
  std::size_t cycle_;
  std::size_t slot_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace ofi
