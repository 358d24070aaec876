#pragma once

#include <stdexcept>
#include <string>

namespace lane_emden {

/// Failure categories raised by the solvers. The CLI maps these onto exit codes.
enum class ErrorKind {
  InvalidInput,     ///< precondition violated by the caller
  StepUnderflow,    ///< adaptive integrator could not satisfy the tolerance
  DegenerateZero,   ///< tangential zero of the trajectory (|u| and |u'| both ~ 0)
  HorizonTooShort,  ///< requested zero not reached before r_max
  Supercritical,    ///< p >= (N+2)/(N-2) for N >= 3
  ShapeViolation,   ///< a qualitative property of the solution failed (monotonicity, unimodality)
  NoConvergence,    ///< bisection / inverse iteration did not converge
  Unstable,         ///< a count changed under annulus or grid refinement
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace lane_emden
