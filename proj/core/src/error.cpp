#include "lane_emden/error.hpp"

namespace lane_emden {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid_input";
    case ErrorKind::StepUnderflow: return "step_underflow";
    case ErrorKind::DegenerateZero: return "degenerate_zero";
    case ErrorKind::HorizonTooShort: return "horizon_too_short";
    case ErrorKind::Supercritical: return "supercritical";
    case ErrorKind::ShapeViolation: return "shape_violation";
    case ErrorKind::NoConvergence: return "no_convergence";
    case ErrorKind::Unstable: return "unstable";
  }
  return "unknown";
}

}  // namespace lane_emden
