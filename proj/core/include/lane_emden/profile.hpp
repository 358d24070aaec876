#pragma once

// Blow-up scales, rescaled profiles and the function f_p(r) = p|u_p(r)|^{p-1} r^2
// extracted from a computed nodal solution.

#include "lane_emden/radial_ode.hpp"

namespace lane_emden {

struct Scales {
  double eps_plus = 0.0;   ///< (p u_p(0)^{p-1})^{-1/2}
  double eps_minus = 0.0;  ///< (p |u_p(s_p)|^{p-1})^{-1/2}
  double log_eps_plus = 0.0;
  double log_eps_minus = 0.0;
  double ell_hat = 0.0;      ///< s_p / eps_minus
  double ratio_plus = 0.0;   ///< r_p / eps_plus
  double ratio_minus = 0.0;  ///< eps_minus / r_p
};

Scales scales(const RadialSolution& sol);

enum class Region { Positive, Negative };

/// z_p^+(x) = p (u_p(eps_+ x) - u_p(0)) / u_p(0)
/// z_p^-(x) = p (u_p(eps_- x) - u_p(s_p)) / u_p(s_p)
/// Throws Error(InvalidInput) unless 0 <= eps x <= 1.
double rescaled_profile(const RadialSolution& sol, Region region, double x);

/// V_p^+(x) = |u_p(eps_+ x) / u_p(0)|^{p-1},  V_p^-(x) = |u_p(eps_- x) / u_p(s_p)|^{p-1}.
double rescaled_potential(const RadialSolution& sol, Region region, double x);

struct FpAnalysis {
  double c_p = 0.0;  ///< argmax of f_p on (0, r_p)
  double d_p = 0.0;  ///< argmax of f_p on (r_p, 1)
  double log_c_p = 0.0;
  double log_d_p = 0.0;
  double max_plus = 0.0;
  double max_minus = 0.0;
  double sup_f = 0.0;
  double f_at_origin = 0.0;
  double f_at_nodal = 0.0;
  double f_at_boundary = 0.0;
};

/// Verifies that f_p rises then falls on each nodal interval (sign pattern of
/// the differences of log f_p on the solution grid) and refines both maxima
/// by golden-section search in log r to 1e-10. Throws Error(ShapeViolation)
/// when unimodality fails.
FpAnalysis analyze_fp(const RadialSolution& sol);

}  // namespace lane_emden
