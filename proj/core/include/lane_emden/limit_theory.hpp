#pragma once

// Closed-form limit objects (U, Z_l, eta_1, V^+-) and the quadratures that
// check the limit weighted eigenvalue -(N-1), the Liouville mass and the
// cut-off test function bound for beta_1.

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "lane_emden/radial_ode.hpp"

namespace lane_emden {

inline constexpr double kReferenceEll = 7.1979;

struct LimitConstants {
  double ell = kReferenceEll;
  double gamma = 0.0;  ///< sqrt(2 l^2 + 4) - 2
  double delta = 0.0;  ///< ((gamma + 4) / gamma)^{1/(gamma+2)} l
  double H = 0.0;      ///< -int_0^l e^{Z_l(s)} s ds, by quadrature
  int morse_Z = 0;     ///< 1 + 2 floor(sqrt(2 l^2 + 4) / 2)
  int kernel_Z = 1;
};

LimitConstants limit_constants(double ell = kReferenceEll);

enum class ProfileKind { U, Z_ell, Eta1, V_plus, V_minus };

struct LimitProfile {
  ProfileKind kind = ProfileKind::U;
  int N = 2;
  LimitConstants constants = limit_constants();
};

/// Throws Error(InvalidInput) for x < 0, and for Z_ell at x = 0.
double eval_profile(const LimitProfile& profile, double x);

/// e^{Z_l(x)} without forming the logarithm.
double exp_Z(const LimitConstants& c, double x);

/// eta_1 and its first two radial derivatives.
struct RadialJet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};
RadialJet eta1_jet(int N, double r);

/// Potential V of the limit weighted operator: e^U for N = 2, the critical
/// Sobolev linearisation for N >= 3.
double limit_potential(int N, double r);

/// Radial function given by value and derivative.
struct RadialFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

RadialFunction eta1_function(int N);

/// int_0^inf f(r) dr on a log grid, with power-law tails fitted at both ends.
struct HalfLineIntegral {
  double value = 0.0;       ///< body + tails
  double body = 0.0;        ///< quadrature over [r_lo, r_hi]
  double tail_low = 0.0;    ///< estimate of int_0^{r_lo}
  double tail_high = 0.0;   ///< estimate of int_{r_hi}^inf
  double exponent_low = 0.0;
  double exponent_high = 0.0;
};

/// Throws Error(InvalidInput) if a fitted tail is not integrable.
HalfLineIntegral integrate_half_line(const std::function<double(double)>& f, double r_lo,
                                     double r_hi, double rel_tol = 1e-12);

/// Integral over R^2 of a radial density, 2 pi int_0^inf f(r) r dr.
HalfLineIntegral plane_integral(const std::function<double(double)>& f, double r_hi = 1e3);

/// int_{R^2} e^U dx with the quadrature cut at r_hi.
HalfLineIntegral liouville_mass(double r_hi = 1e3);

/// R*(v) = int (v'^2 - V v^2) r^{N-1} dr / int v^2 r^{N-3} dr.
/// Throws Error(InvalidInput) if the denominator vanishes.
double rayleigh_limit(const RadialFunction& v, int N, double r_lo = 1e-8, double r_hi = 1e8);

/// sup over log-spaced r in [r_lo, r_hi] of |-eta'' - (N-1) eta'/r - V eta - lambda eta / r^2|.
double limit_residual(int N, double lambda, double r_lo = 1e-3, double r_hi = 1e3,
                      int samples = 2001);

enum class QuotientMode { Limit, FiniteP };

struct TestFunctionSpec {
  double R = 10.0;
  /// Core scale delta * eps_-; 0 selects it from the solution (FiniteP) or
  /// delta (Limit, where eps_- = 1).
  double scale = 0.0;
  /// Support must stay above this radius (FiniteP); -inf disables the check.
  double log_inner = -std::numeric_limits<double>::infinity();
  LimitConstants constants = limit_constants();
};

/// psi(r) = S / (1 + S^2), S = (r / scale)^{(2+gamma)/2}.
double core_profile(const LimitConstants& c, double scale, double r);

/// The four-branch cut-off of psi, continuous at every breakpoint.
double test_function(const TestFunctionSpec& spec, double scale, double r);

/// Parts divided by 2 pi. N2, N3 are the gradient energies of the two ramps,
/// P2, P3 their potential energies, which the split bound drops.
struct QuotientParts {
  double N1 = 0.0, N2 = 0.0, N3 = 0.0;
  double P2 = 0.0, P3 = 0.0;
  double D1 = 0.0, D2 = 0.0, D3 = 0.0;
};

struct TestFunctionResult {
  QuotientMode mode = QuotientMode::Limit;
  double scale = 0.0;
  double R = 0.0;
  /// Rayleigh quotient of the test function (upper bound for beta_1).
  double quotient = 0.0;
  /// (N1 + N2 + N3) / (D1 + D2 + D3); never below `quotient`.
  double split_quotient = 0.0;
  double target = 0.0;  ///< -(l^2 + 2) / 2
  QuotientParts parts;
  QuotientParts closed_form;  ///< limit values; P2, P3 left at 0
  /// Closed-form value of N3 as commonly printed, 3 X / (1 + X)^2.
  double N3_printed = 0.0;
};

/// FiniteP requires sol (N = 2). Throws Error(InvalidInput) when the
/// breakpoints are not ordered or the support leaves the annulus.
TestFunctionResult test_function_quotient(const TestFunctionSpec& spec, QuotientMode mode,
                                          const RadialSolution* sol = nullptr);

/// sum_j c_j r^{a_j} / (1 + (r / s_j)^{b_j})^{e_j}; regular at 0 and decaying
/// at infinity fast enough for both Rayleigh integrals to converge.
struct RandomRadialFunction {
  struct Term {
    double c, a, s, b, e;
  };
  std::vector<Term> terms;
  double value(double r) const;
  double derivative(double r) const;
  RadialFunction as_function() const;
};

std::vector<RandomRadialFunction> random_test_functions(int count, std::uint64_t seed, int N);

inline constexpr std::uint64_t kPropertySeed = 0x5eed2a11;

}  // namespace lane_emden
