#pragma once

// Radial Lane-Emden equation  -u'' - (N-1)/r u' = |u|^{p-1} u  on (0, R):
// initial value problem with zero detection, and the two-nodal-region
// solution on the unit ball obtained by shooting from u(0)=1 and rescaling.

#include <cstddef>
#include <memory>
#include <vector>

#include "lane_emden/dopri.hpp"

namespace lane_emden {

/// sign(u) |u|^q evaluated as exp(q log|u|) so that q ~ 10^3 neither overflows
/// nor underflows prematurely. Returns 0 at u == 0.
double signed_power(double u, double q);

/// log(|u|^q) = q log|u|; -inf at u == 0.
double log_abs_power(double u, double q);

struct IvpConfig {
  double p = 3.0;
  int N = 2;
  double amplitude = 1.0;  ///< u(0)
  double r_start = 1e-6;
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;
  double r_max = 1e300;
  /// Stop right after this many zero crossings (0 = never stop on zeros).
  int stop_after_zeros = 2;

  void validate() const;
};

enum class CrossingDirection { Downward, Upward };

struct ZeroCrossing {
  double r = 0.0;
  double slope = 0.0;  ///< u'(r)
  CrossingDirection direction = CrossingDirection::Downward;
};

/// Output of integrate_ivp. Below r_start the solution is represented by the
/// regular Taylor seed u(r) = a - |a|^{p-1} a r^2 / (2N).
class Trajectory {
 public:
  IvpConfig config;
  std::vector<double> nodes;  ///< accepted step ends, strictly increasing
  std::vector<double> u;
  std::vector<double> du;
  std::vector<ZeroCrossing> zeros;
  DenseOutput dense;

  double r_begin() const { return nodes.front(); }
  double r_end() const { return nodes.back(); }

  /// u and u' at r in [0, r_end()].
  double value(double r) const;
  double derivative(double r) const;

  /// Scaled residual of the ODE reconstructed from the dense output at r:
  ///   |u'' + (N-1)u'/r + |u|^{p-1}u| / (|u''| + (N-1)|u'|/r + |u|^p)
  /// where u'' is the derivative of the interpolant of u'. Zero for u == 0.
  double residual(double r) const;

  /// Supremum of residual() over step midpoints and quarter points in [r_lo, r_hi].
  double max_residual(double r_lo, double r_hi) const;
  double max_residual() const { return max_residual(r_begin(), r_end()); }
};

/// Integrates the radial IVP from the Taylor seed at r_start to r_max or until
/// config.stop_after_zeros sign changes. Throws Error(DegenerateZero) for a
/// tangential zero and Error(StepUnderflow) when the integrator fails.
Trajectory integrate_ivp(const IvpConfig& cfg);

struct NodalOptions {
  double r_start = 1e-6;
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;
  double r_max = 1e300;
};

/// Radial solution of -Δu = |u|^{p-1}u in the unit ball with two nodal regions
/// and u(0) > 0. Represented as u_p(r) = A u_1(λ r), where u_1 is the
/// trajectory with u_1(0) = 1 and λ its second zero, A = λ^{2/(p-1)}.
class RadialSolution {
 public:
  double p = 0.0;
  int N = 2;
  double log_lambda = 0.0;  ///< log of the radial scale λ
  double u0 = 0.0;          ///< u_p(0) = ||u_p||_inf
  double r_p = 0.0;         ///< nodal radius
  double s_p = 0.0;         ///< location of the negative minimum
  double u_min = 0.0;       ///< u_p(s_p) < 0
  double boundary_value = 0.0;  ///< u_p(1)
  std::vector<double> grid;     ///< radii in [0, 1], starting at 0
  std::vector<double> u;
  std::vector<double> du;

  double lambda() const;
  double amplitude() const { return u0; }

  /// Off-grid evaluation through the dense output of the underlying trajectory.
  double value(double r) const;
  double derivative(double r) const;
  double residual(double r) const;
  double max_residual() const;

  /// f_p(r) = p |u_p(r)|^{p-1} r^2 and its logarithm (-inf at zeros of u_p).
  double fp(double r) const;
  double log_fp(double r) const;
  /// log f_p at r = exp(log_r); usable where r itself underflows.
  double log_fp_at(double log_r) const;

  /// Values of the unit-amplitude trajectory at ρ = λ r (the scale-free form
  /// used by the profile module). value() == u0 * unit_value(λ r).
  double unit_value(double rho) const;
  double unit_derivative(double rho) const;
  /// log|u_1(ρ)|.
  double unit_log_abs(double rho) const;
  const Trajectory& trajectory() const { return *trajectory_; }

  void attach(std::shared_ptr<const Trajectory> t) { trajectory_ = std::move(t); }

 private:
  std::shared_ptr<const Trajectory> trajectory_;
};

/// Builds the two-nodal-region radial solution. `tol` bounds |u_p(1)|.
/// Throws Error(InvalidInput) for p <= 1, Error(Supercritical) for
/// N >= 3 and p >= (N+2)/(N-2), Error(HorizonTooShort) when the second zero
/// is not found before r_max, Error(ShapeViolation) if a qualitative property
/// of the two-region profile fails.
RadialSolution solve_nodal(double p, int N, double tol = 1e-9, const NodalOptions& opts = {});

}  // namespace lane_emden
