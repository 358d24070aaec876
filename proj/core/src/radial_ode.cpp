#include "lane_emden/radial_ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lane_emden/error.hpp"

namespace lane_emden {

namespace {

constexpr double kTangencyTol = 1e-10;

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Bisection on a scalar function over [lo, hi] with f(lo) and f(hi) of
// opposite sign (or f(hi) == 0). Runs until the bracket stops shrinking.
template <class F>
double bisect_root(F&& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (sign_of(fm) == sign_of(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double signed_power(double u, double q) {
  if (u == 0.0) return 0.0;
  const double a = std::abs(u);
  const double mag = std::exp(q * std::log(a));
  return u > 0.0 ? mag : -mag;
}

double log_abs_power(double u, double q) {
  if (u == 0.0) return -std::numeric_limits<double>::infinity();
  return q * std::log(std::abs(u));
}

void IvpConfig::validate() const {
  std::ostringstream msg;
  if (!(p > 0.0)) msg << "p must be positive; ";
  if (N < 2) msg << "N must be >= 2; ";
  if (!(r_start > 0.0)) msg << "r_start must be positive; ";
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) msg << "tolerances must be positive; ";
  if (!(r_max > r_start)) msg << "r_max must exceed r_start; ";
  if (stop_after_zeros < 0) msg << "stop_after_zeros must be >= 0; ";
  if (!std::isfinite(amplitude)) msg << "amplitude must be finite; ";
  const auto s = msg.str();
  if (!s.empty()) throw Error(ErrorKind::InvalidInput, "invalid IvpConfig: " + s);
}

double Trajectory::value(double r) const {
  if (r < config.r_start) {
    const double a = config.amplitude;
    return a - signed_power(a, config.p) * r * r / (2.0 * config.N);
  }
  return dense.value(r)[0];
}

double Trajectory::derivative(double r) const {
  if (r < config.r_start) {
    const double a = config.amplitude;
    return -signed_power(a, config.p) * r / config.N;
  }
  return dense.value(r)[1];
}

double Trajectory::residual(double r) const {
  if (r < config.r_start || dense.empty()) return 0.0;
  const State y = dense.value(r);
  const State dy = dense.derivative(r);
  const double damping = (config.N - 1) * y[1] / r;
  const double source = signed_power(y[0], config.p);
  const double res = dy[1] + damping + source;
  const double scale = std::abs(dy[1]) + std::abs(damping) + std::abs(source);
  if (scale == 0.0) return 0.0;
  return std::abs(res) / scale;
}

double Trajectory::max_residual(double r_lo, double r_hi) const {
  double worst = 0.0;
  for (const auto& step : dense.steps()) {
    if (step.r1() < r_lo || step.r0 > r_hi) continue;
    for (double th : {0.25, 0.5, 0.75}) {
      const double r = step.r0 + th * step.h;
      if (r < r_lo || r > r_hi) continue;
      worst = std::max(worst, residual(r));
    }
  }
  return worst;
}

Trajectory integrate_ivp(const IvpConfig& cfg) {
  cfg.validate();

  Trajectory traj;
  traj.config = cfg;

  const double p = cfg.p;
  const double dim_m1 = cfg.N - 1;
  const double a = cfg.amplitude;
  const double r0 = cfg.r_start;
  const double a_pow = signed_power(a, p);
  const State y0{a - a_pow * r0 * r0 / (2.0 * cfg.N), -a_pow * r0 / cfg.N};

  Rhs rhs = [p, dim_m1](double r, const State& y) -> State {
    return {y[1], -dim_m1 * y[1] / r - signed_power(y[0], p)};
  };

  StepControl ctl;
  ctl.abs_tol = cfg.abs_tol;
  ctl.rel_tol = cfg.rel_tol;
  // Far from the origin u' ~ 1/r spans many decades; control r u' instead.
  ctl.derivative_scale = [](double r) { return r > 1.0 ? 1.0 / r : 1.0; };
  ctl.initial_step = r0;

  traj.nodes.push_back(r0);
  traj.u.push_back(y0[0]);
  traj.du.push_back(y0[1]);

  const double amp_scale = std::max(std::abs(a), std::numeric_limits<double>::min());

  StepObserver observer = [&](const DenseStep& step, const State& y_end) -> bool {
    traj.dense.push(step);
    const double u_prev = traj.u.back();
    traj.nodes.push_back(step.r1());
    traj.u.push_back(y_end[0]);
    traj.du.push_back(y_end[1]);

    const bool crosses = (u_prev > 0.0 && y_end[0] <= 0.0) || (u_prev < 0.0 && y_end[0] >= 0.0);
    if (!crosses) return true;

    double z = step.r1();
    if (y_end[0] != 0.0) {
      z = bisect_root([&step](double r) { return step.value(r)[0]; }, step.r0, step.r1());
    }
    const double slope = step.value(z)[1];
    if (std::abs(z * slope) < kTangencyTol * amp_scale) {
      std::ostringstream msg;
      msg << "tangential zero at r=" << z << " (u'=" << slope << ")";
      throw Error(ErrorKind::DegenerateZero, msg.str());
    }
    traj.zeros.push_back({z, slope, u_prev > 0.0 ? CrossingDirection::Downward
                                                 : CrossingDirection::Upward});
    return cfg.stop_after_zeros == 0 ||
           static_cast<int>(traj.zeros.size()) < cfg.stop_after_zeros;
  };

  integrate_dopri(rhs, r0, y0, cfg.r_max, ctl, observer);
  return traj;
}

// ---------------------------------------------------------------------------

double RadialSolution::lambda() const { return std::exp(log_lambda); }

double RadialSolution::unit_value(double rho) const { return trajectory_->value(rho); }

double RadialSolution::unit_derivative(double rho) const { return trajectory_->derivative(rho); }

double RadialSolution::unit_log_abs(double rho) const {
  const auto& cfg = trajectory_->config;
  if (rho < cfg.r_start) return std::log1p(-rho * rho / (2.0 * cfg.N));
  const double v = trajectory_->value(rho);
  if (v == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(std::abs(v));
}

double RadialSolution::value(double r) const { return u0 * unit_value(lambda() * r); }

double RadialSolution::derivative(double r) const {
  const double lam = lambda();
  return u0 * lam * unit_derivative(lam * r);
}

double RadialSolution::residual(double r) const { return trajectory_->residual(lambda() * r); }

double RadialSolution::max_residual() const {
  return trajectory_->max_residual(trajectory_->r_begin(), lambda());
}

double RadialSolution::log_fp(double r) const {
  if (r <= 0.0) return -std::numeric_limits<double>::infinity();
  return log_fp_at(std::log(r));
}

double RadialSolution::log_fp_at(double log_r) const {
  // p |u_p(r)|^{p-1} r^2 = p |u_1(ρ)|^{p-1} ρ^2 with ρ = λ r.
  const double log_rho = log_lambda + log_r;
  return std::log(p) + (p - 1.0) * unit_log_abs(std::exp(log_rho)) + 2.0 * log_rho;
}

double RadialSolution::fp(double r) const { return std::exp(log_fp(r)); }

RadialSolution solve_nodal(double p, int N, double tol, const NodalOptions& opts) {
  if (!(p > 1.0)) throw Error(ErrorKind::InvalidInput, "solve_nodal requires p > 1");
  if (N < 2) throw Error(ErrorKind::InvalidInput, "solve_nodal requires N >= 2");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidInput, "tolerance must be positive");
  if (N >= 3 && p >= static_cast<double>(N + 2) / (N - 2)) {
    std::ostringstream msg;
    msg << "p=" << p << " is not below the critical exponent (N+2)/(N-2) for N=" << N;
    throw Error(ErrorKind::Supercritical, msg.str());
  }

  IvpConfig cfg;
  cfg.p = p;
  cfg.N = N;
  cfg.amplitude = 1.0;
  cfg.r_start = opts.r_start;
  cfg.abs_tol = opts.abs_tol;
  cfg.rel_tol = opts.rel_tol;
  cfg.r_max = opts.r_max;
  cfg.stop_after_zeros = 2;

  auto traj = std::make_shared<Trajectory>(integrate_ivp(cfg));
  if (traj->zeros.size() < 2) {
    std::ostringstream msg;
    msg << "second zero not reached before r_max=" << cfg.r_max << " (found "
        << traj->zeros.size() << ")";
    throw Error(ErrorKind::HorizonTooShort, msg.str());
  }

  const double rho1 = traj->zeros[0].r;
  const double rho2 = traj->zeros[1].r;

  RadialSolution sol;
  sol.p = p;
  sol.N = N;
  sol.log_lambda = std::log(rho2);
  sol.u0 = std::exp(2.0 * sol.log_lambda / (p - 1.0));
  sol.r_p = rho1 / rho2;
  sol.attach(traj);

  // Shape checks on the accepted nodes.
  const auto& nodes = traj->nodes;
  std::size_t min_step = traj->dense.size();
  int du_sign_changes = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double r = nodes[i];
    if (r > rho2) break;
    if (r < rho1) {
      if (!(traj->u[i] > 0.0) || !(traj->du[i] < 0.0))
        throw Error(ErrorKind::ShapeViolation, "u_p not positive and decreasing before r_p");
    } else if (r > rho1 && r < rho2) {
      if (!(traj->u[i] < 0.0))
        throw Error(ErrorKind::ShapeViolation, "u_p not negative on (r_p, 1)");
      if (i > 0 && nodes[i - 1] > rho1 && sign_of(traj->du[i]) != sign_of(traj->du[i - 1])) {
        ++du_sign_changes;
        if (!(traj->du[i - 1] < 0.0))
          throw Error(ErrorKind::ShapeViolation, "local maximum of u_p inside (r_p, 1)");
        min_step = i - 1;
      }
    }
  }
  if (du_sign_changes != 1 || min_step >= traj->dense.size())
    throw Error(ErrorKind::ShapeViolation, "u_p has no unique interior minimum in (r_p, 1)");

  const auto& step = traj->dense.step(min_step);
  const double rho_s =
      bisect_root([&step](double r) { return step.value(r)[1]; }, step.r0, step.r1());
  sol.s_p = rho_s / rho2;
  sol.u_min = sol.u0 * traj->value(rho_s);
  sol.boundary_value = sol.u0 * traj->value(rho2);

  if (!(std::abs(sol.u_min) < sol.u0))
    throw Error(ErrorKind::ShapeViolation, "|u_p(s_p)| must stay below u_p(0)");
  if (!(std::abs(sol.boundary_value) < tol)) {
    std::ostringstream msg;
    msg << "|u_p(1)|=" << std::abs(sol.boundary_value) << " exceeds tolerance " << tol;
    throw Error(ErrorKind::ShapeViolation, msg.str());
  }

  sol.grid.push_back(0.0);
  sol.u.push_back(sol.u0);
  sol.du.push_back(0.0);
  for (std::size_t i = 0; i < nodes.size() && nodes[i] < rho2; ++i) {
    sol.grid.push_back(nodes[i] / rho2);
    sol.u.push_back(sol.u0 * traj->u[i]);
    sol.du.push_back(sol.u0 * rho2 * traj->du[i]);
  }
  sol.grid.push_back(1.0);
  sol.u.push_back(sol.boundary_value);
  sol.du.push_back(sol.u0 * rho2 * traj->derivative(rho2));
  return sol;
}

}  // namespace lane_emden
