#include "lane_emden/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "lane_emden/error.hpp"

namespace lane_emden {

namespace {

// Map the rescaled variable x to ρ = λ eps x, validating eps x <= 1.
double unit_radius(const RadialSolution& sol, double log_eps, double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw Error(ErrorKind::InvalidInput, "rescaled variable must be finite and >= 0");
  }
  if (x == 0.0) return 0.0;
  const double log_r = log_eps + std::log(x);
  if (log_r > 1e-14) {
    std::ostringstream msg;
    msg << "x=" << x << " maps outside the unit ball (eps x = " << std::exp(log_r) << ")";
    throw Error(ErrorKind::InvalidInput, msg.str());
  }
  return std::exp(sol.log_lambda + std::min(log_r, 0.0));
}

double log_eps(const Scales& s, Region region) {
  return region == Region::Positive ? s.log_eps_plus : s.log_eps_minus;
}

// Golden-section maximisation of f on [a, b].
template <class F>
std::pair<double, double> golden_max(F&& f, double a, double b, double tol) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a);
  double x2 = a + g * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

struct Peak {
  double log_r = 0.0;
  double log_f = 0.0;
};

// Checks that the sampled values rise then fall, and refines the peak.
Peak unimodal_peak(const RadialSolution& sol, const std::vector<double>& log_r,
                   const char* label) {
  std::vector<double> lf(log_r.size());
  for (std::size_t i = 0; i < log_r.size(); ++i) lf[i] = sol.log_fp_at(log_r[i]);

  std::size_t top = 0;
  for (std::size_t i = 1; i < lf.size(); ++i)
    if (lf[i] > lf[top]) top = i;

  for (std::size_t i = 1; i < lf.size(); ++i) {
    const double d = lf[i] - lf[i - 1];
    const double slack = 1e-12 * (1.0 + std::abs(lf[i]));
    const bool bad = (i <= top) ? (d < -slack) : (d > slack);
    if (bad) {
      std::ostringstream msg;
      msg << "f_p is not unimodal on the " << label << " nodal interval near r=exp("
          << log_r[i] << ")";
      throw Error(ErrorKind::ShapeViolation, msg.str());
    }
  }
  const double lo = log_r[top == 0 ? 0 : top - 1];
  const double hi = log_r[std::min(top + 1, log_r.size() - 1)];
  auto [t, v] = golden_max([&sol](double x) { return sol.log_fp_at(x); }, lo, hi, 1e-10);
  return {t, v};
}

}  // namespace

Scales scales(const RadialSolution& sol) {
  Scales s;
  const double log_p = std::log(sol.p);
  s.log_eps_plus = -0.5 * (log_p + (sol.p - 1.0) * std::log(sol.u0));
  s.log_eps_minus = -0.5 * (log_p + (sol.p - 1.0) * std::log(std::abs(sol.u_min)));
  s.eps_plus = std::exp(s.log_eps_plus);
  s.eps_minus = std::exp(s.log_eps_minus);
  s.ell_hat = std::exp(std::log(sol.s_p) - s.log_eps_minus);
  s.ratio_plus = std::exp(std::log(sol.r_p) - s.log_eps_plus);
  s.ratio_minus = std::exp(s.log_eps_minus - std::log(sol.r_p));
  return s;
}

double rescaled_profile(const RadialSolution& sol, Region region, double x) {
  const Scales s = scales(sol);
  const double rho = unit_radius(sol, log_eps(s, region), x);
  if (region == Region::Positive) {
    const double r_start = sol.trajectory().config.r_start;
    if (rho < r_start) return -sol.p * rho * rho / (2.0 * sol.N);
    return sol.p * (sol.unit_value(rho) - 1.0);
  }
  const double unit_min = sol.u_min / sol.u0;
  return sol.p * (sol.unit_value(rho) - unit_min) / unit_min;
}

double rescaled_potential(const RadialSolution& sol, Region region, double x) {
  const Scales s = scales(sol);
  const double rho = unit_radius(sol, log_eps(s, region), x);
  const double log_ref = region == Region::Positive ? 0.0 : std::log(std::abs(sol.u_min / sol.u0));
  return std::exp((sol.p - 1.0) * (sol.unit_log_abs(rho) - log_ref));
}

FpAnalysis analyze_fp(const RadialSolution& sol) {
  const Trajectory& traj = sol.trajectory();
  const double rho1 = traj.zeros.at(0).r;
  const double rho2 = traj.zeros.at(1).r;

  std::vector<double> pos;
  std::vector<double> neg;
  auto add = [&](double rho) {
    const double t = std::log(rho) - sol.log_lambda;
    if (rho < rho1) pos.push_back(t);
    else if (rho > rho1 && rho < rho2) neg.push_back(t);
  };
  for (const auto& step : traj.dense.steps()) {
    add(step.r0);
    add(step.r0 + 0.5 * step.h);
  }
  if (pos.size() < 3 || neg.size() < 3)
    throw Error(ErrorKind::ShapeViolation, "solution grid too coarse to analyse f_p");

  const Peak plus = unimodal_peak(sol, pos, "positive");
  const Peak minus = unimodal_peak(sol, neg, "negative");

  FpAnalysis fa;
  fa.log_c_p = plus.log_r;
  fa.log_d_p = minus.log_r;
  fa.c_p = std::exp(plus.log_r);
  fa.d_p = std::exp(minus.log_r);
  fa.max_plus = std::exp(plus.log_f);
  fa.max_minus = std::exp(minus.log_f);
  fa.sup_f = std::max(fa.max_plus, fa.max_minus);
  fa.f_at_origin = 0.0;
  fa.f_at_nodal = sol.fp(sol.r_p);
  fa.f_at_boundary = sol.fp(1.0);
  return fa;
}

}  // namespace lane_emden
