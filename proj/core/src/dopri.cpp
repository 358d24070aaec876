#include "lane_emden/dopri.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lane_emden/error.hpp"

namespace lane_emden {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Continuous extension.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
  State out = y;
  for (std::size_t c = 0; c < out.size(); ++c) {
    double acc = 0.0;
    for (const auto& [w, k] : terms) acc += w * (*k)[c];
    out[c] += h * acc;
  }
  return out;
}

}  // namespace

State DenseStep::value(double r) const {
  const double th = (r - r0) / h;
  const double th1 = 1.0 - th;
  State y{};
  for (std::size_t c = 0; c < y.size(); ++c) {
    y[c] = coef[0][c] +
           th * (coef[1][c] + th1 * (coef[2][c] + th * (coef[3][c] + th1 * coef[4][c])));
  }
  return y;
}

State DenseStep::derivative(double r) const {
  const double th = (r - r0) / h;
  const double th1 = 1.0 - th;
  State d{};
  for (std::size_t c = 0; c < d.size(); ++c) {
    const double q = coef[3][c] + th1 * coef[4][c];
    const double dq = -coef[4][c];
    const double p = coef[2][c] + th * q;
    const double dp = q + th * dq;
    const double s = coef[1][c] + th1 * p;
    const double ds = -p + th1 * dp;
    d[c] = (s + th * ds) / h;
  }
  return d;
}

std::size_t DenseOutput::locate(double r) const {
  // First step whose right end is >= r.
  auto it = std::lower_bound(steps_.begin(), steps_.end(), r,
                             [](const DenseStep& s, double x) { return s.r1() < x; });
  if (it == steps_.end()) return steps_.size() - 1;
  return static_cast<std::size_t>(it - steps_.begin());
}

IntegrationStats integrate_dopri(const Rhs& rhs, double r0, const State& y0, double r_end,
                                 const StepControl& ctl, const StepObserver& observer) {
  IntegrationStats stats;
  double r = r0;
  State y = y0;
  State k1 = rhs(r, y);

  double h = ctl.initial_step;
  if (h <= 0.0) h = std::max(1e-3 * std::abs(r0), 1e-8);
  h = std::min(h, r_end - r);

  const double eps = std::numeric_limits<double>::epsilon();
  while (r < r_end) {
    if (stats.accepted + stats.rejected >= ctl.max_steps) {
      std::ostringstream msg;
      msg << "step budget exhausted at r=" << r;
      throw Error(ErrorKind::StepUnderflow, msg.str());
    }
    if (h < 16.0 * eps * std::abs(r)) {
      std::ostringstream msg;
      msg << "step size underflow at r=" << r << " (h=" << h << ")";
      throw Error(ErrorKind::StepUnderflow, msg.str());
    }
    const bool last = (r + h >= r_end);
    if (last) h = r_end - r;

    const State k2 = rhs(r + c2 * h, axpy(y, h, {{a21, &k1}}));
    const State k3 = rhs(r + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
    const State k4 = rhs(r + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 =
        rhs(r + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State k6 = rhs(r + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4},
                                            {a65, &k5}}));
    const State y_new =
        axpy(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
    const State k7 = rhs(r + h, y_new);

    double err = 0.0;
    for (std::size_t c = 0; c < y.size(); ++c) {
      double atol = ctl.abs_tol;
      if (c == 1 && ctl.derivative_scale) atol *= ctl.derivative_scale(r + h);
      const double sc = atol + ctl.rel_tol * std::max(std::abs(y[c]), std::abs(y_new[c]));
      const double e =
          h * (e1 * k1[c] + e3 * k3[c] + e4 * k4[c] + e5 * k5[c] + e6 * k6[c] + e7 * k7[c]);
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / static_cast<double>(y.size()));
    if (!std::isfinite(err)) err = 1e10;

    if (err <= 1.0) {
      DenseStep step;
      step.r0 = r;
      step.h = h;
      for (std::size_t c = 0; c < y.size(); ++c) {
        const double ydiff = y_new[c] - y[c];
        const double bspl = h * k1[c] - ydiff;
        step.coef[0][c] = y[c];
        step.coef[1][c] = ydiff;
        step.coef[2][c] = bspl;
        step.coef[3][c] = ydiff - h * k7[c] - bspl;
        step.coef[4][c] =
            h * (d1 * k1[c] + d3 * k3[c] + d4 * k4[c] + d5 * k5[c] + d6 * k6[c] + d7 * k7[c]);
      }
      ++stats.accepted;
      r = last ? r_end : r + h;
      y = y_new;
      k1 = k7;
      if (observer && !observer(step, y)) {
        stats.stopped_by_observer = true;
        break;
      }
      const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h *= fac;
    } else {
      ++stats.rejected;
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
    }
  }
  stats.r_end = r;
  stats.y_end = y;
  return stats;
}

}  // namespace lane_emden
