#include "lane_emden/limit_theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lane_emden/error.hpp"
#include "lane_emden/profile.hpp"

namespace lane_emden {

namespace {

using boost::math::quadrature::gauss_kronrod;

// Adaptive Gauss-Kronrod on [a, b], cut into pieces of length <= piece so
// that localised features are not missed; pieces are summed in order.
template <class F>
double integrate_pieces(F&& f, double a, double b, double rel_tol, double piece = 2.0) {
  if (!(b > a)) return 0.0;
  const int n = std::max(1, static_cast<int>(std::ceil((b - a) / piece)));
  const double w = (b - a) / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double lo = a + i * w;
    const double hi = (i + 1 == n) ? b : lo + w;
    sum += gauss_kronrod<double, 31>::integrate(f, lo, hi, 15, rel_tol);
  }
  return sum;
}

double critical_stiffness(int N) { return N == 2 ? 8.0 : static_cast<double>(N) * (N - 2); }

}  // namespace

LimitConstants limit_constants(double ell) {
  if (!(ell > 0.0) || !std::isfinite(ell))
    throw Error(ErrorKind::InvalidInput, "ell must be positive");
  LimitConstants c;
  c.ell = ell;
  const double root = std::sqrt(2.0 * ell * ell + 4.0);
  c.gamma = root - 2.0;
  c.delta = std::pow((c.gamma + 4.0) / c.gamma, 1.0 / (c.gamma + 2.0)) * ell;

  // s = tau^{2/(gamma+2)} turns e^Z s ds into 4 (gamma+2) D tau / (D + tau^2)^2 dtau.
  const double g2 = c.gamma + 2.0;
  const double D = std::pow(c.delta, g2);
  const double tau_max = std::pow(ell, 0.5 * g2);
  auto integrand = [g2, D](double tau) {
    const double q = D + tau * tau;
    return 4.0 * g2 * D * tau / (q * q);
  };
  c.H = -integrate_pieces(integrand, 0.0, tau_max, 1e-14, tau_max / 8.0);

  // floor(root / 2) without trusting the rounding of the square root.
  const double target = 2.0 * ell * ell + 4.0;
  long m = static_cast<long>(std::floor(root / 2.0));
  while (4.0 * (m + 1) * (m + 1) <= target) ++m;
  while (m > 0 && 4.0 * m * m > target) --m;
  c.morse_Z = 1 + 2 * static_cast<int>(m);
  c.kernel_Z = 1;
  return c;
}

double exp_Z(const LimitConstants& c, double x) {
  if (!(x >= 0.0)) throw Error(ErrorKind::InvalidInput, "radius must be >= 0");
  const double g2 = c.gamma + 2.0;
  // Ratios against delta keep the powers in range.
  const double s = x / c.delta;
  const double sg = std::pow(s, c.gamma);
  const double q = 1.0 + s * sg * s;
  return 2.0 * g2 * g2 * sg / (c.delta * c.delta * q * q);
}

double limit_potential(int N, double r) {
  if (N < 2) throw Error(ErrorKind::InvalidInput, "N must be >= 2");
  const double c = critical_stiffness(N);
  const double D = 1.0 + r * r / c;
  const double amp = N == 2 ? 1.0 : static_cast<double>(N + 2) / (N - 2);
  return amp / (D * D);
}

RadialJet eta1_jet(int N, double r) {
  if (N < 2) throw Error(ErrorKind::InvalidInput, "N must be >= 2");
  // eta = r D^{-N/2}, D = 1 + r^2 / c.
  const double c = critical_stiffness(N);
  const double D = 1.0 + r * r / c;
  const double k = 0.5 * N;
  const double Dk1 = std::pow(D, -k - 1.0);
  const double inner = 1.0 - (N - 1) * r * r / c;
  RadialJet j;
  j.value = r * Dk1 * D;
  j.d1 = Dk1 * inner;
  j.d2 = (-k - 1.0) * (2.0 * r / c) * (Dk1 / D) * inner + Dk1 * (-2.0 * (N - 1) * r / c);
  return j;
}

double eval_profile(const LimitProfile& profile, double x) {
  if (!(x >= 0.0) || !std::isfinite(x))
    throw Error(ErrorKind::InvalidInput, "profile argument must be finite and >= 0");
  const int N = profile.N;
  switch (profile.kind) {
    case ProfileKind::U:
      if (N == 2) return -2.0 * std::log1p(x * x / 8.0);
      return std::pow(1.0 + x * x / critical_stiffness(N), -0.5 * (N - 2));
    case ProfileKind::Z_ell:
      if (x == 0.0) throw Error(ErrorKind::InvalidInput, "Z_ell is singular at 0");
      return std::log(exp_Z(profile.constants, x));
    case ProfileKind::Eta1:
      return eta1_jet(N, x).value;
    case ProfileKind::V_plus:
      return limit_potential(N, x);
    case ProfileKind::V_minus:
      return exp_Z(profile.constants, x);
  }
  throw Error(ErrorKind::InvalidInput, "unknown profile kind");
}

RadialFunction eta1_function(int N) {
  return {[N](double r) { return eta1_jet(N, r).value; },
          [N](double r) { return eta1_jet(N, r).d1; }};
}

HalfLineIntegral integrate_half_line(const std::function<double(double)>& f, double r_lo,
                                     double r_hi, double rel_tol) {
  if (!(r_lo > 0.0) || !(r_hi > r_lo))
    throw Error(ErrorKind::InvalidInput, "need 0 < r_lo < r_hi");
  auto g = [&f](double t) {
    const double r = std::exp(t);
    return f(r) * r;
  };
  const double t_lo = std::log(r_lo);
  const double t_hi = std::log(r_hi);
  HalfLineIntegral out;
  out.body = integrate_pieces(g, t_lo, t_hi, rel_tol);

  // g ~ g(end) e^{m (t - end)} beyond each end.
  constexpr double dt = 0.5;
  auto tail = [&g](double t_end, double t_in, bool low, double& slope) -> double {
    const double g_end = g(t_end);
    const double g_in = g(t_in);
    if (std::abs(g_end) < 1e-300) return 0.0;
    if (g_end * g_in <= 0.0) {
      std::ostringstream msg;
      msg << "integrand changes sign at the truncation point r=" << std::exp(t_end);
      throw Error(ErrorKind::InvalidInput, msg.str());
    }
    slope = std::log(g_end / g_in) / (t_end - t_in);
    if (low ? !(slope > 0.0) : !(slope < 0.0)) {
      std::ostringstream msg;
      msg << "tail beyond r=" << std::exp(t_end) << " is not integrable (log-slope " << slope
          << ")";
      throw Error(ErrorKind::InvalidInput, msg.str());
    }
    return low ? g_end / slope : -g_end / slope;
  };
  out.tail_low = tail(t_lo, t_lo + dt, true, out.exponent_low);
  out.tail_high = tail(t_hi, t_hi - dt, false, out.exponent_high);
  out.value = out.body + out.tail_low + out.tail_high;
  return out;
}

HalfLineIntegral plane_integral(const std::function<double(double)>& f, double r_hi) {
  const double two_pi = 2.0 * std::numbers::pi;
  HalfLineIntegral h = integrate_half_line([&f](double r) { return f(r) * r; }, 1e-8, r_hi);
  h.value *= two_pi;
  h.body *= two_pi;
  h.tail_low *= two_pi;
  h.tail_high *= two_pi;
  return h;
}

HalfLineIntegral liouville_mass(double r_hi) {
  return plane_integral([](double r) { return limit_potential(2, r); }, r_hi);
}

double rayleigh_limit(const RadialFunction& v, int N, double r_lo, double r_hi) {
  if (N < 2) throw Error(ErrorKind::InvalidInput, "N must be >= 2");
  auto num = [&v, N](double r) {
    const double d = v.derivative(r);
    const double u = v.value(r);
    return (d * d - limit_potential(N, r) * u * u) * std::pow(r, N - 1);
  };
  auto den = [&v, N](double r) {
    const double u = v.value(r);
    return u * u * std::pow(r, N - 3);
  };
  const double d = integrate_half_line(den, r_lo, r_hi).value;
  if (!(d > 0.0)) throw Error(ErrorKind::InvalidInput, "vanishing weighted L2 norm");
  return integrate_half_line(num, r_lo, r_hi).value / d;
}

double limit_residual(int N, double lambda, double r_lo, double r_hi, int samples) {
  if (samples < 2) throw Error(ErrorKind::InvalidInput, "need at least two samples");
  const double t0 = std::log(r_lo);
  const double t1 = std::log(r_hi);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double r = std::exp(t0 + (t1 - t0) * i / (samples - 1));
    const RadialJet j = eta1_jet(N, r);
    const double res =
        -j.d2 - (N - 1) * j.d1 / r - limit_potential(N, r) * j.value - lambda * j.value / (r * r);
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

double core_profile(const LimitConstants& c, double scale, double r) {
  const double S = std::pow(r / scale, 0.5 * (c.gamma + 2.0));
  return S / (1.0 + S * S);
}

double test_function(const TestFunctionSpec& spec, double scale, double r) {
  const double a = scale / spec.R;
  const double b = scale * spec.R;
  const auto& c = spec.constants;
  if (r <= 0.5 * a || r >= 2.0 * b) return 0.0;
  if (r < a) return 2.0 * core_profile(c, scale, a) / a * (r - 0.5 * a);
  if (r <= b) return core_profile(c, scale, r);
  return -core_profile(c, scale, b) / b * (r - 2.0 * b);
}

TestFunctionResult test_function_quotient(const TestFunctionSpec& spec, QuotientMode mode,
                                          const RadialSolution* sol) {
  if (!(spec.R > 1.0)) throw Error(ErrorKind::InvalidInput, "R must exceed 1");
  const LimitConstants& c = spec.constants;
  TestFunctionResult res;
  res.mode = mode;
  res.R = spec.R;
  res.target = -0.5 * (c.ell * c.ell + 2.0);

  // F(r) = r^2 times the potential.
  std::function<double(double)> F;
  double scale = spec.scale;
  if (mode == QuotientMode::Limit) {
    if (scale <= 0.0) scale = c.delta;
    F = [&c](double t) {
      const double r = std::exp(t);
      return exp_Z(c, r) * r * r;
    };
  } else {
    if (sol == nullptr) throw Error(ErrorKind::InvalidInput, "finite_p mode needs a solution");
    if (sol->N != 2) throw Error(ErrorKind::InvalidInput, "the test function is planar (N = 2)");
    if (scale <= 0.0) scale = c.delta * scales(*sol).eps_minus;
    F = [sol](double t) { return std::exp(sol->log_fp_at(t)); };
  }
  res.scale = scale;
  const double a = scale / spec.R;
  const double b = scale * spec.R;
  if (!(0.5 * a > 0.0) || !std::isfinite(b))
    throw Error(ErrorKind::InvalidInput, "breakpoints are not ordered");
  if (mode == QuotientMode::FiniteP) {
    if (2.0 * b > 1.0) throw Error(ErrorKind::InvalidInput, "support leaves the unit ball");
    if (std::log(0.5 * a) < spec.log_inner)
      throw Error(ErrorKind::InvalidInput, "support reaches inside the annulus hole");
  }

  const double k = 0.5 * (c.gamma + 2.0);
  const double psi_a = core_profile(c, scale, a);
  const double psi_b = core_profile(c, scale, b);
  auto ramp_in = [&](double r) { return 2.0 * psi_a / a * (r - 0.5 * a); };
  auto ramp_out = [&](double r) { return -psi_b / b * (r - 2.0 * b); };
  // r psi'(r) = k S (1 - S^2) / (1 + S^2)^2.
  auto core_grad = [&](double r) {
    const double S = std::pow(r / scale, k);
    const double q = 1.0 + S * S;
    return k * S * (1.0 - S * S) / (q * q);
  };

  constexpr double tol = 1e-13;
  const double ta2 = std::log(0.5 * a), ta = std::log(a), tb = std::log(b), tb2 = std::log(2.0 * b);
  QuotientParts& P = res.parts;
  P.N2 = integrate_pieces([&](double t) { const double g = std::exp(t) * 2.0 * psi_a / a; return g * g; },
                          ta2, ta, tol);
  P.P2 = integrate_pieces([&](double t) { const double v = ramp_in(std::exp(t)); return F(t) * v * v; },
                          ta2, ta, tol);
  P.D2 = integrate_pieces([&](double t) { const double v = ramp_in(std::exp(t)); return v * v; },
                          ta2, ta, tol);
  P.N1 = integrate_pieces(
      [&](double t) {
        const double r = std::exp(t);
        const double g = core_grad(r);
        const double v = core_profile(c, scale, r);
        return g * g - F(t) * v * v;
      },
      ta, tb, tol, 0.5);
  P.D1 = integrate_pieces(
      [&](double t) {
        const double v = core_profile(c, scale, std::exp(t));
        return v * v;
      },
      ta, tb, tol, 0.5);
  P.N3 = integrate_pieces([&](double t) { const double g = std::exp(t) * psi_b / b; return g * g; },
                          tb, tb2, tol);
  P.P3 = integrate_pieces([&](double t) { const double v = ramp_out(std::exp(t)); return F(t) * v * v; },
                          tb, tb2, tol);
  P.D3 = integrate_pieces([&](double t) { const double v = ramp_out(std::exp(t)); return v * v; },
                          tb, tb2, tol);

  const double D = P.D1 + P.D2 + P.D3;
  res.quotient = (P.N1 + P.N2 - P.P2 + P.N3 - P.P3) / D;
  res.split_quotient = (P.N1 + P.N2 + P.N3) / D;

  // Limit closed forms; x = R^{-(2+gamma)}, X = R^{2+gamma}.
  const double g2 = c.gamma + 2.0;
  const double x = std::pow(spec.R, -g2);
  const double X = std::pow(spec.R, g2);
  const double wx = x / ((1.0 + x) * (1.0 + x));
  const double wX = X / ((1.0 + X) * (1.0 + X));
  auto prim = [](double t) { return -1.0 / t + 6.0 / (t * t) - 4.0 / (t * t * t); };
  QuotientParts& C = res.closed_form;
  C.N1 = 0.25 * g2 * (prim(1.0 + X) - prim(1.0 + x));
  C.N2 = 1.5 * wx;
  C.N3 = 1.5 * wX;
  C.D1 = (1.0 / (1.0 + x) - 1.0 / (1.0 + X)) / g2;
  C.D2 = (std::numbers::ln2 - 0.5) * wx;
  C.D3 = (4.0 * std::numbers::ln2 - 2.5) * wX;
  res.N3_printed = 3.0 * wX;
  return res;
}

double RandomRadialFunction::value(double r) const {
  double s = 0.0;
  for (const auto& t : terms) s += t.c * std::pow(r, t.a) * std::pow(1.0 + std::pow(r / t.s, t.b), -t.e);
  return s;
}

double RandomRadialFunction::derivative(double r) const {
  double s = 0.0;
  for (const auto& t : terms) {
    const double q = std::pow(r / t.s, t.b);
    const double base = t.c * std::pow(r, t.a) * std::pow(1.0 + q, -t.e);
    s += base * (t.a - t.e * t.b * q / (1.0 + q)) / r;
  }
  return s;
}

RadialFunction RandomRadialFunction::as_function() const {
  return {[this](double r) { return value(r); }, [this](double r) { return derivative(r); }};
}

std::vector<RandomRadialFunction> random_test_functions(int count, std::uint64_t seed, int N) {
  if (count < 0) throw Error(ErrorKind::InvalidInput, "count must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> nterms(1, 3);
  // Regular at 0 needs a > 1 - N/2 (gradient) and a > (2 - N)/2 (weight);
  // decay r^{-d} at infinity needs d > (N - 2)/2.
  const double a_min = std::max(0.5, 1.5 - 0.5 * N);
  const double d_min = 0.5 * (N - 2) + 0.5;
  std::vector<RandomRadialFunction> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    RandomRadialFunction f;
    const int n = nterms(rng);
    for (int j = 0; j < n; ++j) {
      RandomRadialFunction::Term t{};
      t.c = (unit(rng) < 0.75 ? 1.0 : -1.0) * (0.2 + unit(rng));
      t.a = a_min + 2.5 * unit(rng);
      t.s = std::exp(std::log(0.1) + unit(rng) * std::log(100.0));
      t.b = 1.0 + 3.0 * unit(rng);
      const double d = d_min + 2.5 * unit(rng);
      t.e = (t.a + d) / t.b;
      f.terms.push_back(t);
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace lane_emden
