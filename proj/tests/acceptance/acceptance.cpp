// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "lane_emden/error.hpp"
#include "lane_emden/limit_theory.hpp"
#include "lane_emden/profile.hpp"
#include "lane_emden/radial_ode.hpp"
#include "lane_emden/spectral.hpp"

using namespace lane_emden;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string g(double x) { return fmt("%.10g", x); }

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool ok = v.pass;
  std::string detail = v.detail;
  if (budget_s > 0 && secs > budget_s) {
    ok = false;
    detail += "; over time budget " + g(budget_s) + " s";
  }
  if (!ok) ++failures;
  std::printf("%s C%02d %s: %s [%.2f s]\n", ok ? "PASS" : "FAIL", id, name, detail.c_str(), secs);
  std::fflush(stdout);
}

double bessel_j0(double x) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= -0.25 * x * x / (double(k) * k);
    sum += term;
  }
  return sum;
}

double j0_first_zero() {
  double lo = 2.0, hi = 3.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (bessel_j0(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::int64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Harmonic polynomials of degree k in N variables, counted by iterated
// splitting on the last variable: H(N, k) = sum_{j<=k} H(N-1, j) with
// H(2, k) = 2 (k >= 1). Independent of the binomial form in the library.
std::int64_t harmonic_dim(int N, int k) {
  static std::map<std::pair<int, int>, std::int64_t> memo;
  if (N == 2) return k == 0 ? 1 : 2;
  const auto key = std::make_pair(N, k);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  std::int64_t s = 0;
  for (int j = 0; j <= k; ++j) s += harmonic_dim(N - 1, j);
  return memo[key] = s;
}

struct SweepPoint {
  double p;
  RadialSolution sol;
  Scales sc;
  MorseReport morse;
};

}  // namespace

int main() {
  std::printf("acceptance suite\n");

  criterion(1, "bessel_oracle", 1.0, [] {
    IvpConfig cfg;
    cfg.p = 1.0;
    cfg.N = 2;
    const Trajectory tr = integrate_ivp(cfg);
    const double z = tr.zeros.at(0).r;
    const double oracle = j0_first_zero();
    const double err = std::abs(z - oracle);
    return Verdict{err < 1e-8 && std::abs(z - 2.404825558) < 1e-8,
                   "first zero " + g(z) + ", series oracle " + g(oracle) + ", error " + fmt("%.2e", err)};
  });

  criterion(2, "shooting_contract", 10.0, [] {
    bool ok = true;
    std::string d;
    for (double p : {2.0, 3.0, 5.0, 10.0, 50.0, 100.0, 400.0}) {
      const RadialSolution sol = solve_nodal(p, 2);
      int changes = 0;
      for (std::size_t i = 1; i + 1 < sol.u.size(); ++i)
        if ((sol.u[i] > 0) != (sol.u[i - 1] > 0)) ++changes;
      const double res = sol.max_residual();
      const bool good = std::abs(sol.boundary_value) < 1e-9 && changes == 1 && res < 1e-7;
      ok = ok && good;
      d += "p=" + g(p) + " |u(1)|=" + fmt("%.1e", std::abs(sol.boundary_value)) +
           " zeros=" + std::to_string(changes) + " res=" + fmt("%.1e", res) + (good ? "" : " (bad)") + "; ";
    }
    return Verdict{ok, d};
  });

  criterion(3, "limit_weighted_eigenvalue", 1.0, [] {
    bool ok = true;
    std::string d;
    for (int N = 2; N <= 5; ++N) {
      const double r = rayleigh_limit(eta1_function(N), N);
      const double res = limit_residual(N, -(N - 1.0));
      const bool good = std::abs(r + (N - 1.0)) <= 1e-6 * (N - 1.0) && res < 1e-10;
      ok = ok && good;
      d += "N=" + std::to_string(N) + " R*=" + g(r) + " residual=" + fmt("%.1e", res) + "; ";
    }
    return Verdict{ok, d};
  });

  criterion(4, "liouville_mass", 1.0, [] {
    const auto m = liouville_mass();
    const double rel = std::abs(m.value - 8 * kPi) / (8 * kPi);
    return Verdict{rel < 1e-6, "mass " + g(m.value) + " vs 8 pi, relative error " + fmt("%.2e", rel) +
                                   ", tail beyond 1e3 " + fmt("%.2e", m.tail_high)};
  });

  criterion(5, "algebraic_identities", 1.0, [] {
    const LimitConstants c = limit_constants();
    const double l2 = c.ell * c.ell;
    const double e1 = std::abs(c.gamma * (c.gamma + 4) - 2 * l2) / (2 * l2);
    const double e2 = std::abs(exp_Z(c, c.delta) * c.delta * c.delta - (l2 + 2)) / (l2 + 2);
    const double e3 = std::abs(eval_profile({ProfileKind::Z_ell, 2, c}, c.ell));
    const double e4 = std::abs(eval_profile({ProfileKind::V_plus, 2, c}, std::sqrt(8.0)) * 8.0 - 2.0) / 2.0;
    const double worst = std::max({e1, e2, e3, e4});
    return Verdict{worst < 1e-10, "gamma(gamma+4)-2l^2 " + fmt("%.1e", e1) + ", h(delta)-(l^2+2) " +
                                      fmt("%.1e", e2) + ", Z(l) " + fmt("%.1e", e3) + ", g(sqrt 8)-2 " +
                                      fmt("%.1e", e4) + " (h(delta) = " + g(l2 + 2) + ")"};
  });

  criterion(6, "sphere_spectrum", 1.0, [] {
    int bad = 0;
    for (int N = 2; N <= 10; ++N) {
      const auto s = sphere_spectrum(N, 50);
      for (int k = 0; k <= 50; ++k) {
        const std::int64_t mult = harmonic_dim(N, k);
        const std::int64_t viaBinom = binom(N - 1 + k, N - 1) - binom(N - 3 + k, N - 1);
        if (s.at(k).lambda != std::int64_t(k) * (k + N - 2) || s[k].multiplicity != mult ||
            mult != viaBinom)
          ++bad;
      }
    }
    return Verdict{bad == 0, std::to_string(9 * 51 - bad) + "/" + std::to_string(9 * 51) +
                                 " (N,k) pairs exact"};
  });

  // Shared sweep.
  std::vector<SweepPoint> sweep;
  const auto sweep_t0 = std::chrono::steady_clock::now();
  std::string sweep_error;
  try {
    for (double p : {50.0, 100.0, 200.0, 400.0}) {
      RadialSolution sol = solve_nodal(p, 2);
      const Scales sc = scales(sol);
      MorseReport rep = morse_index(sol);
      sweep.push_back({p, std::move(sol), sc, std::move(rep)});
    }
  } catch (const std::exception& e) {
    sweep_error = e.what();
  }
  const double sweep_secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - sweep_t0).count();
  std::printf("sweep p = 50, 100, 200, 400 computed in %.2f s\n", sweep_secs);
  auto need_sweep = [&]() -> const std::vector<SweepPoint>& {
    if (!sweep_error.empty() || sweep.size() != 4) throw Error(ErrorKind::NoConvergence, "sweep failed: " + sweep_error);
    return sweep;
  };

  criterion(7, "radial_morse_index", 0.0, [&] {
    bool ok = sweep_secs < 60.0;
    std::string d;
    for (const auto& s : need_sweep()) {
      bool good = s.morse.m_rad == 2 && s.morse.weighted_count == 2;
      for (const auto& r : s.morse.refinements)
        good = good && r.weighted_count == 2 && r.unweighted_count == 2;
      ok = ok && good;
      d += "p=" + g(s.p) + " unweighted=" + std::to_string(s.morse.m_rad) +
           " weighted=" + std::to_string(s.morse.weighted_count) + " refinements " +
           (good ? "agree" : "DISAGREE") + "; ";
    }
    d += "sweep time " + fmt("%.1f", sweep_secs) + " s (budget 60)";
    return Verdict{ok, d};
  });

  criterion(8, "second_weighted_eigenvalue", 0.0, [&] {
    // The gap beta_2 + 1 is of order a^N, far below the O(h^2) grid error,
    // so the sign comes from the oscillation certificate; the discrete value
    // must still sit within its own grid error of -1.
    bool ok = true;
    std::string d;
    for (const auto& s : need_sweep()) {
      const auto& fine = s.morse.refinements.back();
      const double grid_err = 4.0 * std::abs(fine.beta2 - s.morse.beta2) + 1e-12;
      const bool cert = s.morse.translation.strict && s.morse.translation.count_below == 1;
      const bool consistent = s.morse.beta2 > -1.0 || std::abs(s.morse.beta2 + 1.0) <= grid_err;
      ok = ok && cert && consistent;
      d += "p=" + g(s.p) + " certified " + (cert ? "beta2 > -1" : "NOT") + " (discrete " +
           fmt("%.12f", s.morse.beta2) + ", grid error " + fmt("%.1e", grid_err) + "); ";
    }
    return Verdict{ok, d};
  });

  criterion(9, "constant_ell", 0.0, [&] {
    const auto& sw = need_sweep();
    bool dec = true;
    std::string d;
    double prev = 1e300;
    for (const auto& s : sw) {
      const double dist = std::abs(s.sc.ell_hat - kReferenceEll);
      dec = dec && dist < prev;
      prev = dist;
      d += "p=" + g(s.p) + " ell_hat=" + g(s.sc.ell_hat) + "; ";
    }
    const double rel = std::abs(sw.back().sc.ell_hat - kReferenceEll) / kReferenceEll;
    d += "relative distance at p=400 " + fmt("%.3e", rel) + (dec ? ", decreasing" : ", NOT decreasing");
    return Verdict{rel < 0.05 && dec, d};
  });

  criterion(10, "beta1_window_and_trend", 0.0, [&] {
    bool ok = true;
    std::string d;
    double prev = 1e300;
    for (const auto& s : need_sweep()) {
      const double b = s.morse.beta1;
      const double dist = std::abs(b + 26.9);
      if (s.p >= 200) ok = ok && b > -36.0 && b < -25.0;
      ok = ok && dist < prev;
      prev = dist;
      d += "p=" + g(s.p) + " beta1=" + fmt("%.6f", b) + "; ";
    }
    return Verdict{ok, d + (ok ? "window and monotone trend hold" : "window or trend violated")};
  });

  criterion(11, "morse_index_12", 0.0, [&] {
    bool ok = true;
    std::string d;
    const std::vector<std::int64_t> expected{1, 1, 2, 2, 2, 2, 2};
    for (const auto& s : need_sweep()) {
      if (s.p < 200) continue;
      bool good = s.morse.total == 12 && s.morse.contributions == expected && s.morse.stable;
      for (const auto& r : s.morse.refinements) good = good && r.total == 12;
      ok = ok && good;
      std::string led;
      for (auto c : s.morse.contributions) led += (led.empty() ? "" : "+") + std::to_string(c);
      d += "p=" + g(s.p) + " total=" + std::to_string(s.morse.total) + " ledger " + led +
           (s.morse.stable ? " stable" : " UNSTABLE") + "; ";
    }
    d += "per-p time " + fmt("%.1f", sweep_secs / 4) + " s (budget 120)";
    return Verdict{ok && sweep_secs / 4 < 120.0, d};
  });

  criterion(12, "test_function_estimate", 0.0, [&] {
    TestFunctionSpec spec;
    const auto res = test_function_quotient(spec, QuotientMode::Limit);
    const double rel = std::abs(res.quotient - res.target) / std::abs(res.target);
    const double g2 = spec.constants.gamma + 2;
    const double x = std::pow(spec.R, -g2), X = 1 / x;
    const double px = x / ((1 + x) * (1 + x)), pX = X / ((1 + X) * (1 + X));
    const double cN2 = 1.5 * px, cN3 = 1.5 * pX;
    const double cD2 = (std::log(2.0) - 0.5) * px, cD3 = (4 * std::log(2.0) - 2.5) * pX;
    auto r = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
    const double worst = std::max({r(res.parts.N2, cN2), r(res.parts.N3, cN3), r(res.parts.D2, cD2),
                                   r(res.parts.D3, cD3)});
    bool ok = rel < 1e-3 && worst < 1e-8;
    std::string d = "limit quotient " + g(res.quotient) + " vs " + g(res.target) + " (rel " +
                    fmt("%.1e", rel) + "), closed forms worst rel " + fmt("%.1e", worst);
    for (const auto& s : need_sweep()) {
      if (s.p < 200) continue;
      TestFunctionSpec fs;
      fs.log_inner = s.morse.log_inner;
      const auto fr = test_function_quotient(fs, QuotientMode::FiniteP, &s.sol);
      const bool bound = fr.quotient >= s.morse.beta1;
      ok = ok && bound;
      d += "; p=" + g(s.p) + " quotient " + fmt("%.6f", fr.quotient) + (bound ? " >= " : " < ") +
           "beta1 " + fmt("%.6f", s.morse.beta1);
    }
    return Verdict{ok, d};
  });

  criterion(13, "property_suite", 0.0, [&] {
    double worst = 1e300;
    for (int N : {2, 3}) {
      for (const auto& f : random_test_functions(50, kPropertySeed, N))
        worst = std::min(worst, rayleigh_limit(f.as_function(), N) + (N - 1.0));
    }
    bool ok = worst >= -1e-6;
    int pairs = 0, bad = 0;
    for (const auto& s : need_sweep()) {
      for (std::size_t i = 0; i + 1 < s.morse.refinements.size(); ++i) {
        const auto& r = s.morse.refinements[i];  // enlarged annulus, same grid step
        ++pairs;
        if (r.beta1 > s.morse.beta1 + 1e-9 * std::abs(s.morse.beta1) ||
            r.beta2 > s.morse.beta2 + 1e-9 * std::abs(s.morse.beta2))
          ++bad;
      }
    }
    ok = ok && bad == 0 && pairs > 0;
    return Verdict{ok, "100 seeded functions, min R* + (N-1) = " + fmt("%.3e", worst) + "; nesting " +
                           std::to_string(pairs - bad) + "/" + std::to_string(pairs) + " pairs monotone"};
  });

  std::printf("%d of 13 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
