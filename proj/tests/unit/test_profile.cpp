#include <doctest.h>

#include <cmath>

#include "lane_emden/error.hpp"
#include "lane_emden/limit_theory.hpp"
#include "lane_emden/profile.hpp"

using namespace lane_emden;

TEST_CASE("blow-up scales from their definitions") {
  for (double p : {5.0, 50.0, 400.0}) {
    CAPTURE(p);
    const RadialSolution sol = solve_nodal(p, 2);
    const Scales s = scales(sol);
    // computed in logs: u0^{p-1} overflows for large p
    const double le_plus = -0.5 * (std::log(p) + (p - 1.0) * std::log(sol.u0));
    const double le_minus = -0.5 * (std::log(p) + (p - 1.0) * std::log(-sol.u_min));
    CHECK(s.log_eps_plus == doctest::Approx(le_plus).epsilon(1e-12));
    CHECK(s.log_eps_minus == doctest::Approx(le_minus).epsilon(1e-12));
    CHECK(s.ell_hat == doctest::Approx(sol.s_p / std::exp(le_minus)).epsilon(1e-10));
    CHECK(s.ratio_plus == doctest::Approx(sol.r_p / std::exp(le_plus)).epsilon(1e-10));
    CHECK(s.eps_plus < s.eps_minus);
  }
}

TEST_CASE("rescaled profiles start at zero and stay non-positive") {
  const RadialSolution sol = solve_nodal(50.0, 2);
  CHECK(rescaled_profile(sol, Region::Positive, 0.0) == doctest::Approx(0.0));
  CHECK(rescaled_potential(sol, Region::Positive, 0.0) == doctest::Approx(1.0));
  const Scales s = scales(sol);
  CHECK(rescaled_profile(sol, Region::Negative, s.ell_hat) == doctest::Approx(0.0).epsilon(1e-9));
  for (double x : {0.5, 1.0, 2.0, 4.0}) CHECK(rescaled_profile(sol, Region::Positive, x) < 0.0);
  CHECK_THROWS_AS((void)rescaled_profile(sol, Region::Positive, 2.0 / s.eps_plus), Error);
}

TEST_CASE("rescaled profiles and potentials approach their limits") {
  const LimitConstants c = limit_constants();
  double zp[2], vm[2];
  const double ps[2] = {100.0, 400.0};
  for (int i = 0; i < 2; ++i) {
    const RadialSolution sol = solve_nodal(ps[i], 2);
    zp[i] = vm[i] = 0.0;
    for (int j = 0; j <= 100; ++j) {
      const double x = 5.0 * j / 100.0;
      zp[i] = std::max(zp[i], std::abs(rescaled_profile(sol, Region::Positive, x) +
                                       2.0 * std::log1p(x * x / 8.0)));
      const double y = 1.0 + 4.0 * j / 100.0;
      vm[i] = std::max(vm[i], std::abs(rescaled_potential(sol, Region::Negative, y) - exp_Z(c, y)));
    }
  }
  CHECK(zp[1] < zp[0]);
  CHECK(vm[1] < vm[0]);
  CHECK(zp[1] < 0.05);
}

TEST_CASE("scale ratios grow along a p-ladder") {
  double rp = 0.0, rm = 0.0;
  for (double p : {50.0, 100.0, 200.0, 400.0}) {
    const Scales s = scales(solve_nodal(p, 2));
    CHECK(s.ratio_plus > rp);
    CHECK(s.ratio_minus > rm);
    rp = s.ratio_plus;
    rm = s.ratio_minus;
  }
}

TEST_CASE("negative potential is one at the minimum") {
  const RadialSolution sol = solve_nodal(30.0, 2);
  CHECK(rescaled_potential(sol, Region::Negative, scales(sol).ell_hat) ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("f_p has one interior maximum per nodal region") {
  for (double p : {3.0, 30.0, 400.0}) {
    CAPTURE(p);
    const RadialSolution sol = solve_nodal(p, 2);
    const FpAnalysis fa = analyze_fp(sol);
    CHECK(fa.c_p > 0.0);
    CHECK(fa.c_p < sol.r_p);
    CHECK(fa.d_p > sol.r_p);
    CHECK(fa.d_p < 1.0);
    CHECK(fa.sup_f == doctest::Approx(std::max(fa.max_plus, fa.max_minus)));
    CHECK(fa.f_at_nodal == doctest::Approx(0.0));
    CHECK(fa.f_at_boundary == doctest::Approx(0.0).epsilon(1e-6));
    // brute-force scan in log r
    double scan_plus = 0.0, scan_minus = 0.0;
    const double lo = scales(sol).log_eps_plus - 10.0;
    for (int i = 0; i <= 20000; ++i) {
      const double t = lo + (0.0 - lo) * i / 20000.0;
      const double f = std::exp(sol.log_fp_at(t));
      double& slot = std::exp(t) < sol.r_p ? scan_plus : scan_minus;
      slot = std::max(slot, f);
    }
    CHECK(fa.max_plus >= scan_plus * (1.0 - 1e-9));
    CHECK(fa.max_minus >= scan_minus * (1.0 - 1e-9));
    CHECK(fa.max_plus == doctest::Approx(scan_plus).epsilon(1e-4));
    CHECK(fa.max_minus == doctest::Approx(scan_minus).epsilon(1e-4));
  }
}

TEST_CASE("the maxima of f_p approach 2 and l^2 + 2") {
  const FpAnalysis fa = analyze_fp(solve_nodal(400.0, 2));
  CHECK(fa.max_plus == doctest::Approx(2.0).epsilon(0.01));
  CHECK(fa.max_minus == doctest::Approx(7.1979 * 7.1979 + 2.0).epsilon(0.1));
}

TEST_CASE("maximisers approach sqrt 8 and delta in rescaled units") {
  const LimitConstants c = limit_constants();
  double dp = 1e9, dm = 1e9;
  for (double p : {50.0, 100.0, 200.0, 400.0}) {
    CAPTURE(p);
    const RadialSolution sol = solve_nodal(p, 2);
    const Scales s = scales(sol);
    const FpAnalysis fa = analyze_fp(sol);
    CHECK(fa.sup_f <= 60.0);
    const double ep = std::abs(std::exp(fa.log_c_p - s.log_eps_plus) - std::sqrt(8.0));
    const double em = std::abs(std::exp(fa.log_d_p - s.log_eps_minus) - c.delta);
    CHECK(ep < dp);
    CHECK(em < dm);
    dp = ep;
    dm = em;
  }
}
