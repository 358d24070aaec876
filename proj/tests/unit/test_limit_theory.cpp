#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lane_emden/error.hpp"
#include "lane_emden/limit_theory.hpp"
#include "lane_emden/spectral.hpp"

using namespace lane_emden;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("limit constants") {
  const LimitConstants c = limit_constants();
  const double l = 7.1979;
  CHECK(c.gamma == doctest::Approx(std::sqrt(2 * l * l + 4) - 2).epsilon(1e-15));
  CHECK(c.gamma == doctest::Approx(8.3740).epsilon(5e-4 / 8.374));
  CHECK(c.delta == doctest::Approx(7.474).epsilon(5e-3 / 7.474));
  CHECK(c.gamma * (c.gamma + 4) == doctest::Approx(2 * l * l).epsilon(1e-13));
  CHECK((c.gamma + 2) * (c.gamma + 2) == doctest::Approx(2 * l * l + 4).epsilon(1e-13));
  CHECK(c.morse_Z == 11);
  CHECK(c.kernel_Z == 1);
  // H has the closed form -2 (g+2) l^{g+2} / (d^{g+2} + l^{g+2}), which is -gamma
  const double g2 = c.gamma + 2;
  const double H = -2 * g2 * std::pow(l, g2) / (std::pow(c.delta, g2) + std::pow(l, g2));
  CHECK(c.H == doctest::Approx(H).epsilon(1e-11));
  CHECK(c.H == doctest::Approx(-c.gamma).epsilon(1e-11));
}

TEST_CASE("morse_Z by exact floor") {
  CHECK(limit_constants(1.0).morse_Z == 3);   // sqrt(6)/2 = 1.22
  CHECK(limit_constants(std::sqrt(16.0)).morse_Z == 1 + 2 * 3);  // sqrt(36)/2 = 3 exactly
  CHECK(limit_constants(0.1).morse_Z == 3);
}

TEST_CASE("closed-form profiles") {
  const LimitConstants c = limit_constants();
  CHECK(eval_profile({ProfileKind::U, 2, c}, 0.0) == 0.0);
  CHECK(eval_profile({ProfileKind::Z_ell, 2, c}, c.ell) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS((void)eval_profile({ProfileKind::Z_ell, 2, c}, 0.0), Error);
  CHECK_THROWS_AS((void)eval_profile({ProfileKind::U, 2, c}, -1.0), Error);
  CHECK(eval_profile({ProfileKind::Eta1, 2, c}, 0.0) == 0.0);

  // eta_1 for N = 2 peaks at sqrt 8 with value sqrt 2
  double best = 0.0, arg = 0.0;
  for (int i = 1; i < 200000; ++i) {
    const double x = 1e-4 * i;
    const double v = eval_profile({ProfileKind::Eta1, 2, c}, x);
    if (v > best) best = v, arg = x;
  }
  CHECK(best == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
  CHECK(arg == doctest::Approx(std::sqrt(8.0)).epsilon(1e-4));

  for (double x : {0.1, 1.0, 10.0}) {
    CHECK(eval_profile({ProfileKind::V_plus, 2, c}, x) ==
          doctest::Approx(std::exp(eval_profile({ProfileKind::U, 2, c}, x))));
    CHECK(eval_profile({ProfileKind::V_minus, 2, c}, x) > 0.0);
  }
}

TEST_CASE("identities at the reference constant") {
  const LimitConstants c = limit_constants();
  const double l2 = c.ell * c.ell;
  CHECK(exp_Z(c, c.delta) * c.delta * c.delta == doctest::Approx(l2 + 2).epsilon(1e-12));
  CHECK(limit_potential(2, std::sqrt(8.0)) * 8.0 == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("eta_1 jets match finite differences") {
  for (int N : {2, 3, 4}) {
    for (double r : {0.3, 1.0, 4.0}) {
      const double e = 1e-5;
      const auto j = eta1_jet(N, r);
      CHECK(j.d1 == doctest::Approx((eta1_jet(N, r + e).value - eta1_jet(N, r - e).value) / (2 * e)).epsilon(1e-7));
      CHECK(j.d2 == doctest::Approx((eta1_jet(N, r + e).d1 - eta1_jet(N, r - e).d1) / (2 * e)).epsilon(1e-7));
    }
  }
}

TEST_CASE("Liouville mass and the singular profile mass") {
  const auto m = liouville_mass();
  CHECK(m.value == doctest::Approx(8 * kPi).epsilon(1e-6));
  CHECK(m.tail_high / m.value < 1e-4);
  // tail of 64 r^{-4} r over [r_hi, inf) times 2 pi
  CHECK(m.tail_high == doctest::Approx(2 * kPi * 32.0 / 1e6).epsilon(1e-2));

  const LimitConstants c = limit_constants();
  const auto mz = plane_integral([&c](double r) { return exp_Z(c, r); });
  CHECK(mz.value == doctest::Approx(4 * kPi * (c.gamma + 2)).epsilon(1e-8));
}

TEST_CASE("limit weighted eigenvalue") {
  for (int N = 2; N <= 5; ++N) {
    CAPTURE(N);
    const double r = rayleigh_limit(eta1_function(N), N);
    CHECK(r == doctest::Approx(-(N - 1.0)).epsilon(1e-6));
    CHECK(limit_residual(N, -(N - 1.0)) < 1e-10);
    CHECK(limit_residual(N, 0.0) > 1e-3);
  }
  const auto e = eta1_function(2);
  RadialFunction tripled{[e](double r) { return 3 * e.value(r); },
                         [e](double r) { return 3 * e.derivative(r); }};
  CHECK(rayleigh_limit(tripled, 2) == doctest::Approx(rayleigh_limit(e, 2)).epsilon(1e-14));
  RadialFunction zero{[](double) { return 0.0; }, [](double) { return 0.0; }};
  CHECK_THROWS_AS((void)rayleigh_limit(zero, 2), Error);
}

TEST_CASE("random admissible functions respect the limit infimum") {
  for (int N : {2, 3}) {
    const auto fs = random_test_functions(50, kPropertySeed, N);
    REQUIRE(fs.size() == 50);
    for (const auto& f : fs) CHECK(rayleigh_limit(f.as_function(), N) >= -(N - 1.0) - 1e-6);
  }
  // seeded: identical draws
  const auto a = random_test_functions(3, kPropertySeed, 2);
  const auto b = random_test_functions(3, kPropertySeed, 2);
  CHECK(a[2].value(1.3) == b[2].value(1.3));
}

TEST_CASE("test function is continuous and matches eta_1 on the core") {
  TestFunctionSpec spec;
  const LimitConstants& c = spec.constants;
  const double s = c.delta;
  const double a = s / spec.R, b = s * spec.R;
  for (double x : {0.5 * a, a, b, 2 * b}) {
    const double lo = test_function(spec, s, x * (1 - 1e-12));
    const double hi = test_function(spec, s, x * (1 + 1e-12));
    CHECK(lo == doctest::Approx(hi).epsilon(1e-9).scale(1e-3));
  }
  for (double r : {0.5 * s, s, 3 * s}) {
    const double S = std::pow(r / s, (2 + c.gamma) / 2);
    CHECK(2 * std::sqrt(2.0) * core_profile(c, s, r) ==
          doctest::Approx(eta1_jet(2, 2 * std::sqrt(2.0) * S).value).epsilon(1e-13));
  }
}

TEST_CASE("limit-mode quotient and closed forms") {
  TestFunctionSpec spec;
  const LimitConstants& c = spec.constants;
  const auto res = test_function_quotient(spec, QuotientMode::Limit);
  const double x = std::pow(spec.R, -(2 + c.gamma));
  const double X = 1 / x;
  const double w = 1 / (c.gamma + 2);
  CHECK(res.parts.N2 == doctest::Approx(1.5 * x / ((1 + x) * (1 + x))).epsilon(1e-8));
  CHECK(res.parts.N3 == doctest::Approx(1.5 * X / ((1 + X) * (1 + X))).epsilon(1e-8));
  CHECK(res.N3_printed == doctest::Approx(2 * res.closed_form.N3).epsilon(1e-14));
  CHECK(res.parts.D1 == doctest::Approx((1 / (1 + x) - 1 / (1 + X)) * w).epsilon(1e-8));
  // int_{1/2}^{1} (s - 1/2)^2 / s ds and int_1^2 (2 - s)^2 / s ds, times psi^2 at the joints
  CHECK(res.parts.D2 == doctest::Approx((std::log(2.0) - 0.5) * x / ((1 + x) * (1 + x))).epsilon(1e-8));
  CHECK(res.parts.D3 == doctest::Approx((4 * std::log(2.0) - 2.5) * X / ((1 + X) * (1 + X))).epsilon(1e-8));
  CHECK(res.quotient == doctest::Approx(-(c.ell * c.ell + 2) / 2).epsilon(1e-3));
  CHECK(res.split_quotient >= res.quotient);
  spec.R = 1.0;
  CHECK_THROWS_AS((void)test_function_quotient(spec, QuotientMode::Limit), Error);
  CHECK_THROWS_AS((void)test_function_quotient(TestFunctionSpec{}, QuotientMode::FiniteP), Error);
}

TEST_CASE("finite-p quotient bounds the first weighted eigenvalue") {
  const RadialSolution sol = solve_nodal(200.0, 2);
  TestFunctionSpec spec;
  spec.log_inner = annulus_log_inner(sol, {});
  const auto res = test_function_quotient(spec, QuotientMode::FiniteP, &sol);
  const MorseReport rep = morse_index(sol);
  CHECK(res.quotient >= rep.beta1);
  CHECK(res.quotient < -20.0);
}
