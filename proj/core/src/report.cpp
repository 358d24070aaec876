#include "lane_emden/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <numbers>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "lane_emden/error.hpp"
#include "lane_emden/profile.hpp"

namespace lane_emden {

using json = nlohmann::ordered_json;

namespace {

namespace anchor {
constexpr const char* kSolution = "least-energy sign-changing radial solution (two nodal regions)";
constexpr const char* kScales = "blow-up scales eps_p^+- and the ratio s_p / eps_p^-";
constexpr const char* kFp = "f_p(r) = p |u_p(r)|^{p-1} r^2, one maximum per nodal region";
constexpr const char* kSpectrum = "weighted radial eigenvalues beta_i on the annulus A_n";
constexpr const char* kRadialCount = "radial Morse index m_rad(u_p)";
constexpr const char* kTranslation = "second weighted radial eigenvalue above -(N-1)";
constexpr const char* kMorse = "Morse index = sum of mult(lambda_k) over beta_i + lambda_k < 0";
constexpr const char* kSweep = "asymptotic trends along a p-ladder";
constexpr const char* kLimit = "limit profiles, constants and limit weighted eigenvalue";
}  // namespace anchor

json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::stod(format_number(x));
}

json check(const std::string& name, const char* anch, double value, double target,
           double tolerance, bool pass) {
  json c;
  c["name"] = name;
  c["anchor"] = anch;
  c["value"] = num(value);
  c["target"] = num(target);
  c["tolerance"] = num(tolerance);
  c["pass"] = pass;
  return c;
}

json config_json(const RunConfig& cfg) {
  json c;
  c["command"] = to_string(cfg.command);
  json ps = json::array();
  for (double p : cfg.p_list) ps.push_back(num(p));
  c["p"] = ps;
  c["N"] = cfg.N;
  c["grid_M"] = cfg.grid_M;
  c["grid_step"] = num(cfg.grid_step);
  c["inner_rule"] = cfg.inner_rule;
  c["tol_shoot"] = num(cfg.tol_shoot);
  c["tol_eig"] = num(cfg.tol_eig);
  c["ell"] = num(cfg.ell);
  c["R"] = num(cfg.R);
  c["format"] = cfg.format == OutputFormat::Json ? "json" : "csv";
  return c;
}

// Parses "auto", "log:<x>", "radius:<a>".
bool parse_inner_rule(const std::string& s, InnerRule& rule, double& log_inner) {
  if (s == "auto") {
    rule = InnerRule::Auto;
    return true;
  }
  auto tail = [&s](const std::string& prefix, double& v) {
    if (s.rfind(prefix, 0) != 0) return false;
    const std::string rest = s.substr(prefix.size());
    std::size_t used = 0;
    try {
      v = std::stod(rest, &used);
    } catch (...) {
      return false;
    }
    return used == rest.size() && std::isfinite(v);
  };
  double v = 0.0;
  if (tail("log:", v)) {
    if (!(v < 0.0)) return false;
    rule = InnerRule::Fixed;
    log_inner = v;
    return true;
  }
  if (tail("radius:", v)) {
    if (!(v > 0.0 && v < 1.0)) return false;
    rule = InnerRule::Fixed;
    log_inner = std::log(v);
    return true;
  }
  return false;
}

json solution_json(const RadialSolution& sol) {
  json j;
  j["anchor"] = anchor::kSolution;
  j["p"] = num(sol.p);
  j["N"] = sol.N;
  j["u0"] = num(sol.u0);
  j["r_p"] = num(sol.r_p);
  j["s_p"] = num(sol.s_p);
  j["u_min"] = num(sol.u_min);
  j["u_at_1"] = num(sol.boundary_value);
  j["log_lambda"] = num(sol.log_lambda);
  j["grid_points"] = sol.grid.size();
  j["max_residual"] = num(sol.max_residual());
  return j;
}

json scales_json(const Scales& s) {
  json j;
  j["anchor"] = anchor::kScales;
  j["eps_plus"] = num(s.eps_plus);
  j["eps_minus"] = num(s.eps_minus);
  j["log_eps_plus"] = num(s.log_eps_plus);
  j["log_eps_minus"] = num(s.log_eps_minus);
  j["ell_hat"] = num(s.ell_hat);
  j["ratio_plus"] = num(s.ratio_plus);
  j["ratio_minus"] = num(s.ratio_minus);
  return j;
}

json fp_json(const FpAnalysis& f) {
  json j;
  j["anchor"] = anchor::kFp;
  j["c_p"] = num(f.c_p);
  j["d_p"] = num(f.d_p);
  j["max_plus"] = num(f.max_plus);
  j["max_minus"] = num(f.max_minus);
  j["sup_f"] = num(f.sup_f);
  j["f_at_nodal"] = num(f.f_at_nodal);
  j["f_at_boundary"] = num(f.f_at_boundary);
  return j;
}

json betas_json(const std::vector<double>& b) {
  json a = json::array();
  for (double x : b) a.push_back(num(x));
  return a;
}

json translation_json(const TranslationCheck& t) {
  json j;
  j["anchor"] = anchor::kTranslation;
  j["count_below"] = t.count_below;
  j["strict"] = t.strict;
  j["log_inner_part"] = num(t.log_inner_part);
  j["log_outer_abs"] = num(t.log_outer_abs);
  j["outer_nonnegative"] = t.outer_nonnegative;
  j["log_margin"] = num(t.log_margin);
  return j;
}

json morse_json(const MorseReport& r) {
  json j;
  j["anchor"] = anchor::kMorse;
  j["p"] = num(r.p);
  j["N"] = r.N;
  j["log_inner"] = num(r.log_inner);
  j["M"] = r.M;
  j["h"] = num(r.h);
  j["betas"] = betas_json(r.betas);
  j["beta1"] = num(r.beta1);
  j["beta2"] = num(r.beta2);
  j["weighted_count"] = r.weighted_count;
  j["m_rad"] = r.m_rad;
  j["zero_pivot_perturbed"] = r.perturbed;
  j["translation"] = translation_json(r.translation);
  json ledger = json::array();
  for (const auto& e : r.ledger) {
    json le;
    le["radial_index"] = e.radial_index;
    le["k"] = e.k;
    le["lambda_k"] = e.lambda_k;
    le["multiplicity"] = e.multiplicity;
    le["mu"] = num(e.mu);
    le["contributes"] = e.contributes;
    ledger.push_back(le);
  }
  j["ledger"] = ledger;
  j["contributions"] = r.contributions;
  j["total"] = r.total;
  json refs = json::array();
  for (const auto& rc : r.refinements) {
    json x;
    x["log_inner"] = num(rc.log_inner);
    x["M"] = rc.M;
    x["h"] = num(rc.h);
    x["weighted_count"] = rc.weighted_count;
    x["unweighted_count"] = rc.unweighted_count;
    x["translation_count"] = rc.translation_count;
    x["total"] = rc.total;
    x["beta1"] = num(rc.beta1);
    x["beta2"] = num(rc.beta2);
    refs.push_back(x);
  }
  j["refinements"] = refs;
  j["ambiguous"] = r.ambiguous;
  j["stable"] = r.stable;
  return j;
}

std::string status_of(const Error& e) { return std::string(to_string(e.kind())) + ": " + e.what(); }

struct Doc {
  json results = json::array();
  json checks = json::array();
  bool solver_failed = false;
  std::string message;

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const json& c) { return c["pass"].get<bool>(); });
  }
};

void solver_failure(Doc& doc, double p, const Error& e) {
  json r;
  r["p"] = num(p);
  r["status"] = status_of(e);
  doc.results.push_back(r);
  doc.solver_failed = true;
  doc.message += "p=" + format_number(p) + ": " + e.what() + "\n";
}

void cmd_solve(const RunConfig& cfg, Doc& doc) {
  for (double p : cfg.p_list) {
    try {
      const RadialSolution sol = solve_nodal(p, cfg.N, cfg.tol_shoot);
      const Scales s = scales(sol);
      json r;
      r["p"] = num(p);
      r["status"] = "ok";
      r["solution"] = solution_json(sol);
      r["scales"] = scales_json(s);
      r["f_p"] = fp_json(analyze_fp(sol));
      doc.results.push_back(r);
      const std::string tag = "[p=" + format_number(p) + "] ";
      doc.checks.push_back(check(tag + "boundary_value", anchor::kSolution,
                                 std::abs(sol.boundary_value), 0.0, cfg.tol_shoot,
                                 std::abs(sol.boundary_value) < cfg.tol_shoot));
      const double res = sol.max_residual();
      doc.checks.push_back(
          check(tag + "ode_residual", anchor::kSolution, res, 0.0, 1e-7, res < 1e-7));
      doc.checks.push_back(check(tag + "eps_plus_below_eps_minus", anchor::kScales,
                                 s.eps_plus / s.eps_minus, 1.0, 0.0, s.eps_plus < s.eps_minus));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::InvalidInput || e.kind() == ErrorKind::Supercritical) throw;
      solver_failure(doc, p, e);
    }
  }
}

void cmd_spectrum(const RunConfig& cfg, Doc& doc) {
  const MorseConfig mc = cfg.morse_config();
  for (double p : cfg.p_list) {
    try {
      const RadialSolution sol = solve_nodal(p, cfg.N, cfg.tol_shoot);
      const double li = annulus_log_inner(sol, mc);
      int M = mc.grid_M;
      if (M <= 0) M = std::max(2, static_cast<int>(std::ceil(-li / mc.grid_step)) - 1);
      const double h = -li / (M + 1);

      const auto prob = build_problem_log(sol, li, M, true);
      const RadialSpectrum spec = weighted_radial_eigs(prob, cfg.eig_count, cfg.tol_eig);
      const InertiaCount ic = count_negative(prob);
      const InertiaCount uc = unweighted_radial_count_log(sol, li, M);

      const int M_fine = 2 * M + 1;
      const auto fine = build_problem_log(sol, li, M_fine, true);
      const auto b_fine = smallest_eigenvalues(fine.matrix, cfg.eig_count, cfg.tol_eig, 1e-14);
      const int M_wide = M + static_cast<int>(std::lround(std::log(2.0) / h));
      const double li_wide = -(M_wide + 1) * h;
      const auto wide = build_problem_log(sol, li_wide, M_wide, true);
      const auto b_wide = smallest_eigenvalues(wide.matrix, cfg.eig_count, cfg.tol_eig, 1e-14);
      const TranslationCheck tc = translation_check(sol, li);
      const FpAnalysis fa = analyze_fp(sol);

      json r;
      r["p"] = num(p);
      r["status"] = "ok";
      json s;
      s["anchor"] = anchor::kSpectrum;
      s["log_inner"] = num(li);
      s["M"] = M;
      s["h"] = num(h);
      s["betas"] = betas_json(spec.betas);
      s["neg_count"] = spec.neg_count;
      s["inertia_count"] = ic.negative;
      s["inertia_shift"] = num(ic.shift);
      s["inertia_perturbed"] = ic.perturbed;
      s["unweighted_count"] = uc.negative;
      s["eigvec_1_size"] = spec.eigvec_1.size();
      s["eigvec_1_one_signed"] = spec.eigvec_1_one_signed;
      s["translation"] = translation_json(tc);
      json ref;
      ref["grid_doubled"] = {{"M", M_fine}, {"betas", betas_json(b_fine)}};
      ref["annulus_doubled"] = {
          {"log_inner", num(li_wide)}, {"M", M_wide}, {"betas", betas_json(b_wide)}};
      s["refinements"] = ref;
      r["spectrum"] = s;
      doc.results.push_back(r);

      const std::string tag = "[p=" + format_number(p) + "] ";
      doc.checks.push_back(check(tag + "inertia_matches_bisection", anchor::kSpectrum,
                                 ic.negative, spec.neg_count, 0.0,
                                 ic.negative == spec.neg_count ||
                                     static_cast<int>(spec.betas.size()) == spec.neg_count));
      bool mono = true;
      for (std::size_t i = 0; i < std::min(spec.betas.size(), b_wide.size()); ++i)
        mono = mono && b_wide[i] <= spec.betas[i] + 4.0 * cfg.tol_eig * std::abs(spec.betas[i]);
      doc.checks.push_back(check(tag + "annulus_nesting_monotone", anchor::kSpectrum,
                                 b_wide.at(0) - spec.betas.at(0), 0.0, 0.0, mono));
      const double rel = std::abs(b_fine.at(0) - spec.betas.at(0)) / std::abs(spec.betas.at(0));
      doc.checks.push_back(
          check(tag + "beta1_grid_convergence", anchor::kSpectrum, rel, 0.0, 1e-4, rel < 1e-4));
      doc.checks.push_back(check(tag + "eigvec_1_one_signed", anchor::kSpectrum,
                                 spec.eigvec_1_one_signed ? 1.0 : 0.0, 1.0, 0.0,
                                 spec.eigvec_1_one_signed));
      doc.checks.push_back(check(tag + "beta1_above_minus_sup_f", anchor::kSpectrum,
                                 spec.betas.at(0), -fa.sup_f, 0.0,
                                 spec.betas.at(0) >= -fa.sup_f));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::InvalidInput || e.kind() == ErrorKind::Supercritical) throw;
      solver_failure(doc, p, e);
    }
  }
}

void cmd_morse(const RunConfig& cfg, Doc& doc) {
  const MorseConfig mc = cfg.morse_config();
  for (double p : cfg.p_list) {
    try {
      const RadialSolution sol = solve_nodal(p, cfg.N, cfg.tol_shoot);
      const MorseReport rep = morse_index(sol, mc);
      json r;
      r["p"] = num(p);
      r["status"] = "ok";
      r["morse"] = morse_json(rep);
      doc.results.push_back(r);
      const std::string tag = "[p=" + format_number(p) + "] ";
      doc.checks.push_back(check(tag + "stable_under_refinement", anchor::kMorse,
                                 rep.stable ? 1.0 : 0.0, 1.0, 0.0, rep.stable));
      doc.checks.push_back(check(tag + "total_at_least_N_plus_2", anchor::kMorse,
                                 static_cast<double>(rep.total), cfg.N + 2, 0.0,
                                 rep.total >= cfg.N + 2));
      doc.checks.push_back(check(tag + "m_rad", anchor::kRadialCount, rep.m_rad, 2, 0.0,
                                 rep.m_rad == 2));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::InvalidInput || e.kind() == ErrorKind::Supercritical) throw;
      solver_failure(doc, p, e);
    }
  }
}

json row_json(const SweepRow& r) {
  json j;
  j["p"] = num(r.p);
  j["u0"] = num(r.u0);
  j["r_p"] = num(r.r_p);
  j["s_p"] = num(r.s_p);
  j["eps_plus"] = num(r.eps_plus);
  j["eps_minus"] = num(r.eps_minus);
  j["ell_hat"] = num(r.ell_hat);
  j["max_plus"] = num(r.max_plus);
  j["max_minus"] = num(r.max_minus);
  j["beta1"] = num(r.beta1);
  j["beta2"] = num(r.beta2);
  j["m_rad"] = r.m_rad;
  j["morse_total"] = r.morse_total;
  j["status"] = r.status;
  return j;
}

void sweep_checks(const RunConfig& cfg, const std::vector<SweepRow>& rows, Doc& doc) {
  std::vector<const SweepRow*> ok;
  for (const auto& r : rows) {
    if (r.status != "ok") {
      doc.solver_failed = true;
      doc.message += "p=" + format_number(r.p) + ": " + r.status + "\n";
      continue;
    }
    ok.push_back(&r);
    const std::string tag = "[p=" + format_number(r.p) + "] ";
    doc.checks.push_back(
        check(tag + "m_rad", anchor::kRadialCount, r.m_rad, 2, 0.0, r.m_rad == 2));
    doc.checks.push_back(check(tag + "morse_total_at_least_N_plus_2", anchor::kMorse,
                               static_cast<double>(r.morse_total), cfg.N + 2, 0.0,
                               r.morse_total >= cfg.N + 2));
  }
  if (ok.size() >= 2 && cfg.N == 2) {
    std::sort(ok.begin(), ok.end(), [](auto* a, auto* b) { return a->p < b->p; });
    bool decreasing = true;
    double last = 0.0;
    for (std::size_t i = 0; i < ok.size(); ++i) {
      const double d = std::abs(ok[i]->ell_hat - kReferenceEll);
      if (i > 0 && !(d < last)) decreasing = false;
      last = d;
    }
    doc.checks.push_back(check("ell_hat_approaches_reference", anchor::kSweep, last, 0.0, 0.0,
                               decreasing));
  }
}

void cmd_limit(const RunConfig& cfg, Doc& doc) {
  const int N = cfg.N;
  const LimitConstants c = limit_constants(cfg.ell);
  json r;
  r["anchor"] = anchor::kLimit;
  r["N"] = N;
  json consts;
  consts["ell"] = num(c.ell);
  consts["gamma"] = num(c.gamma);
  consts["delta"] = num(c.delta);
  consts["H"] = num(c.H);
  consts["morse_Z"] = c.morse_Z;
  consts["kernel_Z"] = c.kernel_Z;
  r["constants"] = consts;

  const double ray = rayleigh_limit(eta1_function(N), N);
  const double target = -(N - 1.0);
  const double res = limit_residual(N, target);
  const double res0 = limit_residual(N, 0.0);
  const HalfLineIntegral mass = liouville_mass();
  const double eight_pi = 8.0 * std::numbers::pi;

  r["rayleigh_eta1"] = num(ray);
  r["limit_residual"] = num(res);
  r["limit_residual_at_zero"] = num(res0);
  r["liouville_mass"] = num(mass.value);
  r["liouville_tail"] = num(mass.tail_high);

  auto add = [&doc](const std::string& name, double v, double t, double tol, bool pass) {
    doc.checks.push_back(check(name, anchor::kLimit, v, t, tol, pass));
  };
  add("rayleigh_eta1", ray, target, 1e-6, std::abs(ray - target) <= 1e-6 * std::abs(target));
  add("limit_residual", res, 0.0, 1e-10, res < 1e-10);
  add("limit_residual_wrong_eigenvalue", res0, 0.0, 1e-3, res0 > 1e-3);
  add("liouville_mass", mass.value, eight_pi, 1e-6,
      std::abs(mass.value - eight_pi) <= 1e-6 * eight_pi);
  add("liouville_tail_fraction", mass.tail_high / mass.value, 0.0, 1e-4,
      mass.tail_high / mass.value < 1e-4);

  const double l2 = c.ell * c.ell;
  const double id_gamma = c.gamma * (c.gamma + 4.0) - 2.0 * l2;
  const double h_delta = exp_Z(c, c.delta) * c.delta * c.delta;
  const double z_ell = std::log(exp_Z(c, c.ell));
  const double g_root8 = limit_potential(2, std::sqrt(8.0)) * 8.0;
  add("gamma_identity", id_gamma, 0.0, 1e-10, std::abs(id_gamma) <= 1e-10 * 2.0 * l2);
  add("h_delta", h_delta, l2 + 2.0, 1e-10, std::abs(h_delta - (l2 + 2.0)) <= 1e-10 * (l2 + 2.0));
  add("Z_ell_at_ell", z_ell, 0.0, 1e-10, std::abs(z_ell) <= 1e-10);
  add("g_at_root8", g_root8, 2.0, 1e-10, std::abs(g_root8 - 2.0) <= 2e-10);
  add("H_equals_minus_gamma", c.H, -c.gamma, 1e-10,
      std::abs(c.H + c.gamma) <= 1e-10 * c.gamma);

  // eta_1 decay at both ends.
  const double near = eta1_jet(N, 1e-6).value * std::pow(1e-6, N - 1);
  const double far = eta1_jet(N, 1e6).value / 1e6;
  add("eta1_decay_origin", near, 0.0, 1e-5, std::abs(near) < 1e-5);
  add("eta1_decay_infinity", far, 0.0, 1e-5, std::abs(far) < 1e-5);

  // Random admissible functions never go below -(N-1).
  const auto fs = random_test_functions(50, kPropertySeed, N);
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& f : fs) worst = std::min(worst, rayleigh_limit(f.as_function(), N));
  r["random_suite_min"] = num(worst);
  add("random_rayleigh_lower_bound", worst, target, 1e-6, worst >= target - 1e-6);

  TestFunctionSpec ts;
  ts.R = cfg.R;
  ts.constants = c;
  const TestFunctionResult q = test_function_quotient(ts, QuotientMode::Limit);
  json tq;
  tq["R"] = num(q.R);
  tq["quotient"] = num(q.quotient);
  tq["split_quotient"] = num(q.split_quotient);
  tq["target"] = num(q.target);
  const auto parts = [](const QuotientParts& P) {
    return json{{"N1", num(P.N1)}, {"N2", num(P.N2)}, {"N3", num(P.N3)}, {"P2", num(P.P2)},
                {"P3", num(P.P3)}, {"D1", num(P.D1)}, {"D2", num(P.D2)}, {"D3", num(P.D3)}};
  };
  tq["parts"] = parts(q.parts);
  tq["closed_form"] = parts(q.closed_form);
  tq["N3_printed"] = num(q.N3_printed);
  r["test_function"] = tq;
  add("test_quotient_limit", q.quotient, q.target, 1e-3,
      std::abs(q.quotient - q.target) <= 1e-3 * std::abs(q.target));
  const auto rel_ok = [](double a, double b) { return std::abs(a - b) <= 1e-8 * std::abs(b); };
  add("N2_closed_form", q.parts.N2, q.closed_form.N2, 1e-8, rel_ok(q.parts.N2, q.closed_form.N2));
  add("N3_closed_form", q.parts.N3, q.closed_form.N3, 1e-8, rel_ok(q.parts.N3, q.closed_form.N3));
  add("D2_closed_form", q.parts.D2, q.closed_form.D2, 1e-8, rel_ok(q.parts.D2, q.closed_form.D2));
  add("D3_closed_form", q.parts.D3, q.closed_form.D3, 1e-8, rel_ok(q.parts.D3, q.closed_form.D3));
  if (cfg.ell == kReferenceEll) add("morse_Z", c.morse_Z, 11, 0.0, c.morse_Z == 11);

  // psi at unit scale against eta_1 (N = 2) evaluated at 2 sqrt(2) S.
  double worst_psi = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double r = c.delta * std::pow(10.0, -2.0 + 4.0 * i / 200.0);
    const double S = std::pow(r / c.delta, (2.0 + c.gamma) / 2.0);
    const double lhs = 2.0 * std::sqrt(2.0) * core_profile(c, c.delta, r);
    const double rhs = eta1_jet(2, 2.0 * std::sqrt(2.0) * S).value;
    worst_psi = std::max(worst_psi, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300));
  }
  add("core_profile_matches_eta1", worst_psi, 0.0, 1e-12, worst_psi <= 1e-12);

  const RadialFunction e1 = eta1_function(N);
  const RadialFunction e3{[e1](double r) { return 3.0 * e1.value(r); },
                          [e1](double r) { return 3.0 * e1.derivative(r); }};
  const double ray3 = rayleigh_limit(e3, N);
  add("rayleigh_homogeneity", ray3, ray, 1e-12, std::abs(ray3 - ray) <= 1e-12 * std::abs(ray));

  doc.results.push_back(r);
}

}  // namespace

const char* to_string(Command c) {
  switch (c) {
    case Command::Solve: return "solve";
    case Command::Spectrum: return "spectrum";
    case Command::Morse: return "morse";
    case Command::Sweep: return "sweep";
    case Command::LimitCheck: return "limit-check";
  }
  return "?";
}

std::optional<Command> parse_command(const std::string& s) {
  for (Command c : {Command::Solve, Command::Spectrum, Command::Morse, Command::Sweep,
                    Command::LimitCheck})
    if (s == to_string(c)) return c;
  return std::nullopt;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

void RunConfig::validate() const {
  std::ostringstream msg;
  if (p_list.empty()) msg << "p list is empty; ";
  for (double p : p_list)
    if (!(p > 1.0) || !std::isfinite(p)) msg << "p=" << p << " must be > 1; ";
  if (N < 2) msg << "N must be >= 2; ";
  if (grid_M < 0 || grid_M == 1) msg << "grid-M must be 0 (automatic) or >= 2; ";
  if (!(grid_step > 0.0)) msg << "grid step must be positive; ";
  if (!(tol_shoot > 0.0)) msg << "tol-shoot must be positive; ";
  if (!(tol_eig > 0.0)) msg << "tol-eig must be positive; ";
  if (!(ell > 0.0)) msg << "ell must be positive; ";
  if (!(R > 1.0)) msg << "R must exceed 1; ";
  if (eig_count < 2) msg << "eig-count must be >= 2; ";
  InnerRule rule;
  double li = 0.0;
  if (!parse_inner_rule(inner_rule, rule, li))
    msg << "inner-rule must be auto, log:<negative> or radius:<(0,1)>; ";
  const auto s = msg.str();
  if (!s.empty()) throw Error(ErrorKind::InvalidInput, s);
}

MorseConfig RunConfig::morse_config() const {
  MorseConfig mc;
  parse_inner_rule(inner_rule, mc.inner_rule, mc.fixed_log_inner);
  mc.grid_M = grid_M;
  mc.grid_step = grid_step;
  mc.eig_tol = tol_eig;
  mc.eig_count = eig_count;
  return mc;
}

SweepRow compute_row(double p, const RunConfig& cfg) {
  SweepRow row;
  row.p = p;
  try {
    const RadialSolution sol = solve_nodal(p, cfg.N, cfg.tol_shoot);
    const Scales s = scales(sol);
    const FpAnalysis fa = analyze_fp(sol);
    const MorseReport rep = morse_index(sol, cfg.morse_config());
    row.u0 = sol.u0;
    row.r_p = sol.r_p;
    row.s_p = sol.s_p;
    row.eps_plus = s.eps_plus;
    row.eps_minus = s.eps_minus;
    row.ell_hat = s.ell_hat;
    row.max_plus = fa.max_plus;
    row.max_minus = fa.max_minus;
    row.beta1 = rep.beta1;
    row.beta2 = rep.beta2;
    row.m_rad = rep.m_rad;
    row.morse_total = rep.total;
    if (!rep.stable) row.status = "unstable: Morse count changed under refinement";
  } catch (const Error& e) {
    row.status = status_of(e);
  }
  return row;
}

std::vector<SweepRow> run_sweep(const RunConfig& cfg) {
  const std::size_t n = cfg.p_list.size();
  const std::size_t lanes = std::max(1u, std::thread::hardware_concurrency());
  std::vector<SweepRow> rows(n);
  for (std::size_t start = 0; start < n; start += lanes) {
    std::vector<std::future<SweepRow>> jobs;
    const std::size_t stop = std::min(n, start + lanes);
    for (std::size_t i = start; i < stop; ++i)
      jobs.push_back(std::async(std::launch::async, compute_row, cfg.p_list[i], std::cref(cfg)));
    for (std::size_t i = start; i < stop; ++i) rows[i] = jobs[i - start].get();
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "p,u0,r_p,s_p,eps_plus,eps_minus,ell_hat,max_plus,max_minus,beta1,beta2,m_rad,"
         "morse_total,status\n";
  for (const auto& r : rows) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    out << format_number(r.p) << ',' << format_number(r.u0) << ',' << format_number(r.r_p) << ','
        << format_number(r.s_p) << ',' << format_number(r.eps_plus) << ','
        << format_number(r.eps_minus) << ',' << format_number(r.ell_hat) << ','
        << format_number(r.max_plus) << ',' << format_number(r.max_minus) << ','
        << format_number(r.beta1) << ',' << format_number(r.beta2) << ',' << r.m_rad << ','
        << r.morse_total << ',' << status << '\n';
  }
  return out.str();
}

RunOutcome run(const RunConfig& cfg) {
  RunOutcome out;
  try {
    cfg.validate();
    if (cfg.format == OutputFormat::Csv && cfg.command != Command::Sweep)
      throw Error(ErrorKind::InvalidInput, "csv output is only available for sweep");
  } catch (const Error& e) {
    out.exit_code = kExitBadConfig;
    out.message = e.what();
    return out;
  }

  Doc doc;
  std::vector<SweepRow> rows;
  try {
    switch (cfg.command) {
      case Command::Solve: cmd_solve(cfg, doc); break;
      case Command::Spectrum: cmd_spectrum(cfg, doc); break;
      case Command::Morse: cmd_morse(cfg, doc); break;
      case Command::Sweep:
        rows = run_sweep(cfg);
        for (const auto& r : rows) doc.results.push_back(row_json(r));
        sweep_checks(cfg, rows, doc);
        break;
      case Command::LimitCheck: cmd_limit(cfg, doc); break;
    }
  } catch (const Error& e) {
    out.exit_code = (e.kind() == ErrorKind::InvalidInput || e.kind() == ErrorKind::Supercritical)
                        ? kExitBadConfig
                        : kExitSolverFailure;
    out.message = status_of(e);
    return out;
  }

  const bool pass = doc.all_pass();
  if (cfg.format == OutputFormat::Csv) {
    out.document = sweep_csv(rows);
  } else {
    json top;
    top["schema_version"] = kSchemaVersion;
    top["config"] = config_json(cfg);
    top["results"] = doc.results;
    top["checks"] = doc.checks;
    top["status"] = doc.solver_failed ? "solver_failure" : (pass ? "pass" : "check_failure");
    out.document = top.dump(2) + "\n";
  }
  out.message = doc.message;
  if (doc.solver_failed) out.exit_code = kExitSolverFailure;
  else if (!pass) out.exit_code = kExitCheckFailure;
  return out;
}

}  // namespace lane_emden
