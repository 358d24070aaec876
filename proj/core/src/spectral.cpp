#include "lane_emden/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lane_emden/dopri.hpp"
#include "lane_emden/error.hpp"
#include "lane_emden/profile.hpp"

namespace lane_emden {

namespace {

constexpr double kFallbackShift = -1e-12;

double sphere_area(int N) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

// Nodes t_j = -j h, j = 1..M. Fills matrix from q.
void assemble(AnnulusEigenProblem& prob) {
  const int M = prob.M;
  const double h = prob.h;
  auto& T = prob.matrix;
  T.diag.assign(M, 0.0);
  T.off.assign(M > 0 ? M - 1 : 0, 0.0);
  if (prob.weighted) {
    const double inv_h2 = 1.0 / (h * h);
    for (int j = 0; j < M; ++j) T.diag[j] = 2.0 * inv_h2 + prob.alpha * prob.alpha - prob.q[j];
    std::fill(T.off.begin(), T.off.end(), -inv_h2);
    return;
  }
  // Finite volumes for -(r^{N-1} v')' - q r^{N-3} v with interfaces at the
  // arithmetic midpoints, then D K D with D = diag(r^{-(N-2)/2}).
  const double Nm2 = prob.N - 2;
  const double eh = std::exp(h);
  const double c = std::pow(0.5 * (1.0 + eh), prob.N - 1) / (eh - 1.0);
  const double off = -c * std::exp(-0.5 * h * Nm2);
  const double dconst = c * (1.0 + std::exp(-h * Nm2));
  const double sh = std::sinh(h);
  for (int j = 0; j < M; ++j) T.diag[j] = dconst - prob.q[j] * sh;
  std::fill(T.off.begin(), T.off.end(), off);
}

AnnulusEigenProblem skeleton(int N, double log_inner, int M, bool weighted) {
  if (N < 2) throw Error(ErrorKind::InvalidInput, "N must be >= 2");
  if (M < 2) throw Error(ErrorKind::InvalidInput, "M must be >= 2");
  if (!(log_inner < 0.0) || !std::isfinite(log_inner))
    throw Error(ErrorKind::InvalidInput, "inner radius must lie in (0, 1)");
  AnnulusEigenProblem prob;
  prob.N = N;
  prob.log_inner = log_inner;
  prob.inner = std::exp(log_inner);
  prob.M = M;
  prob.h = -log_inner / (M + 1);
  prob.alpha = 0.5 * (N - 2);
  prob.weighted = weighted;
  prob.t_nodes.resize(M);
  for (int j = 0; j < M; ++j) prob.t_nodes[j] = -(j + 1) * prob.h;
  return prob;
}

InertiaCount inertia(const SymTridiagonal& T) {
  InertiaCount out;
  SturmCount sc = sturm_count(T, 0.0);
  if (sc.zero_pivot) {
    out.perturbed = true;
    out.shift = kFallbackShift;
    sc = sturm_count(T, kFallbackShift);
  }
  out.negative = sc.below;
  return out;
}

// Appends round(extra / h) nodes to a grid that keeps h.
int extended_M(int M, double h, double extra_log) {
  return M + static_cast<int>(std::lround(extra_log / h));
}

}  // namespace

AnnulusEigenProblem build_problem_from_potential(int N, double log_inner, int M, bool weighted,
                                                 const LogPotential& q) {
  AnnulusEigenProblem prob = skeleton(N, log_inner, M, weighted);
  prob.q.resize(M);
  for (int j = 0; j < M; ++j) {
    const double v = q(prob.t_nodes[j]);
    if (!(v >= 0.0)) throw Error(ErrorKind::InvalidInput, "potential must be nonnegative");
    prob.q[j] = v;
  }
  assemble(prob);
  return prob;
}

AnnulusEigenProblem build_problem_log(const RadialSolution& sol, double log_inner, int M,
                                      bool weighted) {
  if (!(log_inner < std::log(sol.r_p))) {
    std::ostringstream msg;
    msg << "inner radius exp(" << log_inner << ") must be below the nodal radius " << sol.r_p;
    throw Error(ErrorKind::InvalidInput, msg.str());
  }
  return build_problem_from_potential(sol.N, log_inner, M, weighted,
                                      [&sol](double t) { return std::exp(sol.log_fp_at(t)); });
}

AnnulusEigenProblem build_problem(const RadialSolution& sol, double inner, int M, bool weighted) {
  if (!(inner > 0.0)) throw Error(ErrorKind::InvalidInput, "inner radius must be positive");
  return build_problem_log(sol, std::log(inner), M, weighted);
}

AnnulusEigenProblem build_problem_on_grid(const RadialSolution& sol, double h, int M,
                                          bool weighted) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidInput, "grid step must be positive");
  return build_problem_log(sol, -(M + 1) * h, M, weighted);
}

RadialSpectrum weighted_radial_eigs(const AnnulusEigenProblem& prob, int k, double rel_tol) {
  if (!prob.weighted)
    throw Error(ErrorKind::InvalidInput, "weighted_radial_eigs needs the weighted operator");
  if (k < 1) throw Error(ErrorKind::InvalidInput, "eigenvalue count must be >= 1");
  RadialSpectrum out;
  out.betas = smallest_eigenvalues(prob.matrix, k, rel_tol, 1e-14);
  out.neg_count = static_cast<int>(
      std::count_if(out.betas.begin(), out.betas.end(), [](double b) { return b < 0.0; }));

  std::vector<double> w = inverse_iteration(prob.matrix, out.betas.front());
  double ss = 0.0;
  for (double v : w) ss += v * v;
  const double norm = std::sqrt(sphere_area(prob.N) * prob.h * ss);
  for (double& v : w) v /= norm;

  // Entries far from the bump underflow to 0 or pick up rounding noise.
  double big = 0.0;
  for (double v : w) big = std::max(big, std::abs(v));
  out.eigvec_1_one_signed =
      std::all_of(w.begin(), w.end(), [big](double v) { return v >= -1e-10 * big; });
  out.eigvec_1 = std::move(w);
  return out;
}

InertiaCount count_negative(const AnnulusEigenProblem& prob) { return inertia(prob.matrix); }

InertiaCount unweighted_radial_count_log(const RadialSolution& sol, double log_inner, int M) {
  return inertia(build_problem_log(sol, log_inner, M, false).matrix);
}

InertiaCount unweighted_radial_count(const RadialSolution& sol, double inner, int M) {
  if (!(inner > 0.0)) throw Error(ErrorKind::InvalidInput, "inner radius must be positive");
  return unweighted_radial_count_log(sol, std::log(inner), M);
}

std::vector<SphereEigenvalue> sphere_spectrum(int N, int k_max) {
  if (N < 2) throw Error(ErrorKind::InvalidInput, "N must be >= 2");
  if (k_max < 0) throw Error(ErrorKind::InvalidInput, "k_max must be >= 0");
  // Dimension of degree-h homogeneous polynomials in N variables, C(N-1+h, N-1).
  auto homog = [N](int h) -> std::int64_t {
    if (h < 0) return 0;
    std::int64_t c = 1;
    const int m = std::min(h, N - 1);
    for (int i = 1; i <= m; ++i) c = c * (N - 1 + h - m + i) / i;
    return c;
  };
  std::vector<SphereEigenvalue> out;
  out.reserve(k_max + 1);
  for (int k = 0; k <= k_max; ++k) {
    SphereEigenvalue e;
    e.k = k;
    e.lambda = static_cast<std::int64_t>(k) * (k + N - 2);
    e.multiplicity = homog(k) - homog(k - 2);
    out.push_back(e);
  }
  return out;
}

double annulus_log_inner(const RadialSolution& sol, const MorseConfig& cfg) {
  if (cfg.inner_rule == InnerRule::Fixed) {
    if (!(cfg.fixed_log_inner < std::log(sol.r_p)))
      throw Error(ErrorKind::InvalidInput, "fixed inner radius must be below r_p");
    return cfg.fixed_log_inner;
  }
  const Scales s = scales(sol);
  return std::min(2.0 * s.log_eps_plus, std::log(sol.r_p / 10.0));
}

void fill_ledger(MorseReport& report, const std::vector<double>& betas, int N,
                 int translation_count, double resolution) {
  report.ledger.clear();
  report.contributions.clear();
  report.total = 0;
  report.ambiguous = false;
  std::vector<int> neg;
  for (int i = 0; i < static_cast<int>(betas.size()); ++i)
    if (betas[i] < 0.0) neg.push_back(i);
  // Highest negative eigenvalue first, matching 1 + 1 + 2 + ... for N = 2.
  for (auto it = neg.rbegin(); it != neg.rend(); ++it) {
    const double beta = betas[*it];
    for (int k = 0;; ++k) {
      const auto e = sphere_spectrum(N, k).back();
      const double mu = beta + static_cast<double>(e.lambda);
      const bool certified = k == 1 && translation_count >= 0;
      const bool contributes = certified ? (*it < translation_count) : (mu < 0.0);
      if (!certified && std::abs(mu) <= resolution) report.ambiguous = true;
      if (!contributes) break;
      LedgerEntry entry;
      entry.radial_index = *it + 1;
      entry.k = k;
      entry.lambda_k = e.lambda;
      entry.multiplicity = e.multiplicity;
      entry.mu = mu;
      entry.contributes = true;
      report.ledger.push_back(entry);
      report.contributions.push_back(e.multiplicity);
      report.total += e.multiplicity;
    }
  }
}

TranslationCheck translation_check(const RadialSolution& sol, double log_inner) {
  if (!(log_inner < std::log(sol.r_p)))
    throw Error(ErrorKind::InvalidInput, "inner radius must be below r_p");
  const Trajectory& traj = sol.trajectory();
  const int N = sol.N;
  const double p = sol.p;
  const double rs = traj.config.r_start;
  const double rho1 = traj.zeros.at(0).r;
  const double rho2 = traj.zeros.at(1).r;
  const double log_a = log_inner + sol.log_lambda;
  const double log_rs = std::log(rs);

  // Inner part. Below r_start u_1' = -rho/N, so the integral is closed form.
  double log_seed = -std::numeric_limits<double>::infinity();
  if (log_a < log_rs) {
    log_seed = std::log(static_cast<double>(N)) - N * log_a +
               std::log1p(-std::exp(N * (log_a - log_rs)));
  }
  auto integrand = [&sol, N](double t) {
    const double d = sol.unit_derivative(std::exp(t));
    return std::exp(-(N - 2) * t) / (d * d);
  };
  const double t0 = std::max(log_a, log_rs);
  const double body = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, t0, std::log(rho1), 20, 1e-10);
  double log_I = std::log(body);
  if (std::isfinite(log_seed)) {
    const double hi = std::max(log_I, log_seed);
    log_I = hi + std::log(std::exp(log_I - hi) + std::exp(log_seed - hi));
  }

  // Outer part: z solves the equation at -(N-1) with z(rho1) = 0 and unit
  // Wronskian against u_1', so FP int_{rho1}^{rho2} = z(rho2) / u_1'(rho2).
  const double dim_m1 = N - 1;
  Rhs rhs = [&sol, p, dim_m1](double r, const State& y) -> State {
    const double pot = std::exp(std::log(p) + (p - 1.0) * sol.unit_log_abs(r));
    return {y[1], -dim_m1 * y[1] / r + dim_m1 * y[0] / (r * r) - pot * y[0]};
  };
  const double slope1 = traj.zeros[0].slope;
  const State z0{0.0, 1.0 / (std::pow(rho1, N - 1) * slope1)};
  StepControl ctl;
  ctl.abs_tol = 1e-14 * std::abs(z0[1]) * rho1;
  ctl.rel_tol = 1e-11;
  const auto st = integrate_dopri(rhs, rho1, z0, rho2, ctl,
                                  [](const DenseStep&, const State&) { return true; });
  // z(rho2) / u_1'(rho2) overflows for p of several hundred; keep it in logs.
  const double log_K = std::log(std::abs(st.y_end[0])) - std::log(std::abs(traj.zeros[1].slope));
  const bool K_nonneg = (st.y_end[0] >= 0.0) == (traj.zeros[1].slope > 0.0) || st.y_end[0] == 0.0;

  TranslationCheck tc;
  tc.log_inner_part = log_I;
  tc.log_outer_abs = log_K;
  tc.outer_nonnegative = K_nonneg;
  tc.log_margin = log_I - log_K;
  const bool positive = K_nonneg || tc.log_margin > 0.0;
  tc.count_below = positive ? 1 : 0;
  tc.strict = K_nonneg || tc.log_margin != 0.0;
  return tc;
}

namespace {

struct GridResult {
  std::vector<double> betas;
  int weighted_count = 0;
  int unweighted_count = 0;
  bool perturbed = false;
};

GridResult solve_grid(const RadialSolution& sol, double log_inner, int M, const MorseConfig& cfg) {
  GridResult g;
  const auto wp = build_problem_log(sol, log_inner, M, true);
  const auto wc = count_negative(wp);
  g.weighted_count = wc.negative;
  g.perturbed = wc.perturbed;
  const int k = std::max(cfg.eig_count, wc.negative + 1);
  g.betas = smallest_eigenvalues(wp.matrix, k, cfg.eig_tol, 1e-14);
  const auto uc = unweighted_radial_count_log(sol, log_inner, M);
  g.unweighted_count = uc.negative;
  g.perturbed = g.perturbed || uc.perturbed;
  return g;
}

}  // namespace

MorseReport morse_index(const RadialSolution& sol, const MorseConfig& cfg) {
  MorseReport rep;
  rep.p = sol.p;
  rep.N = sol.N;

  const double base_log_inner = annulus_log_inner(sol, cfg);
  int M = cfg.grid_M;
  double h = 0.0;
  if (M > 0) {
    h = -base_log_inner / (M + 1);
  } else {
    if (!(cfg.grid_step > 0.0)) throw Error(ErrorKind::InvalidInput, "grid step must be positive");
    M = std::max(2, static_cast<int>(std::ceil(-base_log_inner / cfg.grid_step)) - 1);
    h = -base_log_inner / (M + 1);
  }
  rep.log_inner = base_log_inner;
  rep.M = M;
  rep.h = h;

  const GridResult base = solve_grid(sol, base_log_inner, M, cfg);
  rep.betas = base.betas;
  rep.beta1 = base.betas.at(0);
  rep.beta2 = base.betas.size() > 1 ? base.betas[1] : 0.0;
  rep.weighted_count = base.weighted_count;
  rep.m_rad = base.unweighted_count;
  rep.perturbed = base.perturbed;
  rep.translation = translation_check(sol, base_log_inner);

  // Grid error estimate from the doubled grid; the O(h^2) error is about a
  // third of the observed change.
  GridResult fine;
  double resolution = 0.0;
  if (cfg.check_grid_doubling) {
    fine = solve_grid(sol, base_log_inner, 2 * M + 1, cfg);
    const std::size_t n = std::min(base.betas.size(), fine.betas.size());
    for (std::size_t i = 0; i < n; ++i)
      resolution = std::max(resolution, std::abs(base.betas[i] - fine.betas[i]));
    resolution = 4.0 * resolution + 1e-12;
  }
  fill_ledger(rep, base.betas, sol.N, rep.translation.count_below, resolution);

  auto record = [&](double li, int m, const GridResult& g, const TranslationCheck& tc) {
    MorseReport tmp;
    fill_ledger(tmp, g.betas, sol.N, tc.count_below, resolution);
    RefinementCheck rc;
    rc.log_inner = li;
    rc.M = m;
    rc.h = -li / (m + 1);
    rc.weighted_count = g.weighted_count;
    rc.unweighted_count = g.unweighted_count;
    rc.total = tmp.total;
    rc.beta1 = g.betas.at(0);
    rc.beta2 = g.betas.size() > 1 ? g.betas[1] : 0.0;
    rc.translation_count = tc.count_below;
    rep.refinements.push_back(rc);
    if (rc.total != rep.total || rc.weighted_count != rep.weighted_count ||
        rc.unweighted_count != rep.m_rad || tmp.ambiguous)
      rep.stable = false;
  };

  // n doubled: same step, nodes appended towards the origin.
  int m_n = M;
  for (int d = 0; d < cfg.annulus_doublings; ++d) {
    m_n = extended_M(m_n, h, std::log(2.0));
    const double li = -(m_n + 1) * h;
    record(li, m_n, solve_grid(sol, li, m_n, cfg), translation_check(sol, li));
  }
  if (cfg.check_grid_doubling) record(base_log_inner, 2 * M + 1, fine, rep.translation);
  if (rep.ambiguous || !rep.translation.strict) rep.stable = false;
  return rep;
}

}  // namespace lane_emden
