#pragma once

// Radial eigenvalue problems of the linearised operator on annuli
// {a < |x| < 1}, their negative counts, and the Morse index obtained by adding
// the spectrum of the Laplace-Beltrami operator on the sphere.
//
// Weighted problem, in t = ln r with w = r^{(N-2)/2} v:
//     -w'' + ((N-2)/2)^2 w - f_p(e^t) w = beta w,   w(ln a) = w(0) = 0,
// discretised by second differences on the uniform grid t_j = -j h, j = 1..M,
// h = -ln a / (M + 1). Because the grid is anchored at t = 0, a grid with the
// same h and more points contains the smaller one as a trailing principal
// submatrix, so eigenvalues are monotone under annulus nesting exactly.

#include <cstdint>
#include <functional>
#include <vector>

#include "lane_emden/radial_ode.hpp"
#include "lane_emden/tridiagonal.hpp"

namespace lane_emden {

struct AnnulusEigenProblem {
  int N = 2;
  double log_inner = 0.0;  ///< ln a; a itself may underflow for large p
  double inner = 0.0;
  int M = 0;
  double h = 0.0;
  std::vector<double> t_nodes;  ///< descending from -h to -M h
  std::vector<double> q;        ///< f_p(e^t) at t_nodes
  double alpha = 0.0;           ///< (N-2)/2
  bool weighted = true;
  SymTridiagonal matrix;
};

/// Potential sampler q(t) = f(e^t); used to build problems without a solution.
using LogPotential = std::function<double(double)>;

AnnulusEigenProblem build_problem(const RadialSolution& sol, double inner, int M, bool weighted);
AnnulusEigenProblem build_problem_log(const RadialSolution& sol, double log_inner, int M,
                                      bool weighted);
/// Grid with prescribed step: inner radius exp(-(M+1) h).
AnnulusEigenProblem build_problem_on_grid(const RadialSolution& sol, double h, int M,
                                          bool weighted);
AnnulusEigenProblem build_problem_from_potential(int N, double log_inner, int M, bool weighted,
                                                 const LogPotential& q);

struct RadialSpectrum {
  std::vector<double> betas;      ///< ascending
  int neg_count = 0;              ///< negative entries of betas
  std::vector<double> eigvec_1;   ///< w = r^{(N-2)/2} phi at t_nodes, ||phi/|y|||_{L^2(A)} = 1
  bool eigvec_1_one_signed = false;
};

/// The k smallest weighted radial eigenvalues by Sturm bisection, with the
/// first eigenfunction from inverse iteration.
RadialSpectrum weighted_radial_eigs(const AnnulusEigenProblem& prob, int k,
                                    double rel_tol = 1e-10);

struct InertiaCount {
  int negative = 0;
  double shift = 0.0;      ///< shift actually used
  bool perturbed = false;  ///< zero pivot at 0 forced the fallback shift
};

/// Negative eigenvalue count from the LDL^T inertia at shift 0, retrying at
/// -1e-12 on an exact zero pivot.
InertiaCount count_negative(const AnnulusEigenProblem& prob);

/// Radial Morse index on the annulus from the unweighted operator
/// -(r^{N-1} v')' - p|u_p|^{p-1} r^{N-1} v = mu r^{N-1} v, discretised by
/// finite volumes on the geometric grid r_j = e^{t_j} and symmetrised by
/// r^{-(N-2)/2}. The mass matrix is diagonal and positive, so the count of
/// negative mu equals the inertia of the stiffness matrix.
InertiaCount unweighted_radial_count(const RadialSolution& sol, double inner, int M);
InertiaCount unweighted_radial_count_log(const RadialSolution& sol, double log_inner, int M);

struct SphereEigenvalue {
  int k = 0;
  std::int64_t lambda = 0;        ///< k (k + N - 2)
  std::int64_t multiplicity = 0;  ///< N_k - N_{k-2}, N_h = C(N-1+h, N-1)
};

std::vector<SphereEigenvalue> sphere_spectrum(int N, int k_max);

enum class InnerRule {
  Auto,   ///< min(eps_+^2, r_p / 10)
  Fixed,  ///< MorseConfig::fixed_log_inner
};

struct MorseConfig {
  InnerRule inner_rule = InnerRule::Auto;
  double fixed_log_inner = 0.0;
  /// Grid step in t; used when grid_M == 0.
  double grid_step = 4e-3;
  int grid_M = 0;
  int eig_count = 4;
  double eig_tol = 1e-10;
  /// Number of annulus doublings checked for stability (each with the same h).
  int annulus_doublings = 1;
  bool check_grid_doubling = true;
};

/// Radial eigenvalues of the weighted operator sit within O(h^2) of -(N-1)
/// (beta_2 is above it by an amount of order a^N, far below any grid error).
/// u_p' solves the radial equation at exactly -(N-1), so the oscillation
/// theorem decides the comparison: the solution y with y(a) = 0 satisfies
/// y / u_p' = W * J(r) with
///   J(r) = FP int_a^r ds / (s^{N-1} u_p'(s)^2)
/// (Hadamard finite part across s_p), and y has a zero in (s_p, 1) iff J(1) > 0.
struct TranslationCheck {
  int count_below = 0;   ///< radial eigenvalues strictly below -(N-1)
  bool strict = false;   ///< -(N-1) is not itself an eigenvalue
  double log_inner_part = 0.0;  ///< log of int_a^{r_p} (always positive)
  double log_outer_abs = 0.0;   ///< log|FP int_{r_p}^1|, from the variational ODE
  bool outer_nonnegative = true;
  double log_margin = 0.0;      ///< log(inner part) - log|outer part|
};

/// Scale-free evaluation in rho = lambda r. Requires log_inner < ln r_p.
TranslationCheck translation_check(const RadialSolution& sol, double log_inner);

struct LedgerEntry {
  int radial_index = 0;  ///< i in beta_i (1-based)
  int k = 0;
  std::int64_t lambda_k = 0;
  std::int64_t multiplicity = 0;
  double mu = 0.0;  ///< beta_i + lambda_k
  bool contributes = false;
};

struct RefinementCheck {
  double log_inner = 0.0;
  int M = 0;
  double h = 0.0;
  int weighted_count = 0;
  int unweighted_count = 0;
  std::int64_t total = 0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  int translation_count = 0;
};

struct MorseReport {
  double p = 0.0;
  int N = 2;
  double log_inner = 0.0;
  int M = 0;
  double h = 0.0;
  std::vector<double> betas;
  double beta1 = 0.0;
  double beta2 = 0.0;
  int weighted_count = 0;
  int m_rad = 0;
  bool perturbed = false;
  std::vector<LedgerEntry> ledger;  ///< contributing entries, beta_i descending then k ascending
  std::vector<std::int64_t> contributions;
  std::int64_t total = 0;
  TranslationCheck translation;
  std::vector<RefinementCheck> refinements;
  /// Some beta_i + lambda_k (k != 1) closer to 0 than the grid can resolve.
  bool ambiguous = false;
  bool stable = true;
};

/// Morse index = sum over negative beta_i and k with beta_i + lambda_k < 0 of
/// mult(lambda_k). Recomputed on the doubled annulus and the doubled grid;
/// any change is reported through `stable` and `refinements`.
MorseReport morse_index(const RadialSolution& sol, const MorseConfig& cfg = {});

/// ln a for the configured rule.
double annulus_log_inner(const RadialSolution& sol, const MorseConfig& cfg);

/// Ledger and total for given radial eigenvalues. The k = 1 mode
/// (lambda_1 = N-1) contributes for the first `translation_count` radial
/// indices; pass a negative value to fall back to the discrete signs.
/// Entries with |beta_i + lambda_k| below `resolution` set `ambiguous`.
void fill_ledger(MorseReport& report, const std::vector<double>& betas, int N,
                 int translation_count = -1, double resolution = 0.0);

}  // namespace lane_emden
