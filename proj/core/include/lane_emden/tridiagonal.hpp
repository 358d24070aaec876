#pragma once

// Symmetric tridiagonal eigen-machinery: Sturm sequence counts (matrix inertia
// via LDL^T pivots), bisection for individual eigenvalues, inverse iteration.

#include <cstddef>
#include <utility>
#include <vector>

namespace lane_emden {

struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  ///< size() - 1 entries

  std::size_t size() const { return diag.size(); }
};

struct SturmCount {
  int below = 0;            ///< eigenvalues strictly below the shift
  bool zero_pivot = false;  ///< an exact zero pivot was met (and perturbed)
};

/// Number of negative pivots of T - shift I = L D L^T.
SturmCount sturm_count(const SymTridiagonal& t, double shift);

/// Gershgorin enclosure [lo, hi] of the spectrum.
std::pair<double, double> gershgorin_bounds(const SymTridiagonal& t);

/// The (index+1)-th smallest eigenvalue by bisection, to
/// max(rel_tol * |lambda|, abs_tol). Throws Error(NoConvergence) if the
/// bracket cannot be reduced.
double bisect_eigenvalue(const SymTridiagonal& t, int index, double rel_tol, double abs_tol);

/// The k smallest eigenvalues in ascending order.
std::vector<double> smallest_eigenvalues(const SymTridiagonal& t, int k, double rel_tol,
                                         double abs_tol);

/// Eigenvector for an isolated eigenvalue via inverse iteration with a
/// tridiagonal LU factorisation with partial pivoting. Returned with max-norm 1,
/// sign fixed so that the largest entry is positive.
std::vector<double> inverse_iteration(const SymTridiagonal& t, double eigenvalue,
                                      int iterations = 3);

}  // namespace lane_emden
