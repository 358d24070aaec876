#include "lane_emden/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lane_emden/error.hpp"

namespace lane_emden {

SturmCount sturm_count(const SymTridiagonal& t, double shift) {
  SturmCount out;
  const std::size_t n = t.size();
  const double tiny = std::numeric_limits<double>::min();
  // d_i = a_i - shift - b_{i-1}^2 / d_{i-1}; a zero pivot is nudged below zero.
  double prev = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double di = t.diag[i] - shift;
    if (i > 0) di -= t.off[i - 1] * t.off[i - 1] / prev;
    if (di == 0.0) {
      out.zero_pivot = true;
      di = -tiny;
    }
    if (di < 0.0) ++out.below;
    prev = di;
  }
  return out;
}

std::pair<double, double> gershgorin_bounds(const SymTridiagonal& t) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const std::size_t n = t.size();
  for (std::size_t i = 0; i < n; ++i) {
    double rad = 0.0;
    if (i > 0) rad += std::abs(t.off[i - 1]);
    if (i + 1 < n) rad += std::abs(t.off[i]);
    lo = std::min(lo, t.diag[i] - rad);
    hi = std::max(hi, t.diag[i] + rad);
  }
  return {lo, hi};
}

double bisect_eigenvalue(const SymTridiagonal& t, int index, double rel_tol, double abs_tol) {
  if (index < 0 || static_cast<std::size_t>(index) >= t.size())
    throw Error(ErrorKind::InvalidInput, "eigenvalue index out of range");
  auto [lo, hi] = gershgorin_bounds(t);
  const double pad = 1e-12 * std::max(std::abs(lo), std::abs(hi)) + abs_tol;
  lo -= pad;
  hi += pad;
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= std::max(rel_tol * std::abs(mid), abs_tol)) return mid;
    if (mid <= lo || mid >= hi) return mid;
    if (sturm_count(t, mid).below > index) hi = mid;
    else lo = mid;
  }
  std::ostringstream msg;
  msg << "bisection for eigenvalue " << index << " did not converge (bracket [" << lo << ", "
      << hi << "])";
  throw Error(ErrorKind::NoConvergence, msg.str());
}

std::vector<double> smallest_eigenvalues(const SymTridiagonal& t, int k, double rel_tol,
                                         double abs_tol) {
  std::vector<double> out;
  const int n = static_cast<int>(std::min<std::size_t>(t.size(), static_cast<std::size_t>(k)));
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(bisect_eigenvalue(t, i, rel_tol, abs_tol));
  return out;
}

std::vector<double> inverse_iteration(const SymTridiagonal& t, double eigenvalue, int iterations) {
  const std::size_t n = t.size();
  if (n == 0) return {};
  auto [glo, ghi] = gershgorin_bounds(t);
  const double scale = std::max({std::abs(glo), std::abs(ghi), 1.0});
  const double shift = eigenvalue - 1e-10 * scale;

  // LU with partial pivoting of (T - shift I): rows may swap with the next one,
  // giving an upper factor with two super-diagonals.
  std::vector<double> l(n, 0.0);
  std::vector<char> swapped(n, 0);
  std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0);  // sub, diag, super
  for (std::size_t i = 0; i < n; ++i) {
    b[i] = t.diag[i] - shift;
    if (i + 1 < n) c[i] = t.off[i];
    if (i > 0) a[i] = t.off[i - 1];
  }
  const double tiny = std::numeric_limits<double>::epsilon() * scale;
  // Working copies for the elimination.
  std::vector<double> diag = b, sup1 = c, sup2(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double sub = a[i + 1];
    if (std::abs(diag[i]) >= std::abs(sub)) {
      if (diag[i] == 0.0) diag[i] = tiny;
      const double m = sub / diag[i];
      l[i] = m;
      diag[i + 1] -= m * sup1[i];
    } else {
      // Swap rows i and i+1.
      swapped[i] = 1;
      const double m = diag[i] / sub;
      l[i] = m;
      const double new_diag_i = sub;
      const double new_sup1_i = diag[i + 1];
      const double new_sup2_i = (i + 1 < n - 1) ? sup1[i + 1] : 0.0;
      const double row_i1_diag = sup1[i] - m * new_sup1_i;
      const double row_i1_sup = -m * new_sup2_i;
      diag[i] = new_diag_i;
      sup1[i] = new_sup1_i;
      sup2[i] = new_sup2_i;
      diag[i + 1] = row_i1_diag;
      if (i + 1 < n - 1) sup1[i + 1] = row_i1_sup;
    }
  }
  if (diag[n - 1] == 0.0) diag[n - 1] = tiny;

  std::vector<double> x(n, 1.0);
  for (int it = 0; it < iterations; ++it) {
    // Forward: apply the row swaps and L^{-1}.
    std::vector<double> y = x;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (swapped[i]) std::swap(y[i], y[i + 1]);
      y[i + 1] -= l[i] * y[i];
    }
    // Back substitution.
    for (std::size_t ii = n; ii-- > 0;) {
      double s = y[ii];
      if (ii + 1 < n) s -= sup1[ii] * y[ii + 1];
      if (ii + 2 < n) s -= sup2[ii] * y[ii + 2];
      const double piv = std::abs(diag[ii]) < tiny ? (diag[ii] < 0 ? -tiny : tiny) : diag[ii];
      y[ii] = s / piv;
    }
    double big = 0.0;
    for (double v : y) big = std::max(big, std::abs(v));
    if (big == 0.0 || !std::isfinite(big))
      throw Error(ErrorKind::NoConvergence, "inverse iteration broke down");
    for (double& v : y) v /= big;
    x = std::move(y);
  }
  std::size_t imax = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(x[i]) > std::abs(x[imax])) imax = i;
  if (x[imax] < 0.0)
    for (double& v : x) v = -v;
  return x;
}

}  // namespace lane_emden
