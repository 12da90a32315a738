#include "icregime/simplex.hpp"

#include <cmath>
#include <limits>

#include "icregime/errors.hpp"

namespace icregime::lp {

namespace {

constexpr double kPivotTol = 1e-11;

// Tableau rows: m constraint rows followed by the objective row (stored as
// minimization of -c.x so optimality means no negative reduced cost).
// Columns: n structural + m basis-start columns + rhs.
struct Tableau {
  int m = 0;
  int n_total = 0;                 // all variable columns
  std::vector<std::vector<double>> t;
  std::vector<int> basis;

  double& rhs(int r) { return t[r][n_total]; }

  void pivot(int row, int col) {
    const double piv = t[row][col];
    for (int j = 0; j <= n_total; ++j) t[row][j] /= piv;
    for (int r = 0; r <= m; ++r) {
      if (r == row) continue;
      const double factor = t[r][col];
      if (factor == 0.0) continue;
      for (int j = 0; j <= n_total; ++j) t[r][j] -= factor * t[row][j];
    }
    basis[row] = col;
  }

  // Bland's rule: entering = lowest-index column with negative reduced cost,
  // leaving = min ratio with lowest basis index on ties.
  void solve(long max_iters) {
    for (long it = 0; it < max_iters; ++it) {
      int col = -1;
      for (int j = 0; j < n_total; ++j)
        if (t[m][j] < -kPivotTol) { col = j; break; }
      if (col < 0) return;  // optimal

      int row = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m; ++r) {
        if (t[r][col] <= kPivotTol) continue;
        const double ratio = rhs(r) / t[r][col];
        if (ratio < best - 1e-15 ||
            (std::abs(ratio - best) <= 1e-15 && (row < 0 || basis[r] < basis[row]))) {
          best = ratio;
          row = r;
        }
      }
      if (row < 0) throw NumericError("simplex: unbounded objective");
      pivot(row, col);
    }
    throw NumericError("simplex: iteration cap reached");
  }
};

}  // namespace

Solution maximize(const std::vector<std::vector<double>>& a,
                  const std::vector<double>& b, const std::vector<double>& c) {
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(c.size());

  Tableau tab;
  tab.m = m;
  tab.n_total = n + m;  // structural + slack
  tab.t.assign(m + 1, std::vector<double>(tab.n_total + 1, 0.0));
  tab.basis.resize(m);
  for (int r = 0; r < m; ++r) {
    for (int j = 0; j < n; ++j) tab.t[r][j] = a[r][j];
    tab.t[r][n + r] = 1.0;
    tab.rhs(r) = b[r];
    tab.basis[r] = n + r;
  }
  for (int j = 0; j < n; ++j) tab.t[m][j] = -c[j];

  tab.solve(100000);

  Solution sol;
  sol.x.assign(n, 0.0);
  for (int r = 0; r < m; ++r)
    if (tab.basis[r] < n) sol.x[tab.basis[r]] = tab.rhs(r);
  sol.value = 0.0;
  for (int j = 0; j < n; ++j) sol.value += c[j] * sol.x[j];
  return sol;
}

std::optional<std::vector<double>> equality_feasible_point(
    const std::vector<std::vector<double>>& a, const std::vector<double>& b,
    double tol) {
  const int m = static_cast<int>(a.size());
  const int n = m > 0 ? static_cast<int>(a[0].size()) : 0;

  Tableau tab;
  tab.m = m;
  tab.n_total = n + m;  // structural + artificial
  tab.t.assign(m + 1, std::vector<double>(tab.n_total + 1, 0.0));
  tab.basis.resize(m);
  for (int r = 0; r < m; ++r) {
    const double sign = b[r] < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) tab.t[r][j] = sign * a[r][j];
    tab.t[r][n + r] = 1.0;
    tab.rhs(r) = sign * b[r];
    tab.basis[r] = n + r;
  }
  // objective: minimize sum of artificials -> reduced costs start as
  // -(sum of constraint rows) over structural columns
  for (int j = 0; j <= tab.n_total; ++j) {
    double s = 0.0;
    for (int r = 0; r < m; ++r) s += tab.t[r][j];
    tab.t[m][j] = (j >= n && j < tab.n_total) ? 0.0 : -s;
  }

  tab.solve(200000);

  double infeasibility = -tab.rhs(m);  // objective row rhs tracks -value
  if (std::abs(infeasibility) > tol * std::max(1, m)) return std::nullopt;

  std::vector<double> x(n, 0.0);
  for (int r = 0; r < m; ++r) {
    if (tab.basis[r] < n) x[tab.basis[r]] = tab.rhs(r);
    else if (tab.rhs(r) > tol) return std::nullopt;  // artificial stuck basic
  }
  return x;
}

}  // namespace icregime::lp
