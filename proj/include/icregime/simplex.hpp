#pragma once

#include <optional>
#include <vector>

namespace icregime::lp {

struct Solution {
  double value = 0.0;
  std::vector<double> x;
};

// Dense tableau simplex for  max c.x  s.t.  A x <= b, x >= 0  with b >= 0,
// so the origin is feasible and no phase 1 is needed. Bland's rule.
// Throws NumericError on iteration blowup; unboundedness is reported the
// same way (the rate polytopes handled here are always bounded).
Solution maximize(const std::vector<std::vector<double>>& a,
                  const std::vector<double>& b, const std::vector<double>& c);

// Phase-1 feasibility for  A x = b, x >= 0  (rows with negative b are
// flipped). Returns a feasible point when the artificial optimum is within
// tol of zero, nullopt otherwise.
std::optional<std::vector<double>> equality_feasible_point(
    const std::vector<std::vector<double>>& a, const std::vector<double>& b,
    double tol);

}  // namespace icregime::lp
