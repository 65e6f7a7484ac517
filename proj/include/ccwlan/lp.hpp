#pragma once

#include <span>
#include <vector>

namespace ccwlan {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  double value = 0.0;
  std::vector<double> x;
};

/// Dense two-phase simplex for  max c^T x  s.t.  A x <= b, x >= 0.
/// Bland-style lexicographic tie-breaking keeps degenerate problems from cycling.
LpResult solve_lp(const std::vector<std::vector<double>>& a, std::span<const double> b, std::span<const double> c,
                  double eps = 1e-10);

}  // namespace ccwlan
