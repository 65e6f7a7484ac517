#include "ccwlan/lp.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace ccwlan {

namespace {

// Tableau layout: rows 0..m-1 constraints, row m objective, row m+1 the
// phase-one objective; column n is the artificial variable, n+1 the RHS.
class Tableau {
public:
  Tableau(const std::vector<std::vector<double>>& a, std::span<const double> b, std::span<const double> c, double eps)
      : m_{static_cast<int>(b.size())},
        n_{static_cast<int>(c.size())},
        eps_{eps},
        nonbasic_(n_ + 1),
        basic_(m_),
        d_(m_ + 2, std::vector<double>(n_ + 2, 0.0)) {
    for (int i = 0; i < m_; ++i) {
      if (static_cast<int>(a[i].size()) != n_) throw std::invalid_argument("solve_lp: ragged constraint matrix");
      for (int j = 0; j < n_; ++j) d_[i][j] = a[i][j];
      basic_[i] = n_ + i;
      d_[i][n_] = -1.0;
      d_[i][n_ + 1] = b[i];
    }
    for (int j = 0; j < n_; ++j) {
      nonbasic_[j] = j;
      d_[m_][j] = -c[j];
    }
    nonbasic_[n_] = -1;
    d_[m_ + 1][n_] = 1.0;
  }

  LpResult solve() {
    LpResult res;
    int r = 0;
    for (int i = 1; i < m_; ++i)
      if (d_[i][n_ + 1] < d_[r][n_ + 1]) r = i;
    if (m_ > 0 && d_[r][n_ + 1] < -eps_) {
      pivot(r, n_);
      if (!run(2) || d_[m_ + 1][n_ + 1] < -eps_) {
        res.status = LpStatus::infeasible;
        return res;
      }
      for (int i = 0; i < m_; ++i) {
        if (basic_[i] != -1) continue;
        int s = 0;
        for (int j = 1; j <= n_; ++j)
          if (std::make_pair(d_[i][j], nonbasic_[j]) < std::make_pair(d_[i][s], nonbasic_[s])) s = j;
        pivot(i, s);
      }
    }
    const bool bounded = run(1);
    res.x.assign(n_, 0.0);
    for (int i = 0; i < m_; ++i)
      if (basic_[i] >= 0 && basic_[i] < n_) res.x[basic_[i]] = d_[i][n_ + 1];
    res.status = bounded ? LpStatus::optimal : LpStatus::unbounded;
    res.value = bounded ? d_[m_][n_ + 1] : INFINITY;
    return res;
  }

private:
  void pivot(int r, int s) {
    const double inv = 1.0 / d_[r][s];
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r || std::fabs(d_[i][s]) <= eps_) continue;
      const double f = d_[i][s] * inv;
      for (int j = 0; j < n_ + 2; ++j) d_[i][j] -= d_[r][j] * f;
      d_[i][s] = d_[r][s] * f;
    }
    for (int j = 0; j < n_ + 2; ++j)
      if (j != s) d_[r][j] *= inv;
    for (int i = 0; i < m_ + 2; ++i)
      if (i != r) d_[i][s] *= -inv;
    d_[r][s] = inv;
    std::swap(basic_[r], nonbasic_[s]);
  }

  bool run(int phase) {
    const int x = m_ + phase - 1;
    while (true) {
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (nonbasic_[j] == -phase) continue;
        if (s == -1 || std::make_pair(d_[x][j], nonbasic_[j]) < std::make_pair(d_[x][s], nonbasic_[s])) s = j;
      }
      if (d_[x][s] >= -eps_) return true;
      int r = -1;
      for (int i = 0; i < m_; ++i) {
        if (d_[i][s] <= eps_) continue;
        if (r == -1 || std::make_pair(d_[i][n_ + 1] / d_[i][s], basic_[i]) <
                           std::make_pair(d_[r][n_ + 1] / d_[r][s], basic_[r]))
          r = i;
      }
      if (r == -1) return false;
      pivot(r, s);
    }
  }

  int m_, n_;
  double eps_;
  std::vector<int> nonbasic_, basic_;
  std::vector<std::vector<double>> d_;
};

}  // namespace

LpResult solve_lp(const std::vector<std::vector<double>>& a, std::span<const double> b, std::span<const double> c,
                  double eps) {
  if (a.size() != b.size()) throw std::invalid_argument("solve_lp: A and b disagree in row count");
  return Tableau{a, b, c, eps}.solve();
}

}  // namespace ccwlan
