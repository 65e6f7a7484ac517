#include "ccwlan/fair_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ccwlan/errors.hpp"
#include "ccwlan/lp.hpp"

namespace ccwlan {

namespace {

constexpr double kRateFloor = 1e-12;

std::size_t check_atoms(std::span<const Atom> atoms) {
  if (atoms.empty()) throw Error("fairness solver: empty atom list");
  const std::size_t k = atoms.front().rates.size();
  std::vector<bool> reachable(k, false);
  for (const auto& a : atoms) {
    if (a.rates.size() != k) throw std::invalid_argument("fairness solver: atoms differ in dimension");
    for (std::size_t u = 0; u < k; ++u) {
      if (a.rates[u] < 0.0) throw std::invalid_argument("fairness solver: negative rate");
      if (a.rates[u] > 0.0) reachable[u] = true;
    }
  }
  for (std::size_t u = 0; u < k; ++u)
    if (!reachable[u]) throw Error("fairness solver: user " + std::to_string(u + 1) + " has zero rate in every atom");
  return k;
}

std::vector<double> mix(std::span<const Atom> atoms, std::span<const double> pi, std::size_t k) {
  std::vector<double> r(k, 0.0);
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    if (pi[a] == 0.0) continue;
    for (std::size_t u = 0; u < k; ++u) r[u] += pi[a] * atoms[a].rates[u];
  }
  return r;
}

void clean(std::vector<double>& pi, double threshold) {
  double total = 0.0;
  for (auto& p : pi) {
    if (p < threshold) p = 0.0;
    total += p;
  }
  for (auto& p : pi) p /= total;
}

// Largest step in [0, max_step] along d before sum log(r + step d) starts
// decreasing; the derivative is monotone so bisection suffices.
double line_search(std::span<const double> r, std::span<const double> d, double max_step) {
  auto slope = [&](double s) {
    double g = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (d[k] == 0.0) continue;
      const double v = r[k] + s * d[k];
      if (v <= 0.0) return -std::numeric_limits<double>::infinity();
      g += d[k] / v;
    }
    return g;
  };
  if (slope(max_step) >= 0.0) return max_step;
  double lo = 0.0, hi = max_step;
  for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) > 0.0 ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

std::vector<Atom> to_atoms(std::span<const RatedDecision> vectors) {
  std::vector<Atom> atoms;
  atoms.reserve(vectors.size());
  for (const auto& rd : vectors) {
    Atom a{rd.decision.pattern.index(), rd.decision.index, {}};
    a.rates.reserve(rd.rates.size());
    for (const auto& r : rd.rates) a.rates.push_back(r.to_double());
    atoms.push_back(std::move(a));
  }
  return atoms;
}

std::vector<std::size_t> MixturePolicy::support() const {
  std::vector<std::size_t> s;
  for (std::size_t a = 0; a < probabilities.size(); ++a)
    if (probabilities[a] > 0.0) s.push_back(a);
  return s;
}

double pf_utility(std::span<const double> goodput) {
  double u = 0.0;
  for (double r : goodput) u += r > 0.0 ? std::log(r) : -std::numeric_limits<double>::infinity();
  return u;
}

double hf_utility(std::span<const double> goodput) {
  if (goodput.empty()) return 0.0;
  return *std::min_element(goodput.begin(), goodput.end());
}

MixturePolicy solve_pf(std::span<const Atom> atoms, const SolverOptions& options) {
  const std::size_t k = check_atoms(atoms);
  const std::size_t n = atoms.size();

  MixturePolicy out;
  std::vector<double> pi(n, 1.0 / static_cast<double>(n));
  std::vector<double> r = mix(atoms, pi, k);
  std::vector<double> grad(k), dir(k);
  std::vector<double> score(n);

  out.converged = false;
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    out.iterations = it + 1;
    double at_r = 0.0;
    for (std::size_t u = 0; u < k; ++u) {
      grad[u] = 1.0 / std::max(r[u], kRateFloor);
      at_r += grad[u] * r[u];
    }
    std::size_t toward = 0, away = n;
    for (std::size_t a = 0; a < n; ++a) {
      double s = 0.0;
      for (std::size_t u = 0; u < k; ++u) s += grad[u] * atoms[a].rates[u];
      score[a] = s;
      if (s > score[toward]) toward = a;
      if (pi[a] > 0.0 && (away == n || s < score[away])) away = a;
    }
    const double fw_gap = score[toward] - at_r;
    out.gap = fw_gap;
    if (fw_gap <= options.gap_tolerance) {
      out.converged = true;
      break;
    }
    const double away_gap = at_r - score[away];

    if (fw_gap >= away_gap || pi[away] >= 1.0) {
      for (std::size_t u = 0; u < k; ++u) dir[u] = atoms[toward].rates[u] - r[u];
      const double step = line_search(r, dir, 1.0);
      for (auto& p : pi) p *= 1.0 - step;
      pi[toward] += step;
    } else {
      for (std::size_t u = 0; u < k; ++u) dir[u] = r[u] - atoms[away].rates[u];
      const double max_step = pi[away] / (1.0 - pi[away]);
      const double step = line_search(r, dir, max_step);
      for (auto& p : pi) p *= 1.0 + step;
      pi[away] = step >= max_step ? 0.0 : pi[away] - step;
    }
    for (auto& p : pi)
      if (p < 0.0) p = 0.0;
    r = mix(atoms, pi, k);
  }

  clean(pi, options.min_probability);
  out.goodput = mix(atoms, pi, k);
  out.probabilities = std::move(pi);
  out.utility = pf_utility(out.goodput);
  return out;
}

MixturePolicy solve_hf(std::span<const Atom> atoms, const SolverOptions& options) {
  const std::size_t k = check_atoms(atoms);
  const std::size_t n = atoms.size();

  // Variables: pi_1..pi_n, z.  max z  s.t.  z - sum_a pi_a r_a[k] <= 0,
  // sum pi <= 1, -sum pi <= -1.
  std::vector<std::vector<double>> a(k + 2, std::vector<double>(n + 1, 0.0));
  std::vector<double> b(k + 2, 0.0), c(n + 1, 0.0);
  for (std::size_t u = 0; u < k; ++u) {
    for (std::size_t j = 0; j < n; ++j) a[u][j] = -atoms[j].rates[u];
    a[u][n] = 1.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    a[k][j] = 1.0;
    a[k + 1][j] = -1.0;
  }
  b[k] = 1.0;
  b[k + 1] = -1.0;
  c[n] = 1.0;

  const auto lp = solve_lp(a, b, c);
  if (lp.status != LpStatus::optimal) throw Error("max-min LP did not reach an optimum");

  MixturePolicy out;
  std::vector<double> pi(lp.x.begin(), lp.x.begin() + static_cast<std::ptrdiff_t>(n));
  for (auto& p : pi) p = std::max(p, 0.0);
  clean(pi, options.min_probability);
  out.goodput = mix(atoms, pi, k);
  out.probabilities = std::move(pi);
  out.utility = hf_utility(out.goodput);
  out.iterations = 1;
  return out;
}

MixturePolicy solve(Fairness objective, std::span<const Atom> atoms, const SolverOptions& options) {
  return objective == Fairness::pf ? solve_pf(atoms, options) : solve_hf(atoms, options);
}

FairnessMetrics metrics(std::span<const double> goodput) {
  FairnessMetrics m;
  if (goodput.empty()) return m;
  double log_sum = 0.0;
  bool zero = false;
  for (double r : goodput) {
    if (r < 0.0) throw std::invalid_argument("metrics: negative goodput");
    if (r == 0.0) zero = true;
    else log_sum += std::log(r);
  }
  const double k = static_cast<double>(goodput.size());
  m.geometric_mean = zero ? 0.0 : std::exp(log_sum / k);
  m.min_rate = hf_utility(goodput);
  std::vector<double> sorted(goodput.begin(), goodput.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) m.cdf.emplace_back(sorted[i], static_cast<double>(i + 1) / k);
  return m;
}

}  // namespace ccwlan
