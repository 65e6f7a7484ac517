// Brute-force reference implementations used by the tests. Nothing here
// calls into the library's enumeration, grouping or solver code; only the
// plain data types and Rational are shared.
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "ccwlan/network.hpp"
#include "ccwlan/rational.hpp"

namespace oracle {

using ccwlan::Rational;

inline std::uint64_t choose(unsigned n, unsigned k) {
  if (k > n) return 0;
  std::vector<std::vector<std::uint64_t>> c(n + 1, std::vector<std::uint64_t>(n + 1, 0));
  for (unsigned i = 0; i <= n; ++i) {
    c[i][0] = 1;
    for (unsigned j = 1; j <= i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
  }
  return c[n][k];
}

// Codewords left after extending a v-user group with L - v phantom users,
// forming every (t+1)-subset of the extended set and dropping the subsets
// made of phantoms only. Real users hold profiles 0..v-1.
inline std::uint64_t phantom_codeword_count(unsigned L, unsigned t, unsigned v) {
  std::uint64_t count = 0;
  const std::uint64_t real = (std::uint64_t{1} << v) - 1;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << L); ++s)
    if (static_cast<unsigned>(std::popcount(s)) == t + 1 && (s & real)) ++count;
  return count;
}

// Per-user rate of a v-user group: subpackets missing per user over codewords sent.
inline Rational group_rate(unsigned L, unsigned t, unsigned v) {
  return Rational{static_cast<std::int64_t>(choose(L, t)), static_cast<std::int64_t>(phantom_codeword_count(L, t, v))};
}

inline Rational rate_of(const ccwlan::CacheConfig& cfg, unsigned v) {
  if (cfg.is_uncoded()) return Rational{1} / (Rational{1} - cfg.gamma());
  return group_rate(cfg.profiles(), cfg.t(), v);
}

// u is decodable from ap under the pattern iff ap can reach it and no other
// active AP interferes with it.
inline bool served(const ccwlan::Network& net, std::uint64_t pattern, std::size_t u, std::size_t ap) {
  const std::uint64_t self = std::uint64_t{1} << ap;
  return (net.topology.trans_set(u) & self) && (net.topology.inter_set(u) & pattern) == self;
}

struct Decision {
  std::uint64_t pattern = 0;
  std::vector<std::vector<std::size_t>> groups;  // per active AP, possibly empty
  std::vector<Rational> rates;
};

// Every pattern and every choice of a distinct-profile subset (empty allowed)
// per active AP, as plain nested subset loops.
inline std::vector<Decision> all_decisions(const ccwlan::Network& net) {
  const std::size_t H = net.ap_count(), K = net.user_count();
  std::vector<Decision> out;
  for (std::uint64_t p = 1; p < (std::uint64_t{1} << H); ++p) {
    std::vector<std::size_t> aps;
    std::vector<std::vector<std::vector<std::size_t>>> options;
    for (std::size_t a = 0; a < H; ++a) {
      if (!(p >> a & 1U)) continue;
      std::vector<std::size_t> reach;
      for (std::size_t u = 0; u < K; ++u)
        if (served(net, p, u, a)) reach.push_back(u);
      std::vector<std::vector<std::size_t>> subsets;
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << reach.size()); ++m) {
        std::vector<std::size_t> g;
        std::set<unsigned> profiles;
        bool ok = true;
        for (std::size_t i = 0; i < reach.size(); ++i)
          if (m >> i & 1U) {
            g.push_back(reach[i]);
            ok = ok && profiles.insert(net.profiles[reach[i]]).second;
          }
        if (ok) subsets.push_back(g);
      }
      aps.push_back(a);
      options.push_back(std::move(subsets));
    }
    std::vector<std::size_t> pick(aps.size(), 0);
    while (true) {
      Decision d{p, {}, std::vector<Rational>(K, Rational{0})};
      for (std::size_t i = 0; i < aps.size(); ++i) {
        const auto& g = options[i][pick[i]];
        d.groups.push_back(g);
        for (auto u : g) d.rates[u] = rate_of(net.cache, static_cast<unsigned>(g.size()));
      }
      out.push_back(std::move(d));
      std::size_t i = 0;
      while (i < pick.size() && ++pick[i] == options[i].size()) pick[i++] = 0;
      if (i == pick.size()) break;
    }
  }
  return out;
}

inline bool dominated_by(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] > b[k]) return false;
  return true;
}

// Distinct componentwise-maximal vectors (zero vector excluded).
inline std::set<std::vector<Rational>> maximal_set(const std::vector<std::vector<Rational>>& vectors) {
  std::set<std::vector<Rational>> uniq(vectors.begin(), vectors.end());
  std::set<std::vector<Rational>> out;
  for (const auto& a : uniq) {
    if (std::all_of(a.begin(), a.end(), [](const Rational& r) { return r.is_zero(); })) continue;
    bool keep = true;
    for (const auto& b : uniq)
      if (a != b && dominated_by(a, b)) keep = false;
    if (keep) out.insert(a);
  }
  return out;
}

template <class W>
W weighted(const std::vector<Rational>& r, const std::vector<W>& w) {
  W s{};
  for (std::size_t k = 0; k < r.size(); ++k) {
    if constexpr (std::is_same_v<W, Rational>) s += r[k] * w[k];
    else s += r[k].to_double() * w[k];
  }
  return s;
}

template <class W>
W wsr_max(const ccwlan::Network& net, const std::vector<W>& w) {
  W best{};
  for (const auto& d : all_decisions(net)) best = std::max(best, weighted(d.rates, w));
  return best;
}

// Max over all distinct-profile subsets of `candidates` of rate(|S|) * sum w.
inline Rational best_group_value(const std::vector<std::size_t>& candidates, const std::vector<unsigned>& profiles,
                                 const std::vector<Rational>& w, const ccwlan::CacheConfig& cfg) {
  Rational best{0};
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << candidates.size()); ++m) {
    std::set<unsigned> used;
    Rational sum{0};
    bool ok = true;
    for (std::size_t i = 0; i < candidates.size(); ++i)
      if (m >> i & 1U) {
        ok = ok && used.insert(profiles[candidates[i]]).second;
        sum += w[candidates[i]];
      }
    if (ok) best = std::max(best, rate_of(cfg, static_cast<unsigned>(std::popcount(m))) * sum);
  }
  return best;
}

// Proportional fairness by exponentiated-gradient ascent on the mixture weights.
inline std::vector<double> pf_goodput(const std::vector<std::vector<double>>& atoms, int iterations = 200000,
                                      double step = 0.05) {
  const std::size_t n = atoms.size(), K = atoms.front().size();
  std::vector<double> pi(n, 1.0 / static_cast<double>(n)), r(K);
  for (int it = 0; it < iterations; ++it) {
    std::fill(r.begin(), r.end(), 0.0);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t k = 0; k < K; ++k) r[k] += pi[a] * atoms[a][k];
    double total = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      double g = 0.0;
      for (std::size_t k = 0; k < K; ++k) g += atoms[a][k] / r[k];
      pi[a] *= std::exp(step * (g - static_cast<double>(K)));
      total += pi[a];
    }
    for (auto& p : pi) p /= total;
  }
  std::fill(r.begin(), r.end(), 0.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t k = 0; k < K; ++k) r[k] += pi[a] * atoms[a][k];
  return r;
}

// Bracket on max_pi min_k (sum_a pi_a atoms_a)_k from multiplicative weights
// over users against best-responding atoms.
inline std::pair<double, double> hf_bounds(const std::vector<std::vector<double>>& atoms, int iterations = 200000) {
  const std::size_t n = atoms.size(), K = atoms.front().size();
  double scale = 0.0;
  for (const auto& a : atoms)
    for (double x : a) scale = std::max(scale, x);
  const double eta = std::sqrt(std::log(static_cast<double>(K)) / iterations) / scale;
  std::vector<double> w(K, 1.0), avg(K, 0.0);
  double upper = 1e300;
  for (int it = 0; it < iterations; ++it) {
    double wsum = 0.0;
    for (double x : w) wsum += x;
    std::size_t best = 0;
    double best_val = -1.0;
    for (std::size_t a = 0; a < n; ++a) {
      double v = 0.0;
      for (std::size_t k = 0; k < K; ++k) v += w[k] * atoms[a][k];
      if (v > best_val) {
        best_val = v;
        best = a;
      }
    }
    upper = std::min(upper, best_val / wsum);
    for (std::size_t k = 0; k < K; ++k) {
      avg[k] += atoms[best][k];
      w[k] *= std::exp(-eta * atoms[best][k]);
    }
    const double mx = *std::max_element(w.begin(), w.end());
    for (auto& x : w) x /= mx;
  }
  double lower = 1e300;
  for (double x : avg) lower = std::min(lower, x / iterations);
  return {lower, upper};
}

// Random adjacency network: every user reaches at least one AP and its
// interference set contains its transmission set.
inline ccwlan::Network random_network(std::mt19937_64& rng, std::size_t H, std::size_t K, unsigned L, unsigned t) {
  std::vector<ccwlan::UserLinks> links;
  std::uniform_int_distribution<std::uint64_t> mask(1, (std::uint64_t{1} << H) - 1);
  std::uniform_int_distribution<std::size_t> ap(0, H - 1);
  for (std::size_t u = 0; u < K; ++u) {
    const std::uint64_t home = std::uint64_t{1} << ap(rng);
    std::uint64_t trans = home | (std::bernoulli_distribution{0.3}(rng) ? mask(rng) : 0);
    std::uint64_t inter = trans | (std::bernoulli_distribution{0.5}(rng) ? mask(rng) : 0);
    links.push_back({trans, inter});
  }
  ccwlan::ProfileAssignment profiles(K);
  std::uniform_int_distribution<unsigned> prof(0, L - 1);
  for (auto& p : profiles) p = prof(rng);
  const auto cfg = L == 1 ? ccwlan::CacheConfig::uncoded(Rational{0}) : ccwlan::CacheConfig::coded(L, t);
  return {ccwlan::Topology::adjacency(H, std::move(links)), std::move(profiles), cfg};
}

}  // namespace oracle
