#include "ccwlan/rate_enum.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "ccwlan/errors.hpp"

namespace ccwlan {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSaturated / b) return kSaturated;
  return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > kSaturated - b ? kSaturated : a + b; }

std::vector<std::size_t> users_per_profile(const Network& net, std::span<const UserIndex> users) {
  std::vector<std::size_t> counts(net.cache.profiles(), 0);
  for (auto u : users) ++counts[net.profiles[u]];
  return counts;
}

template <class W>
W scaled(const Rational& r, const W& w) {
  if constexpr (std::is_same_v<W, Rational>) {
    return r * w;
  } else {
    return r.to_double() * w;
  }
}

// Non-empty subsets of `users` with pairwise distinct profiles, largest
// first, then lexicographic in user index.
std::vector<std::vector<UserIndex>> feasible_sets(const Network& net, std::span<const UserIndex> users,
                                                  bool prune_group_sizes) {
  std::vector<std::vector<UserIndex>> by_profile(net.cache.profiles());
  for (auto u : users) by_profile[net.profiles[u]].push_back(u);
  std::vector<std::vector<UserIndex>*> present;
  for (auto& b : by_profile)
    if (!b.empty()) present.push_back(&b);

  std::vector<std::vector<UserIndex>> out;
  std::vector<UserIndex> current;
  auto rec = [&](auto&& self, std::size_t p) -> void {
    if (p == present.size()) {
      if (!current.empty()) {
        auto s = current;
        std::sort(s.begin(), s.end());
        out.push_back(std::move(s));
      }
      return;
    }
    self(self, p + 1);
    for (auto u : *present[p]) {
      current.push_back(u);
      self(self, p + 1);
      current.pop_back();
    }
  };
  rec(rec, 0);

  if (prune_group_sizes && !net.cache.is_uncoded()) {
    // Sizes in [L - t, distinct) have the same rate as the full set of
    // distinct profiles, which dominates them.
    const std::size_t plateau = net.cache.profiles() - net.cache.t();
    const std::size_t distinct = present.size();
    if (distinct > plateau)
      std::erase_if(out, [&](const auto& s) { return s.size() >= plateau && s.size() < distinct; });
  }

  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
  });
  return out;
}

void reindex(std::vector<RatedDecision>& list) {
  std::uint64_t last = 0;
  std::size_t counter = 0;
  for (auto& rd : list) {
    if (rd.decision.pattern.index() != last) {
      last = rd.decision.pattern.index();
      counter = 0;
    }
    rd.decision.index = ++counter;
  }
}

}  // namespace

PatternCache::PatternCache(const Topology& topo) {
  const std::size_t h = topo.ap_count();
  if (h > 24) throw CapExceeded(kSaturated, std::uint64_t{1} << 24);
  const std::uint64_t patterns = (std::uint64_t{1} << h) - 1;
  for (std::uint64_t j = 1; j <= patterns; ++j) {
    Entry e{ActivationPattern::from_index(j), {}, {}};
    bool ok = true;
    for (ApIndex ap = 0; ap < h && ok; ++ap) {
      if (!e.pattern.active(ap)) continue;
      auto users = served_users(topo, e.pattern, ap);
      if (users.empty()) ok = false;
      e.aps.push_back(ap);
      e.served.push_back(std::move(users));
    }
    if (ok) usable_.push_back(std::move(e));
  }
}

std::uint64_t count_decisions_per_ap(std::span<const std::size_t> users_per_profile) {
  std::uint64_t prod = 1;
  for (auto n : users_per_profile) prod = sat_mul(prod, n + 1);
  return prod == kSaturated ? prod : prod - 1;
}

std::uint64_t count_decisions(const Network& network) {
  const std::size_t h = network.ap_count();
  if (h > 24) return kSaturated;
  std::uint64_t total = 0;
  const std::uint64_t patterns = (std::uint64_t{1} << h) - 1;
  for (std::uint64_t j = 1; j <= patterns; ++j) {
    const auto pattern = ActivationPattern::from_index(j);
    std::uint64_t prod = 1;
    for (ApIndex ap = 0; ap < h && prod != 0; ++ap) {
      if (!pattern.active(ap)) continue;
      const auto served = served_users(network.topology, pattern, ap);
      prod = sat_mul(prod, count_decisions_per_ap(users_per_profile(network, served)));
    }
    total = sat_add(total, prod);
  }
  return total;
}

RateVector rates_for(const Network& network, const SchedulingDecision& decision) {
  RateVector r(network.user_count(), Rational{0});
  for (const auto& g : decision.groups) {
    if (g.users.empty()) continue;
    const Rational rate = group_rate(network.cache, static_cast<unsigned>(g.users.size()));
    for (auto u : g.users) r.at(u) = rate;
  }
  return r;
}

std::vector<RatedDecision> enumerate_rate_vectors(const Network& network, const EnumerationOptions& options) {
  network.validate();
  const std::uint64_t estimate = count_decisions(network);
  if (estimate > options.decision_cap) throw CapExceeded(estimate, options.decision_cap);

  std::vector<RatedDecision> out;
  const PatternCache table{network.topology};
  for (const auto& entry : table.usable()) {
    std::vector<std::vector<std::vector<UserIndex>>> per_ap;
    for (const auto& served : entry.served) per_ap.push_back(feasible_sets(network, served, options.prune_group_sizes));

    // Odometer over per-AP choices; the first AP varies slowest.
    std::vector<std::size_t> pick(per_ap.size(), 0);
    std::size_t counter = 0;
    while (true) {
      RatedDecision rd;
      rd.decision.pattern = entry.pattern;
      rd.decision.index = ++counter;
      for (std::size_t a = 0; a < per_ap.size(); ++a)
        rd.decision.groups.push_back({entry.aps[a], per_ap[a][pick[a]]});
      rd.rates = rates_for(network, rd.decision);
      out.push_back(std::move(rd));

      std::size_t pos = per_ap.size();
      while (pos > 0) {
        --pos;
        if (++pick[pos] < per_ap[pos].size()) break;
        pick[pos] = 0;
        if (pos == 0) {
          pos = per_ap.size() + 1;
          break;
        }
      }
      if (pos == per_ap.size() + 1 || per_ap.empty()) break;
    }
  }

  if (options.prune_dominated) {
    out = maximal_vectors(out);
    reindex(out);
  }
  return out;
}

std::vector<RatedDecision> maximal_vectors(std::span<const RatedDecision> vectors) {
  const std::size_t n = vectors.size();
  std::vector<Rational> sums(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& r : vectors[i].rates) sums[i] += r;

  // A dominating vector has a strictly larger sum unless it is equal, so a
  // stable scan in decreasing-sum order only needs the maxima kept so far.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sums[a] > sums[b]; });

  std::vector<bool> keep(n, false);
  std::vector<std::size_t> kept;
  for (auto i : order) {
    const auto& cand = vectors[i].rates;
    bool dominated = false;
    for (auto k : kept) {
      const auto& other = vectors[k].rates;
      bool ge = true;
      for (std::size_t c = 0; c < cand.size() && ge; ++c) ge = other[c] >= cand[c];
      if (ge) {
        dominated = true;
        break;
      }
    }
    if (!dominated) {
      keep[i] = true;
      kept.push_back(i);
    }
  }

  std::vector<RatedDecision> out;
  for (std::size_t i = 0; i < n; ++i)
    if (keep[i]) out.push_back(vectors[i]);
  return out;
}

std::vector<RatedDecision> reduce_by_equivalence(std::span<const RatedDecision> vectors, const EquivalenceClasses& classes) {
  std::vector<RatedDecision> out;
  std::map<RateVector, bool> seen;
  for (const auto& rd : vectors) {
    if (rd.rates.size() != classes.class_of.size()) throw std::invalid_argument("reduce_by_equivalence: dimension mismatch");
    RateVector red(classes.size(), Rational{0});
    for (UserIndex u = 0; u < rd.rates.size(); ++u) red[classes.class_of[u]] += rd.rates[u];
    if (!seen.emplace(red, true).second) continue;
    out.push_back({rd.decision, std::move(red)});
  }
  reindex(out);
  return out;
}

std::vector<RatedDecision> expand_by_equivalence(std::span<const RatedDecision> reduced, const EquivalenceClasses& classes) {
  std::vector<RatedDecision> out;
  out.reserve(reduced.size());
  for (const auto& rd : reduced) {
    if (rd.rates.size() != classes.size()) throw std::invalid_argument("expand_by_equivalence: dimension mismatch");
    RateVector full(classes.class_of.size(), Rational{0});
    for (std::size_t c = 0; c < classes.size(); ++c) {
      const Rational share = rd.rates[c] / Rational{static_cast<std::int64_t>(classes.classes[c].size())};
      for (auto u : classes.classes[c]) full[u] = share;
    }
    out.push_back({rd.decision, std::move(full)});
  }
  return out;
}

template <class W>
GroupChoice<W> best_group(std::span<const UserIndex> candidates, std::span<const unsigned> profiles,
                          std::span<const W> weights, const CacheConfig& cfg) {
  GroupChoice<W> best;
  if (candidates.empty()) return best;

  // Heaviest user per profile; ties to the lower index.
  std::vector<std::ptrdiff_t> rep(cfg.profiles(), -1);
  for (auto u : candidates) {
    auto& r = rep.at(profiles[u]);
    if (r < 0 || weights[u] > weights[static_cast<std::size_t>(r)] ||
        (weights[u] == weights[static_cast<std::size_t>(r)] && u < static_cast<std::size_t>(r)))
      r = static_cast<std::ptrdiff_t>(u);
  }
  std::vector<UserIndex> reps;
  for (auto r : rep)
    if (r >= 0) reps.push_back(static_cast<UserIndex>(r));
  std::sort(reps.begin(), reps.end(), [&](UserIndex a, UserIndex b) {
    if (weights[a] != weights[b]) return weights[a] > weights[b];
    return a < b;
  });

  const std::size_t n = reps.size();
  const std::size_t z = cfg.is_uncoded() ? 1 : std::min<std::size_t>(n, cfg.profiles() - cfg.t());
  std::size_t best_size = 0;
  W prefix_weight{};
  W all_weight{};
  for (auto u : reps) all_weight += weights[u];
  for (std::size_t g = 1; g <= z; ++g) {
    prefix_weight += weights[reps[g - 1]];
    const std::size_t size = g < z ? g : n;
    const W& total = g < z ? prefix_weight : all_weight;
    const W wsr = scaled(group_rate(cfg, static_cast<unsigned>(size)), total);
    if (best_size == 0 || wsr >= best.wsr) {
      best.wsr = wsr;
      best_size = size;
    }
  }
  best.users.assign(reps.begin(), reps.begin() + static_cast<std::ptrdiff_t>(best_size));
  std::sort(best.users.begin(), best.users.end());
  return best;
}

template <class W>
WsrmResult<W> wsrm_exact(std::span<const RatedDecision> candidates, std::span<const W> weights) {
  WsrmResult<W> best;
  bool found = false;
  for (const auto& rd : candidates) {
    if (rd.rates.size() != weights.size()) throw std::invalid_argument("wsrm_exact: dimension mismatch");
    W value{};
    for (std::size_t k = 0; k < weights.size(); ++k)
      if (!rd.rates[k].is_zero()) value += scaled(rd.rates[k], weights[k]);
    if (!found || value > best.wsr) {
      best.decision = rd.decision;
      best.rates = rd.rates;
      best.wsr = value;
      found = true;
    }
  }
  if (!found) best.rates.assign(weights.size(), Rational{0});
  return best;
}

template <class W>
WsrmResult<W> wsrm_exact(const Network& network, std::span<const W> weights, std::uint64_t decision_cap) {
  EnumerationOptions opts;
  opts.prune_group_sizes = false;
  opts.prune_dominated = false;
  opts.decision_cap = decision_cap;
  const auto all = enumerate_rate_vectors(network, opts);
  return wsrm_exact<W>(std::span<const RatedDecision>{all}, weights);
}

template <class W>
WsrmResult<W> wsrm_reduced(const Network& network, std::span<const W> weights) {
  network.validate();
  return wsrm_reduced<W>(network, PatternCache{network.topology}, weights);
}

template <class W>
WsrmResult<W> wsrm_reduced(const Network& network, const PatternCache& patterns, std::span<const W> weights) {
  if (weights.size() != network.user_count()) throw std::invalid_argument("wsrm_reduced: dimension mismatch");
  WsrmResult<W> best;
  bool found = false;
  for (const auto& entry : patterns.usable()) {
    SchedulingDecision d;
    d.pattern = entry.pattern;
    W total{};
    for (std::size_t a = 0; a < entry.aps.size(); ++a) {
      auto choice = best_group<W>(entry.served[a], network.profiles, weights, network.cache);
      total += choice.wsr;
      d.groups.push_back({entry.aps[a], std::move(choice.users)});
    }
    if (!found || total > best.wsr) {
      best.decision = std::move(d);
      best.wsr = total;
      found = true;
    }
  }
  best.rates = found ? rates_for(network, best.decision) : RateVector(network.user_count(), Rational{0});
  return best;
}

std::string format_rates(const RateVector& rates) {
  std::ostringstream os;
  for (std::size_t i = 0; i < rates.size(); ++i) os << (i ? "," : "") << rates[i].to_string();
  return os.str();
}

template GroupChoice<double> best_group<double>(std::span<const UserIndex>, std::span<const unsigned>,
                                                std::span<const double>, const CacheConfig&);
template GroupChoice<Rational> best_group<Rational>(std::span<const UserIndex>, std::span<const unsigned>,
                                                    std::span<const Rational>, const CacheConfig&);
template WsrmResult<double> wsrm_exact<double>(std::span<const RatedDecision>, std::span<const double>);
template WsrmResult<Rational> wsrm_exact<Rational>(std::span<const RatedDecision>, std::span<const Rational>);
template WsrmResult<double> wsrm_exact<double>(const Network&, std::span<const double>, std::uint64_t);
template WsrmResult<Rational> wsrm_exact<Rational>(const Network&, std::span<const Rational>, std::uint64_t);
template WsrmResult<double> wsrm_reduced<double>(const Network&, std::span<const double>);
template WsrmResult<Rational> wsrm_reduced<Rational>(const Network&, std::span<const Rational>);
template WsrmResult<double> wsrm_reduced<double>(const Network&, const PatternCache&, std::span<const double>);
template WsrmResult<Rational> wsrm_reduced<Rational>(const Network&, const PatternCache&, std::span<const Rational>);

}  // namespace ccwlan
