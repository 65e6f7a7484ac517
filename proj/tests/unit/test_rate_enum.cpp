#include <numeric>
#include <random>
#include <set>

#include "ccwlan/errors.hpp"
#include "ccwlan/rate_enum.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "reference_tables.hpp"

using namespace ccwlan;

namespace {

using namespace reference;

std::vector<RateVector> rates_of(const std::vector<RatedDecision>& v) {
  std::vector<RateVector> out;
  for (const auto& rd : v) out.push_back(rd.rates);
  return out;
}

std::set<RateVector> as_set(const std::vector<RatedDecision>& v) {
  const auto r = rates_of(v);
  return {r.begin(), r.end()};
}

std::vector<Rational> rational_weights(std::mt19937_64& rng, std::size_t k) {
  std::uniform_int_distribution<std::int64_t> num(0, 40);
  std::vector<Rational> w;
  for (std::size_t i = 0; i < k; ++i) w.emplace_back(num(rng), 7);
  return w;
}

}  // namespace

TEST_CASE("decision counts per AP") {
  CHECK(count_decisions_per_ap(std::vector<std::size_t>{1, 0, 2}) == 5);
  CHECK(count_decisions_per_ap(std::vector<std::size_t>{0, 0, 0}) == 0);
  CHECK(count_decisions_per_ap(std::vector<std::size_t>{2, 2}) == 8);
}

TEST_CASE("reference network enumerates the original rate vectors in order") {
  const auto net = reference_network();
  const auto got = enumerate_rate_vectors(net);
  CHECK(rates_of(got) == table_original());
  const std::vector<std::pair<std::uint64_t, std::size_t>> labels{{1, 1}, {1, 2}, {1, 3}, {1, 4}, {2, 1}, {2, 2},
                                                                   {3, 1}, {3, 2}, {3, 3}, {3, 4}, {3, 5}};
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i].decision.pattern.index() == labels[i].first);
    CHECK(got[i].decision.index == labels[i].second);
    CHECK(rates_for(net, got[i].decision) == got[i].rates);
  }
}

TEST_CASE("equivalence reduction and expansion of the reference vectors") {
  const auto net = reference_network();
  const auto classes = equivalence_classes(net.topology, net.profiles);
  const auto reduced = reduce_by_equivalence(enumerate_rate_vectors(net), classes);
  CHECK(rates_of(reduced) == table_reduced());
  CHECK(rates_of(expand_by_equivalence(reduced, classes)) == table_expanded());
}

TEST_CASE("singleton classes leave vectors unchanged") {
  std::mt19937_64 rng{4};
  const auto net = oracle::random_network(rng, 2, 5, 3, 1);
  const auto v = enumerate_rate_vectors(net);
  EquivalenceClasses id;
  for (UserIndex u = 0; u < 5; ++u) {
    id.classes.push_back({u});
    id.class_of.push_back(u);
  }
  CHECK(rates_of(reduce_by_equivalence(v, id)) == rates_of(v));
  CHECK(rates_of(expand_by_equivalence(v, id)) == rates_of(v));
}

TEST_CASE("reduction preserves weighted sums for class-uniform weights") {
  std::mt19937_64 rng{21};
  for (int trial = 0; trial < 30; ++trial) {
    const auto net = oracle::random_network(rng, 2, 8, 2, 1);
    const auto classes = equivalence_classes(net.topology, net.profiles);
    const auto v = enumerate_rate_vectors(net);
    const auto red = reduce_by_equivalence(v, classes);
    std::vector<Rational> wc = rational_weights(rng, classes.size()), w(net.user_count());
    for (UserIndex u = 0; u < w.size(); ++u) w[u] = wc[classes.class_of[u]];
    std::set<Rational> full_vals, red_vals;
    for (const auto& rd : v) full_vals.insert(oracle::weighted(rd.rates, w));
    for (const auto& rd : red) red_vals.insert(oracle::weighted(rd.rates, wc));
    CHECK(full_vals == red_vals);
  }
}

TEST_CASE("equivalent users are never co-served") {
  std::mt19937_64 rng{5};
  for (int trial = 0; trial < 30; ++trial) {
    const auto net = oracle::random_network(rng, 3, 8, 3, 1);
    const auto classes = equivalence_classes(net.topology, net.profiles);
    for (const auto& rd : enumerate_rate_vectors(net))
      for (const auto& cls : classes.classes) {
        int positive = 0;
        for (auto u : cls) positive += rd.rates[u] > O ? 1 : 0;
        CHECK(positive <= 1);
      }
  }
}

TEST_CASE("single AP with a single user") {
  const auto topo = Topology::adjacency(1, {{1, 1}});
  const Network net{topo, {0}, CacheConfig::coded(3, 1)};
  const auto v = enumerate_rate_vectors(net);
  REQUIRE(v.size() == 1);
  CHECK(v[0].rates == RateVector{H});
}

TEST_CASE("unpruned enumeration keeps dominated vectors") {
  const auto net = reference_network();
  EnumerationOptions opts;
  opts.prune_dominated = false;
  opts.prune_group_sizes = false;
  const auto all = as_set(enumerate_rate_vectors(net, opts));
  CHECK(all.contains(RateVector{O, O, I, I, O, O}));
  CHECK(all.contains(RateVector{O, O, I, I, I, O}));
}

TEST_CASE("maximal sets agree with brute force with and without pruning") {
  std::mt19937_64 rng{99};
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t H = 1 + rng() % 3, K = 1 + rng() % 8;
    const unsigned L = 1 + static_cast<unsigned>(rng() % 5);
    const unsigned t = L == 1 ? 0 : static_cast<unsigned>(rng() % L);
    const auto net = oracle::random_network(rng, H, K, L, t);
    std::vector<std::vector<Rational>> all;
    for (const auto& d : oracle::all_decisions(net)) all.push_back(d.rates);
    const auto truth = oracle::maximal_set(all);

    const auto pruned = enumerate_rate_vectors(net);
    CHECK(pruned.size() == truth.size());
    CHECK(as_set(pruned) == truth);

    EnumerationOptions opts;
    opts.prune_group_sizes = false;
    opts.prune_dominated = false;
    const auto raw = enumerate_rate_vectors(net, opts);
    CHECK(as_set(maximal_vectors(raw)) == truth);
    opts.prune_dominated = true;
    CHECK(as_set(enumerate_rate_vectors(net, opts)) == truth);

    const double cap = net.cache.max_rate();
    for (const auto& rd : raw)
      for (const auto& r : rd.rates) CHECK((r >= O && r.to_double() <= cap));
  }
}

TEST_CASE("best_group examples") {
  const auto cfg = CacheConfig::coded(5, 2);
  const std::vector<UserIndex> cands{0, 1, 2, 3};
  const std::vector<unsigned> profiles{0, 1, 2, 3};
  {
    const std::vector<Rational> w{Rational{4}, Rational{3}, Rational{2}, Rational{1}};
    const auto g = best_group<Rational>(cands, profiles, w, cfg);
    CHECK(g.wsr == Rational{10});
    CHECK(g.users == cands);
  }
  {
    const std::vector<Rational> w{Rational{100}, I, I, I};
    const auto g = best_group<Rational>(cands, profiles, w, cfg);
    CHECK(g.wsr == Rational{500, 3});
    CHECK(g.users == std::vector<UserIndex>{0});
  }
  {
    const std::vector<UserIndex> one{2};
    const std::vector<Rational> w{O, O, Rational{7}, O};
    const auto g = best_group<Rational>(one, profiles, w, cfg);
    CHECK(g.wsr == Rational{7} * uncoded_rate(Rational{2, 5}));
  }
}

TEST_CASE("best_group matches brute force over subsets") {
  std::mt19937_64 rng{8};
  for (int trial = 0; trial < 400; ++trial) {
    const unsigned L = 2 + static_cast<unsigned>(rng() % 5);
    const unsigned t = static_cast<unsigned>(rng() % L);
    const auto cfg = CacheConfig::coded(L, t);
    const std::size_t K = 1 + rng() % 8;
    std::vector<unsigned> profiles(K);
    for (auto& p : profiles) p = static_cast<unsigned>(rng() % L);
    const auto w = rational_weights(rng, K);
    std::vector<UserIndex> cands(K);
    std::iota(cands.begin(), cands.end(), 0);
    const auto g = best_group<Rational>(cands, profiles, w, cfg);
    CHECK(g.wsr == oracle::best_group_value(cands, profiles, w, cfg));
    std::set<unsigned> used;
    Rational sum{0};
    for (auto u : g.users) {
      CHECK(used.insert(profiles[u]).second);
      sum += w[u];
    }
    CHECK(g.wsr == group_rate(cfg, static_cast<unsigned>(g.users.size())) * sum);
  }
}

TEST_CASE("exact wsrm on the reference network") {
  const auto net = reference_network();
  const std::vector<Rational> ones(6, I);
  const auto r = wsrm_exact<Rational>(net, ones);
  CHECK(r.wsr == Rational{7, 2});
  CHECK(r.wsr == oracle::wsr_max(net, ones));
  CHECK(r.rates == RateVector{H, O, O, I, I, O});

  std::vector<Rational> q4(6, O);
  q4[3] = I;
  const auto s = wsrm_exact<Rational>(net, q4);
  CHECK(s.wsr == H);
  CHECK(s.rates[3] == H);

  const std::vector<Rational> zero(6, O);
  CHECK(wsrm_exact<Rational>(net, zero).wsr == O);
}

TEST_CASE("reduced wsrm equals exact wsrm") {
  std::mt19937_64 rng{2024};
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t H = 1 + rng() % 3, K = 1 + rng() % 8;
    const unsigned L = 1 + static_cast<unsigned>(rng() % 5);
    const unsigned t = L == 1 ? 0 : static_cast<unsigned>(rng() % L);
    const auto net = oracle::random_network(rng, H, K, L, t);
    const auto w = rational_weights(rng, K);
    const auto exact = wsrm_exact<Rational>(net, w);
    const auto reduced = wsrm_reduced<Rational>(net, w);
    CHECK(exact.wsr == reduced.wsr);
    CHECK(reduced.wsr == oracle::wsr_max(net, w));
    CHECK(oracle::weighted(reduced.rates, w) == reduced.wsr);
  }
}

TEST_CASE("reduced wsrm on a single AP picks the full group") {
  std::vector<UserLinks> links(4, UserLinks{1, 1});
  const Network net{Topology::adjacency(1, links), {0, 1, 2, 3}, CacheConfig::coded(5, 2)};
  const std::vector<Rational> w{Rational{4}, Rational{3}, Rational{2}, Rational{1}};
  const auto r = wsrm_reduced<Rational>(net, w);
  CHECK(r.wsr == Rational{10});
  REQUIRE(r.decision.groups.size() == 1);
  CHECK(r.decision.groups[0].users.size() == 4);
}

TEST_CASE("coded region contains the uncoded one") {
  std::mt19937_64 rng{31};
  for (int trial = 0; trial < 40; ++trial) {
    const unsigned L = 2 + static_cast<unsigned>(rng() % 4);
    const unsigned t = static_cast<unsigned>(rng() % L);
    const auto coded = oracle::random_network(rng, 1 + rng() % 3, 1 + rng() % 7, L, t);
    const Network uncoded{coded.topology, ProfileAssignment(coded.user_count(), 0),
                          CacheConfig::uncoded(Rational{t, L})};
    const auto big = rates_of(enumerate_rate_vectors(coded));
    for (const auto& small : rates_of(enumerate_rate_vectors(uncoded))) {
      bool covered = false;
      for (const auto& b : big) covered = covered || oracle::dominated_by(small, b);
      CHECK(covered);
    }
  }
}

TEST_CASE("decision cap") {
  const auto net = reference_network();
  EnumerationOptions opts;
  opts.decision_cap = 3;
  CHECK_THROWS_AS(enumerate_rate_vectors(net, opts), CapExceeded);
  CHECK(count_decisions(net) > 3);
}

TEST_CASE("rate formatting") {
  CHECK(format_rates({H, O, I}) == "3/2,0/1,1/1");
}
