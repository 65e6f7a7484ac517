#include <random>

#include "ccwlan/baselines.hpp"
#include "ccwlan/dpp.hpp"
#include "ccwlan/errors.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace ccwlan;

namespace {

std::vector<double> random_backlog(std::mt19937_64& rng, std::size_t k) {
  std::uniform_real_distribution<double> q{0.0, 10.0};
  std::vector<double> b(k);
  for (auto& x : b) x = q(rng);
  return b;
}

}  // namespace

TEST_CASE("baseline decisions are collision free") {
  std::mt19937_64 rng{41};
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t H = 1 + rng() % 3, K = 1 + rng() % 9;
    const auto net = oracle::random_network(rng, H, K, 3, 1);
    const auto schedule = ReuseSchedule::for_topology(net.topology, 3);
    for (std::uint64_t slot = 0; slot < 6; ++slot) {
      const auto q = random_backlog(rng, K);
      const auto r = reuse_step(net, q, schedule, slot);
      CHECK(collision_free(net, r.decision));
      for (const auto& g : r.decision.groups) CHECK(schedule.colors[g.ap] == schedule.phase(slot));
      const auto c = csma_step(net, q, rng);
      CHECK(collision_free(net, c.decision));
    }
  }
}

TEST_CASE("csma draw is sorted by timer") {
  std::mt19937_64 rng{2};
  const auto d = CsmaDraw::sample(6, rng);
  for (std::size_t i = 1; i < d.order.size(); ++i) CHECK(d.timers[d.order[i - 1]] <= d.timers[d.order[i]]);
  for (double t : d.timers) CHECK(t > 0.0);
}

TEST_CASE("csma with two interfering APs lights exactly one") {
  const Network net{Topology::adjacency(2, {{0b01, 0b11}, {0b10, 0b11}}), {0, 1}, CacheConfig::coded(2, 1)};
  std::mt19937_64 rng{6};
  int first = 0;
  for (int slot = 0; slot < 2000; ++slot) {
    const auto s = csma_step(net, std::vector<double>{1.0, 1.0}, rng);
    CHECK(s.decision.pattern.active_count() == 1);
    first += s.decision.pattern.active(0) ? 1 : 0;
  }
  CHECK(first > 850);
  CHECK(first < 1150);
}

TEST_CASE("csma follows the given draw") {
  const Network net{Topology::adjacency(2, {{0b01, 0b11}, {0b10, 0b11}}), {0, 1}, CacheConfig::coded(2, 1)};
  const CsmaDraw draw{{0.7, 0.2}, {1, 0}};
  const auto s = csma_step(net, std::vector<double>{1.0, 1.0}, draw);
  CHECK(s.decision.pattern.bits() == 0b10);
  CHECK(s.rates == std::vector<double>{0.0, 2.0});
}

TEST_CASE("single AP under csma is always on") {
  const Network net{Topology::adjacency(1, {{1, 1}, {1, 1}}), {0, 1}, CacheConfig::coded(3, 1)};
  std::mt19937_64 rng{1};
  for (int slot = 0; slot < 50; ++slot) CHECK(csma_step(net, std::vector<double>{2.0, 1.0}, rng).wsr == 3.0);
}

TEST_CASE("csma matches the exact choice when every user hears one AP") {
  std::mt19937_64 rng{19};
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t H = 1 + rng() % 4, K = 1 + rng() % 10;
    std::vector<UserLinks> links;
    ProfileAssignment profiles;
    for (std::size_t u = 0; u < K; ++u) {
      const ApMask home = ApMask{1} << (rng() % H);
      links.push_back({home, home});
      profiles.push_back(static_cast<unsigned>(rng() % 4));
    }
    const Network net{Topology::adjacency(H, links), profiles, CacheConfig::coded(4, 2)};
    auto reduced = make_selector(SchedulerKind::reduced_wsrm, net);
    for (int slot = 0; slot < 10; ++slot) {
      const auto q = random_backlog(rng, K);
      CHECK(csma_step(net, q, rng).wsr == doctest::Approx(reduced->select(q, 0, rng).wsr).epsilon(1e-12));
    }
  }
}

TEST_CASE("csma is reproducible from the seed") {
  std::mt19937_64 g{3};
  const auto net = oracle::random_network(g, 3, 8, 3, 1);
  const auto q = random_backlog(g, 8);
  std::mt19937_64 a{77}, b{77};
  for (int slot = 0; slot < 30; ++slot)
    CHECK(csma_step(net, q, a).decision.pattern == csma_step(net, q, b).decision.pattern);
}

TEST_CASE("reuse with a single AP transmits one slot in three") {
  const Network net{Topology::adjacency(1, {{1, 1}}), {0}, CacheConfig::coded(2, 0)};
  const auto schedule = ReuseSchedule::for_topology(net.topology, 3);
  int active = 0;
  for (std::uint64_t slot = 0; slot < 30; ++slot)
    active += reuse_step(net, std::vector<double>{1.0}, schedule, slot).decision.pattern.active_count();
  CHECK(active == 10);

  DppConfig cfg;
  cfg.scheduler = SchedulerKind::reuse_baseline;
  cfg.slots = 3000;
  CHECK(run_dpp(net, cfg).users[0].goodput == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("hex reuse lets every AP serve its whole disk") {
  const auto grid = build_hex_grid(1, 1.0, 1.0, 1.2);
  const auto topo = sample_users_ppp(grid, density_for_mean_users(grid, 80.0), 5);
  const auto schedule = ReuseSchedule::for_topology(topo, 3);
  const auto conflicts = ap_conflict_graph(topo);
  for (ApIndex a = 0; a < topo.ap_count(); ++a)
    for (ApIndex b = 0; b < topo.ap_count(); ++b)
      if (a != b && schedule.colors[a] == schedule.colors[b]) CHECK_FALSE((conflicts[a] >> b & 1U));
  for (unsigned phase = 0; phase < 3; ++phase) {
    ApMask lit = 0;
    for (ApIndex a = 0; a < topo.ap_count(); ++a)
      if (schedule.colors[a] == phase) lit |= ApMask{1} << a;
    for (UserIndex u = 0; u < topo.user_count(); ++u)
      for (ApIndex a = 0; a < topo.ap_count(); ++a)
        if ((lit >> a & 1U) && (topo.trans_set(u) >> a & 1U))
          CHECK((topo.inter_set(u) & lit) == (ApMask{1} << a));
  }
}

TEST_CASE("reuse needs a valid colouring") {
  const auto topo = build_hex_grid(1, 1.0, 1.0, 1.2);
  CHECK_THROWS_AS(ReuseSchedule::for_topology(topo, 2), InvalidScenario);
  CHECK_THROWS_AS(ReuseSchedule::for_topology(topo, 0), InvalidScenario);
}
