#include "ccwlan/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "ccwlan/errors.hpp"

namespace ccwlan {

ReuseSchedule ReuseSchedule::for_topology(const Topology& topology, unsigned m) {
  if (m == 0) throw InvalidScenario("reuse factor must be positive");
  auto colors = reuse_coloring(topology, m);
  if (!colors) throw InvalidScenario("no collision-free reuse colouring with " + std::to_string(m) + " colours");
  return {m, std::move(*colors)};
}

Selection reuse_step(const Network& network, std::span<const double> backlog, const ReuseSchedule& schedule,
                     std::uint64_t slot) {
  const auto& topo = network.topology;
  const unsigned phase = schedule.phase(slot);
  ApMask lit = 0;
  for (ApIndex ap = 0; ap < topo.ap_count(); ++ap)
    if (schedule.colors.at(ap) == phase) lit |= ApMask{1} << ap;

  SchedulingDecision d;
  ApMask on = 0;
  for (ApIndex ap = 0; ap < topo.ap_count(); ++ap) {
    if (!(lit >> ap & 1U)) continue;
    const ApMask self = ApMask{1} << ap;
    std::vector<UserIndex> reach;
    for (UserIndex u = 0; u < network.user_count(); ++u)
      if ((topo.trans_set(u) & self) && !(topo.inter_set(u) & lit & ~self)) reach.push_back(u);
    auto choice = best_group<double>(reach, network.profiles, backlog, network.cache);
    if (choice.users.empty()) continue;
    on |= self;
    d.groups.push_back({ap, std::move(choice.users)});
  }
  d.pattern = ActivationPattern{on};
  return make_selection(network, std::move(d), backlog);
}

CsmaDraw CsmaDraw::sample(std::size_t ap_count, std::mt19937_64& rng) {
  CsmaDraw draw;
  std::exponential_distribution<double> timer{1.0};
  draw.timers.resize(ap_count);
  for (auto& t : draw.timers) t = timer(rng);
  draw.order.resize(ap_count);
  std::iota(draw.order.begin(), draw.order.end(), ApIndex{0});
  std::stable_sort(draw.order.begin(), draw.order.end(),
                   [&](ApIndex a, ApIndex b) { return draw.timers[a] < draw.timers[b]; });
  return draw;
}

Selection csma_step(const Network& network, std::span<const double> backlog, const CsmaDraw& draw) {
  const auto& topo = network.topology;
  ApMask on = 0;
  ApMask blocked = 0;  // APs whose activity would hit a user already served
  SchedulingDecision d;
  for (auto ap : draw.order) {
    const ApMask self = ApMask{1} << ap;
    if (blocked & self) continue;
    std::vector<UserIndex> reach;
    for (UserIndex u = 0; u < network.user_count(); ++u)
      if ((topo.trans_set(u) & self) && !(topo.inter_set(u) & on)) reach.push_back(u);
    auto choice = best_group<double>(reach, network.profiles, backlog, network.cache);
    if (choice.users.empty()) continue;
    on |= self;
    for (auto u : choice.users) blocked |= topo.inter_set(u) & ~self;
    d.groups.push_back({ap, std::move(choice.users)});
  }
  std::sort(d.groups.begin(), d.groups.end(), [](const ApGroup& a, const ApGroup& b) { return a.ap < b.ap; });
  d.pattern = ActivationPattern{on};
  return make_selection(network, std::move(d), backlog);
}

Selection csma_step(const Network& network, std::span<const double> backlog, std::mt19937_64& rng) {
  return csma_step(network, backlog, CsmaDraw::sample(network.ap_count(), rng));
}

}  // namespace ccwlan
