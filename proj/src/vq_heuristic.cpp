#include <algorithm>
#include <bit>
#include <numeric>

#include "ccwlan/dpp.hpp"

namespace ccwlan {

namespace {

std::vector<ApIndex> aps_in(ApMask mask) {
  std::vector<ApIndex> out;
  while (mask) {
    out.push_back(static_cast<ApIndex>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return out;
}

}  // namespace

Selection vq_heuristic_step(const Network& network, std::span<const double> backlog, std::mt19937_64& rng) {
  const auto& topo = network.topology;
  const auto& cfg = network.cache;
  const std::size_t h = topo.ap_count();
  const std::size_t k_users = network.user_count();

  std::vector<UserIndex> order(k_users);
  std::iota(order.begin(), order.end(), UserIndex{0});
  std::stable_sort(order.begin(), order.end(), [&](UserIndex a, UserIndex b) { return backlog[a] > backlog[b]; });

  ApMask candidates = topo.all_aps();
  ApMask on = 0;
  // Local cache population: members[i][l] is the user of profile l served by AP i.
  std::vector<std::vector<std::ptrdiff_t>> members(h, std::vector<std::ptrdiff_t>(cfg.profiles(), -1));
  std::vector<std::size_t> size(h, 0);
  std::vector<double> weight(h, 0.0), w_temp(h, 0.0);

  auto wsr = [&](std::size_t n, double w) {
    return n == 0 ? 0.0 : group_rate(cfg, static_cast<unsigned>(n)).to_double() * w;
  };

  for (auto u : order) {
    const unsigned l = network.profiles[u];
    const ApMask interferers = topo.inter_set(u) & on;
    const int count = std::popcount(interferers);

    if (count == 1) {
      const auto i = static_cast<ApIndex>(std::countr_zero(interferers));
      if (!(topo.trans_set(u) >> i & 1U) || members[i][l] >= 0) continue;
      const double trial = wsr(size[i] + 1, weight[i] + backlog[u]);
      if (trial < w_temp[i]) continue;
      members[i][l] = static_cast<std::ptrdiff_t>(u);
      ++size[i];
      weight[i] += backlog[u];
      w_temp[i] = trial;
      candidates &= ~(topo.inter_set(u) & ~(ApMask{1} << i));
    } else if (count == 0) {
      const auto options = aps_in(topo.trans_set(u) & candidates);
      if (options.empty()) continue;
      std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
      const ApIndex i = options[pick(rng)];
      members[i][l] = static_cast<std::ptrdiff_t>(u);
      size[i] = 1;
      weight[i] = backlog[u];
      w_temp[i] = wsr(1, weight[i]);
      on |= ApMask{1} << i;
      candidates &= ~(topo.inter_set(u) & ~(ApMask{1} << i));
    }
  }

  SchedulingDecision d{ActivationPattern{on}, 0, {}};
  for (auto i : aps_in(on)) {
    ApGroup g{i, {}};
    for (auto m : members[i])
      if (m >= 0) g.users.push_back(static_cast<UserIndex>(m));
    std::sort(g.users.begin(), g.users.end());
    d.groups.push_back(std::move(g));
  }
  return make_selection(network, std::move(d), backlog);
}

}  // namespace ccwlan
