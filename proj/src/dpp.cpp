#include "ccwlan/dpp.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

#include "ccwlan/baselines.hpp"
#include "ccwlan/errors.hpp"

namespace ccwlan {

Selection make_selection(const Network& network, SchedulingDecision decision, std::span<const double> backlog) {
  Selection s;
  s.rates.assign(network.user_count(), 0.0);
  for (const auto& g : decision.groups) {
    if (g.users.empty()) continue;
    const double rate = group_rate(network.cache, static_cast<unsigned>(g.users.size())).to_double();
    for (auto u : g.users) {
      s.rates.at(u) = rate;
      s.wsr += backlog[u] * rate;
    }
  }
  s.decision = std::move(decision);
  return s;
}

bool collision_free(const Network& network, const SchedulingDecision& decision) {
  const auto& topo = network.topology;
  const ApMask on = decision.pattern.bits();
  std::vector<bool> seen(network.user_count(), false);
  for (const auto& g : decision.groups) {
    const ApMask self = ApMask{1} << g.ap;
    if (!(on & self)) return false;
    std::vector<bool> profile_used(network.cache.profiles(), false);
    for (auto u : g.users) {
      if (u >= network.user_count() || seen[u]) return false;
      seen[u] = true;
      if (profile_used[network.profiles[u]]) return false;
      profile_used[network.profiles[u]] = true;
      if (!(topo.trans_set(u) & self)) return false;
      if ((topo.inter_set(u) & on) != self) return false;
    }
  }
  return true;
}

std::string to_string(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::exact_wsrm: return "exact";
    case SchedulerKind::reduced_wsrm: return "reduced";
    case SchedulerKind::vq_heuristic: return "heuristic";
    case SchedulerKind::reuse_baseline: return "reuse";
    case SchedulerKind::csma_baseline: return "csma";
  }
  return "?";
}

SchedulerKind scheduler_from_string(std::string_view name) {
  static const std::map<std::string, SchedulerKind, std::less<>> names{
      {"exact", SchedulerKind::exact_wsrm},        {"exact_wsrm", SchedulerKind::exact_wsrm},
      {"optimum", SchedulerKind::exact_wsrm},      {"reduced", SchedulerKind::reduced_wsrm},
      {"reduced_wsrm", SchedulerKind::reduced_wsrm}, {"heuristic", SchedulerKind::vq_heuristic},
      {"vq_heuristic", SchedulerKind::vq_heuristic}, {"reuse", SchedulerKind::reuse_baseline},
      {"reuse_baseline", SchedulerKind::reuse_baseline}, {"csma", SchedulerKind::csma_baseline},
      {"csma_baseline", SchedulerKind::csma_baseline},
  };
  const auto it = names.find(name);
  if (it == names.end()) throw InvalidScenario("unknown scheduler '" + std::string{name} + "'");
  return it->second;
}

std::vector<double> arrival_pf(std::span<const double> backlog, double v, double a_max) {
  std::vector<double> a(backlog.size());
  for (std::size_t k = 0; k < backlog.size(); ++k) a[k] = backlog[k] > 0.0 ? std::min(v / backlog[k], a_max) : a_max;
  return a;
}

std::vector<double> arrival_hf(std::span<const double> backlog, double v, double a_max) {
  double total = 0.0;
  for (double q : backlog) total += q;
  return std::vector<double>(backlog.size(), v > total ? a_max : 0.0);
}

std::vector<double> queue_update(std::span<const double> backlog, std::span<const double> rates,
                                 std::span<const double> arrivals) {
  if (rates.size() != backlog.size() || arrivals.size() != backlog.size())
    throw std::invalid_argument("queue_update: dimension mismatch");
  std::vector<double> next(backlog.size());
  for (std::size_t k = 0; k < backlog.size(); ++k) next[k] = std::max(backlog[k] - rates[k], 0.0) + arrivals[k];
  return next;
}

namespace {

class ExactSelector final : public RateSelector {
public:
  ExactSelector(const Network& network, std::uint64_t cap) : network_{network} {
    EnumerationOptions opts;
    opts.decision_cap = cap;
    for (auto& rd : enumerate_rate_vectors(network_, opts)) {
      std::vector<double> r;
      r.reserve(rd.rates.size());
      for (const auto& x : rd.rates) r.push_back(x.to_double());
      rates_.push_back(std::move(r));
      decisions_.push_back(std::move(rd.decision));
    }
  }

  Selection select(std::span<const double> backlog, std::uint64_t, std::mt19937_64&) override {
    std::size_t best = 0;
    double best_wsr = -1.0;
    for (std::size_t a = 0; a < rates_.size(); ++a) {
      double w = 0.0;
      for (std::size_t k = 0; k < backlog.size(); ++k) w += backlog[k] * rates_[a][k];
      if (w > best_wsr) {
        best_wsr = w;
        best = a;
      }
    }
    if (rates_.empty()) return make_selection(network_, {}, backlog);
    return make_selection(network_, decisions_[best], backlog);
  }

  const Network& network() const override { return network_; }

private:
  Network network_;
  std::vector<SchedulingDecision> decisions_;
  std::vector<std::vector<double>> rates_;
};

class ReducedSelector final : public RateSelector {
public:
  explicit ReducedSelector(const Network& network) : network_{network}, patterns_{network.topology} {}

  Selection select(std::span<const double> backlog, std::uint64_t, std::mt19937_64&) override {
    auto res = wsrm_reduced<double>(network_, patterns_, backlog);
    return make_selection(network_, std::move(res.decision), backlog);
  }

  const Network& network() const override { return network_; }

private:
  Network network_;
  PatternCache patterns_;
};

class HeuristicSelector final : public RateSelector {
public:
  explicit HeuristicSelector(const Network& network) : network_{network} {}

  Selection select(std::span<const double> backlog, std::uint64_t, std::mt19937_64& rng) override {
    return vq_heuristic_step(network_, backlog, rng);
  }

  const Network& network() const override { return network_; }

private:
  Network network_;
};

class ReuseSelector final : public RateSelector {
public:
  ReuseSelector(const Network& network, unsigned m)
      : network_{network}, schedule_{ReuseSchedule::for_topology(network.topology, m)} {}

  Selection select(std::span<const double> backlog, std::uint64_t slot, std::mt19937_64&) override {
    return reuse_step(network_, backlog, schedule_, slot);
  }

  const Network& network() const override { return network_; }

private:
  Network network_;
  ReuseSchedule schedule_;
};

class CsmaSelector final : public RateSelector {
public:
  explicit CsmaSelector(const Network& network) : network_{network} {}

  Selection select(std::span<const double> backlog, std::uint64_t, std::mt19937_64& rng) override {
    return csma_step(network_, backlog, rng);
  }

  const Network& network() const override { return network_; }

private:
  Network network_;
};

}  // namespace

std::unique_ptr<RateSelector> make_selector(SchedulerKind kind, const Network& network, const SelectorOptions& options) {
  network.validate();
  switch (kind) {
    case SchedulerKind::exact_wsrm: return std::make_unique<ExactSelector>(network, options.decision_cap);
    case SchedulerKind::reduced_wsrm: return std::make_unique<ReducedSelector>(network);
    case SchedulerKind::vq_heuristic: return std::make_unique<HeuristicSelector>(network);
    case SchedulerKind::reuse_baseline: return std::make_unique<ReuseSelector>(network, options.reuse_factor);
    case SchedulerKind::csma_baseline: return std::make_unique<CsmaSelector>(network);
  }
  throw std::invalid_argument("make_selector: unknown scheduler kind");
}

StepResult dpp_step(QueueState& state, Fairness objective, RateSelector& selector, std::mt19937_64& rng) {
  if (state.backlog.size() != selector.network().user_count())
    throw std::invalid_argument("dpp_step: backlog does not match the network");
  StepResult out;
  out.arrivals = objective == Fairness::pf ? arrival_pf(state.backlog, state.v, state.a_max)
                                           : arrival_hf(state.backlog, state.v, state.a_max);
  out.selection = selector.select(state.backlog, state.slot, rng);
  state.backlog = queue_update(state.backlog, out.selection.rates, out.arrivals);
  ++state.slot;
  return out;
}

std::vector<double> DppResult::goodputs() const {
  std::vector<double> g;
  g.reserve(users.size());
  for (const auto& u : users) g.push_back(u.goodput);
  return g;
}

double DppResult::window_average(std::uint64_t user_id, std::uint64_t from, std::uint64_t to) const {
  if (to <= from) return 0.0;
  double total = 0.0;
  for (const auto& row : trace)
    if (row.user_id == user_id && row.slot >= from && row.slot < to) total += row.inst_rate;
  return total / static_cast<double>(to - from);
}

namespace {

void check_events(std::span<const UserEvent> events) {
  std::uint64_t last = 0;
  for (const auto& e : events) {
    if (e.slot == 0) throw InvalidScenario("event slots start at 1");
    if (e.slot <= last) throw InvalidScenario("event slots must be strictly increasing");
    last = e.slot;
  }
}

}  // namespace

DppResult run_dpp(const Network& network, const DppConfig& config) {
  network.validate();
  if (!(config.v > 0.0)) throw InvalidScenario("V must be positive");
  if (config.q0 < 0.0) throw InvalidScenario("initial backlog must be non-negative");
  check_events(config.events);

  DppResult out;
  Network net = network;
  std::vector<std::size_t> record_of;  // current user index -> position in out.users
  for (std::size_t k = 0; k < net.user_count(); ++k) {
    out.users.push_back({k + 1, 1, std::nullopt, 0.0, 0.0});
    record_of.push_back(k);
  }
  std::uint64_t next_id = net.user_count() + 1;

  QueueState state;
  state.backlog.assign(net.user_count(), config.q0);
  state.v = config.v;
  state.a_max = config.a_max.value_or(net.cache.max_rate());
  out.max_backlog = config.q0;

  std::mt19937_64 rng{config.seed};
  auto selector = make_selector(config.scheduler, net, config.selector);
  std::size_t next_event = 0;

  for (std::uint64_t slot = 1; slot <= config.slots; ++slot) {
    bool changed = false;
    while (next_event < config.events.size() && config.events[next_event].slot == slot) {
      const auto& e = config.events[next_event++];
      changed = true;
      if (e.kind == UserEvent::Kind::remove) {
        const auto it = std::find_if(record_of.begin(), record_of.end(),
                                     [&](std::size_t r) { return out.users[r].id == e.user_id; });
        if (it == record_of.end())
          throw InvalidScenario("event at slot " + std::to_string(slot) + " removes absent user " +
                                std::to_string(e.user_id));
        const auto idx = static_cast<std::size_t>(it - record_of.begin());
        out.users[*it].leave_slot = slot;
        net.topology = net.topology.without_user(idx);
        net.profiles.erase(net.profiles.begin() + static_cast<std::ptrdiff_t>(idx));
        state.backlog.erase(state.backlog.begin() + static_cast<std::ptrdiff_t>(idx));
        record_of.erase(it);
      } else {
        const std::uint64_t id = e.user_id == 0 ? next_id : e.user_id;
        for (const auto& rec : out.users)
          if (rec.id == id) throw InvalidScenario("user id " + std::to_string(id) + " is already in use");
        if (e.profile >= net.cache.profiles()) throw InvalidScenario("joining user has an invalid profile");
        if (e.links) net.topology = net.topology.with_user_added(*e.links);
        else if (e.position) net.topology = net.topology.with_user_added(*e.position);
        else throw InvalidScenario("joining user needs a position or explicit links");
        net.profiles.push_back(e.profile);
        state.backlog.push_back(0.0);
        out.users.push_back({id, slot, std::nullopt, 0.0, 0.0});
        record_of.push_back(out.users.size() - 1);
        next_id = std::max(next_id, id + 1);
      }
    }
    if (changed) selector = make_selector(config.scheduler, net, config.selector);

    const auto step = dpp_step(state, config.objective, *selector, rng);
    for (std::size_t k = 0; k < record_of.size(); ++k) {
      auto& rec = out.users[record_of[k]];
      const double r = step.selection.rates[k];
      const auto n = static_cast<double>(slot - rec.join_slot + 1);
      rec.goodput = (rec.goodput * (n - 1.0) + r) / n;
      rec.served += r;
      out.max_backlog = std::max(out.max_backlog, state.backlog[k]);
      if (config.record_trace) out.trace.push_back({slot, rec.id, r, rec.goodput, state.backlog[k]});
    }
  }
  return out;
}

}  // namespace ccwlan
