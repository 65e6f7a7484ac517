#include "ccwlan/harness.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "ccwlan/errors.hpp"

namespace ccwlan {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Runs body(i) for i in [0, n) on up to thread_count() workers and rethrows
// the first exception once every worker has stopped.
template <class F>
void parallel_for(std::size_t n, F&& body) {
  const std::size_t workers = std::min<std::size_t>(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock{error_mutex};
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::uint64_t child_seed(std::uint64_t master, std::uint64_t trial) {
  return splitmix64(master + 0x9E3779B97F4A7C15ULL * (trial + 1));
}

TrialSeeds trial_seeds(std::uint64_t master, std::uint64_t trial) {
  const std::uint64_t c = child_seed(master, trial);
  return {splitmix64(c ^ 1), splitmix64(c ^ 2), splitmix64(c ^ 3)};
}

unsigned thread_count() {
  if (const char* env = std::getenv("CCWLAN_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

Network realize_network(const Scenario& scenario, std::size_t trial) {
  scenario.validate();
  const auto seeds = trial_seeds(scenario.master_seed, trial);
  const auto cfg = scenario.cache();

  Topology topo = scenario.topology
                      ? *scenario.topology
                      : build_hex_grid_n(scenario.hex->aps, scenario.hex->radius, scenario.hex->r_trans,
                                         scenario.hex->r_inter);
  if (scenario.mean_users || scenario.density) {
    const double density =
        scenario.density ? *scenario.density : density_for_mean_users(topo, *scenario.mean_users);
    topo = sample_users_ppp(topo, density, seeds.placement);
  }

  ProfileAssignment profiles;
  if (scenario.profile_assignment) {
    profiles = *scenario.profile_assignment;
  } else {
    std::mt19937_64 rng{seeds.profiles};
    profiles = random_profiles(topo.user_count(), cfg.profiles(), rng);
  }
  Network net{std::move(topo), std::move(profiles), cfg};
  net.validate();
  return net;
}

DppConfig dpp_config(const Scenario& scenario, std::uint64_t scheduler_seed) {
  DppConfig c;
  c.objective = scenario.objective;
  c.scheduler = scenario.scheduler;
  c.v = scenario.v;
  c.slots = scenario.slots;
  c.q0 = scenario.q0;
  c.a_max = scenario.a_max;
  c.selector.reuse_factor = scenario.reuse_factor;
  c.selector.decision_cap = scenario.decision_cap;
  c.events = scenario.events;
  c.seed = scheduler_seed;
  return c;
}

TrialResult run_trial(const Scenario& scenario, std::size_t trial, bool keep_trace) {
  const auto start = std::chrono::steady_clock::now();
  const Network net = realize_network(scenario, trial);
  const auto seeds = trial_seeds(scenario.master_seed, trial);

  TrialResult r;
  r.trial = trial;
  r.seed = child_seed(scenario.master_seed, trial);
  if (scenario.mode == SolveMode::dynamic) {
    auto cfg = dpp_config(scenario, seeds.scheduler);
    cfg.record_trace = keep_trace;
    DppResult run = run_dpp(net, cfg);
    r.goodput = run.goodputs();
    for (const auto& u : run.users) r.user_ids.push_back(u.id);
    r.run = std::move(run);
  } else {
    EnumerationOptions opts;
    opts.decision_cap = scenario.decision_cap;
    const auto vectors = enumerate_rate_vectors(net, opts);
    r.atoms = to_atoms(vectors);
    auto policy = solve(scenario.objective, r.atoms);
    r.goodput = policy.goodput;
    for (std::size_t k = 0; k < net.user_count(); ++k) r.user_ids.push_back(k + 1);
    r.policy = std::move(policy);
  }
  const auto m = metrics(r.goodput);
  r.utility = scenario.objective == Fairness::pf ? pf_utility(r.goodput) : hf_utility(r.goodput);
  r.geometric_mean = m.geometric_mean;
  r.min_rate = m.min_rate;
  r.cdf = m.cdf;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<TrialResult> run_scenario(const Scenario& scenario, bool keep_trace) {
  scenario.validate();
  std::vector<TrialResult> out(scenario.trials);
  parallel_for(scenario.trials, [&](std::size_t k) { out[k] = run_trial(scenario, k, keep_trace); });
  return out;
}

SweepVariable sweep_variable_from_string(const std::string& name) {
  if (name == "L") return SweepVariable::profiles;
  if (name == "V") return SweepVariable::v;
  if (name == "scheduler") return SweepVariable::scheduler;
  throw InvalidScenario("sweep variable must be L, V or scheduler, got '" + name + "'");
}

std::string to_string(SweepVariable var) {
  switch (var) {
    case SweepVariable::profiles: return "L";
    case SweepVariable::v: return "V";
    case SweepVariable::scheduler: return "scheduler";
  }
  return "?";
}

std::vector<SweepRow> sweep(const Scenario& base, SweepVariable variable, std::span<const std::string> values) {
  struct Cell {
    std::size_t value;
    std::size_t trial;
  };
  std::vector<std::optional<Scenario>> scenarios;
  std::vector<std::string> errors;
  for (const auto& value : values) {
    Scenario s = base;
    try {
      switch (variable) {
        case SweepVariable::profiles: s.profiles = static_cast<unsigned>(std::stoul(value)); break;
        case SweepVariable::v: s.v = std::stod(value); break;
        case SweepVariable::scheduler: s.scheduler = scheduler_from_string(value); break;
      }
      s.validate();
      scenarios.emplace_back(std::move(s));
      errors.emplace_back();
    } catch (const std::logic_error& e) {
      scenarios.emplace_back();
      errors.emplace_back("not a valid value: " + std::string{e.what()});
    } catch (const Error& e) {
      scenarios.emplace_back();
      errors.emplace_back(e.what());
    }
  }

  std::vector<Cell> cells;
  for (std::size_t v = 0; v < values.size(); ++v)
    for (std::size_t t = 0; t < base.trials; ++t) cells.push_back({v, t});

  std::vector<SweepRow> rows(cells.size());
  parallel_for(cells.size(), [&](std::size_t i) {
    const auto [v, t] = cells[i];
    auto& row = rows[i];
    row.value = values[v];
    row.trial = t;
    row.scheduler = to_string(scenarios[v] ? scenarios[v]->scheduler : base.scheduler);
    if (!scenarios[v]) {
      row.error = errors[v];
      return;
    }
    try {
      const auto r = run_trial(*scenarios[v], t, false);
      row.users = r.goodput.size();
      row.utility = r.utility;
      row.geometric_mean = r.geometric_mean;
      row.min_rate = r.min_rate;
    } catch (const CapExceeded& e) {
      row.error = e.what();
    } catch (const InvalidScenario& e) {
      row.error = e.what();
    }
  });
  return rows;
}

}  // namespace ccwlan
