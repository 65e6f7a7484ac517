#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ccwlan/scenario.hpp"

namespace ccwlan {

/// Counter-based child seed: splitmix64(master + golden * (trial + 1)).
std::uint64_t child_seed(std::uint64_t master, std::uint64_t trial);

/// Independent streams for one trial, each a splitmix64 step of the child seed.
struct TrialSeeds {
  std::uint64_t placement = 0;
  std::uint64_t profiles = 0;
  std::uint64_t scheduler = 0;
};
TrialSeeds trial_seeds(std::uint64_t master, std::uint64_t trial);

/// Worker count from CCWLAN_THREADS, else the hardware concurrency.
unsigned thread_count();

/// Topology, users and profiles of trial `trial`. User placement depends only
/// on the master seed and the trial, so scenarios differing in L, V or the
/// scheduler see the same users.
Network realize_network(const Scenario& scenario, std::size_t trial);

DppConfig dpp_config(const Scenario& scenario, std::uint64_t scheduler_seed);

struct TrialResult {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> user_ids;
  std::vector<double> goodput;
  double utility = 0.0;  // objective value on goodput
  double geometric_mean = 0.0;
  double min_rate = 0.0;
  std::vector<std::pair<double, double>> cdf;
  std::optional<DppResult> run;        // dynamic mode
  std::optional<MixturePolicy> policy; // static mode
  std::vector<Atom> atoms;             // static mode
  double seconds = 0.0;
};

TrialResult run_trial(const Scenario& scenario, std::size_t trial, bool keep_trace = false);

/// All trials, in trial order; independent of the number of workers.
std::vector<TrialResult> run_scenario(const Scenario& scenario, bool keep_trace = false);

enum class SweepVariable { profiles, v, scheduler };
SweepVariable sweep_variable_from_string(const std::string& name);
std::string to_string(SweepVariable var);

struct SweepRow {
  std::string value;
  std::string scheduler;
  std::size_t trial = 0;
  std::size_t users = 0;
  double utility = 0.0;
  double geometric_mean = 0.0;
  double min_rate = 0.0;
  std::string error;  // non-empty when this value was invalid for the scenario
};

/// Every (value, trial) cell on paired realizations. Invalid values produce
/// rows carrying the error and the sweep carries on.
std::vector<SweepRow> sweep(const Scenario& base, SweepVariable variable, std::span<const std::string> values);

}  // namespace ccwlan
