#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ccwlan/fair_solver.hpp"
#include "ccwlan/selection.hpp"

namespace ccwlan {

enum class SchedulerKind { exact_wsrm, reduced_wsrm, vq_heuristic, reuse_baseline, csma_baseline };

/// Short names: exact, reduced, heuristic, reuse, csma.
std::string to_string(SchedulerKind kind);
/// Accepts the short names and the enumerator spellings.
SchedulerKind scheduler_from_string(std::string_view name);

struct QueueState {
  std::vector<double> backlog;
  std::uint64_t slot = 0;  // slots completed so far
  double v = 50.0;
  double a_max = 1.0;
};

/// A_k = min(V / Q_k, A_max), with Q_k = 0 giving A_max.
std::vector<double> arrival_pf(std::span<const double> backlog, double v, double a_max);

/// A_max for everyone when V > sum Q, otherwise nothing.
std::vector<double> arrival_hf(std::span<const double> backlog, double v, double a_max);

/// Q' = max(Q - R, 0) + A.
std::vector<double> queue_update(std::span<const double> backlog, std::span<const double> rates,
                                 std::span<const double> arrivals);

struct SelectorOptions {
  unsigned reuse_factor = 3;
  std::uint64_t decision_cap = 10'000'000;
};

/// Exact selection scans the maximal rate vectors enumerated up front, so
/// construction may throw CapExceeded. Reuse throws InvalidScenario when the
/// topology admits no colouring with `reuse_factor` colours.
std::unique_ptr<RateSelector> make_selector(SchedulerKind kind, const Network& network,
                                            const SelectorOptions& options = {});

/// One step of the virtual-queue heuristic.
Selection vq_heuristic_step(const Network& network, std::span<const double> backlog, std::mt19937_64& rng);

struct StepResult {
  std::vector<double> arrivals;
  Selection selection;
};

/// Arrivals and rates from the current backlog, then the queue update.
StepResult dpp_step(QueueState& state, Fairness objective, RateSelector& selector, std::mt19937_64& rng);

/// Population change applied right before the step of `slot`.
struct UserEvent {
  enum class Kind { add, remove };
  std::uint64_t slot = 1;
  Kind kind = Kind::add;
  std::uint64_t user_id = 0;            // 1-based; 0 on add means "next free id"
  unsigned profile = 0;                 // 0-based, add only
  std::optional<Point> position;        // add, geometric topologies
  std::optional<UserLinks> links;       // add, adjacency topologies
};

struct DppConfig {
  Fairness objective = Fairness::pf;
  SchedulerKind scheduler = SchedulerKind::exact_wsrm;
  double v = 50.0;
  std::uint64_t slots = 20'000;
  double q0 = 0.0;
  std::optional<double> a_max;  // defaults to the cache's largest rate
  SelectorOptions selector;
  std::vector<UserEvent> events;  // strictly increasing slots
  std::uint64_t seed = 1;
  bool record_trace = true;
};

struct TraceRow {
  std::uint64_t slot = 0;
  std::uint64_t user_id = 0;
  double inst_rate = 0.0;
  double goodput = 0.0;  // running average since the user joined
  double queue = 0.0;    // backlog after the update
};

struct UserRecord {
  std::uint64_t id = 0;
  std::uint64_t join_slot = 1;
  std::optional<std::uint64_t> leave_slot;
  double goodput = 0.0;  // frozen once the user leaves
  double served = 0.0;   // total chunks received
};

struct DppResult {
  std::vector<UserRecord> users;  // by order of first appearance
  std::vector<TraceRow> trace;    // slot-major, users by current index
  double max_backlog = 0.0;

  std::vector<double> goodputs() const;
  /// Average rate of `user_id` over slots [from, to).
  double window_average(std::uint64_t user_id, std::uint64_t from, std::uint64_t to) const;
};

/// Runs `config.slots` slots numbered from 1. Initial users get ids 1..K.
DppResult run_dpp(const Network& network, const DppConfig& config);

}  // namespace ccwlan
