#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "ccwlan/rate_enum.hpp"

namespace ccwlan {

/// Outcome of one rate-selection step.
struct Selection {
  SchedulingDecision decision;
  std::vector<double> rates;  // per user, chunks per slot
  double wsr = 0.0;           // sum_k Q_k * rates_k
};

/// Per-slot rate selection given virtual backlogs. Implementations own a
/// snapshot of the network and are rebuilt when the user population changes.
class RateSelector {
public:
  virtual ~RateSelector() = default;
  virtual Selection select(std::span<const double> backlog, std::uint64_t slot, std::mt19937_64& rng) = 0;
  virtual const Network& network() const = 0;
};

/// Rates of `decision` as doubles plus the backlog-weighted sum.
Selection make_selection(const Network& network, SchedulingDecision decision, std::span<const double> backlog);

/// True iff no served user lies in the interference set of another active AP,
/// every group has distinct profiles and every member is reachable.
bool collision_free(const Network& network, const SchedulingDecision& decision);

}  // namespace ccwlan
