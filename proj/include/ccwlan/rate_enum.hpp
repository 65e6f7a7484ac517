#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ccwlan/network.hpp"
#include "ccwlan/rational.hpp"

namespace ccwlan {

/// Users one active AP serves together with a single set of codewords.
struct ApGroup {
  ApIndex ap = 0;
  std::vector<UserIndex> users;  // distinct profiles, ascending index
  friend bool operator==(const ApGroup&, const ApGroup&) = default;
};

/// Activation pattern plus one feasible set per active AP.
struct SchedulingDecision {
  ActivationPattern pattern{0};
  std::size_t index = 0;  // 1-based within the pattern; 0 when not enumerated
  std::vector<ApGroup> groups;
};

/// Chunks per slot for every user.
using RateVector = std::vector<Rational>;

struct RatedDecision {
  SchedulingDecision decision;
  RateVector rates;
};

struct EnumerationOptions {
  bool prune_group_sizes = true;    // skip group sizes that cannot change any rate
  bool prune_dominated = true;  // keep only componentwise-maximal vectors
  std::uint64_t decision_cap = 10'000'000;
};

/// prod_l (|U^l| + 1) - 1: non-empty feasible sets for one AP.
std::uint64_t count_decisions_per_ap(std::span<const std::size_t> users_per_profile);

/// Upper bound on the number of scheduling decisions (saturating).
std::uint64_t count_decisions(const Network& network);

/// Rate vector produced by a decision.
RateVector rates_for(const Network& network, const SchedulingDecision& decision);

/// All scheduling decisions and their rate vectors, pattern by pattern.
/// Throws CapExceeded when the pre-count exceeds options.decision_cap.
std::vector<RatedDecision> enumerate_rate_vectors(const Network& network, const EnumerationOptions& options = {});

/// Componentwise-maximal vectors; exact duplicates keep their first occurrence.
std::vector<RatedDecision> maximal_vectors(std::span<const RatedDecision> vectors);

/// Vectors over class representatives; entry c is the class total.
std::vector<RatedDecision> reduce_by_equivalence(std::span<const RatedDecision> vectors, const EquivalenceClasses& classes);

/// Inverse of reduce_by_equivalence: each class entry r spread as r / size.
std::vector<RatedDecision> expand_by_equivalence(std::span<const RatedDecision> reduced, const EquivalenceClasses& classes);

template <class W>
struct GroupChoice {
  std::vector<UserIndex> users;
  W wsr{};
};

/// Highest weighted sum-rate feasible set among `candidates`.
///
/// Only the heaviest user of each profile can matter, and since the group
/// rate depends on the group size alone, only the z = min(|C|, L - t)
/// prefixes of the weight-sorted representatives (the last one extended to
/// all of C) need to be compared. Ties go to the larger group.
template <class W>
GroupChoice<W> best_group(std::span<const UserIndex> candidates, std::span<const unsigned> profiles,
                          std::span<const W> weights, const CacheConfig& cfg);

template <class W>
struct WsrmResult {
  SchedulingDecision decision;
  RateVector rates;
  W wsr{};
};

/// argmax of Q^T r over a precomputed list; first maximiser wins.
template <class W>
WsrmResult<W> wsrm_exact(std::span<const RatedDecision> candidates, std::span<const W> weights);

/// argmax of Q^T r over every scheduling decision of the network.
template <class W>
WsrmResult<W> wsrm_exact(const Network& network, std::span<const W> weights, std::uint64_t decision_cap = 10'000'000);

/// Served users of every active AP in every activation pattern. Patterns in
/// which some active AP has nobody to serve are left out.
class PatternCache {
public:
  struct Entry {
    ActivationPattern pattern{0};
    std::vector<ApIndex> aps;                     // active APs, ascending
    std::vector<std::vector<UserIndex>> served;  // parallel to aps
  };

  /// Throws CapExceeded for more than 24 APs.
  explicit PatternCache(const Topology& topology);
  std::span<const Entry> usable() const { return usable_; }

private:
  std::vector<Entry> usable_;
};

/// Same optimum as wsrm_exact, found by per-AP best_group in every pattern.
template <class W>
WsrmResult<W> wsrm_reduced(const Network& network, std::span<const W> weights);

template <class W>
WsrmResult<W> wsrm_reduced(const Network& network, const PatternCache& patterns, std::span<const W> weights);

/// "p/q" fractions, comma separated.
std::string format_rates(const RateVector& rates);

}  // namespace ccwlan
