#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "ccwlan/selection.hpp"

namespace ccwlan {

/// Static channel reuse: APs of colour c may transmit in slots with
/// slot mod m == c.
struct ReuseSchedule {
  unsigned m = 3;
  std::vector<unsigned> colors;  // per AP, in [0, m)

  /// Throws InvalidScenario when no valid colouring with m colours exists.
  static ReuseSchedule for_topology(const Topology& topology, unsigned m = 3);
  unsigned phase(std::uint64_t slot) const { return static_cast<unsigned>(slot % m); }
};

/// Every AP of the current colour serves its best group among the users it
/// reaches that no other same-colour AP interferes with.
Selection reuse_step(const Network& network, std::span<const double> backlog, const ReuseSchedule& schedule,
                     std::uint64_t slot);

/// Unit-mean exponential timer per AP; the activation order is their
/// ascending sort.
struct CsmaDraw {
  std::vector<double> timers;
  std::vector<ApIndex> order;

  static CsmaDraw sample(std::size_t ap_count, std::mt19937_64& rng);
};

/// APs in timer order join when they would not interfere with any user
/// already being served, each serving its best group among users outside
/// the interference sets of the APs already on.
Selection csma_step(const Network& network, std::span<const double> backlog, const CsmaDraw& draw);
Selection csma_step(const Network& network, std::span<const double> backlog, std::mt19937_64& rng);

}  // namespace ccwlan
