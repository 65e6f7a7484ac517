#pragma once

#include <cstdint>
#include <vector>

#include "ccwlan/coded_cache.hpp"
#include "ccwlan/topology.hpp"

namespace ccwlan {

/// Everything a scheduler needs to know about the current network.
struct Network {
  Topology topology;
  ProfileAssignment profiles;
  CacheConfig cache;

  std::size_t user_count() const { return topology.user_count(); }
  std::size_t ap_count() const { return topology.ap_count(); }

  /// Throws InvalidScenario when profiles do not match the topology or L.
  void validate() const;
};

/// Two-AP, six-user network with L = 3, t = 1 used throughout as the
/// reference fixture. u1 and u4 hold profile 1, u5 and u6 profile 2,
/// u2 and u3 profile 3.
Network reference_network();

}  // namespace ccwlan
