#include "ccwlan/network.hpp"

#include <string>

#include "ccwlan/errors.hpp"

namespace ccwlan {

void Network::validate() const {
  if (profiles.size() != topology.user_count())
    throw InvalidScenario("profile assignment has " + std::to_string(profiles.size()) + " entries for " +
                          std::to_string(topology.user_count()) + " users");
  for (std::size_t u = 0; u < profiles.size(); ++u)
    if (profiles[u] >= cache.profiles())
      throw InvalidScenario("user " + std::to_string(u + 1) + " has profile " + std::to_string(profiles[u] + 1) +
                            " outside [1, " + std::to_string(cache.profiles()) + "]");
}

Network reference_network() {
  auto bit = [](unsigned ap) { return ApMask{1} << ap; };
  const ApMask h1 = bit(0), h2 = bit(1);
  // u2 sits in h1's cell but inside h2's interference radius; u3 is in
  // both transmission disks.
  std::vector<UserLinks> users{
      {h1, h1},            // u1
      {h1, h1 | h2},       // u2
      {h1 | h2, h1 | h2},  // u3
      {h2, h2},            // u4
      {h2, h2},            // u5
      {h2, h2},            // u6
  };
  return Network{Topology::adjacency(2, std::move(users)), {0, 2, 2, 0, 1, 1}, CacheConfig::coded(3, 1)};
}

}  // namespace ccwlan
