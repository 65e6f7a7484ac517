#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"

namespace ccwlan {

using ApIndex = std::size_t;
using UserIndex = std::size_t;

/// Set of APs as a bit mask; bit i stands for AP h_{i+1}.
using ApMask = std::uint64_t;
inline constexpr std::size_t kMaxAps = 64;

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

double distance(const Point& a, const Point& b);

enum class TopologyMode { geometric, adjacency };

/// Set of simultaneously transmitting APs.
///
/// Pattern index j and bit mask coincide: bit i of j is set iff AP h_{i+1}
/// is active, so j = 1 is "only h_1", j = 2 "only h_2", j = 3 "both".
class ActivationPattern {
public:
  constexpr explicit ActivationPattern(ApMask bits) : bits_{bits} {}
  static ActivationPattern from_index(std::uint64_t j);

  constexpr std::uint64_t index() const { return bits_; }
  constexpr ApMask bits() const { return bits_; }
  constexpr bool active(ApIndex ap) const { return (bits_ >> ap) & 1U; }
  int active_count() const { return std::popcount(bits_); }

  friend bool operator==(const ActivationPattern&, const ActivationPattern&) = default;

private:
  ApMask bits_;
};

/// Per-user reachability for an explicit (adjacency mode) or derived user.
struct UserLinks {
  ApMask trans = 0;  // APs that can serve the user
  ApMask inter = 0;  // APs whose activity blocks the user; superset of trans
};

/// Multi-AP network under the collision model. Immutable once built.
class Topology {
public:
  static Topology geometric(std::vector<Point> aps, std::vector<Point> users, double r_trans, double r_inter);
  static Topology adjacency(std::size_t ap_count, std::vector<UserLinks> users);

  TopologyMode mode() const { return mode_; }
  std::size_t ap_count() const { return ap_count_; }
  std::size_t user_count() const { return links_.size(); }
  ApMask all_aps() const { return ap_count_ == 64 ? ~ApMask{0} : (ApMask{1} << ap_count_) - 1; }

  ApMask trans_set(UserIndex u) const { return links_.at(u).trans; }
  ApMask inter_set(UserIndex u) const { return links_.at(u).inter; }
  std::span<const UserLinks> links() const { return links_; }

  // Geometric mode only.
  std::span<const Point> ap_positions() const { return ap_positions_; }
  std::span<const Point> user_positions() const { return user_positions_; }
  double r_trans() const { return r_trans_; }
  double r_inter() const { return r_inter_; }

  Topology with_users(std::vector<Point> users) const;
  Topology with_user_added(const Point& position) const;
  Topology with_user_added(const UserLinks& links) const;
  Topology without_user(UserIndex u) const;

  /// Same network with reachability frozen into explicit sets.
  Topology to_adjacency() const;

private:
  Topology() = default;
  UserLinks links_for(const Point& p) const;

  TopologyMode mode_ = TopologyMode::adjacency;
  std::size_t ap_count_ = 0;
  std::vector<UserLinks> links_;
  std::vector<Point> ap_positions_;
  std::vector<Point> user_positions_;
  double r_trans_ = 0.0;
  double r_inter_ = 0.0;
};

/// APs at the centres of a hexagonal grid: `rings` rings around a central
/// hexagon, neighbouring centres hex_radius * sqrt(3) apart. No users.
Topology build_hex_grid(unsigned rings, double hex_radius, double r_trans = 1.0, double r_inter = 1.2);

/// First `ap_count` centres of the hexagonal spiral (centre, then ring by ring).
Topology build_hex_grid_n(std::size_t ap_count, double hex_radius, double r_trans = 1.0, double r_inter = 1.2);

/// Area of the union of AP transmission disks (numerical, geometric mode).
double transmission_area(const Topology& topology);

/// Density giving `mean_users` expected users inside the transmission area.
double density_for_mean_users(const Topology& topology, double mean_users);

/// Users from a homogeneous PPP restricted to the union of transmission disks.
/// Replaces any existing users. Deterministic for a given seed.
Topology sample_users_ppp(const Topology& topology, double density, std::uint64_t seed);

/// Users decodable from `ap` when `pattern` is active.
std::vector<UserIndex> served_users(const Topology& topology, ActivationPattern pattern, ApIndex ap);

struct EquivalenceClasses {
  std::vector<std::vector<UserIndex>> classes;  // ordered by smallest member
  std::vector<std::size_t> class_of;            // user -> class

  std::size_t size() const { return classes.size(); }
  UserIndex representative(std::size_t c) const { return classes.at(c).front(); }
};

/// Users are equivalent iff they share profile, trans set and inter set.
EquivalenceClasses equivalence_classes(const Topology& topology, std::span<const unsigned> profiles);

/// Conflict graph as per-AP neighbour masks. Two APs conflict when a user
/// lies in both interference sets or, in geometric mode, when some point of
/// one transmission disk lies within the other's interference radius.
std::vector<ApMask> ap_conflict_graph(const Topology& topology);

/// Colours in [0, m) with no two conflicting APs sharing a colour, or
/// nullopt if no such colouring exists.
std::optional<std::vector<unsigned>> reuse_coloring(const Topology& topology, unsigned m);

Topology topology_from_json(const nlohmann::json& doc);
nlohmann::json topology_to_json(const Topology& topology);

}  // namespace ccwlan
