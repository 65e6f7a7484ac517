#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ccwlan/dpp.hpp"
#include "json.hpp"

namespace ccwlan {

/// APs on a hexagonal grid; users come from the scenario's PPP settings.
struct HexSpec {
  std::size_t aps = 7;
  double radius = 1.0;
  double r_trans = 1.0;
  double r_inter = 1.2;
};

enum class SolveMode { dynamic, static_optimum };

struct Scenario {
  std::string name = "scenario";

  // Exactly one of topology / hex.
  std::optional<Topology> topology;
  std::optional<HexSpec> hex;
  // PPP users, replacing any listed ones: expected count or density.
  std::optional<double> mean_users;
  std::optional<double> density;

  unsigned profiles = 1;  // L
  Rational gamma{0};
  std::optional<ProfileAssignment> profile_assignment;  // 0-based; random per trial when absent

  Fairness objective = Fairness::pf;
  SchedulerKind scheduler = SchedulerKind::exact_wsrm;
  SolveMode mode = SolveMode::dynamic;
  double v = 50.0;
  std::uint64_t slots = 20'000;
  double q0 = 0.0;
  std::optional<double> a_max;
  unsigned reuse_factor = 3;
  std::uint64_t decision_cap = 10'000'000;
  std::vector<UserEvent> events;

  std::uint64_t master_seed = 1;
  std::size_t trials = 1;
  std::optional<double> ap_capacity;  // reporting only: bitrate = capacity * goodput

  CacheConfig cache() const { return CacheConfig::from_gamma(profiles, gamma); }

  /// Throws InvalidScenario on inconsistent settings.
  void validate() const;
};

/// Named fixtures: "two_ap" (two APs, six users, L = 3, t = 1) and "two_ap_churn"
/// (two_ap with u6 leaving at slot 400 and a profile-1 user joining both APs
/// at slot 601).
Scenario builtin_scenario(const std::string& name);

/// Parses a scenario; a "builtin" key seeds the defaults from a fixture.
Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Scenario& scenario);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace ccwlan
