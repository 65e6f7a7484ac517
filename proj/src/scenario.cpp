#include "ccwlan/scenario.hpp"

#include <fstream>
#include <stdexcept>

#include "ccwlan/errors.hpp"

namespace ccwlan {

using nlohmann::json;

void Scenario::validate() const {
  if (topology.has_value() == hex.has_value()) throw InvalidScenario("give exactly one of 'topology' and 'hex'");
  if (trials == 0) throw InvalidScenario("trials must be at least 1");
  if (!(v > 0.0)) throw InvalidScenario("V must be positive");
  if (q0 < 0.0) throw InvalidScenario("Q0 must be non-negative");
  if (a_max && !(*a_max > 0.0)) throw InvalidScenario("A_max must be positive");
  if (reuse_factor == 0) throw InvalidScenario("reuse_factor must be positive");
  if (mean_users && density) throw InvalidScenario("give at most one of 'mean_users' and 'density'");
  if ((mean_users && *mean_users < 0.0) || (density && *density < 0.0))
    throw InvalidScenario("user density must be non-negative");
  const bool ppp = mean_users || density;
  if (hex && !ppp) throw InvalidScenario("hex topologies need 'mean_users' or 'density'");
  if (ppp && topology && topology->mode() != TopologyMode::geometric)
    throw InvalidScenario("PPP users need a geometric topology");
  const auto cfg = cache();
  if (profile_assignment) {
    if (ppp) throw InvalidScenario("explicit profiles cannot be combined with random users");
    if (profile_assignment->size() != topology->user_count())
      throw InvalidScenario("profile list length differs from the user count");
    for (auto p : *profile_assignment)
      if (p >= cfg.profiles()) throw InvalidScenario("profile index out of range");
  }
  std::uint64_t last = 0;
  for (const auto& e : events) {
    if (e.slot == 0 || e.slot <= last) throw InvalidScenario("event slots must be positive and strictly increasing");
    last = e.slot;
    if (e.kind == UserEvent::Kind::add && e.profile >= cfg.profiles())
      throw InvalidScenario("joining user has an invalid profile");
  }
}

Scenario builtin_scenario(const std::string& name) {
  if (name != "two_ap" && name != "two_ap_churn") throw InvalidScenario("unknown built-in scenario '" + name + "'");
  const Network ref = reference_network();
  Scenario s;
  s.name = name;
  s.topology = ref.topology;
  s.profiles = ref.cache.profiles();
  s.gamma = ref.cache.gamma();
  s.profile_assignment = ref.profiles;
  if (name == "two_ap_churn") {
    UserEvent leave;
    leave.slot = 400;
    leave.kind = UserEvent::Kind::remove;
    leave.user_id = 6;
    UserEvent join;
    join.slot = 601;
    join.kind = UserEvent::Kind::add;
    join.user_id = 7;
    join.profile = 0;
    join.links = UserLinks{0b11, 0b11};
    s.events = {leave, join};
  }
  return s;
}

namespace {

ApMask mask_from(const json& list) {
  ApMask m = 0;
  for (const auto& a : list) {
    const auto i = a.get<std::size_t>();
    if (i == 0 || i > kMaxAps) throw InvalidScenario("AP index out of range in event");
    m |= ApMask{1} << (i - 1);
  }
  return m;
}

json mask_to(ApMask m) {
  auto arr = json::array();
  for (std::size_t i = 0; i < kMaxAps; ++i)
    if (m >> i & 1U) arr.push_back(i + 1);
  return arr;
}

Rational rational_from(const json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational{j.get<std::int64_t>()};
  return Rational::approximate(j.get<double>());
}

Fairness fairness_from(const std::string& s) {
  if (s == "pf" || s == "PF") return Fairness::pf;
  if (s == "hf" || s == "HF") return Fairness::hf;
  throw InvalidScenario("objective must be pf or hf, got '" + s + "'");
}

UserEvent event_from(const json& j) {
  UserEvent e;
  e.slot = j.at("slot").get<std::uint64_t>();
  if (j.contains("remove_user")) {
    e.kind = UserEvent::Kind::remove;
    e.user_id = j.at("remove_user").get<std::uint64_t>();
    return e;
  }
  const auto& add = j.at("add_user");
  e.kind = UserEvent::Kind::add;
  e.user_id = add.value("id", std::uint64_t{0});
  const auto profile = add.at("profile").get<unsigned>();
  if (profile == 0) throw InvalidScenario("profiles are numbered from 1");
  e.profile = profile - 1;
  if (add.contains("position")) {
    const auto& p = add.at("position");
    e.position = Point{p.at(0).get<double>(), p.at(1).get<double>()};
  } else {
    e.links = UserLinks{mask_from(add.at("trans")), mask_from(add.at("inter"))};
  }
  return e;
}

json event_to(const UserEvent& e) {
  json j{{"slot", e.slot}};
  if (e.kind == UserEvent::Kind::remove) {
    j["remove_user"] = e.user_id;
    return j;
  }
  json add{{"profile", e.profile + 1}};
  if (e.user_id != 0) add["id"] = e.user_id;
  if (e.position) add["position"] = {e.position->x, e.position->y};
  if (e.links) {
    add["trans"] = mask_to(e.links->trans);
    add["inter"] = mask_to(e.links->inter);
  }
  j["add_user"] = add;
  return j;
}

}  // namespace

Scenario scenario_from_json(const json& doc) {
  try {
    Scenario s = doc.contains("builtin") ? builtin_scenario(doc.at("builtin").get<std::string>()) : Scenario{};
    if (doc.contains("name")) s.name = doc.at("name").get<std::string>();
    if (doc.contains("topology")) {
      s.topology = topology_from_json(doc.at("topology"));
      s.hex.reset();
      if (!doc.contains("profiles")) s.profile_assignment.reset();
    }
    if (doc.contains("hex")) {
      const auto& h = doc.at("hex");
      HexSpec spec;
      spec.radius = h.value("radius", spec.radius);
      spec.r_trans = h.value("r_trans", spec.r_trans);
      spec.r_inter = h.value("r_inter", spec.r_inter);
      if (h.contains("rings")) {
        const auto rings = h.at("rings").get<std::size_t>();
        spec.aps = 1 + 3 * rings * (rings + 1);
      } else {
        spec.aps = h.value("aps", spec.aps);
      }
      s.hex = spec;
      s.topology.reset();
      s.profile_assignment.reset();
    }
    if (doc.contains("mean_users")) s.mean_users = doc.at("mean_users").get<double>();
    if (doc.contains("density")) s.density = doc.at("density").get<double>();
    if (doc.contains("L")) s.profiles = doc.at("L").get<unsigned>();
    if (doc.contains("gamma")) s.gamma = rational_from(doc.at("gamma"));
    if (doc.contains("profiles")) {
      ProfileAssignment p;
      for (const auto& x : doc.at("profiles")) {
        const auto v = x.get<unsigned>();
        if (v == 0) throw InvalidScenario("profiles are numbered from 1");
        p.push_back(v - 1);
      }
      s.profile_assignment = std::move(p);
    }
    if (doc.contains("objective")) s.objective = fairness_from(doc.at("objective").get<std::string>());
    if (doc.contains("scheduler")) s.scheduler = scheduler_from_string(doc.at("scheduler").get<std::string>());
    if (doc.contains("mode")) {
      const auto m = doc.at("mode").get<std::string>();
      if (m == "dynamic") s.mode = SolveMode::dynamic;
      else if (m == "static") s.mode = SolveMode::static_optimum;
      else throw InvalidScenario("mode must be dynamic or static");
    }
    if (doc.contains("V")) s.v = doc.at("V").get<double>();
    if (doc.contains("T")) s.slots = doc.at("T").get<std::uint64_t>();
    if (doc.contains("Q0")) s.q0 = doc.at("Q0").get<double>();
    if (doc.contains("A_max") && !doc.at("A_max").is_null()) s.a_max = doc.at("A_max").get<double>();
    if (doc.contains("reuse_factor")) s.reuse_factor = doc.at("reuse_factor").get<unsigned>();
    if (doc.contains("decision_cap")) s.decision_cap = doc.at("decision_cap").get<std::uint64_t>();
    if (doc.contains("events")) {
      s.events.clear();
      for (const auto& e : doc.at("events")) s.events.push_back(event_from(e));
    }
    if (doc.contains("master_seed")) s.master_seed = doc.at("master_seed").get<std::uint64_t>();
    if (doc.contains("trials")) s.trials = doc.at("trials").get<std::size_t>();
    if (doc.contains("ap_capacity") && !doc.at("ap_capacity").is_null())
      s.ap_capacity = doc.at("ap_capacity").get<double>();
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw InvalidScenario(std::string{"scenario: "} + e.what());
  } catch (const std::invalid_argument& e) {
    throw InvalidScenario(std::string{"scenario: "} + e.what());
  }
}

json scenario_to_json(const Scenario& s) {
  json doc;
  doc["name"] = s.name;
  if (s.topology) doc["topology"] = topology_to_json(*s.topology);
  if (s.hex)
    doc["hex"] = {{"aps", s.hex->aps}, {"radius", s.hex->radius}, {"r_trans", s.hex->r_trans},
                  {"r_inter", s.hex->r_inter}};
  if (s.mean_users) doc["mean_users"] = *s.mean_users;
  if (s.density) doc["density"] = *s.density;
  doc["L"] = s.profiles;
  doc["gamma"] = s.gamma.to_string();
  if (s.profile_assignment) {
    auto p = json::array();
    for (auto x : *s.profile_assignment) p.push_back(x + 1);
    doc["profiles"] = p;
  }
  doc["objective"] = s.objective == Fairness::pf ? "pf" : "hf";
  doc["scheduler"] = to_string(s.scheduler);
  doc["mode"] = s.mode == SolveMode::dynamic ? "dynamic" : "static";
  doc["V"] = s.v;
  doc["T"] = s.slots;
  doc["Q0"] = s.q0;
  if (s.a_max) doc["A_max"] = *s.a_max;
  doc["reuse_factor"] = s.reuse_factor;
  doc["decision_cap"] = s.decision_cap;
  auto ev = json::array();
  for (const auto& e : s.events) ev.push_back(event_to(e));
  doc["events"] = ev;
  doc["master_seed"] = s.master_seed;
  doc["trials"] = s.trials;
  if (s.ap_capacity) doc["ap_capacity"] = *s.ap_capacity;
  return doc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in{path};
  if (!in) throw InvalidScenario("cannot open scenario file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw InvalidScenario(path.string() + ": " + e.what());
  }
  return scenario_from_json(doc);
}

}  // namespace ccwlan
