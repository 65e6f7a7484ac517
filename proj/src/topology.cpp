#include "ccwlan/topology.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <tuple>

#include "ccwlan/errors.hpp"

namespace ccwlan {

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

ActivationPattern ActivationPattern::from_index(std::uint64_t j) {
  if (j == 0) throw std::invalid_argument("activation pattern needs at least one active AP");
  return ActivationPattern{j};
}

Topology Topology::geometric(std::vector<Point> aps, std::vector<Point> users, double r_trans, double r_inter) {
  if (aps.empty() || aps.size() > kMaxAps) throw InvalidScenario("geometric topology needs 1.." + std::to_string(kMaxAps) + " APs");
  if (!(r_trans > 0.0) || r_inter < r_trans) throw InvalidScenario("need r_trans > 0 and r_inter >= r_trans");
  Topology t;
  t.mode_ = TopologyMode::geometric;
  t.ap_count_ = aps.size();
  t.ap_positions_ = std::move(aps);
  t.r_trans_ = r_trans;
  t.r_inter_ = r_inter;
  return t.with_users(std::move(users));
}

Topology Topology::adjacency(std::size_t ap_count, std::vector<UserLinks> users) {
  if (ap_count == 0 || ap_count > kMaxAps) throw InvalidScenario("adjacency topology needs 1.." + std::to_string(kMaxAps) + " APs");
  Topology t;
  t.mode_ = TopologyMode::adjacency;
  t.ap_count_ = ap_count;
  const ApMask all = t.all_aps();
  for (std::size_t u = 0; u < users.size(); ++u) {
    const auto& l = users[u];
    if ((l.trans & ~all) != 0 || (l.inter & ~all) != 0)
      throw InvalidScenario("user " + std::to_string(u + 1) + " references a missing AP");
    if ((l.trans & ~l.inter) != 0)
      throw InvalidScenario("user " + std::to_string(u + 1) + ": trans_set must be a subset of inter_set");
  }
  t.links_ = std::move(users);
  return t;
}

UserLinks Topology::links_for(const Point& p) const {
  UserLinks l;
  for (std::size_t h = 0; h < ap_count_; ++h) {
    const double d = distance(ap_positions_[h], p);
    // Boundary counts as inside.
    if (d <= r_trans_) l.trans |= ApMask{1} << h;
    if (d <= r_inter_) l.inter |= ApMask{1} << h;
  }
  return l;
}

Topology Topology::with_users(std::vector<Point> users) const {
  if (mode_ != TopologyMode::geometric) throw InvalidScenario("positions require a geometric topology");
  Topology t = *this;
  t.user_positions_ = std::move(users);
  t.links_.clear();
  t.links_.reserve(t.user_positions_.size());
  for (const auto& p : t.user_positions_) t.links_.push_back(t.links_for(p));
  return t;
}

Topology Topology::with_user_added(const Point& position) const {
  if (mode_ != TopologyMode::geometric) throw InvalidScenario("positions require a geometric topology");
  Topology t = *this;
  t.user_positions_.push_back(position);
  t.links_.push_back(links_for(position));
  return t;
}

Topology Topology::with_user_added(const UserLinks& links) const {
  if (mode_ != TopologyMode::adjacency) throw InvalidScenario("explicit user links require an adjacency topology");
  auto users = links_;
  users.push_back(links);
  return adjacency(ap_count_, std::move(users));
}

Topology Topology::without_user(UserIndex u) const {
  if (u >= links_.size()) throw std::out_of_range("without_user: no such user");
  Topology t = *this;
  t.links_.erase(t.links_.begin() + static_cast<std::ptrdiff_t>(u));
  if (mode_ == TopologyMode::geometric) t.user_positions_.erase(t.user_positions_.begin() + static_cast<std::ptrdiff_t>(u));
  return t;
}

Topology Topology::to_adjacency() const {
  Topology t = adjacency(ap_count_, links_);
  t.ap_positions_ = ap_positions_;
  return t;
}

namespace {

// Axial hex coordinates in spiral order: centre, then each ring.
std::vector<std::pair<int, int>> hex_spiral(unsigned rings) {
  static constexpr std::pair<int, int> kDirs[6] = {{1, 0}, {1, -1}, {0, -1}, {-1, 0}, {-1, 1}, {0, 1}};
  std::vector<std::pair<int, int>> cells{{0, 0}};
  for (int k = 1; k <= static_cast<int>(rings); ++k) {
    int q = kDirs[4].first * k;
    int r = kDirs[4].second * k;
    for (const auto& dir : kDirs) {
      for (int step = 0; step < k; ++step) {
        cells.emplace_back(q, r);
        q += dir.first;
        r += dir.second;
      }
    }
  }
  return cells;
}

Point hex_center(int q, int r, double radius) {
  // Pointy-top layout: neighbouring centres are radius * sqrt(3) apart.
  return {radius * std::sqrt(3.0) * (q + r / 2.0), radius * 1.5 * r};
}

}  // namespace

Topology build_hex_grid(unsigned rings, double hex_radius, double r_trans, double r_inter) {
  return build_hex_grid_n(1 + 3 * static_cast<std::size_t>(rings) * (rings + 1), hex_radius, r_trans, r_inter);
}

Topology build_hex_grid_n(std::size_t ap_count, double hex_radius, double r_trans, double r_inter) {
  if (!(hex_radius > 0.0)) throw InvalidScenario("hex_radius must be positive");
  if (ap_count == 0) throw InvalidScenario("hex grid needs at least one AP");
  unsigned rings = 0;
  while (1 + 3 * static_cast<std::size_t>(rings) * (rings + 1) < ap_count) ++rings;
  std::vector<Point> aps;
  for (const auto& [q, r] : hex_spiral(rings)) {
    if (aps.size() == ap_count) break;
    aps.push_back(hex_center(q, r, hex_radius));
  }
  return Topology::geometric(std::move(aps), {}, r_trans, r_inter);
}

namespace {

struct Box {
  double x0, y0, x1, y1;
};

Box transmission_box(const Topology& t) {
  Box b{1e300, 1e300, -1e300, -1e300};
  for (const auto& p : t.ap_positions()) {
    b.x0 = std::min(b.x0, p.x - t.r_trans());
    b.y0 = std::min(b.y0, p.y - t.r_trans());
    b.x1 = std::max(b.x1, p.x + t.r_trans());
    b.y1 = std::max(b.y1, p.y + t.r_trans());
  }
  return b;
}

bool in_transmission_area(const Topology& t, const Point& p) {
  for (const auto& a : t.ap_positions())
    if (distance(a, p) <= t.r_trans()) return true;
  return false;
}

}  // namespace

double transmission_area(const Topology& topology) {
  if (topology.mode() != TopologyMode::geometric) throw InvalidScenario("transmission area needs a geometric topology");
  const Box b = transmission_box(topology);
  constexpr int kGrid = 1200;
  const double dx = (b.x1 - b.x0) / kGrid;
  const double dy = (b.y1 - b.y0) / kGrid;
  std::size_t inside = 0;
  for (int i = 0; i < kGrid; ++i)
    for (int j = 0; j < kGrid; ++j)
      inside += in_transmission_area(topology, {b.x0 + (i + 0.5) * dx, b.y0 + (j + 0.5) * dy});
  return static_cast<double>(inside) * dx * dy;
}

double density_for_mean_users(const Topology& topology, double mean_users) {
  return mean_users / transmission_area(topology);
}

Topology sample_users_ppp(const Topology& topology, double density, std::uint64_t seed) {
  if (topology.mode() != TopologyMode::geometric) throw InvalidScenario("PPP sampling needs a geometric topology");
  if (density < 0.0) throw InvalidScenario("PPP density must be non-negative");
  std::vector<Point> users;
  if (density > 0.0) {
    const Box b = transmission_box(topology);
    std::mt19937_64 rng{seed};
    std::poisson_distribution<std::uint64_t> count{density * (b.x1 - b.x0) * (b.y1 - b.y0)};
    std::uniform_real_distribution<double> ux{b.x0, b.x1};
    std::uniform_real_distribution<double> uy{b.y0, b.y1};
    const std::uint64_t n = count(rng);
    for (std::uint64_t i = 0; i < n; ++i) {
      const double x = ux(rng);
      const double y = uy(rng);
      Point p{x, y};
      if (in_transmission_area(topology, p)) users.push_back(p);
    }
  }
  return topology.with_users(std::move(users));
}

std::vector<UserIndex> served_users(const Topology& topology, ActivationPattern pattern, ApIndex ap) {
  if (ap >= topology.ap_count() || !pattern.active(ap))
    throw std::invalid_argument("served_users: AP " + std::to_string(ap + 1) + " is not active in the pattern");
  const ApMask self = ApMask{1} << ap;
  const ApMask others = pattern.bits() & ~self;
  std::vector<UserIndex> out;
  const auto links = topology.links();
  for (UserIndex u = 0; u < links.size(); ++u)
    if ((links[u].trans & self) != 0 && (links[u].inter & others) == 0) out.push_back(u);
  return out;
}

EquivalenceClasses equivalence_classes(const Topology& topology, std::span<const unsigned> profiles) {
  if (profiles.size() != topology.user_count()) throw std::invalid_argument("equivalence_classes: profile count mismatch");
  EquivalenceClasses ec;
  ec.class_of.resize(profiles.size());
  std::map<std::tuple<unsigned, ApMask, ApMask>, std::size_t> index;
  for (UserIndex u = 0; u < profiles.size(); ++u) {
    const auto key = std::make_tuple(profiles[u], topology.trans_set(u), topology.inter_set(u));
    auto [it, fresh] = index.try_emplace(key, ec.classes.size());
    if (fresh) ec.classes.emplace_back();
    ec.classes[it->second].push_back(u);
    ec.class_of[u] = it->second;
  }
  return ec;
}

std::vector<ApMask> ap_conflict_graph(const Topology& topology) {
  const std::size_t h = topology.ap_count();
  std::vector<ApMask> adj(h, 0);
  auto link = [&](std::size_t a, std::size_t b) {
    adj[a] |= ApMask{1} << b;
    adj[b] |= ApMask{1} << a;
  };
  for (const auto& l : topology.links())
    for (std::size_t a = 0; a < h; ++a)
      for (std::size_t b = a + 1; b < h; ++b)
        if (((l.inter >> a) & 1U) && ((l.inter >> b) & 1U)) link(a, b);
  if (topology.mode() == TopologyMode::geometric) {
    const auto aps = topology.ap_positions();
    for (std::size_t a = 0; a < h; ++a)
      for (std::size_t b = a + 1; b < h; ++b)
        if (distance(aps[a], aps[b]) <= topology.r_trans() + topology.r_inter()) link(a, b);
  }
  return adj;
}

namespace {

// DSatur ordering with backtracking; exact for the small AP counts used here.
bool color_search(const std::vector<ApMask>& adj, unsigned m, std::vector<int>& color, std::size_t colored) {
  const std::size_t h = adj.size();
  if (colored == h) return true;
  std::size_t pick = h;
  int best_sat = -1, best_deg = -1;
  for (std::size_t v = 0; v < h; ++v) {
    if (color[v] >= 0) continue;
    unsigned used = 0;
    for (std::size_t w = 0; w < h; ++w)
      if (((adj[v] >> w) & 1U) && color[w] >= 0) used |= 1U << color[w];
    const int sat = std::popcount(used);
    const int deg = std::popcount(adj[v]);
    if (sat > best_sat || (sat == best_sat && deg > best_deg)) {
      pick = v;
      best_sat = sat;
      best_deg = deg;
    }
  }
  for (unsigned c = 0; c < m; ++c) {
    bool ok = true;
    for (std::size_t w = 0; w < h && ok; ++w)
      if (((adj[pick] >> w) & 1U) && color[w] == static_cast<int>(c)) ok = false;
    if (!ok) continue;
    color[pick] = static_cast<int>(c);
    if (color_search(adj, m, color, colored + 1)) return true;
    color[pick] = -1;
  }
  return false;
}

}  // namespace

std::optional<std::vector<unsigned>> reuse_coloring(const Topology& topology, unsigned m) {
  if (m == 0) throw std::invalid_argument("reuse factor must be at least 1");
  if (m > 32) m = 32;
  const auto adj = ap_conflict_graph(topology);
  std::vector<int> color(adj.size(), -1);
  if (!color_search(adj, m, color, 0)) return std::nullopt;
  return std::vector<unsigned>(color.begin(), color.end());
}

namespace {

ApMask mask_from_json(const nlohmann::json& list, std::size_t ap_count) {
  ApMask m = 0;
  for (const auto& v : list) {
    const auto ap = v.get<std::int64_t>();
    if (ap < 1 || static_cast<std::size_t>(ap) > ap_count) throw InvalidScenario("AP index out of range: " + std::to_string(ap));
    m |= ApMask{1} << (ap - 1);
  }
  return m;
}

nlohmann::json mask_to_json(ApMask m) {
  auto out = nlohmann::json::array();
  for (std::size_t i = 0; i < kMaxAps; ++i)
    if ((m >> i) & 1U) out.push_back(i + 1);
  return out;
}

Point point_from_json(const nlohmann::json& p) {
  if (!p.is_array() || p.size() != 2) throw InvalidScenario("point must be [x, y]");
  return {p[0].get<double>(), p[1].get<double>()};
}

}  // namespace

Topology topology_from_json(const nlohmann::json& doc) {
  try {
    const std::string mode = doc.at("mode").get<std::string>();
    if (mode == "geometric") {
      std::vector<Point> aps, users;
      for (const auto& p : doc.at("aps")) aps.push_back(point_from_json(p));
      if (doc.contains("users"))
        for (const auto& p : doc.at("users")) users.push_back(point_from_json(p));
      return Topology::geometric(std::move(aps), std::move(users), doc.at("r_trans").get<double>(),
                                 doc.at("r_inter").get<double>());
    }
    if (mode == "adjacency") {
      const auto& aps = doc.at("aps");
      const std::size_t count = aps.is_number() ? aps.get<std::size_t>() : aps.size();
      std::vector<UserLinks> users;
      if (doc.contains("users")) {
        const auto& trans = doc.at("users").at("trans");
        const auto& inter = doc.at("users").at("inter");
        if (trans.size() != inter.size()) throw InvalidScenario("trans and inter lists differ in length");
        for (std::size_t u = 0; u < trans.size(); ++u)
          users.push_back({mask_from_json(trans[u], count), mask_from_json(inter[u], count)});
      }
      return Topology::adjacency(count, std::move(users));
    }
    throw InvalidScenario("unknown topology mode '" + mode + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidScenario(std::string{"topology: "} + e.what());
  }
}

nlohmann::json topology_to_json(const Topology& topology) {
  nlohmann::json doc;
  if (topology.mode() == TopologyMode::geometric) {
    doc["mode"] = "geometric";
    auto pts = [](std::span<const Point> ps) {
      auto arr = nlohmann::json::array();
      for (const auto& p : ps) arr.push_back({p.x, p.y});
      return arr;
    };
    doc["aps"] = pts(topology.ap_positions());
    doc["users"] = pts(topology.user_positions());
    doc["r_trans"] = topology.r_trans();
    doc["r_inter"] = topology.r_inter();
  } else {
    doc["mode"] = "adjacency";
    doc["aps"] = topology.ap_count();
    auto trans = nlohmann::json::array(), inter = nlohmann::json::array();
    for (const auto& l : topology.links()) {
      trans.push_back(mask_to_json(l.trans));
      inter.push_back(mask_to_json(l.inter));
    }
    doc["users"] = {{"trans", trans}, {"inter", inter}};
  }
  return doc;
}

}  // namespace ccwlan
