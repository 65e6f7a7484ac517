#include "ccwlan/report.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "ccwlan/errors.hpp"

namespace ccwlan {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss{line};
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool next_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return true;
  }
  return false;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

}  // namespace

void write_rates_csv(std::ostream& out, std::span<const RatedDecision> vectors, std::size_t users) {
  out << "pattern_index,decision_index";
  for (std::size_t k = 1; k <= users; ++k) out << ",rate_" << k;
  out << '\n';
  for (const auto& rd : vectors) {
    out << rd.decision.pattern.index() << ',' << rd.decision.index;
    for (const auto& r : rd.rates) out << ',' << r.to_string();
    out << '\n';
  }
}

std::vector<Atom> read_atoms_csv(std::istream& in) {
  std::string line;
  if (!next_line(in, line)) throw InvalidScenario("atoms file is empty");
  const auto header = split(line);
  if (header.size() < 3 || header[0] != "pattern_index" || header[1] != "decision_index")
    throw InvalidScenario("atoms file has an unexpected header");
  const std::size_t users = header.size() - 2;
  std::vector<Atom> atoms;
  while (next_line(in, line)) {
    const auto cells = split(line);
    if (cells.size() != users + 2) throw InvalidScenario("atoms row has " + std::to_string(cells.size()) + " cells");
    try {
      Atom a{std::stoull(cells[0]), std::stoul(cells[1]), {}};
      for (std::size_t k = 0; k < users; ++k) a.rates.push_back(Rational::parse(cells[k + 2]).to_double());
      atoms.push_back(std::move(a));
    } catch (const std::logic_error& e) {
      throw InvalidScenario("bad atoms row '" + line + "': " + e.what());
    }
  }
  return atoms;
}

json solution_to_json(std::span<const Atom> atoms, const MixturePolicy& policy) {
  json doc;
  doc["utility"] = policy.utility;
  doc["goodput"] = policy.goodput;
  auto support = json::array();
  for (auto a : policy.support())
    support.push_back({{"pattern", atoms[a].pattern}, {"decision", atoms[a].decision}, {"prob", policy.probabilities[a]}});
  doc["support"] = support;
  const auto m = metrics(policy.goodput);
  doc["geometric_mean"] = m.geometric_mean;
  doc["min_rate"] = m.min_rate;
  return doc;
}

void write_trace_csv(std::ostream& out, std::span<const TraceRow> trace) {
  out << "slot,user_id,inst_rate,goodput,queue\n";
  for (const auto& r : trace)
    out << r.slot << ',' << r.user_id << ',' << fmt(r.inst_rate) << ',' << fmt(r.goodput) << ',' << fmt(r.queue)
        << '\n';
}

std::vector<TraceRow> read_trace_csv(std::istream& in) {
  std::string line;
  std::vector<TraceRow> rows;
  if (!next_line(in, line)) return rows;
  if (line.rfind("slot,user_id", 0) != 0) throw InvalidScenario("trace file has an unexpected header");
  while (next_line(in, line)) {
    const auto c = split(line);
    if (c.size() != 5) throw InvalidScenario("bad trace row '" + line + "'");
    try {
      rows.push_back({std::stoull(c[0]), std::stoull(c[1]), std::stod(c[2]), std::stod(c[3]), std::stod(c[4])});
    } catch (const std::logic_error&) {
      throw InvalidScenario("bad trace row '" + line + "'");
    }
  }
  return rows;
}

void write_trajectory_csv(std::ostream& out, std::span<const TraceRow> trace, double capacity) {
  std::vector<std::uint64_t> ids;
  for (const auto& r : trace)
    if (std::find(ids.begin(), ids.end(), r.user_id) == ids.end()) ids.push_back(r.user_id);
  std::sort(ids.begin(), ids.end());
  std::map<std::uint64_t, std::size_t> column;
  for (std::size_t i = 0; i < ids.size(); ++i) column[ids[i]] = i;

  out << "slot";
  for (auto id : ids) out << ",u" << id;
  out << '\n';
  std::vector<double> current(ids.size(), 0.0);
  std::size_t i = 0;
  while (i < trace.size()) {
    const auto slot = trace[i].slot;
    for (; i < trace.size() && trace[i].slot == slot; ++i) current[column[trace[i].user_id]] = trace[i].goodput;
    out << slot;
    for (double g : current) out << ',' << fmt(g * capacity);
    out << '\n';
  }
}

json summary_to_json(const Scenario& scenario, std::span<const TrialResult> results) {
  json doc;
  doc["scenario"] = scenario.name;
  doc["objective"] = scenario.objective == Fairness::pf ? "pf" : "hf";
  doc["scheduler"] = scenario.mode == SolveMode::dynamic ? to_string(scenario.scheduler) : "static";
  auto trials = json::array();
  for (const auto& r : results) {
    json t{{"trial", r.trial},
           {"seed", r.seed},
           {"user_ids", r.user_ids},
           {"goodput", r.goodput},
           {"utility", r.utility},
           {"geometric_mean", r.geometric_mean},
           {"min_rate", r.min_rate},
           {"seconds", r.seconds}};
    if (scenario.ap_capacity) {
      std::vector<double> bitrate;
      for (double g : r.goodput) bitrate.push_back(g * *scenario.ap_capacity);
      t["bitrate"] = bitrate;
    }
    trials.push_back(std::move(t));
  }
  if (!results.empty()) {
    const auto& first = results.front();
    doc["goodput"] = first.goodput;
    doc["user_ids"] = first.user_ids;
    doc["utility"] = first.utility;
    doc["geometric_mean"] = first.geometric_mean;
    doc["min_rate"] = first.min_rate;
  }
  doc["trials"] = trials;
  return doc;
}

void write_cdf_csv(std::ostream& out, const json& summary, double capacity) {
  out << "trial,rate,fraction\n";
  if (!summary.contains("trials")) return;
  for (const auto& t : summary.at("trials")) {
    auto goodput = t.at("goodput").get<std::vector<double>>();
    for (auto& g : goodput) g *= capacity;
    const auto m = metrics(goodput);
    for (const auto& [rate, frac] : m.cdf) out << t.at("trial").get<std::size_t>() << ',' << fmt(rate) << ',' << fmt(frac) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "value,scheduler,trial,users,utility,geometric_mean,min_rate,error\n";
  for (const auto& r : rows) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    out << r.value << ',' << r.scheduler << ',' << r.trial << ',' << r.users << ',' << fmt(r.utility) << ','
        << fmt(r.geometric_mean) << ',' << fmt(r.min_rate) << ',' << err << '\n';
  }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::string line;
  std::vector<SweepRow> rows;
  if (!next_line(in, line)) return rows;
  if (line.rfind("value,scheduler,trial", 0) != 0) throw InvalidScenario("sweep file has an unexpected header");
  while (next_line(in, line)) {
    auto c = split(line);
    if (c.size() == 7) c.emplace_back();
    if (c.size() != 8) throw InvalidScenario("bad sweep row '" + line + "'");
    try {
      rows.push_back({c[0], c[1], std::stoul(c[2]), std::stoul(c[3]), std::stod(c[4]), std::stod(c[5]),
                      std::stod(c[6]), c[7]});
    } catch (const std::logic_error&) {
      throw InvalidScenario("bad sweep row '" + line + "'");
    }
  }
  return rows;
}

void write_sweep_summary_csv(std::ostream& out, std::span<const SweepRow> rows) {
  struct Acc {
    std::size_t n = 0;
    double utility = 0.0, gm = 0.0, min = 0.0;
  };
  std::vector<std::pair<std::string, std::string>> keys;
  std::map<std::pair<std::string, std::string>, Acc> acc;
  for (const auto& r : rows) {
    if (!r.error.empty()) continue;
    const auto key = std::make_pair(r.value, r.scheduler);
    if (!acc.contains(key)) keys.push_back(key);
    auto& a = acc[key];
    ++a.n;
    a.utility += r.utility;
    a.gm += r.geometric_mean;
    a.min += r.min_rate;
  }
  out << "value,scheduler,trials,utility,geometric_mean,min_rate\n";
  for (const auto& key : keys) {
    const auto& a = acc[key];
    const auto n = static_cast<double>(a.n);
    out << key.first << ',' << key.second << ',' << a.n << ',' << fmt(a.utility / n) << ',' << fmt(a.gm / n) << ','
        << fmt(a.min / n) << '\n';
  }
}

std::string summary_text(const json& summary) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4);
  os << summary.value("scenario", std::string{"?"}) << " (" << summary.value("scheduler", std::string{"?"}) << ", "
     << summary.value("objective", std::string{"?"}) << ")\n";
  if (!summary.contains("trials")) return os.str();
  double gm = 0.0, mn = 0.0, ut = 0.0;
  std::size_t n = 0;
  for (const auto& t : summary.at("trials")) {
    os << "  trial " << t.at("trial").get<std::size_t>() << ": utility " << t.at("utility").get<double>()
       << "  geometric mean " << t.at("geometric_mean").get<double>() << "  min rate "
       << t.at("min_rate").get<double>() << '\n';
    ut += t.at("utility").get<double>();
    gm += t.at("geometric_mean").get<double>();
    mn += t.at("min_rate").get<double>();
    ++n;
  }
  if (n > 1)
    os << "  mean: utility " << ut / static_cast<double>(n) << "  geometric mean " << gm / static_cast<double>(n)
       << "  min rate " << mn / static_cast<double>(n) << '\n';
  return os.str();
}

}  // namespace ccwlan
