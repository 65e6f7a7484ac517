// Command-line front end: enumerate, solve, simulate, sweep, report.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ccwlan/errors.hpp"
#include "ccwlan/harness.hpp"
#include "ccwlan/report.hpp"

namespace {

using namespace ccwlan;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitCap = 3;

std::ofstream open_out(const std::string& path) {
  std::ofstream out{path};
  if (!out) throw Error("cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in{path};
  if (!in) throw InvalidScenario("cannot open " + path);
  return in;
}

std::vector<std::string> split_values(const std::string& list) {
  std::vector<std::string> out;
  std::string v;
  std::istringstream ss{list};
  while (std::getline(ss, v, ','))
    if (!v.empty()) out.push_back(v);
  return out;
}

void cmd_enumerate(const std::string& scenario_path, const std::string& out_path, bool all, std::size_t trial) {
  const auto scenario = load_scenario(scenario_path);
  const auto net = realize_network(scenario, trial);
  EnumerationOptions opts;
  opts.decision_cap = scenario.decision_cap;
  if (all) {
    opts.prune_dominated = false;
    opts.prune_group_sizes = false;
  }
  const auto vectors = enumerate_rate_vectors(net, opts);
  auto out = open_out(out_path);
  write_rates_csv(out, vectors, net.user_count());
  std::cerr << vectors.size() << " rate vectors for " << net.user_count() << " users\n";
}

void cmd_solve(const std::string& atoms_path, const std::string& objective, const std::string& out_path) {
  auto in = open_in(atoms_path);
  const auto atoms = read_atoms_csv(in);
  if (atoms.empty()) throw InvalidScenario("no atoms in " + atoms_path);
  const auto policy = solve(objective == "pf" ? Fairness::pf : Fairness::hf, atoms);
  auto out = open_out(out_path);
  out << solution_to_json(atoms, policy).dump(2) << '\n';
}

void cmd_simulate(const std::string& scenario_path, const std::string& trace_path, const std::string& summary_path) {
  const auto scenario = load_scenario(scenario_path);
  const auto results = run_scenario(scenario, !trace_path.empty());
  if (!trace_path.empty()) {
    auto out = open_out(trace_path);
    if (!results.empty() && results.front().run) write_trace_csv(out, results.front().run->trace);
    else write_trace_csv(out, {});
  }
  const auto summary = summary_to_json(scenario, results);
  if (!summary_path.empty()) {
    auto out = open_out(summary_path);
    out << summary.dump(2) << '\n';
  }
  std::cout << summary_text(summary);
}

void cmd_sweep(const std::string& scenario_path, const std::string& var, const std::string& values,
               const std::string& out_path) {
  const auto scenario = load_scenario(scenario_path);
  const auto rows = sweep(scenario, sweep_variable_from_string(var), split_values(values));
  auto out = open_out(out_path);
  write_sweep_csv(out, rows);
  write_sweep_summary_csv(std::cout, rows);
  for (const auto& r : rows)
    if (!r.error.empty()) std::cerr << var << '=' << r.value << ": " << r.error << '\n';
}

// Picks the output by looking at what it is given: a summary JSON becomes a
// goodput CDF, a trace becomes per-user trajectories, a sweep table becomes
// per-value averages.
void cmd_report(const std::string& in_path, const std::string& out_path, double capacity) {
  auto in = open_in(in_path);
  if (std::filesystem::path{in_path}.extension() == ".json") {
    nlohmann::json summary;
    try {
      in >> summary;
    } catch (const nlohmann::json::exception& e) {
      throw InvalidScenario(in_path + ": " + e.what());
    }
    auto out = open_out(out_path);
    write_cdf_csv(out, summary, capacity);
    std::cout << summary_text(summary);
    return;
  }
  std::string header;
  std::getline(in, header);
  in.seekg(0);
  auto out = open_out(out_path);
  if (header.rfind("slot,user_id", 0) == 0) {
    write_trajectory_csv(out, read_trace_csv(in), capacity);
  } else if (header.rfind("value,scheduler", 0) == 0) {
    const auto rows = read_sweep_csv(in);
    write_sweep_summary_csv(out, rows);
    write_sweep_summary_csv(std::cout, rows);
  } else if (header.empty()) {
    write_trajectory_csv(out, {}, capacity);
  } else {
    throw InvalidScenario("cannot tell what kind of file " + in_path + " is");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coded-caching multi-AP WLAN scheduler and simulator"};
  app.require_subcommand(1);

  std::string scenario_path, out_path, atoms_path, objective = "pf", summary_path, var, values, in_path;
  bool all = false;
  std::size_t trial = 0;
  double capacity = 1.0;

  auto* enumerate = app.add_subcommand("enumerate", "List the rate vectors of a scenario's network");
  enumerate->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  enumerate->add_option("--out", out_path, "Rate CSV")->required();
  enumerate->add_flag("--all", all, "Keep dominated vectors and every group size");
  enumerate->add_option("--trial", trial, "Trial whose user realization to use");

  auto* solve_cmd = app.add_subcommand("solve", "Optimal static policy over a rate CSV");
  solve_cmd->add_option("--atoms", atoms_path, "Rate CSV from enumerate")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--objective", objective, "pf or hf")->check(CLI::IsMember({"pf", "hf"}));
  solve_cmd->add_option("--out", out_path, "Solution JSON")->required();

  auto* simulate = app.add_subcommand("simulate", "Run the dynamic scheduler");
  simulate->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  simulate->add_option("--out", out_path, "Per-slot trace CSV of the first trial");
  simulate->add_option("--summary", summary_path, "Summary JSON");

  auto* sweep_cmd = app.add_subcommand("sweep", "Paired sweep over L, V or the scheduler");
  sweep_cmd->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  sweep_cmd->add_option("--var", var, "L, V or scheduler")->required();
  sweep_cmd->add_option("--values", values, "Comma-separated values")->required();
  sweep_cmd->add_option("--out", out_path, "Table CSV")->required();

  auto* report = app.add_subcommand("report", "Plot-ready CSV from a summary, trace or sweep table");
  report->add_option("--in", in_path, "summary .json, trace .csv or sweep .csv")->required()->check(CLI::ExistingFile);
  report->add_option("--out", out_path, "Output CSV")->required();
  report->add_option("--capacity", capacity, "AP capacity to turn goodput into bitrate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*enumerate) cmd_enumerate(scenario_path, out_path, all, trial);
    else if (*solve_cmd) cmd_solve(atoms_path, objective, out_path);
    else if (*simulate) cmd_simulate(scenario_path, out_path, summary_path);
    else if (*sweep_cmd) cmd_sweep(scenario_path, var, values, out_path);
    else if (*report) cmd_report(in_path, out_path, capacity);
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCap;
  } catch (const InvalidScenario& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}
