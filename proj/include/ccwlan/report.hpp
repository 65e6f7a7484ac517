#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ccwlan/harness.hpp"

namespace ccwlan {

/// pattern_index,decision_index,rate_1..rate_K with exact "p/q" rates.
void write_rates_csv(std::ostream& out, std::span<const RatedDecision> vectors, std::size_t users);
std::vector<Atom> read_atoms_csv(std::istream& in);

/// {utility, goodput[], support:[{pattern, decision, prob}]}.
nlohmann::json solution_to_json(std::span<const Atom> atoms, const MixturePolicy& policy);

/// slot,user_id,inst_rate,goodput,queue
void write_trace_csv(std::ostream& out, std::span<const TraceRow> trace);
std::vector<TraceRow> read_trace_csv(std::istream& in);

/// One column of running goodput per user id. Users read 0 before joining
/// and keep their last value after leaving. Goodputs are scaled by `capacity`.
void write_trajectory_csv(std::ostream& out, std::span<const TraceRow> trace, double capacity = 1.0);

nlohmann::json summary_to_json(const Scenario& scenario, std::span<const TrialResult> results);

/// trial,rate,fraction from a summary document.
void write_cdf_csv(std::ostream& out, const nlohmann::json& summary, double capacity = 1.0);

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);
std::vector<SweepRow> read_sweep_csv(std::istream& in);

/// value,scheduler,trials,utility,geometric_mean,min_rate averaged over trials.
void write_sweep_summary_csv(std::ostream& out, std::span<const SweepRow> rows);

/// Human-readable per-scheduler summary of a summary document.
std::string summary_text(const nlohmann::json& summary);

}  // namespace ccwlan
