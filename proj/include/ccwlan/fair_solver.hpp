#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ccwlan/rate_enum.hpp"

namespace ccwlan {

/// One instantaneous rate vector the static policy may pick.
struct Atom {
  std::uint64_t pattern = 0;
  std::size_t decision = 0;
  std::vector<double> rates;
};

std::vector<Atom> to_atoms(std::span<const RatedDecision> vectors);

enum class Fairness { pf, hf };

/// Randomized stationary policy over a list of atoms.
struct MixturePolicy {
  std::vector<double> probabilities;  // one per atom
  std::vector<double> goodput;        // sum_a pi_a * atom_a
  double utility = 0.0;               // sum log (PF) or min (HF)
  double gap = 0.0;                   // Frank-Wolfe duality gap (PF only)
  std::size_t iterations = 0;
  bool converged = true;

  /// Indices of atoms with non-zero probability.
  std::vector<std::size_t> support() const;
};

struct SolverOptions {
  double gap_tolerance = 1e-6;
  std::size_t max_iterations = 200'000;
  double min_probability = 1e-8;  // smaller masses are zeroed and renormalized
};

double pf_utility(std::span<const double> goodput);
double hf_utility(std::span<const double> goodput);

/// Maximises sum_k log(goodput_k) over the convex hull of the atoms with
/// away-step Frank-Wolfe. The linear oracle is a scan for the atom with the
/// largest gradient-weighted rate, lowest index on ties.
MixturePolicy solve_pf(std::span<const Atom> atoms, const SolverOptions& options = {});

/// Maximises min_k goodput_k over the hull, as an LP solved by solve_lp.
MixturePolicy solve_hf(std::span<const Atom> atoms, const SolverOptions& options = {});

MixturePolicy solve(Fairness objective, std::span<const Atom> atoms, const SolverOptions& options = {});

struct FairnessMetrics {
  double geometric_mean = 0.0;
  double min_rate = 0.0;
  std::vector<std::pair<double, double>> cdf;  // (rate, fraction of users <= rate)
};

FairnessMetrics metrics(std::span<const double> goodput);

}  // namespace ccwlan
