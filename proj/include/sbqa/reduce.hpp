#pragma once

// Cubic-to-quadratic reduction by auxiliary-variable substitution.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sbqa/model.hpp"

namespace sbqa {

struct AuxPair {
  std::uint32_t aux;  ///< binary variable standing for x_a x_b
  std::uint32_t a;
  std::uint32_t b;
};

struct Reduction {
  HuboModel source;
  /// Variables 0..n_original-1 are the source spins in binary form; the
  /// rest are auxiliaries in creation order.
  QuboMatrix qubo;
  std::vector<AuxPair> pairs;
  double penalty = 0.0;
  std::size_t n_original = 0;

  std::size_t aux_count() const noexcept { return pairs.size(); }
  /// Reduced model in the Ising convention (same energies as `qubo`).
  IsingModel ising() const;
  /// Drop the auxiliaries from a reduced configuration.
  SpinConfig original_spins(std::span<const Spin> reduced) const;
  /// Source configuration extended with every gadget satisfied.
  BinaryConfig extend(std::span<const Spin> original) const;
};

/// Greedy reduction: while a cubic monomial remains, substitute the binary
/// pair shared by the most cubic monomials (ties: smallest (a, b)) with a new
/// variable w and add P (x_a x_b - 2 x_a w - 2 x_b w + 3 w).
/// Throws InputError when P is not positive and finite.
Reduction reduce_hubo(const HuboModel& model, double penalty);

/// 1 + the sum of absolute coefficients of the model written as a binary
/// polynomial. Any larger penalty keeps the reduced minimum equal to the
/// source minimum.
double safe_penalty(const HuboModel& model);

/// Solver used by the line search: returns the best spins found on the
/// reduced model. Called concurrently, so it must not share mutable state.
using ReducedSolver = std::function<SpinConfig(const IsingModel& reduced, std::uint64_t seed)>;

struct LineSearchResult {
  double best_penalty = 0.0;
  std::vector<double> candidates;
  /// Mean source energy of the de-reduced configurations per candidate.
  std::vector<double> mean_energy;
};

/// Scores each candidate by the mean source energy over the ensemble and
/// returns the lowest (first candidate on ties). Candidates must be
/// non-negative; the list must not be empty.
LineSearchResult penalty_line_search(const std::vector<HuboModel>& ensemble, const ReducedSolver& solver,
                                     const std::vector<double>& candidates, std::uint64_t seed);

}  // namespace sbqa
