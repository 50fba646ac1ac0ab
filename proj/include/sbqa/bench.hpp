#pragma once

// Optimality gaps, time-to-epsilon, step-grid minimization, (alpha, beta)
// sweeps, SBQA auto-tuning and power-law fits.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sbqa/model.hpp"
#include "sbqa/solvers.hpp"

namespace sbqa {

/// (E - E0) / |E0|. Throws UndefinedGapError when E0 == 0.
double optimality_gap(double energy, double reference);

/// tau ln(1 - p_target) / ln(1 - p_success); infinity at p_success = 0 and
/// tau at p_success = 1. Throws InputError outside the documented domain.
double time_to_epsilon(double tau, double p_success, double p_target = 0.99);

/// Element at index ceil(k/2) - 1 of the sorted values (infinity sorts last).
/// Throws InsufficientDataError on an empty input.
double lower_median(std::vector<double> values);

/// Integers round(10^(k/4)) between lo and hi inclusive, deduplicated.
std::vector<long> log_step_grid(long lo, long hi);

/// Minimum energy by exhaustive enumeration (Gray code). n <= 32.
double ground_state_energy(const IsingModel& model);

struct BenchInstance {
  std::string id;
  std::string family;
  long size = 0;  ///< family size parameter (m, L, ...) or n
  IsingModel model;
  std::optional<double> reference_energy;
};

/// Runs one solve with the given step count and seed.
using BenchSolver = std::function<SolverRun(const IsingModel&, long n_steps, std::uint64_t seed)>;

struct NamedSolver {
  std::string name;
  BenchSolver run;
};

struct RunRecord {
  std::string family;
  long size = 0;
  std::size_t n_vars = 0;
  std::string solver;
  long n_steps = 0;
  std::string instance_id;
  int run_id = 0;
  std::uint64_t seed = 0;
  double best_energy = 0.0;
  double reference_energy = 0.0;
  double gap = 0.0;
  double runtime_s = 0.0;
  bool reference_violation = false;
};

struct TteOptions {
  std::vector<long> step_grid;
  int runs = 10;
  double gap_tolerance = 1e-9;  ///< gaps below -tolerance flag a stale reference
};

struct RunGrid {
  std::vector<RunRecord> records;
  std::vector<std::string> warnings;
  std::size_t skipped = 0;     ///< instances without a usable reference energy
  std::size_t violations = 0;  ///< records flagged as reference violations
};

/// Every (instance, grid point, run) solve. Seeds depend only on the master
/// seed and the (instance, grid, run) position, so two solvers given the same
/// ensemble see the same seeds. Solves run one at a time; parallelism lives
/// inside the solver.
RunGrid run_grid(const NamedSolver& solver, const std::vector<BenchInstance>& ensemble, const TteOptions& options,
                 std::uint64_t seed);

struct GridPoint {
  long n_steps = 0;
  double tte_median = 0.0;
  std::vector<double> tte;        ///< per instance
  std::vector<double> p_success;  ///< per instance
  std::vector<double> tau;        ///< per instance, mean runtime
};

struct TteReport {
  std::string solver;
  double epsilon = 0.0;
  double p_target = 0.99;
  std::vector<GridPoint> grid;
  double tte_min = 0.0;  ///< grid minimum of the ensemble median
  long n_steps_opt = 0;
};

/// Aggregates records of one solver into per-grid-point medians and the grid
/// minimum. Throws InsufficientDataError when no records are given.
TteReport tte_from_records(const std::vector<RunRecord>& records, double epsilon, double p_target = 0.99);

/// run_grid followed by tte_from_records.
TteReport tte_protocol(const NamedSolver& solver, const std::vector<BenchInstance>& ensemble, double epsilon,
                       const TteOptions& options, std::uint64_t seed, double p_target = 0.99);

struct AutotuneResult {
  SolverRun best;
  std::vector<double> betas;   ///< per repetition
  std::vector<double> alphas;  ///< per repetition
  std::vector<double> energies;
};

inline constexpr double kAutotuneBetaLo = 0.5, kAutotuneBetaHi = 1.5;
inline constexpr double kAutotuneAlphaLo = 0.5, kAutotuneAlphaHi = 1.0;

/// n_repetitions independent SBQA solves with one set of
/// n_samples / n_repetitions replicas each and (beta, alpha) drawn uniformly
/// from [0.5, 1.5] x [0.5, 1.0]. Returns the lowest-energy run (first on ties).
/// Throws InputError when n_samples is not a positive multiple of n_repetitions.
AutotuneResult autotune_sbqa(const IsingModel& model, int n_samples, int n_repetitions, const SbqaParams& base,
                             std::uint64_t seed);

struct GapMatrix {
  std::vector<double> alphas;
  std::vector<double> betas;
  std::vector<std::vector<double>> mean_gap;  ///< [alpha][beta]
};

/// Mean best-of-run gap over `runs` SBQA solves per (alpha, beta) cell. Run r
/// uses the same seed in every cell.
GapMatrix sensitivity_sweep(const IsingModel& model, double reference_energy, const std::vector<double>& betas,
                            const std::vector<double>& alphas, int runs, const SbqaParams& base, std::uint64_t seed);

struct ScalingFit {
  double gamma = 0.0;
  double intercept = 0.0;  ///< natural log of the prefactor
  std::vector<double> residuals;
  std::vector<std::pair<double, double>> points;  ///< finite points used
};

/// Least squares in (ln N, ln TTe) over the finite, positive points.
/// Throws InsufficientDataError with fewer than three.
ScalingFit fit_power_law(const std::vector<std::pair<double, double>>& points);

/// CSV with the run schema; each `config_lines` entry is written first as a
/// "# " comment line.
void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& records,
                    const std::vector<std::string>& config_lines = {});
std::vector<RunRecord> read_runs_csv(std::istream& in);
void write_gap_matrix_csv(std::ostream& out, const GapMatrix& m, const std::vector<std::string>& config_lines = {});

}  // namespace sbqa
