#pragma once

// The four heuristics. Every solver takes (model, params, seed) and is
// deterministic in that triple regardless of the OpenMP thread count.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sbqa/coloring.hpp"
#include "sbqa/model.hpp"
#include "sbqa/schedule.hpp"

namespace sbqa {

/// Time step used when no total evolution time is given: T = n_steps * dt0.
inline constexpr double kDefaultTimeStep = 0.5;

/// Sign-readout energies are evaluated every step up to this size, every
/// kLargeReadoutStride steps above it (and always on the final step).
inline constexpr std::size_t kEveryStepReadoutLimit = 4096;
inline constexpr int kLargeReadoutStride = 10;

struct SbmParams {
  double a0 = 1.0;
  std::optional<double> c0;          ///< default: 0.5 / (rms(J) sqrt(N))
  int n_steps = 1000;
  std::optional<double> total_time;  ///< default: n_steps * kDefaultTimeStep
  Nonlinearity nonlinearity = Nonlinearity::thresholded;
  double threshold_slope = 0.7;
  int n_replicas = 32;
  bool record_trace = false;

  void validate() const;
};

struct SbqaParams {
  double a0 = 1.0;
  std::optional<double> c0;
  int n_steps = 1000;
  /// Default: n_steps * kDefaultTimeStep * replicas, which gives the SB part
  /// of the rescaled equations the same per-step progress as SBM.
  std::optional<double> total_time;
  Nonlinearity nonlinearity = Nonlinearity::thresholded;
  double threshold_slope = 0.7;
  int replicas = 128;  ///< R interacting replicas per set
  int n_sets = 8;      ///< independent interacting sets
  double beta = 1.0;
  double alpha = 1.0;
  std::optional<double> gamma0;  ///< default: kDefaultGammaPerReplica * R
  bool record_trace = false;

  /// Diagnostics: replace J_perp(t) by a constant (0 decouples the replicas).
  std::optional<double> j_perp_override;
  /// Diagnostics: drop the 1/R factors on a0, a(t) and c0.
  bool replica_scaling = true;

  static constexpr double kDefaultGammaPerReplica = 4.0;

  void validate() const;
  double resolved_gamma0() const { return gamma0.value_or(kDefaultGammaPerReplica * replicas); }
};

struct SaParams {
  int sweeps = 1000;
  int n_reads = 16;
  /// Geometric inverse-temperature ladder; defaults derived from the model's
  /// largest and smallest single-flip energy scales.
  std::optional<double> beta_min;
  std::optional<double> beta_max;
  bool record_trace = false;

  void validate() const;
};

struct DtsqaParams {
  int replicas = 16;
  double beta = 16.0;
  double gamma0 = 4.0;
  double alpha = 1.0;
  int n_steps = 1000;  ///< one step = one sweep over every spin of every replica
  bool record_trace = false;

  void validate() const;
};

using SolverParams = std::variant<SbmParams, SbqaParams, SaParams, DtsqaParams>;

struct SolverRun {
  std::string solver;
  SpinConfig best_spins;
  double best_energy = 0.0;
  double runtime_seconds = 0.0;
  std::uint64_t seed = 0;
  SolverParams params;
  long best_step = -1;
  /// Best energy seen after each step (empty unless record_trace).
  std::vector<double> trace;
};

/// Positions and momenta, one contiguous column of length n per replica.
struct ReplicaState {
  std::size_t n = 0;
  std::size_t columns = 0;
  std::vector<double> q;
  std::vector<double> p;

  double& q_at(std::size_t i, std::size_t c) { return q[c * n + i]; }
  double& p_at(std::size_t i, std::size_t c) { return p[c * n + i]; }
  double q_at(std::size_t i, std::size_t c) const { return q[c * n + i]; }
  double p_at(std::size_t i, std::size_t c) const { return p[c * n + i]; }
};

/// Called after every integration step (after the wall rule) with the 0-based step index.
using StepObserver = std::function<void(long step, const ReplicaState& state)>;

/// c0 = 0.5 / (rms(J) sqrt(N)); falls back to the field RMS, then 1, for models without couplings.
double default_c0(const IsingModel& model);

/// f(x) at time t of an evolution of length T.
double threshold_f(double x, double t, double total_time, Nonlinearity kind = Nonlinearity::thresholded,
                   double threshold_slope = 0.7);

/// J_perp(t) = -(1/2 beta) ln tanh(beta Gamma_x(t) / R).
double j_perp(double t, const SbqaParams& params);

SolverRun sbm_solve(const IsingModel& model, const SbmParams& params, std::uint64_t seed,
                    const StepObserver& observer = {});
SolverRun sbqa_solve(const IsingModel& model, const SbqaParams& params, std::uint64_t seed,
                     const StepObserver& observer = {});
SolverRun sa_solve(const IsingModel& model, const SaParams& params, std::uint64_t seed);

/// Logged Metropolis proposal: energy change and whether it was accepted.
using ProposalLog = std::function<void(double delta, bool accepted)>;

/// Metropolis rule: accept downhill/flat moves; uphill iff u < exp(-beta delta).
inline bool metropolis_accept(double delta, double beta, double u) noexcept {
  return delta <= 0.0 || u < std::exp(-beta * delta);
}

/// Discrete-time SQA sweeps on the replica Hamiltonian
///   H_C = -(1/R) sum_k [sum_{i<j} J_ij s_i^k s_j^k + sum_i h_i s_i^k] - J_perp sum_k sum_i s_i^k s_i^{k+1}
/// with periodic replica index. Spins of one color class update together.
class DtsqaSweeper {
 public:
  /// Throws InputError when the coloring is not a proper coloring of the model's graph.
  DtsqaSweeper(const IsingModel& model, const Coloring& coloring, int replicas, double beta);

  void randomize(std::uint64_t seed);
  /// One sweep over all replicas (replica-major, color by color).
  void sweep(double jperp, std::uint64_t step_key, const ProposalLog& log = {});

  int replicas() const noexcept { return replicas_; }
  std::span<const Spin> replica(int k) const;
  std::span<Spin> replica(int k);
  /// Value of H_C for the current state.
  double replica_energy(double jperp) const;

 private:
  double local_field(int k, std::size_t i) const noexcept;

  const IsingModel* model_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::uint32_t> cols_;
  std::vector<double> vals_;
  std::vector<std::vector<std::uint32_t>> classes_;
  int replicas_;
  double beta_;
  std::size_t n_;
  std::vector<Spin> spins_;  // replica-major
};

/// `coloring` must be proper for the model's interaction graph; computing it is
/// not part of the measured runtime.
SolverRun dtsqa_solve(const IsingModel& model, const DtsqaParams& params, const Coloring& coloring,
                      std::uint64_t seed);

/// Name used in CSV output ("sbm", "sbqa", "sa", "dtsqa").
std::string solver_name(const SolverParams& params);

}  // namespace sbqa
