#include <chrono>
#include <cmath>
#include <limits>

#include "sbqa/coupling_matrix.hpp"
#include "sbqa/errors.hpp"
#include "sbqa/rng.hpp"
#include "sbqa/solvers.hpp"

namespace sbqa {

void DtsqaParams::validate() const {
  if (replicas < 1) throw InputError("replicas must be >= 1");
  if (n_steps < 1) throw InputError("n_steps must be >= 1");
  if (!(beta > 0.0)) throw InputError("beta must be positive");
  if (!(gamma0 > 0.0)) throw InputError("gamma0 must be positive");
  if (!(alpha > 0.0)) throw InputError("alpha must be positive");
}

DtsqaSweeper::DtsqaSweeper(const IsingModel& model, const Coloring& coloring, int replicas, double beta)
    : model_(&model), replicas_(replicas), beta_(beta), n_(model.size()) {
  if (replicas < 1) throw InputError("replicas must be >= 1");
  if (!is_proper_coloring(model.adjacency(), coloring)) {
    throw InputError("coloring is not a proper coloring of the interaction graph");
  }
  const CouplingMatrix J(model, CouplingMatrix::Layout::sparse);
  row_ptr_ = J.row_ptr();
  cols_ = J.cols();
  vals_ = J.values();
  classes_ = color_classes(coloring);
  spins_.assign(n_ * static_cast<std::size_t>(replicas_), 1);
}

void DtsqaSweeper::randomize(std::uint64_t seed) {
  for (int k = 0; k < replicas_; ++k) {
    const std::uint64_t key = derive_seed(seed, {0xd75, static_cast<std::uint64_t>(k)});
    auto s = replica(k);
    for (std::size_t i = 0; i < n_; ++i) s[i] = counter_uniform(key, i) < 0.5 ? 1 : -1;
  }
}

std::span<const Spin> DtsqaSweeper::replica(int k) const {
  return {spins_.data() + static_cast<std::size_t>(k) * n_, n_};
}

std::span<Spin> DtsqaSweeper::replica(int k) {
  return {spins_.data() + static_cast<std::size_t>(k) * n_, n_};
}

double DtsqaSweeper::local_field(int k, std::size_t i) const noexcept {
  const Spin* s = spins_.data() + static_cast<std::size_t>(k) * n_;
  double acc = 0.0;
  for (std::size_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e) acc += vals_[e] * s[cols_[e]];
  return acc + model_->fields()[i];
}

void DtsqaSweeper::sweep(double jperp, std::uint64_t step_key, const ProposalLog& log) {
  const double inv_r = 1.0 / replicas_;
  for (int k = 0; k < replicas_; ++k) {
    Spin* s = spins_.data() + static_cast<std::size_t>(k) * n_;
    const Spin* up = spins_.data() + static_cast<std::size_t>((k + 1) % replicas_) * n_;
    const Spin* down = spins_.data() + static_cast<std::size_t>((k + replicas_ - 1) % replicas_) * n_;
    for (const auto& cls : classes_) {
      const auto m = static_cast<std::ptrdiff_t>(cls.size());
      // Logging runs serially so the callback never sees concurrent calls.
#pragma omp parallel for schedule(static) if (!log)
      for (std::ptrdiff_t t = 0; t < m; ++t) {
        const std::uint32_t i = cls[static_cast<std::size_t>(t)];
        double delta = 2.0 * s[i] * (inv_r * local_field(k, i));
        if (replicas_ > 1) delta += 2.0 * s[i] * jperp * (up[i] + down[i]);
        const double u = counter_uniform(step_key, static_cast<std::uint64_t>(k) * n_ + i);
        const bool accepted = metropolis_accept(delta, beta_, u);
        if (accepted) s[i] = static_cast<Spin>(-s[i]);
        if (log) log(delta, accepted);
      }
    }
  }
}

double DtsqaSweeper::replica_energy(double jperp) const {
  double classical = 0.0;
  double chain = 0.0;
  for (int k = 0; k < replicas_; ++k) {
    classical += model_->energy(replica(k)) - model_->offset();
    const auto a = replica(k);
    const auto b = replica((k + 1) % replicas_);
    for (std::size_t i = 0; i < n_; ++i) chain += a[i] * b[i];
  }
  return classical / replicas_ - jperp * chain;
}

SolverRun dtsqa_solve(const IsingModel& model, const DtsqaParams& params, const Coloring& coloring,
                      std::uint64_t seed) {
  params.validate();
  DtsqaSweeper sweeper(model, coloring, params.replicas, params.beta);

  const auto start = std::chrono::steady_clock::now();
  sweeper.randomize(seed);
  const std::size_t n = model.size();
  const auto& h = model.fields();
  const CouplingMatrix J(model, CouplingMatrix::Layout::sparse);
  const int stride = n <= kEveryStepReadoutLimit ? 1 : kLargeReadoutStride;
  const int R = params.replicas;
  std::vector<double> energies(static_cast<std::size_t>(R));

  SpinConfig best_spins;
  double best = std::numeric_limits<double>::infinity();
  long best_step = -1;
  std::vector<double> trace;

  for (long step = 0; step < params.n_steps; ++step) {
    const double ramp = static_cast<double>(step) / params.n_steps;
    const double gamma = transverse_field(ramp, params.gamma0, params.alpha);
    const double jp = R > 1 ? replica_coupling(gamma, params.beta, R) : 0.0;
    sweeper.sweep(jp, derive_seed(seed, {0x57e9, static_cast<std::uint64_t>(step)}));

    if ((step + 1) % stride == 0 || step + 1 == params.n_steps) {
#pragma omp parallel for schedule(static)
      for (int k = 0; k < R; ++k) {
        const auto s = sweeper.replica(k);
        double e = 0.0;
        for (std::size_t i = 0; i < n; ++i) e += s[i] * (-0.5 * J.row_dot_spins(i, s.data()) - h[i]);
        energies[static_cast<std::size_t>(k)] = e + model.offset();
      }
      for (int k = 0; k < R; ++k) {
        if (energies[static_cast<std::size_t>(k)] < best) {
          best = energies[static_cast<std::size_t>(k)];
          const auto s = sweeper.replica(k);
          best_spins.assign(s.begin(), s.end());
          best_step = step;
        }
      }
    }
    if (params.record_trace) trace.push_back(best);
  }

  SolverRun run;
  run.solver = "dtsqa";
  run.best_spins = std::move(best_spins);
  run.best_energy = model.energy(run.best_spins);
  run.best_step = best_step;
  run.trace = std::move(trace);
  run.seed = seed;
  run.params = params;
  run.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

}  // namespace sbqa
