#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "sbqa/coupling_matrix.hpp"
#include "sbqa/errors.hpp"
#include "sbqa/rng.hpp"
#include "sbqa/solvers.hpp"

namespace sbqa {

namespace {

struct BetaRange {
  double lo;
  double hi;
};

// Hot end: the largest possible single-flip increase is accepted with
// probability 1/2. Cold end: the smallest nonzero coupling or field scale is
// accepted with probability 1/100.
BetaRange default_beta_range(const CouplingMatrix& J, const std::vector<double>& h) {
  double max_delta = 0.0;
  double min_delta = std::numeric_limits<double>::infinity();
  const auto& rp = J.row_ptr();
  const auto& vals = J.values();
  for (std::size_t i = 0; i < J.size(); ++i) {
    double sum = std::abs(h[i]);
    if (h[i] != 0.0) min_delta = std::min(min_delta, 2.0 * std::abs(h[i]));
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
      sum += std::abs(vals[k]);
      if (vals[k] != 0.0) min_delta = std::min(min_delta, 2.0 * std::abs(vals[k]));
    }
    max_delta = std::max(max_delta, 2.0 * sum);
  }
  if (max_delta == 0.0) return {0.1, 1.0};
  return {std::log(2.0) / max_delta, std::log(100.0) / min_delta};
}

}  // namespace

void SaParams::validate() const {
  if (sweeps < 1) throw InputError("sweeps must be >= 1");
  if (n_reads < 1) throw InputError("n_reads must be >= 1");
  if (beta_min && !(*beta_min > 0.0)) throw InputError("beta_min must be positive");
  if (beta_max && !(*beta_max > 0.0)) throw InputError("beta_max must be positive");
  if (beta_min && beta_max && *beta_min > *beta_max) throw InputError("beta_min exceeds beta_max");
}

SolverRun sa_solve(const IsingModel& model, const SaParams& params, std::uint64_t seed) {
  params.validate();
  const auto start = std::chrono::steady_clock::now();
  const CouplingMatrix J(model, CouplingMatrix::Layout::sparse);
  const std::size_t n = model.size();
  const auto& h = model.fields();

  const BetaRange defaults = default_beta_range(J, h);
  const double beta_lo = params.beta_min.value_or(defaults.lo);
  const double beta_hi = params.beta_max.value_or(std::max(defaults.hi, beta_lo));
  std::vector<double> ladder(static_cast<std::size_t>(params.sweeps));
  for (int k = 0; k < params.sweeps; ++k) {
    const double frac = params.sweeps > 1 ? static_cast<double>(k) / (params.sweeps - 1) : 1.0;
    ladder[static_cast<std::size_t>(k)] = beta_lo * std::pow(beta_hi / beta_lo, frac);
  }

  const auto reads = static_cast<std::size_t>(params.n_reads);
  std::vector<SpinConfig> best_spins(reads);
  std::vector<double> best_energy(reads);
  std::vector<long> best_sweep(reads, -1);
  std::vector<std::vector<double>> traces(reads);

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(reads); ++r) {
    Rng rng(derive_seed(seed, {0x5a, static_cast<std::uint64_t>(r)}));
    SpinConfig s(n);
    for (auto& v : s) v = rng.coin() ? 1 : -1;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    double e = model.energy(s);
    SpinConfig best = s;
    double best_e = e;
    long at = -1;
    auto& trace = traces[static_cast<std::size_t>(r)];
    for (int sweep = 0; sweep < params.sweeps; ++sweep) {
      const double beta = ladder[static_cast<std::size_t>(sweep)];
      // Fresh site order each sweep: a fixed order drags zero-cost domain
      // walls along in lockstep so they never meet.
      for (std::size_t k = n; k > 1; --k) std::swap(order[k - 1], order[rng.below(k)]);
      for (const std::size_t i : order) {
        const double delta = 2.0 * s[i] * (J.row_dot_spins(i, s.data()) + h[i]);
        if (metropolis_accept(delta, beta, rng.uniform())) {
          s[i] = static_cast<Spin>(-s[i]);
          e += delta;
        }
      }
      if (e < best_e) {
        best_e = e;
        best = s;
        at = sweep;
      }
      if (params.record_trace) trace.push_back(best_e);
    }
    best_spins[static_cast<std::size_t>(r)] = std::move(best);
    best_energy[static_cast<std::size_t>(r)] = model.energy(best_spins[static_cast<std::size_t>(r)]);
    best_sweep[static_cast<std::size_t>(r)] = at;
  }

  std::size_t winner = 0;
  for (std::size_t r = 1; r < reads; ++r) {
    if (best_energy[r] < best_energy[winner]) winner = r;
  }

  SolverRun run;
  run.solver = "sa";
  run.best_spins = std::move(best_spins[winner]);
  run.best_energy = best_energy[winner];
  run.best_step = best_sweep[winner];
  if (params.record_trace) {
    run.trace.assign(static_cast<std::size_t>(params.sweeps), std::numeric_limits<double>::infinity());
    for (const auto& t : traces) {
      for (std::size_t k = 0; k < t.size(); ++k) run.trace[k] = std::min(run.trace[k], t[k]);
    }
  }
  run.seed = seed;
  run.params = params;
  run.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

}  // namespace sbqa
