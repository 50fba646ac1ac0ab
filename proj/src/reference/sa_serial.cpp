#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "sbqa/rng.hpp"
#include "sbqa_reference.hpp"

namespace sbqa::reference {

SolverRun sa_serial(const IsingModel& model, const SaParams& params, std::uint64_t seed) {
  params.validate();
  const auto start = std::chrono::steady_clock::now();
  const Rows rows(model);
  const std::size_t n = model.size();
  const auto& h = model.fields();

  double max_delta = 0.0;
  double min_delta = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double sum = std::abs(h[i]);
    if (h[i] != 0.0) min_delta = std::min(min_delta, 2.0 * std::abs(h[i]));
    for (const auto& [j, w] : rows.rows[i]) {
      sum += std::abs(w);
      if (w != 0.0) min_delta = std::min(min_delta, 2.0 * std::abs(w));
    }
    max_delta = std::max(max_delta, 2.0 * sum);
  }
  const double lo_default = max_delta == 0.0 ? 0.1 : std::log(2.0) / max_delta;
  const double hi_default = max_delta == 0.0 ? 1.0 : std::log(100.0) / min_delta;
  const double lo = params.beta_min.value_or(lo_default);
  const double hi = params.beta_max.value_or(std::max(hi_default, lo));

  SolverRun out;
  out.best_energy = std::numeric_limits<double>::infinity();
  std::vector<double> trace;
  for (int r = 0; r < params.n_reads; ++r) {
    Rng rng(derive_seed(seed, {0x5a, static_cast<std::uint64_t>(r)}));
    SpinConfig s(n);
    for (auto& v : s) v = rng.coin() ? 1 : -1;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    double e = model.energy(s);
    SpinConfig best = s;
    double best_e = e;
    long at = -1;
    for (int sweep = 0; sweep < params.sweeps; ++sweep) {
      const double frac = params.sweeps > 1 ? static_cast<double>(sweep) / (params.sweeps - 1) : 1.0;
      const double beta = lo * std::pow(hi / lo, frac);
      // Fresh site order each sweep: a fixed order drags zero-cost domain
      // walls along in lockstep so they never meet.
      for (std::size_t k = n; k > 1; --k) std::swap(order[k - 1], order[rng.below(k)]);
      for (const std::size_t i : order) {
        const double delta = 2.0 * s[i] * (rows.dot(i, s.data()) + h[i]);
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
      if (params.record_trace) {
        if (r == 0) trace.push_back(best_e);
        else trace[static_cast<std::size_t>(sweep)] = std::min(trace[static_cast<std::size_t>(sweep)], best_e);
      }
    }
    const double exact = model.energy(best);
    if (exact < out.best_energy) {
      out.best_energy = exact;
      out.best_spins = best;
      out.best_step = at;
    }
  }
  out.solver = "sa";
  out.trace = std::move(trace);
  out.seed = seed;
  out.params = params;
  out.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace sbqa::reference
