#include "sbqa/bench.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <map>

#include "sbqa/errors.hpp"
#include "sbqa/rng.hpp"

namespace sbqa {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
// Absorbs summation-order rounding when a run lands exactly on the reference state.
constexpr double kSuccessSlack = 1e-12;
}

double optimality_gap(double energy, double reference) {
  if (reference == 0.0) throw UndefinedGapError("optimality gap is undefined for a zero reference energy");
  return (energy - reference) / std::abs(reference);
}

double time_to_epsilon(double tau, double p_success, double p_target) {
  if (!(tau > 0.0)) throw InputError("tau must be positive");
  if (!(p_success >= 0.0 && p_success <= 1.0)) throw InputError("p_success must lie in [0, 1]");
  if (!(p_target > 0.0 && p_target < 1.0)) throw InputError("p_target must lie in (0, 1)");
  if (p_success == 0.0) return kInf;
  if (p_success == 1.0) return tau;
  return tau * std::log1p(-p_target) / std::log1p(-p_success);
}

double lower_median(std::vector<double> values) {
  if (values.empty()) throw InsufficientDataError("median of an empty ensemble");
  const std::size_t k = (values.size() + 1) / 2 - 1;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k), values.end());
  return values[k];
}

std::vector<long> log_step_grid(long lo, long hi) {
  if (lo < 1 || hi < lo) throw InputError("step grid needs 1 <= lo <= hi");
  std::vector<long> grid;
  for (int k = 0;; ++k) {
    const long v = std::lround(std::pow(10.0, k / 4.0));
    if (v > hi) break;
    if (v >= lo && (grid.empty() || grid.back() != v)) grid.push_back(v);
  }
  if (grid.empty()) grid.push_back(lo);
  return grid;
}

double ground_state_energy(const IsingModel& model) {
  const std::size_t n = model.size();
  if (n > 32) throw InputError("exhaustive enumeration is limited to 32 spins");
  if (n == 0) return model.offset();
  std::vector<std::vector<std::pair<std::uint32_t, double>>> nb(n);
  for (const auto& c : model.couplings()) {
    nb[c.i].emplace_back(c.j, c.weight);
    nb[c.j].emplace_back(c.i, c.weight);
  }
  SpinConfig s(n, 1);
  double e = model.energy(s);
  double best = e;
  SpinConfig best_s = s;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t g = 1; g < total; ++g) {
    const auto k = static_cast<std::size_t>(std::countr_zero(g));
    double field = model.fields()[k];
    for (const auto& [j, w] : nb[k]) field += w * s[j];
    e += 2.0 * s[k] * field;
    s[k] = static_cast<Spin>(-s[k]);
    if (e < best) {
      best = e;
      best_s = s;
    }
  }
  // Re-evaluate directly so the value matches solver energies of the same state.
  return model.energy(best_s);
}

RunGrid run_grid(const NamedSolver& solver, const std::vector<BenchInstance>& ensemble, const TteOptions& options,
                 std::uint64_t seed) {
  if (options.step_grid.empty()) throw InputError("step grid is empty");
  if (options.runs < 1) throw InputError("runs must be >= 1");
  RunGrid out;
  for (std::size_t k = 0; k < ensemble.size(); ++k) {
    const auto& inst = ensemble[k];
    if (!inst.reference_energy || *inst.reference_energy == 0.0) {
      out.warnings.push_back("instance " + inst.id + ": no usable reference energy, skipped");
      ++out.skipped;
      continue;
    }
    for (std::size_t g = 0; g < options.step_grid.size(); ++g) {
      for (int r = 0; r < options.runs; ++r) {
        const std::uint64_t run_seed = derive_seed(seed, {k, g, static_cast<std::uint64_t>(r)});
        const SolverRun run = solver.run(inst.model, options.step_grid[g], run_seed);
        RunRecord rec;
        rec.family = inst.family;
        rec.size = inst.size;
        rec.n_vars = inst.model.size();
        rec.solver = solver.name;
        rec.n_steps = options.step_grid[g];
        rec.instance_id = inst.id;
        rec.run_id = r;
        rec.seed = run_seed;
        rec.best_energy = run.best_energy;
        rec.reference_energy = *inst.reference_energy;
        rec.gap = optimality_gap(run.best_energy, rec.reference_energy);
        rec.runtime_s = run.runtime_seconds;
        rec.reference_violation = rec.gap < -options.gap_tolerance;
        if (rec.reference_violation) {
          ++out.violations;
          out.warnings.push_back("instance " + inst.id + ": energy below the reference energy");
        }
        out.records.push_back(std::move(rec));
      }
    }
  }
  return out;
}

TteReport tte_from_records(const std::vector<RunRecord>& records, double epsilon, double p_target) {
  if (records.empty()) throw InsufficientDataError("no run records");
  TteReport report;
  report.solver = records.front().solver;
  report.epsilon = epsilon;
  report.p_target = p_target;

  // n_steps -> instance id -> (successes, runs, runtime sum); ordered maps fix the merge order.
  struct Tally {
    int hits = 0;
    int runs = 0;
    double runtime = 0.0;
  };
  std::map<long, std::map<std::string, Tally>> tallies;
  for (const auto& r : records) {
    auto& t = tallies[r.n_steps][r.instance_id];
    t.hits += r.gap <= epsilon + kSuccessSlack ? 1 : 0;
    ++t.runs;
    t.runtime += r.runtime_s;
  }

  report.tte_min = kInf;
  for (const auto& [steps, per_instance] : tallies) {
    GridPoint gp;
    gp.n_steps = steps;
    for (const auto& [id, t] : per_instance) {
      const double p = static_cast<double>(t.hits) / t.runs;
      // A zero measured runtime (coarse clocks) is clamped to the smallest positive value.
      const double tau = std::max(t.runtime / t.runs, std::numeric_limits<double>::min());
      gp.p_success.push_back(p);
      gp.tau.push_back(tau);
      gp.tte.push_back(time_to_epsilon(tau, p, p_target));
    }
    gp.tte_median = lower_median(gp.tte);
    if (report.grid.empty() || gp.tte_median < report.tte_min) {
      report.tte_min = gp.tte_median;
      report.n_steps_opt = steps;
    }
    report.grid.push_back(std::move(gp));
  }
  return report;
}

TteReport tte_protocol(const NamedSolver& solver, const std::vector<BenchInstance>& ensemble, double epsilon,
                       const TteOptions& options, std::uint64_t seed, double p_target) {
  const RunGrid grid = run_grid(solver, ensemble, options, seed);
  if (grid.records.empty()) throw InsufficientDataError("every instance was skipped");
  return tte_from_records(grid.records, epsilon, p_target);
}

AutotuneResult autotune_sbqa(const IsingModel& model, int n_samples, int n_repetitions, const SbqaParams& base,
                             std::uint64_t seed) {
  if (n_repetitions < 1 || n_samples < n_repetitions || n_samples % n_repetitions != 0) {
    throw InputError("n_samples must be a positive multiple of n_repetitions");
  }
  AutotuneResult out;
  out.betas.resize(static_cast<std::size_t>(n_repetitions));
  out.alphas.resize(static_cast<std::size_t>(n_repetitions));
  out.energies.resize(static_cast<std::size_t>(n_repetitions));
  std::vector<SolverRun> runs(static_cast<std::size_t>(n_repetitions));
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < n_repetitions; ++r) {
    try {
      const auto k = static_cast<std::size_t>(r);
      Rng rng(derive_seed(seed, {0xa7, k}));
      SbqaParams p = base;
      p.replicas = n_samples / n_repetitions;
      p.n_sets = 1;
      p.beta = rng.uniform(kAutotuneBetaLo, kAutotuneBetaHi);
      p.alpha = rng.uniform(kAutotuneAlphaLo, kAutotuneAlphaHi);
      out.betas[k] = p.beta;
      out.alphas[k] = p.alpha;
      runs[k] = sbqa_solve(model, p, derive_seed(seed, {0xa8, k}));
      out.energies[k] = runs[k].best_energy;
    } catch (...) {
#pragma omp critical(sbqa_autotune)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::size_t best = 0;
  for (std::size_t k = 1; k < runs.size(); ++k) {
    if (runs[k].best_energy < runs[best].best_energy) best = k;
  }
  out.best = std::move(runs[best]);
  return out;
}

GapMatrix sensitivity_sweep(const IsingModel& model, double reference_energy, const std::vector<double>& betas,
                            const std::vector<double>& alphas, int runs, const SbqaParams& base, std::uint64_t seed) {
  if (betas.empty() || alphas.empty()) throw InputError("sweep grids must be nonempty");
  if (runs < 1) throw InputError("runs must be >= 1");
  GapMatrix m;
  m.alphas = alphas;
  m.betas = betas;
  m.mean_gap.assign(alphas.size(), std::vector<double>(betas.size(), 0.0));
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    for (std::size_t b = 0; b < betas.size(); ++b) {
      SbqaParams p = base;
      p.alpha = alphas[a];
      p.beta = betas[b];
      double sum = 0.0;
      for (int r = 0; r < runs; ++r) {
        const auto run = sbqa_solve(model, p, derive_seed(seed, {0x5e, static_cast<std::uint64_t>(r)}));
        sum += optimality_gap(run.best_energy, reference_energy);
      }
      m.mean_gap[a][b] = sum / runs;
    }
  }
  return m;
}

ScalingFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
  ScalingFit fit;
  for (const auto& [n, t] : points) {
    if (std::isfinite(n) && std::isfinite(t) && n > 0.0 && t > 0.0) fit.points.emplace_back(n, t);
  }
  if (fit.points.size() < 3) throw InsufficientDataError("power-law fit needs at least 3 finite points");
  const double k = static_cast<double>(fit.points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [n, t] : fit.points) {
    sx += std::log(n);
    sy += std::log(t);
  }
  const double mx = sx / k, my = sy / k;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [n, t] : fit.points) {
    const double dx = std::log(n) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(t) - my);
  }
  if (sxx == 0.0) throw InsufficientDataError("power-law fit needs at least two distinct sizes");
  fit.gamma = sxy / sxx;
  fit.intercept = my - fit.gamma * mx;
  for (const auto& [n, t] : fit.points) fit.residuals.push_back(std::log(t) - (fit.intercept + fit.gamma * std::log(n)));
  return fit;
}

}  // namespace sbqa
