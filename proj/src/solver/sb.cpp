// Simulated bifurcation (SBM) and its replica-coupled extension (SBQA).
//
// Both share one integrator. State is a set of columns (one per replica);
// SBQA groups consecutive columns into sets of R replicas coupled along a
// periodic replica index.

#include <chrono>
#include <cmath>
#include <limits>

#include "sbqa/coupling_matrix.hpp"
#include "sbqa/errors.hpp"
#include "sbqa/rng.hpp"
#include "sbqa/solvers.hpp"

namespace sbqa {

namespace {

struct SbConfig {
  double a0;
  double c0;
  double dt;
  int n_steps;
  Nonlinearity nonlinearity;
  double threshold_slope;
  std::size_t columns;
  std::size_t group;  // replicas per coupled set
  double scale;       // 1/R for SBQA, 1 for SBM
  bool coupled;
  // Inter-replica coupling as a function of ramp = t/T (coupled only).
  std::function<double(double)> coupling;
  bool record_trace;
};

struct SbOutcome {
  SpinConfig best_spins;
  long best_step = -1;
  std::vector<double> trace;
};

SbOutcome integrate(const IsingModel& model, const SbConfig& cfg, std::uint64_t seed,
                    const StepObserver& observer) {
  const CouplingMatrix J(model);
  const std::size_t n = model.size();
  const std::size_t cols = cfg.columns;
  const auto& h = model.fields();
  const double offset = model.offset();

  ReplicaState st;
  st.n = n;
  st.columns = cols;
  st.q.resize(n * cols);
  st.p.resize(n * cols);
  for (std::size_t c = 0; c < cols; ++c) {
    Rng rng(derive_seed(seed, {c / cfg.group, c % cfg.group}));
    for (std::size_t i = 0; i < n; ++i) st.q[c * n + i] = rng.uniform(-0.1, 0.1);
    for (std::size_t i = 0; i < n; ++i) st.p[c * n + i] = rng.uniform(-0.1, 0.1);
  }

  std::vector<double> fq(n * cols);
  std::vector<Spin> spins(n * cols);
  std::vector<double> energies(cols);

  SbOutcome out;
  double best = std::numeric_limits<double>::infinity();
  const int stride = n <= kEveryStepReadoutLimit ? 1 : kLargeReadoutStride;
  const double pos_step = cfg.dt * (cfg.a0 * cfg.scale);
  const double drive = cfg.c0 * cfg.scale;
  const auto ncols = static_cast<std::ptrdiff_t>(cols);
  const auto nn = static_cast<std::ptrdiff_t>(n);
  if (cfg.record_trace) out.trace.reserve(static_cast<std::size_t>(cfg.n_steps));

  for (long step = 0; step < cfg.n_steps; ++step) {
    const double ramp = static_cast<double>(step) / cfg.n_steps;
    const double detune = (cfg.a0 - cfg.a0 * ramp) * cfg.scale;
    const double jp = cfg.coupled ? cfg.coupling(ramp) : 0.0;

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < nn * ncols; ++k) {
      fq[k] = nonlinearity(cfg.nonlinearity, st.q[k], ramp, cfg.threshold_slope);
    }

    int bad = 0;
#pragma omp parallel for collapse(2) schedule(static) reduction(| : bad)
    for (std::ptrdiff_t c = 0; c < ncols; ++c) {
      for (std::ptrdiff_t i = 0; i < nn; ++i) {
        const std::size_t idx = static_cast<std::size_t>(c * nn + i);
        const double field = J.row_dot(static_cast<std::size_t>(i), fq.data() + c * nn);
        double force = -detune * st.q[idx] + drive * (field + h[i]);
        if (cfg.coupled) {
          const std::size_t g = cfg.group;
          const std::size_t base = (static_cast<std::size_t>(c) / g) * g;
          const std::size_t k = static_cast<std::size_t>(c) - base;
          const std::size_t left = base + (k + g - 1) % g;
          const std::size_t right = base + (k + 1) % g;
          force += jp * (st.q[left * n + i] + st.q[right * n + i]);
        }
        st.p[idx] += cfg.dt * force;
        bad |= !std::isfinite(st.p[idx]);
      }
    }
    if (bad) throw NumericalError("non-finite momentum in simulated bifurcation", step);

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < nn * ncols; ++k) {
      st.q[k] += pos_step * st.p[k];
      if (std::abs(st.q[k]) > 1.0) {
        st.q[k] = st.q[k] > 0.0 ? 1.0 : -1.0;
        st.p[k] = 0.0;
      }
    }

    if (observer) observer(step, st);

    const bool last = step + 1 == cfg.n_steps;
    if ((step + 1) % stride == 0 || last) {
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t c = 0; c < ncols; ++c) {
        Spin* s = spins.data() + c * nn;
        for (std::ptrdiff_t i = 0; i < nn; ++i) s[i] = st.q[c * nn + i] >= 0.0 ? 1 : -1;
        double e = 0.0;
        for (std::ptrdiff_t i = 0; i < nn; ++i) {
          e += s[i] * (-0.5 * J.row_dot_spins(static_cast<std::size_t>(i), s) - h[i]);
        }
        energies[c] = e + offset;
      }
      for (std::size_t c = 0; c < cols; ++c) {
        if (energies[c] < best) {
          best = energies[c];
          out.best_spins.assign(spins.begin() + static_cast<std::ptrdiff_t>(c * n),
                                spins.begin() + static_cast<std::ptrdiff_t>((c + 1) * n));
          out.best_step = step;
        }
      }
    }
    if (cfg.record_trace) out.trace.push_back(best);
  }
  return out;
}

template <class Params>
SolverRun finish(const IsingModel& model, SbOutcome outcome, const Params& params, std::uint64_t seed,
                 const char* name, std::chrono::steady_clock::time_point start) {
  SolverRun run;
  run.solver = name;
  run.best_spins = std::move(outcome.best_spins);
  run.best_energy = model.energy(run.best_spins);
  run.best_step = outcome.best_step;
  run.trace = std::move(outcome.trace);
  run.seed = seed;
  run.params = params;
  run.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

}  // namespace

void SbmParams::validate() const {
  if (n_steps < 1) throw InputError("n_steps must be >= 1");
  if (!(a0 > 0.0)) throw InputError("a0 must be positive");
  if (c0 && !(*c0 > 0.0)) throw InputError("c0 must be positive");
  if (total_time && !(*total_time > 0.0)) throw InputError("total time must be positive");
  if (!(threshold_slope >= 0.0 && threshold_slope <= 1.0)) throw InputError("threshold slope must lie in [0, 1]");
  if (n_replicas < 1) throw InputError("n_replicas must be >= 1");
}

void SbqaParams::validate() const {
  if (n_steps < 1) throw InputError("n_steps must be >= 1");
  if (!(a0 > 0.0)) throw InputError("a0 must be positive");
  if (c0 && !(*c0 > 0.0)) throw InputError("c0 must be positive");
  if (total_time && !(*total_time > 0.0)) throw InputError("total time must be positive");
  if (!(threshold_slope >= 0.0 && threshold_slope <= 1.0)) throw InputError("threshold slope must lie in [0, 1]");
  if (replicas < 2) throw InputError("SBQA needs at least 2 interacting replicas");
  if (n_sets < 1) throw InputError("n_sets must be >= 1");
  if (!(beta > 0.0)) throw InputError("beta must be positive");
  if (!(alpha > 0.0)) throw InputError("alpha must be positive");
  if (gamma0 && !(*gamma0 > 0.0)) throw InputError("gamma0 must be positive");
}

double default_c0(const IsingModel& model) {
  const std::size_t n = std::max<std::size_t>(model.size(), 1);
  double sigma = 0.0;
  if (!model.couplings().empty()) {
    double ss = 0.0;
    for (const auto& c : model.couplings()) ss += c.weight * c.weight;
    sigma = std::sqrt(ss / static_cast<double>(model.couplings().size()));
  }
  if (sigma == 0.0) {
    double ss = 0.0;
    std::size_t nz = 0;
    for (double h : model.fields()) {
      if (h != 0.0) {
        ss += h * h;
        ++nz;
      }
    }
    sigma = nz ? std::sqrt(ss / static_cast<double>(nz)) : 1.0;
  }
  return 0.5 / (sigma * std::sqrt(static_cast<double>(n)));
}

double threshold_f(double x, double t, double total_time, Nonlinearity kind, double threshold_slope) {
  return nonlinearity(kind, x, t / total_time, threshold_slope);
}

double j_perp(double t, const SbqaParams& params) {
  const double total = params.total_time.value_or(kDefaultTimeStep * params.n_steps * params.replicas);
  const double gamma = transverse_field(t / total, params.resolved_gamma0(), params.alpha);
  return replica_coupling(gamma, params.beta, params.replicas);
}

SolverRun sbm_solve(const IsingModel& model, const SbmParams& params, std::uint64_t seed,
                    const StepObserver& observer) {
  params.validate();
  const auto start = std::chrono::steady_clock::now();
  const double total = params.total_time.value_or(kDefaultTimeStep * params.n_steps);
  SbConfig cfg{params.a0,
               params.c0.value_or(default_c0(model)),
               total / params.n_steps,
               params.n_steps,
               params.nonlinearity,
               params.threshold_slope,
               static_cast<std::size_t>(params.n_replicas),
               static_cast<std::size_t>(params.n_replicas),
               1.0,
               false,
               {},
               params.record_trace};
  return finish(model, integrate(model, cfg, seed, observer), params, seed, "sbm", start);
}

SolverRun sbqa_solve(const IsingModel& model, const SbqaParams& params, std::uint64_t seed,
                     const StepObserver& observer) {
  params.validate();
  const auto start = std::chrono::steady_clock::now();
  const int R = params.replicas;
  const double total = params.total_time.value_or(kDefaultTimeStep * params.n_steps * R);
  const double gamma0 = params.resolved_gamma0();
  std::function<double(double)> coupling;
  if (params.j_perp_override) {
    coupling = [v = *params.j_perp_override](double) { return v; };
  } else {
    coupling = [gamma0, alpha = params.alpha, beta = params.beta, R](double ramp) {
      return replica_coupling(transverse_field(ramp, gamma0, alpha), beta, R);
    };
  }
  SbConfig cfg{params.a0,
               params.c0.value_or(default_c0(model)),
               total / params.n_steps,
               params.n_steps,
               params.nonlinearity,
               params.threshold_slope,
               static_cast<std::size_t>(R) * static_cast<std::size_t>(params.n_sets),
               static_cast<std::size_t>(R),
               params.replica_scaling ? 1.0 / R : 1.0,
               true,
               std::move(coupling),
               params.record_trace};
  return finish(model, integrate(model, cfg, seed, observer), params, seed, "sbqa", start);
}

std::string solver_name(const SolverParams& params) {
  struct Visitor {
    std::string operator()(const SbmParams&) const { return "sbm"; }
    std::string operator()(const SbqaParams&) const { return "sbqa"; }
    std::string operator()(const SaParams&) const { return "sa"; }
    std::string operator()(const DtsqaParams&) const { return "dtsqa"; }
  };
  return std::visit(Visitor{}, params);
}

}  // namespace sbqa
