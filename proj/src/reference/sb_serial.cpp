#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "sbqa/errors.hpp"
#include "sbqa/rng.hpp"
#include "sbqa/schedule.hpp"
#include "sbqa_reference.hpp"

namespace sbqa::reference {

Rows::Rows(const IsingModel& model) : rows(model.size()) {
  for (const auto& c : model.couplings()) {
    rows[c.i].emplace_back(c.j, c.weight);
    rows[c.j].emplace_back(c.i, c.weight);
  }
  for (auto& r : rows) std::sort(r.begin(), r.end());
}

double Rows::energy(const IsingModel& model, const Spin* s) const {
  double e = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) e += s[i] * (-0.5 * dot(i, s) - model.fields()[i]);
  return e + model.offset();
}

namespace {

struct Setup {
  double a0, c0, dt;
  int n_steps;
  Nonlinearity kind;
  double slope;
  std::size_t sets, group;
  double scale;
  bool coupled;
  std::function<double(double)> jp;
  bool trace;
};

SolverRun run(const IsingModel& model, const Setup& s, std::uint64_t seed, const StepObserver& observer) {
  const auto start = std::chrono::steady_clock::now();
  const Rows rows(model);
  const std::size_t n = model.size();
  const std::size_t cols = s.sets * s.group;
  const auto& h = model.fields();

  ReplicaState st;
  st.n = n;
  st.columns = cols;
  st.q.assign(n * cols, 0.0);
  st.p.assign(n * cols, 0.0);
  for (std::size_t c = 0; c < cols; ++c) {
    Rng rng(derive_seed(seed, {c / s.group, c % s.group}));
    for (std::size_t i = 0; i < n; ++i) st.q_at(i, c) = rng.uniform(-0.1, 0.1);
    for (std::size_t i = 0; i < n; ++i) st.p_at(i, c) = rng.uniform(-0.1, 0.1);
  }

  SolverRun out;
  double best = std::numeric_limits<double>::infinity();
  const int stride = n <= kEveryStepReadoutLimit ? 1 : kLargeReadoutStride;
  std::vector<double> fq(n);
  std::vector<Spin> spins(n);

  for (long step = 0; step < s.n_steps; ++step) {
    const double ramp = static_cast<double>(step) / s.n_steps;
    const double detune = (s.a0 - s.a0 * ramp) * s.scale;
    const double jp = s.coupled ? s.jp(ramp) : 0.0;
    const std::vector<double> q_old = st.q;

    for (std::size_t c = 0; c < cols; ++c) {
      for (std::size_t i = 0; i < n; ++i) fq[i] = nonlinearity(s.kind, q_old[c * n + i], ramp, s.slope);
      const std::size_t base = (c / s.group) * s.group;
      const std::size_t k = c - base;
      const std::size_t left = base + (k + s.group - 1) % s.group;
      const std::size_t right = base + (k + 1) % s.group;
      for (std::size_t i = 0; i < n; ++i) {
        double force = -detune * q_old[c * n + i] + (s.c0 * s.scale) * (rows.dot(i, fq.data()) + h[i]);
        if (s.coupled) force += jp * (q_old[left * n + i] + q_old[right * n + i]);
        st.p_at(i, c) += s.dt * force;
        if (!std::isfinite(st.p_at(i, c))) throw NumericalError("non-finite momentum in simulated bifurcation", step);
      }
    }
    for (std::size_t k = 0; k < n * cols; ++k) {
      st.q[k] += (s.dt * (s.a0 * s.scale)) * st.p[k];
      if (std::abs(st.q[k]) > 1.0) {
        st.q[k] = st.q[k] > 0.0 ? 1.0 : -1.0;
        st.p[k] = 0.0;
      }
    }
    if (observer) observer(step, st);

    if ((step + 1) % stride == 0 || step + 1 == s.n_steps) {
      for (std::size_t c = 0; c < cols; ++c) {
        for (std::size_t i = 0; i < n; ++i) spins[i] = st.q_at(i, c) >= 0.0 ? 1 : -1;
        const double e = rows.energy(model, spins.data());
        if (e < best) {
          best = e;
          out.best_spins = spins;
          out.best_step = step;
        }
      }
    }
    if (s.trace) out.trace.push_back(best);
  }
  out.best_energy = model.energy(out.best_spins);
  out.seed = seed;
  out.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace

SolverRun sbm_serial(const IsingModel& model, const SbmParams& params, std::uint64_t seed,
                     const StepObserver& observer) {
  params.validate();
  const double total = params.total_time.value_or(kDefaultTimeStep * params.n_steps);
  Setup s{params.a0,
          params.c0.value_or(default_c0(model)),
          total / params.n_steps,
          params.n_steps,
          params.nonlinearity,
          params.threshold_slope,
          1,
          static_cast<std::size_t>(params.n_replicas),
          1.0,
          false,
          {},
          params.record_trace};
  auto out = run(model, s, seed, observer);
  out.solver = "sbm";
  out.params = params;
  return out;
}

SolverRun sbqa_serial(const IsingModel& model, const SbqaParams& params, std::uint64_t seed,
                      const StepObserver& observer) {
  params.validate();
  const int R = params.replicas;
  const double total = params.total_time.value_or(kDefaultTimeStep * params.n_steps * R);
  std::function<double(double)> jp;
  if (params.j_perp_override) {
    jp = [v = *params.j_perp_override](double) { return v; };
  } else {
    jp = [g0 = params.resolved_gamma0(), a = params.alpha, b = params.beta, R](double ramp) {
      return replica_coupling(transverse_field(ramp, g0, a), b, R);
    };
  }
  Setup s{params.a0,
          params.c0.value_or(default_c0(model)),
          total / params.n_steps,
          params.n_steps,
          params.nonlinearity,
          params.threshold_slope,
          static_cast<std::size_t>(params.n_sets),
          static_cast<std::size_t>(R),
          params.replica_scaling ? 1.0 / R : 1.0,
          true,
          std::move(jp),
          params.record_trace};
  auto out = run(model, s, seed, observer);
  out.solver = "sbqa";
  out.params = params;
  return out;
}

}  // namespace sbqa::reference
