#include <chrono>
#include <cmath>
#include <limits>

#include "sbqa/errors.hpp"
#include "sbqa/rng.hpp"
#include "sbqa/schedule.hpp"
#include "sbqa_reference.hpp"

namespace sbqa::reference {

SolverRun dtsqa_serial(const IsingModel& model, const DtsqaParams& params, const Coloring& coloring,
                       std::uint64_t seed) {
  params.validate();
  if (!is_proper_coloring(model.adjacency(), coloring)) throw InputError("coloring is not proper");
  const auto start = std::chrono::steady_clock::now();
  const Rows rows(model);
  const std::size_t n = model.size();
  const int R = params.replicas;
  const auto& h = model.fields();
  const std::uint32_t colors = color_count(coloring);

  std::vector<SpinConfig> s(static_cast<std::size_t>(R), SpinConfig(n));
  for (int k = 0; k < R; ++k) {
    const std::uint64_t key = derive_seed(seed, {0xd75, static_cast<std::uint64_t>(k)});
    for (std::size_t i = 0; i < n; ++i) s[static_cast<std::size_t>(k)][i] = counter_uniform(key, i) < 0.5 ? 1 : -1;
  }

  SolverRun out;
  double best = std::numeric_limits<double>::infinity();
  const int stride = n <= kEveryStepReadoutLimit ? 1 : kLargeReadoutStride;
  for (long step = 0; step < params.n_steps; ++step) {
    const double ramp = static_cast<double>(step) / params.n_steps;
    const double jp = R > 1 ? replica_coupling(transverse_field(ramp, params.gamma0, params.alpha), params.beta, R) : 0.0;
    const std::uint64_t key = derive_seed(seed, {0x57e9, static_cast<std::uint64_t>(step)});
    for (int k = 0; k < R; ++k) {
      auto& cur = s[static_cast<std::size_t>(k)];
      const auto& up = s[static_cast<std::size_t>((k + 1) % R)];
      const auto& down = s[static_cast<std::size_t>((k + R - 1) % R)];
      for (std::uint32_t color = 0; color < colors; ++color) {
        for (std::size_t i = 0; i < n; ++i) {
          if (coloring[i] != color) continue;
          double delta = 2.0 * cur[i] * ((1.0 / R) * (rows.dot(i, cur.data()) + h[i]));
          if (R > 1) delta += 2.0 * cur[i] * jp * (up[i] + down[i]);
          const double u = counter_uniform(key, static_cast<std::uint64_t>(k) * n + i);
          if (metropolis_accept(delta, params.beta, u)) cur[i] = static_cast<Spin>(-cur[i]);
        }
      }
    }
    if ((step + 1) % stride == 0 || step + 1 == params.n_steps) {
      for (int k = 0; k < R; ++k) {
        const double e = rows.energy(model, s[static_cast<std::size_t>(k)].data());
        if (e < best) {
          best = e;
          out.best_spins = s[static_cast<std::size_t>(k)];
          out.best_step = step;
        }
      }
    }
    if (params.record_trace) out.trace.push_back(best);
  }
  out.solver = "dtsqa";
  out.best_energy = model.energy(out.best_spins);
  out.seed = seed;
  out.params = params;
  out.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace sbqa::reference
