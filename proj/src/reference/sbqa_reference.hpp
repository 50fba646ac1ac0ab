#pragma once

// Plain serial versions of the solvers. They share random streams and
// floating-point expression order with the parallel kernels, so results must
// agree bit for bit; tests and the kernel benchmark compare against them.

#include "sbqa/coloring.hpp"
#include "sbqa/model.hpp"
#include "sbqa/solvers.hpp"

namespace sbqa::reference {

SolverRun sbm_serial(const IsingModel& model, const SbmParams& params, std::uint64_t seed,
                     const StepObserver& observer = {});
SolverRun sbqa_serial(const IsingModel& model, const SbqaParams& params, std::uint64_t seed,
                      const StepObserver& observer = {});
SolverRun sa_serial(const IsingModel& model, const SaParams& params, std::uint64_t seed);
SolverRun dtsqa_serial(const IsingModel& model, const DtsqaParams& params, const Coloring& coloring,
                       std::uint64_t seed);

/// Row-ordered neighbor lists (ascending column) and the row-sum energy used by the readouts.
struct Rows {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows;

  explicit Rows(const IsingModel& model);
  template <class V>
  double dot(std::size_t i, const V* v) const {
    double acc = 0.0;
    for (const auto& [j, w] : rows[i]) acc += w * v[j];
    return acc;
  }
  double energy(const IsingModel& model, const Spin* s) const;
};

}  // namespace sbqa::reference
