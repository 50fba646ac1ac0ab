#include "sbqa/reduce.hpp"

#include <cmath>
#include <exception>
#include <map>

#include "sbqa/errors.hpp"
#include "sbqa/rng.hpp"

namespace sbqa {

namespace {

using Monomial = std::vector<std::uint32_t>;  // sorted, size 1..3
using Polynomial = std::map<Monomial, double>;

// sum_t w_t prod (2 x - 1), expanded. The constant goes to `constant`.
Polynomial to_binary(const HuboModel& model, double& constant) {
  Polynomial poly;
  constant = model.offset();
  for (const auto& t : model.terms()) {
    const auto idx = t.indices();
    const std::size_t d = idx.size();
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
      Monomial m;
      double coef = t.weight;
      for (std::size_t k = 0; k < d; ++k) {
        if (mask & (1u << k)) {
          m.push_back(idx[k]);
          coef *= 2.0;
        } else {
          coef = -coef;
        }
      }
      if (m.empty()) {
        constant += coef;
      } else {
        poly[m] += coef;
      }
    }
  }
  return poly;
}

Reduction reduce_impl(const HuboModel& model, double penalty) {
  double constant = 0.0;
  Polynomial poly = to_binary(model, constant);
  std::vector<AuxPair> pairs;
  std::uint32_t next = static_cast<std::uint32_t>(model.size());

  while (true) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> count;
    for (const auto& [m, c] : poly) {
      if (m.size() != 3 || c == 0.0) continue;
      ++count[{m[0], m[1]}];
      ++count[{m[0], m[2]}];
      ++count[{m[1], m[2]}];
    }
    if (count.empty()) break;
    auto best = count.begin();
    for (auto it = count.begin(); it != count.end(); ++it) {
      if (it->second > best->second) best = it;
    }
    const auto [a, b] = best->first;
    const std::uint32_t w = next++;
    pairs.push_back({w, a, b});

    Polynomial updated;
    for (const auto& [m, c] : poly) {
      if (m.size() == 3 && c != 0.0) {
        const bool has_a = m[0] == a || m[1] == a || m[2] == a;
        const bool has_b = m[0] == b || m[1] == b || m[2] == b;
        if (has_a && has_b) {
          std::uint32_t rest = m[0];
          for (auto v : m)
            if (v != a && v != b) rest = v;
          updated[Monomial{std::min(rest, w), std::max(rest, w)}] += c;
          continue;
        }
      }
      updated[m] += c;
    }
    updated[Monomial{a, b}] += penalty;
    updated[Monomial{a, w}] += -2.0 * penalty;
    updated[Monomial{b, w}] += -2.0 * penalty;
    updated[Monomial{w}] += 3.0 * penalty;
    poly = std::move(updated);
  }

  std::vector<QuboEntry> entries;
  entries.reserve(poly.size());
  for (const auto& [m, c] : poly) {
    if (c == 0.0) continue;
    if (m.size() == 1) {
      entries.push_back({m[0], m[0], c});
    } else if (m.size() == 2) {
      entries.push_back({m[0], m[1], c});
    }
  }

  Reduction r;
  r.source = model;
  r.n_original = model.size();
  r.penalty = penalty;
  r.pairs = std::move(pairs);
  r.qubo = QuboMatrix(next, std::move(entries), constant);
  return r;
}

}  // namespace

IsingModel Reduction::ising() const { return qubo_to_ising(qubo); }

SpinConfig Reduction::original_spins(std::span<const Spin> reduced) const {
  if (reduced.size() != qubo.size()) throw InputError("reduced configuration has the wrong length");
  return SpinConfig(reduced.begin(), reduced.begin() + static_cast<std::ptrdiff_t>(n_original));
}

BinaryConfig Reduction::extend(std::span<const Spin> original) const {
  if (original.size() != n_original) throw InputError("source configuration has the wrong length");
  BinaryConfig x = binary_from_spins(original);
  x.resize(qubo.size(), 0);
  for (const auto& p : pairs) x[p.aux] = static_cast<std::uint8_t>(x[p.a] & x[p.b]);
  return x;
}

Reduction reduce_hubo(const HuboModel& model, double penalty) {
  if (!(penalty > 0.0) || !std::isfinite(penalty)) throw InputError("penalty must be positive and finite");
  return reduce_impl(model, penalty);
}

double safe_penalty(const HuboModel& model) {
  double constant = 0.0;
  double sum = 0.0;
  for (const auto& [m, c] : to_binary(model, constant)) sum += std::abs(c);
  return 1.0 + sum;
}

LineSearchResult penalty_line_search(const std::vector<HuboModel>& ensemble, const ReducedSolver& solver,
                                     const std::vector<double>& candidates, std::uint64_t seed) {
  if (candidates.empty()) throw InputError("penalty candidate list is empty");
  if (ensemble.empty()) throw InputError("line search needs at least one instance");
  for (double p : candidates) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw InputError("penalty candidates must be non-negative and finite");
  }

  const std::size_t n_inst = ensemble.size();
  const auto total = static_cast<std::ptrdiff_t>(candidates.size() * n_inst);
  std::vector<double> energy(candidates.size() * n_inst);
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t job = 0; job < total; ++job) {
    const std::size_t c = static_cast<std::size_t>(job) / n_inst;
    const std::size_t k = static_cast<std::size_t>(job) % n_inst;
    try {
      const Reduction r = reduce_impl(ensemble[k], candidates[c]);
      const SpinConfig reduced = solver(r.ising(), derive_seed(seed, {0x11e, k}));
      energy[static_cast<std::size_t>(job)] = ensemble[k].energy(r.original_spins(reduced));
    } catch (...) {
#pragma omp critical(sbqa_line_search)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  LineSearchResult out;
  out.candidates = candidates;
  out.mean_energy.assign(candidates.size(), 0.0);
  std::size_t best = 0;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    double sum = 0.0;
    for (std::size_t k = 0; k < n_inst; ++k) sum += energy[c * n_inst + k];
    out.mean_energy[c] = sum / static_cast<double>(n_inst);
    if (out.mean_energy[c] < out.mean_energy[best]) best = c;
  }
  out.best_penalty = candidates[best];
  return out;
}

}  // namespace sbqa
