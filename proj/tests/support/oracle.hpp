#pragma once

// Brute-force enumeration, written independently of the library's energy code.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "sbqa/model.hpp"

namespace sbqa::testing {

inline SpinConfig spins_of(std::uint64_t mask, std::size_t n) {
  SpinConfig s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = (mask >> i) & 1 ? 1 : -1;
  return s;
}

inline double direct_ising_energy(const IsingModel& m, const SpinConfig& s) {
  double e = m.offset();
  for (const auto& c : m.couplings()) e -= c.weight * s[c.i] * s[c.j];
  for (std::size_t i = 0; i < m.fields().size(); ++i) e -= m.fields()[i] * s[i];
  return e;
}

inline double direct_hubo_energy(const HuboModel& m, const SpinConfig& s) {
  double e = m.offset();
  for (const auto& t : m.terms()) {
    double p = t.weight;
    for (auto v : t.indices()) p *= s[v];
    e += p;
  }
  return e;
}

inline double direct_qubo_energy(const QuboMatrix& q, std::uint64_t mask) {
  double e = q.offset();
  for (const auto& en : q.entries()) {
    if (((mask >> en.i) & 1) && ((mask >> en.j) & 1)) e += en.value;
  }
  return e;
}

struct OracleResult {
  double energy = std::numeric_limits<double>::infinity();
  std::uint64_t mask = 0;
};

inline OracleResult oracle_ising(const IsingModel& m) {
  OracleResult r;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m.size()); ++mask) {
    const double e = direct_ising_energy(m, spins_of(mask, m.size()));
    if (e < r.energy) r = {e, mask};
  }
  return r;
}

inline OracleResult oracle_hubo(const HuboModel& m) {
  OracleResult r;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m.size()); ++mask) {
    const double e = direct_hubo_energy(m, spins_of(mask, m.size()));
    if (e < r.energy) r = {e, mask};
  }
  return r;
}

inline OracleResult oracle_qubo(const QuboMatrix& q) {
  OracleResult r;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << q.size()); ++mask) {
    const double e = direct_qubo_energy(q, mask);
    if (e < r.energy) r = {e, mask};
  }
  return r;
}

/// Random HUBO with small integer weights (exact in double arithmetic).
template <class Rng>
HuboModel random_integer_hubo(std::size_t n, std::size_t n_pairs, std::size_t n_triples, Rng& rng, int max_weight = 5) {
  std::vector<HuboTerm> terms;
  std::vector<std::vector<std::uint32_t>> seen;
  auto weight = [&] {
    int w = 0;
    while (w == 0) w = static_cast<int>(rng.below(2 * max_weight + 1)) - max_weight;
    return static_cast<double>(w);
  };
  auto fresh = [&](std::vector<std::uint32_t> v) {
    std::sort(v.begin(), v.end());
    if (std::adjacent_find(v.begin(), v.end()) != v.end()) return false;
    for (const auto& s : seen)
      if (s == v) return false;
    seen.push_back(v);
    return true;
  };
  while (terms.size() < n_pairs) {
    const auto a = static_cast<std::uint32_t>(rng.below(n));
    const auto b = static_cast<std::uint32_t>(rng.below(n));
    if (fresh({a, b})) terms.push_back(make_term(a, b, weight()));
  }
  while (terms.size() < n_pairs + n_triples) {
    const auto a = static_cast<std::uint32_t>(rng.below(n));
    const auto b = static_cast<std::uint32_t>(rng.below(n));
    const auto c = static_cast<std::uint32_t>(rng.below(n));
    if (fresh({a, b, c})) terms.push_back(make_term(a, b, c, weight()));
  }
  return HuboModel(n, std::move(terms));
}

}  // namespace sbqa::testing
