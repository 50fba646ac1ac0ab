#pragma once

// Problem representations shared by every solver.
//
// Energy convention (suite-wide):
//   E(s) = -sum_{i<j} J_ij s_i s_j - sum_i h_i s_i + offset,   s_i in {-1, +1}.
// HUBO models keep their native sign, E(s) = sum_t w_t prod s, and are negated
// when handed to an IsingModel (see hubo_to_ising).

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sbqa {

using Spin = std::int8_t;
using SpinConfig = std::vector<Spin>;
using BinaryConfig = std::vector<std::uint8_t>;

struct Coupling {
  std::uint32_t i;
  std::uint32_t j;
  double weight;
};

class IsingModel {
 public:
  IsingModel() = default;
  /// Couplings with i > j are swapped into i < j. Throws InputError on
  /// self-couplings, duplicate pairs, out-of-range indices or a fields vector
  /// whose length is not n (an empty fields vector means h = 0).
  IsingModel(std::size_t n, std::vector<Coupling> couplings, std::vector<double> fields = {},
             double offset = 0.0);

  std::size_t size() const noexcept { return n_; }
  const std::vector<Coupling>& couplings() const noexcept { return couplings_; }
  const std::vector<double>& fields() const noexcept { return fields_; }
  double offset() const noexcept { return offset_; }
  bool has_fields() const noexcept;

  /// Energy under the suite convention. Throws InputError on a length mismatch
  /// or an entry that is not +-1.
  double energy(std::span<const Spin> s) const;

  /// Edge list of the interaction graph as adjacency lists (sorted).
  std::vector<std::vector<std::uint32_t>> adjacency() const;

 private:
  std::size_t n_ = 0;
  std::vector<Coupling> couplings_;
  std::vector<double> fields_;
  double offset_ = 0.0;
};

struct HuboTerm {
  std::array<std::uint32_t, 3> vars{};
  std::uint8_t degree = 2;
  double weight = 0.0;

  std::span<const std::uint32_t> indices() const noexcept { return {vars.data(), degree}; }
};

class HuboModel {
 public:
  HuboModel() = default;
  /// Term indices are sorted into strictly increasing order; repeated
  /// indices, duplicate tuples, degree outside {2, 3} or out-of-range
  /// indices throw InputError.
  HuboModel(std::size_t n, std::vector<HuboTerm> terms, double offset = 0.0);

  std::size_t size() const noexcept { return n_; }
  const std::vector<HuboTerm>& terms() const noexcept { return terms_; }
  double offset() const noexcept { return offset_; }
  std::size_t cubic_count() const noexcept;

  /// sum_t w_t prod_{m in t} s_m + offset.
  double energy(std::span<const Spin> s) const;

 private:
  std::size_t n_ = 0;
  std::vector<HuboTerm> terms_;
  double offset_ = 0.0;
};

HuboTerm make_term(std::uint32_t a, std::uint32_t b, double w);
HuboTerm make_term(std::uint32_t a, std::uint32_t b, std::uint32_t c, double w);

struct QuboEntry {
  std::uint32_t i;  // i <= j; i == j is the linear term
  std::uint32_t j;
  double value;
};

/// Upper-triangular QUBO, E(x) = sum_{i<=j} Q_ij x_i x_j + offset.
class QuboMatrix {
 public:
  QuboMatrix() = default;
  /// Entries are normalized to i <= j; repeated (i, j) entries are summed.
  QuboMatrix(std::size_t n, std::vector<QuboEntry> entries, double offset = 0.0);

  std::size_t size() const noexcept { return n_; }
  const std::vector<QuboEntry>& entries() const noexcept { return entries_; }
  double offset() const noexcept { return offset_; }
  double energy(std::span<const std::uint8_t> x) const;

 private:
  std::size_t n_ = 0;
  std::vector<QuboEntry> entries_;  // sorted by (i, j)
  double offset_ = 0.0;
};

/// Free functions mirroring the member energies.
inline double ising_energy(const IsingModel& m, std::span<const Spin> s) { return m.energy(s); }
inline double hubo_energy(const HuboModel& m, std::span<const Spin> s) { return m.energy(s); }

/// s = 2x - 1; energies agree for every configuration.
QuboMatrix ising_to_qubo(const IsingModel& model);
IsingModel qubo_to_ising(const QuboMatrix& qubo);

/// Degree-2 HUBO to IsingModel with negated weights, so minimizing either is
/// the same problem. Throws InputError when a cubic term is present.
IsingModel hubo_to_ising(const HuboModel& model);

SpinConfig spins_from_binary(std::span<const std::uint8_t> x);
BinaryConfig binary_from_spins(std::span<const Spin> s);

}  // namespace sbqa
