#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sbqa/model.hpp"

namespace sbqa {

/// Symmetric coupling matrix built once per solve from an IsingModel's
/// coordinate list. Rows are stored compressed (ascending column order);
/// small dense-ish models additionally keep a dense copy. Both layouts sum a
/// row in ascending column order, so they produce identical row products.
class CouplingMatrix {
 public:
  static constexpr std::size_t kDenseLimit = 2048;
  static constexpr double kDenseMinFill = 0.1;

  enum class Layout { automatic, sparse, dense };

  explicit CouplingMatrix(const IsingModel& model, Layout layout = Layout::automatic);

  std::size_t size() const noexcept { return n_; }
  std::size_t nonzeros() const noexcept { return col_.size(); }
  bool is_dense() const noexcept { return !dense_.empty(); }

  /// sum_j J_ij v[j]
  double row_dot(std::size_t i, const double* v) const noexcept {
    double acc = 0.0;
    if (!dense_.empty()) {
      const double* row = dense_.data() + i * n_;
      for (std::size_t j = 0; j < n_; ++j) acc += row[j] * v[j];
    } else {
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) acc += val_[k] * v[col_[k]];
    }
    return acc;
  }

  /// sum_j J_ij s[j] for +-1 spins, always over the compressed row.
  double row_dot_spins(std::size_t i, const Spin* s) const noexcept {
    double acc = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) acc += val_[k] * s[col_[k]];
    return acc;
  }

  const std::vector<std::size_t>& row_ptr() const noexcept { return row_ptr_; }
  const std::vector<std::uint32_t>& cols() const noexcept { return col_; }
  const std::vector<double>& values() const noexcept { return val_; }

  /// Root-mean-square of the nonzero couplings (0 for an empty model).
  double rms() const noexcept;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::uint32_t> col_;
  std::vector<double> val_;
  std::vector<double> dense_;
};

}  // namespace sbqa
