#include "sbqa/coupling_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sbqa {

CouplingMatrix::CouplingMatrix(const IsingModel& model, Layout layout) : n_(model.size()) {
  const auto& cs = model.couplings();
  std::vector<std::size_t> degree(n_, 0);
  for (const auto& c : cs) {
    ++degree[c.i];
    ++degree[c.j];
  }
  row_ptr_.assign(n_ + 1, 0);
  for (std::size_t i = 0; i < n_; ++i) row_ptr_[i + 1] = row_ptr_[i] + degree[i];

  std::vector<std::pair<std::uint32_t, double>> entries(row_ptr_[n_]);
  std::vector<std::size_t> fill(row_ptr_.begin(), row_ptr_.end() - 1);
  for (const auto& c : cs) {
    entries[fill[c.i]++] = {c.j, c.weight};
    entries[fill[c.j]++] = {c.i, c.weight};
  }
  col_.resize(entries.size());
  val_.resize(entries.size());
  for (std::size_t i = 0; i < n_; ++i) {
    auto first = entries.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
    auto last = entries.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
    std::sort(first, last, [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      col_[k] = entries[k].first;
      val_[k] = entries[k].second;
    }
  }

  bool dense = false;
  if (layout == Layout::dense) {
    dense = true;
  } else if (layout == Layout::automatic && n_ > 0 && n_ <= kDenseLimit) {
    const double fill_ratio = static_cast<double>(col_.size()) / static_cast<double>(n_ * n_);
    dense = fill_ratio >= kDenseMinFill;
  }
  if (dense) {
    dense_.assign(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) dense_[i * n_ + col_[k]] = val_[k];
    }
  }
}

double CouplingMatrix::rms() const noexcept {
  if (val_.empty()) return 0.0;
  const double ss = std::accumulate(val_.begin(), val_.end(), 0.0,
                                    [](double acc, double v) { return acc + v * v; });
  return std::sqrt(ss / static_cast<double>(val_.size()));
}

}  // namespace sbqa
