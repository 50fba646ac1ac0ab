#include "sbqa/model.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

#include "sbqa/errors.hpp"

namespace sbqa {

namespace {

void check_spins(std::span<const Spin> s, std::size_t n) {
  if (s.size() != n) {
    throw InputError("spin configuration has length " + std::to_string(s.size()) +
                     ", model has " + std::to_string(n) + " variables");
  }
  for (Spin v : s) {
    if (v != 1 && v != -1) throw InputError("spin entries must be +1 or -1");
  }
}

}  // namespace

IsingModel::IsingModel(std::size_t n, std::vector<Coupling> couplings, std::vector<double> fields,
                       double offset)
    : n_(n), couplings_(std::move(couplings)), fields_(std::move(fields)), offset_(offset) {
  if (fields_.empty()) fields_.assign(n_, 0.0);
  if (fields_.size() != n_) throw InputError("fields vector length does not match n");

  std::vector<std::pair<std::uint32_t, std::uint32_t>> keys;
  keys.reserve(couplings_.size());
  for (auto& c : couplings_) {
    if (c.i == c.j) throw InputError("self-coupling on variable " + std::to_string(c.i));
    if (c.i > c.j) std::swap(c.i, c.j);
    if (c.j >= n_) throw InputError("coupling index " + std::to_string(c.j) + " out of range");
    keys.emplace_back(c.i, c.j);
  }
  std::sort(keys.begin(), keys.end());
  if (auto it = std::adjacent_find(keys.begin(), keys.end()); it != keys.end()) {
    throw InputError("duplicate coupling (" + std::to_string(it->first) + ", " +
                     std::to_string(it->second) + ")");
  }
}

bool IsingModel::has_fields() const noexcept {
  return std::any_of(fields_.begin(), fields_.end(), [](double h) { return h != 0.0; });
}

double IsingModel::energy(std::span<const Spin> s) const {
  check_spins(s, n_);
  double e = 0.0;
  for (const auto& c : couplings_) e -= c.weight * s[c.i] * s[c.j];
  for (std::size_t i = 0; i < n_; ++i) e -= fields_[i] * s[i];
  return e + offset_;
}

std::vector<std::vector<std::uint32_t>> IsingModel::adjacency() const {
  std::vector<std::vector<std::uint32_t>> adj(n_);
  for (const auto& c : couplings_) {
    adj[c.i].push_back(c.j);
    adj[c.j].push_back(c.i);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

HuboTerm make_term(std::uint32_t a, std::uint32_t b, double w) {
  HuboTerm t;
  t.vars = {a, b, 0};
  t.degree = 2;
  t.weight = w;
  return t;
}

HuboTerm make_term(std::uint32_t a, std::uint32_t b, std::uint32_t c, double w) {
  HuboTerm t;
  t.vars = {a, b, c};
  t.degree = 3;
  t.weight = w;
  return t;
}

HuboModel::HuboModel(std::size_t n, std::vector<HuboTerm> terms, double offset)
    : n_(n), terms_(std::move(terms)), offset_(offset) {
  std::vector<std::array<std::uint32_t, 3>> keys;
  keys.reserve(terms_.size());
  for (auto& t : terms_) {
    if (t.degree != 2 && t.degree != 3) {
      throw InputError("HUBO term degree must be 2 or 3, got " + std::to_string(t.degree));
    }
    std::sort(t.vars.begin(), t.vars.begin() + t.degree);
    for (std::uint8_t k = 0; k < t.degree; ++k) {
      if (t.vars[k] >= n_) throw InputError("HUBO index " + std::to_string(t.vars[k]) + " out of range");
      if (k > 0 && t.vars[k] == t.vars[k - 1]) throw InputError("HUBO term repeats a variable");
    }
    if (t.degree == 2) t.vars[2] = 0;
    // Degree-2 keys get a sentinel so they never collide with cubic ones.
    keys.push_back({t.vars[0], t.vars[1], t.degree == 2 ? UINT32_MAX : t.vars[2]});
  }
  std::sort(keys.begin(), keys.end());
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) {
    throw InputError("duplicate HUBO term");
  }
}

std::size_t HuboModel::cubic_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(terms_.begin(), terms_.end(), [](const HuboTerm& t) { return t.degree == 3; }));
}

double HuboModel::energy(std::span<const Spin> s) const {
  check_spins(s, n_);
  double e = 0.0;
  for (const auto& t : terms_) {
    int prod = 1;
    for (auto v : t.indices()) prod *= s[v];
    e += t.weight * prod;
  }
  return e + offset_;
}

QuboMatrix::QuboMatrix(std::size_t n, std::vector<QuboEntry> entries, double offset)
    : n_(n), offset_(offset) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> acc;
  for (auto e : entries) {
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.j >= n_) throw InputError("QUBO index " + std::to_string(e.j) + " out of range");
    acc[{e.i, e.j}] += e.value;
  }
  entries_.reserve(acc.size());
  for (const auto& [key, v] : acc) entries_.push_back({key.first, key.second, v});
}

double QuboMatrix::energy(std::span<const std::uint8_t> x) const {
  if (x.size() != n_) throw InputError("binary configuration length does not match QUBO size");
  double e = 0.0;
  for (const auto& q : entries_) {
    if (x[q.i] && x[q.j]) e += q.value;
  }
  return e + offset_;
}

QuboMatrix ising_to_qubo(const IsingModel& model) {
  const std::size_t n = model.size();
  std::vector<double> diag(n, 0.0);
  std::vector<QuboEntry> entries;
  entries.reserve(model.couplings().size() + n);
  double offset = model.offset();
  // -J s_i s_j = -J (4 x_i x_j - 2 x_i - 2 x_j + 1)
  for (const auto& c : model.couplings()) {
    entries.push_back({c.i, c.j, -4.0 * c.weight});
    diag[c.i] += 2.0 * c.weight;
    diag[c.j] += 2.0 * c.weight;
    offset -= c.weight;
  }
  // -h s = -h (2x - 1)
  for (std::size_t i = 0; i < n; ++i) {
    const double h = model.fields()[i];
    diag[i] -= 2.0 * h;
    offset += h;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (diag[i] != 0.0) {
      entries.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i), diag[i]});
    }
  }
  return QuboMatrix(n, std::move(entries), offset);
}

IsingModel qubo_to_ising(const QuboMatrix& qubo) {
  const std::size_t n = qubo.size();
  std::vector<double> h(n, 0.0);
  std::vector<Coupling> couplings;
  double offset = qubo.offset();
  for (const auto& q : qubo.entries()) {
    if (q.i == q.j) {
      // Q x = Q (1 + s) / 2
      h[q.i] -= q.value / 2.0;
      offset += q.value / 2.0;
    } else {
      // Q x_i x_j = Q (1 + s_i + s_j + s_i s_j) / 4
      const double quarter = q.value / 4.0;
      couplings.push_back({q.i, q.j, -quarter});
      h[q.i] -= quarter;
      h[q.j] -= quarter;
      offset += quarter;
    }
  }
  return IsingModel(n, std::move(couplings), std::move(h), offset);
}

IsingModel hubo_to_ising(const HuboModel& model) {
  std::vector<Coupling> couplings;
  couplings.reserve(model.terms().size());
  for (const auto& t : model.terms()) {
    if (t.degree != 2) throw InputError("hubo_to_ising requires a quadratic model; reduce it first");
    couplings.push_back({t.vars[0], t.vars[1], -t.weight});
  }
  return IsingModel(model.size(), std::move(couplings), {}, model.offset());
}

SpinConfig spins_from_binary(std::span<const std::uint8_t> x) {
  SpinConfig s(x.size());
  std::transform(x.begin(), x.end(), s.begin(), [](std::uint8_t b) { return Spin(b ? 1 : -1); });
  return s;
}

BinaryConfig binary_from_spins(std::span<const Spin> s) {
  BinaryConfig x(s.size());
  std::transform(s.begin(), s.end(), x.begin(), [](Spin v) { return std::uint8_t(v > 0 ? 1 : 0); });
  return x;
}

}  // namespace sbqa
