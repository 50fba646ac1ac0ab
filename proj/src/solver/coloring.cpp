#include "sbqa/coloring.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace sbqa {

Coloring dsatur_coloring(const Adjacency& adjacency) {
  const std::size_t n = adjacency.size();
  constexpr std::uint32_t kUncolored = UINT32_MAX;
  Coloring color(n, kUncolored);
  std::vector<std::set<std::uint32_t>> neighbor_colors(n);
  std::vector<std::size_t> degree(n);
  for (std::size_t v = 0; v < n; ++v) degree[v] = adjacency[v].size();

  // Ordered by (saturation desc, degree desc, index asc).
  using Key = std::tuple<std::size_t, std::size_t, std::uint32_t>;
  auto key_of = [&](std::uint32_t v) {
    return Key{~neighbor_colors[v].size(), ~degree[v], v};
  };
  std::set<Key> queue;
  for (std::uint32_t v = 0; v < n; ++v) queue.insert(key_of(v));

  std::vector<char> used;
  while (!queue.empty()) {
    const std::uint32_t v = std::get<2>(*queue.begin());
    queue.erase(queue.begin());

    used.assign(adjacency[v].size() + 1, 0);
    for (auto c : neighbor_colors[v]) {
      if (c < used.size()) used[c] = 1;
    }
    std::uint32_t c = 0;
    while (used[c]) ++c;
    color[v] = c;

    for (auto u : adjacency[v]) {
      if (color[u] != kUncolored || neighbor_colors[u].count(c)) continue;
      queue.erase(key_of(u));
      neighbor_colors[u].insert(c);
      queue.insert(key_of(u));
    }
  }
  return color;
}

std::uint32_t color_count(const Coloring& coloring) {
  if (coloring.empty()) return 0;
  return *std::max_element(coloring.begin(), coloring.end()) + 1;
}

bool is_proper_coloring(const Adjacency& adjacency, const Coloring& coloring) {
  if (coloring.size() != adjacency.size()) return false;
  for (std::size_t v = 0; v < adjacency.size(); ++v) {
    for (auto u : adjacency[v]) {
      if (u == v || coloring[u] == coloring[v]) return false;
    }
  }
  return true;
}

std::vector<std::vector<std::uint32_t>> color_classes(const Coloring& coloring) {
  std::vector<std::vector<std::uint32_t>> classes(color_count(coloring));
  for (std::uint32_t v = 0; v < coloring.size(); ++v) classes[coloring[v]].push_back(v);
  return classes;
}

}  // namespace sbqa
