#pragma once

#include <cstdint>
#include <vector>

namespace sbqa {

using Adjacency = std::vector<std::vector<std::uint32_t>>;
using Coloring = std::vector<std::uint32_t>;

/// DSATUR greedy coloring: repeatedly colors the vertex with the most
/// distinct neighbor colors (ties: higher degree, then lower index) with the
/// smallest free color. Uses at most max_degree + 1 colors.
Coloring dsatur_coloring(const Adjacency& adjacency);

std::uint32_t color_count(const Coloring& coloring);

/// True when no edge joins two vertices of the same color.
bool is_proper_coloring(const Adjacency& adjacency, const Coloring& coloring);

/// Vertices grouped by color, each group in ascending order.
std::vector<std::vector<std::uint32_t>> color_classes(const Coloring& coloring);

}  // namespace sbqa
