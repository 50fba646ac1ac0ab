#include <doctest.h>

#include "sbqa/coloring.hpp"
#include "sbqa/forge.hpp"

using namespace sbqa;

TEST_SUITE("coloring") {
  TEST_CASE("triangle needs three colors") {
    const Adjacency tri{{1, 2}, {0, 2}, {0, 1}};
    const auto c = dsatur_coloring(tri);
    CHECK(is_proper_coloring(tri, c));
    CHECK(color_count(c) == 3);
  }

  TEST_CASE("path of five is bipartite") {
    const Adjacency path{{1}, {0, 2}, {1, 3}, {2, 4}, {3}};
    const auto c = dsatur_coloring(path);
    CHECK(is_proper_coloring(path, c));
    CHECK(color_count(c) == 2);
  }

  TEST_CASE("improper colorings are detected") {
    const Adjacency edge{{1}, {0}};
    CHECK_FALSE(is_proper_coloring(edge, {0, 0}));
    CHECK(is_proper_coloring(edge, {0, 1}));
  }

  TEST_CASE("hardware graphs color within max degree + 1") {
    for (const auto& g : {gen_zephyr(2), gen_heavy_hex(), gen_cubic_lattice(5, 4), gen_complete(7)}) {
      const auto adj = g.adjacency();
      const auto c = dsatur_coloring(adj);
      // explicit edge scan
      for (const auto& [a, b] : g.edges) CHECK(c[a] != c[b]);
      CHECK(color_count(c) <= g.max_degree() + 1);
    }
  }

  TEST_CASE("color classes partition the vertices") {
    const auto g = gen_zephyr(1);
    const auto classes = color_classes(dsatur_coloring(g.adjacency()));
    std::size_t total = 0;
    for (const auto& cls : classes) {
      total += cls.size();
      CHECK(std::is_sorted(cls.begin(), cls.end()));
    }
    CHECK(total == g.nodes);
  }

  TEST_CASE("empty graph") { CHECK(dsatur_coloring({}).empty()); }
}
