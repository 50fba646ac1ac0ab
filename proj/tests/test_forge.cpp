#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "sbqa/errors.hpp"
#include "sbqa/forge.hpp"
#include "sbqa/reduce.hpp"
#include "support/oracle.hpp"

using namespace sbqa;

namespace {

std::set<Edge> edge_set(const TopologyGraph& g) { return {g.edges.begin(), g.edges.end()}; }

void check_simple(const TopologyGraph& g) {
  std::set<Edge> seen;
  for (const auto& [a, b] : g.edges) {
    CHECK(a < b);
    CHECK(b < g.nodes);
    CHECK(seen.insert({a, b}).second);
  }
}

}  // namespace

TEST_SUITE("forge") {
  TEST_CASE("zephyr node counts follow the closed form") {
    for (int m : {1, 2, 7, 12, 20}) {
      const auto g = gen_zephyr(m);
      CHECK(g.nodes == static_cast<std::size_t>(16 * m * (2 * m + 1)));
      check_simple(g);
    }
    CHECK(gen_zephyr(1).nodes == 48);
    CHECK(gen_zephyr(12).nodes == 4800);
    CHECK(gen_zephyr(150).nodes == 722400);
  }

  TEST_CASE("zephyr edge counts and degree") {
    CHECK(gen_zephyr(1).edges.size() == 280);
    CHECK(gen_zephyr(2).edges.size() == 1224);
    CHECK(gen_zephyr(3).edges.size() == 2808);
    CHECK(gen_zephyr(4).max_degree() == 20);
  }

  TEST_CASE("cubic lattice counts") {
    for (auto [L, Lz] : {std::pair{3, 3}, {6, 6}, {4, 2}, {15, 12}}) {
      const auto g = gen_cubic_lattice(L, Lz);
      CHECK(g.nodes == static_cast<std::size_t>(L * L * Lz));
      CHECK(g.edges.size() == static_cast<std::size_t>(3 * L * L * Lz - L * L));
      check_simple(g);
    }
    CHECK(gen_cubic_lattice(6, 6).nodes == 216);
    CHECK(gen_cubic_lattice(15, 12).nodes == 2700);
  }

  TEST_CASE("cubic lattice L=2 by direct enumeration") {
    // Wrapped x and y neighbors coincide with the direct ones, so each
    // layer is a 4-cycle and the two layers are joined by 4 vertical bonds.
    const auto g = gen_cubic_lattice(2, 2);
    CHECK(g.nodes == 8);
    std::set<Edge> expected;
    for (std::uint32_t z = 0; z < 2; ++z) {
      const std::uint32_t b = 4 * z;
      expected.insert({b + 0, b + 1});
      expected.insert({b + 2, b + 3});
      expected.insert({b + 0, b + 2});
      expected.insert({b + 1, b + 3});
    }
    for (std::uint32_t v = 0; v < 4; ++v) expected.insert({v, v + 4});
    CHECK(edge_set(g) == expected);
    CHECK(g.edges.size() == 12);
  }

  TEST_CASE("small graphs") {
    CHECK(gen_ring(5).edges.size() == 5);
    CHECK(gen_complete(6).edges.size() == 15);
    CHECK(gen_square_lattice(4, true).edges.size() == 32);
    CHECK(gen_square_lattice(4, false).edges.size() == 24);
    const auto hh = gen_heavy_hex();
    CHECK(hh.nodes == 156);
    CHECK(hh.edges.size() == 176);
    CHECK(hh.max_degree() == 3);
  }

  TEST_CASE("shipped heavy-hex layout matches the generator") {
    const auto path = std::filesystem::path(SBQA_SOURCE_DIR) / "data" / "heavy_hex_156.txt";
    const auto g = load_topology(path);
    CHECK(g.nodes == 156);
    CHECK(edge_set(g) == edge_set(gen_heavy_hex()));
  }

  TEST_CASE("topology file round trip and errors") {
    const auto dir = std::filesystem::temp_directory_path() / "sbqa_forge_tests";
    std::filesystem::create_directories(dir);
    const auto g = gen_zephyr(1);
    save_topology(dir / "z1.txt", g);
    CHECK(edge_set(load_topology(dir / "z1.txt")) == edge_set(g));
    std::ofstream(dir / "bad.txt") << "graph 3\n0 1\n0 7\n";
    try {
      load_topology(dir / "bad.txt");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }

  TEST_CASE("induced subgraph relabels in order") {
    const auto g = induced_subgraph(gen_ring(6), {3, 4, 5, 0});
    CHECK(g.nodes == 4);
    CHECK(edge_set(g) == std::set<Edge>{{0, 1}, {1, 2}, {2, 3}});
  }

  TEST_CASE("generators are pure functions of parameters and seed") {
    const auto a = gen_zephyr_instance(1, 5), b = gen_zephyr_instance(1, 5);
    REQUIRE(a.couplings().size() == b.couplings().size());
    for (std::size_t k = 0; k < a.couplings().size(); ++k) CHECK(a.couplings()[k].weight == b.couplings()[k].weight);
    CHECK(a.fields() == b.fields());
    CHECK(a.offset() == b.offset());
    CHECK(gen_zephyr_instance(1, 6).fields() != a.fields());
  }

  TEST_CASE("zephyr instance couplings stay on the hardware graph") {
    const auto g = gen_zephyr(2);
    const auto edges = edge_set(g);
    const auto m = gen_zephyr_instance(2, 3);
    for (const auto& c : m.couplings()) CHECK(edges.count({c.i, c.j}) == 1);
  }

  TEST_CASE("zephyr QUBO entries are centered") {
    // The instance's QUBO is recovered exactly through ising_to_qubo.
    double sum = 0.0, sq = 0.0;
    std::size_t count = 0;
    for (std::uint64_t s = 0; count < 10000; ++s) {
      for (const auto& e : ising_to_qubo(gen_zephyr_instance(2, s)).entries()) {
        sum += e.value;
        sq += e.value * e.value;
        ++count;
      }
    }
    const double mean = sum / count;
    const double sigma = std::sqrt(sq / count - mean * mean);
    CHECK(std::abs(mean) < 3 * sigma / std::sqrt(static_cast<double>(count)));
  }

  TEST_CASE("cubic embedding sizes") {
    const auto l6 = gen_cubic_instance(6, 6, dist::Normal{}, 1);
    CHECK(embed_cubic_into_pegasus(l6, 6, 6, 7).physical.size() == 432);
    const auto l15 = gen_cubic_instance(15, 12, dist::Normal{}, 1);
    CHECK(embed_cubic_into_pegasus(l15, 15, 12, 16).physical.size() == 5400);
    CHECK_THROWS_AS(embed_cubic_into_pegasus(l6, 6, 6, 6), InputError);
    CHECK_THROWS_AS(embed_cubic_into_pegasus(gen_cubic_instance(3, 13, dist::Normal{}, 1), 3, 13, 20), InputError);
  }

  TEST_CASE("embedding preserves chain-consistent energies and round trips") {
    const auto logical = gen_cubic_instance(3, 2, dist::Normal{}, 7);
    const auto emb = embed_cubic_into_pegasus(logical, 3, 2, 4);
    for (const auto& chain : emb.chains) CHECK(chain.size() == 2);
    for (std::uint64_t mask = 0; mask < (1u << 18); mask += 97) {
      const auto s = sbqa::testing::spins_of(mask, 18);
      const auto phys = emb.embed_spins(s);
      CHECK(emb.unembed_spins(phys) == s);
      CHECK(emb.physical.energy(phys) == doctest::Approx(logical.energy(s)).epsilon(1e-12));
    }
  }

  TEST_CASE("strong chains give the logical ground state") {
    for (std::uint64_t seed : {1, 2, 3}) {
      const auto logical = gen_cubic_instance(2, 2, dist::Normal{}, seed);
      const auto emb = embed_cubic_into_pegasus(logical, 2, 2, 3, 1000.0);
      const auto phys = sbqa::testing::oracle_ising(emb.physical);
      const auto log = sbqa::testing::oracle_ising(logical);
      const auto readout = emb.unembed_spins(sbqa::testing::spins_of(phys.mask, 16));
      CHECK(logical.energy(readout) == doctest::Approx(log.energy).epsilon(1e-12));
      CHECK(phys.energy == doctest::Approx(log.energy).epsilon(1e-12));
    }
  }

  TEST_CASE("heavy-hex HUBO construction") {
    std::size_t prev_terms = 0;
    std::size_t prev_reduced = 0;
    for (int nswap : {0, 1, 3, 6, 9}) {
      const auto h = gen_heavyhex_hubo(nswap, 1, 6, dist::Cauchy{}, 11);
      CHECK(h.size() == 156);
      for (const auto& t : h.terms()) CHECK((t.degree == 2 || t.degree == 3));
      CHECK(h.terms().size() > prev_terms);
      prev_terms = h.terms().size();
      const auto r = reduce_hubo(h, 20.0);
      CHECK(r.aux_count() <= h.cubic_count());
      CHECK(r.qubo.size() > prev_reduced);
      prev_reduced = r.qubo.size();
    }
  }

  TEST_CASE("heavy-hex interaction sets are independent within a layer") {
    const auto base = gen_heavy_hex();
    const auto t = heavy_hex_topology(base, 0, 1, 6);
    const auto edges = edge_set(base);
    std::set<std::uint32_t> used;
    for (const auto& p : t.pairs) {
      CHECK(edges.count({p[0], p[1]}) == 1);
      CHECK(used.insert(p[0]).second);
      CHECK(used.insert(p[1]).second);
    }
    CHECK_FALSE(t.triples.empty());
    CHECK_THROWS_AS(heavy_hex_topology(base, -1), InputError);
  }

  TEST_CASE("heavy-hex generation is deterministic") {
    const auto a = gen_heavyhex_hubo(3, 1, 6, dist::Normal{}, 2);
    const auto b = gen_heavyhex_hubo(3, 1, 6, dist::Normal{}, 2);
    REQUIRE(a.terms().size() == b.terms().size());
    for (std::size_t k = 0; k < a.terms().size(); ++k) CHECK(a.terms()[k].weight == b.terms()[k].weight);
  }
}
