#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "sbqa/bench.hpp"
#include "sbqa/errors.hpp"
#include "sbqa/model.hpp"
#include "sbqa/rng.hpp"
#include "support/oracle.hpp"

using namespace sbqa;
using sbqa::testing::spins_of;

namespace {

IsingModel random_ising(std::size_t n, std::uint64_t seed, double density = 0.6) {
  Rng rng(seed);
  std::vector<Coupling> cs;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j)
      if (rng.uniform() < density) cs.push_back({i, j, rng.normal()});
  std::vector<double> h(n);
  for (auto& v : h) v = rng.normal();
  return IsingModel(n, std::move(cs), std::move(h), rng.uniform(-2, 2));
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("ferromagnetic pair energies") {
    const IsingModel m(2, {{0, 1, 1.0}});
    CHECK(m.energy(SpinConfig{1, 1}) == -1.0);
    CHECK(m.energy(SpinConfig{1, -1}) == 1.0);
    CHECK(m.energy(SpinConfig{-1, -1}) == -1.0);
  }

  TEST_CASE("ising validation") {
    CHECK_THROWS_AS(IsingModel(2, {{0, 0, 1.0}}), InputError);
    CHECK_THROWS_AS(IsingModel(2, {{0, 1, 1.0}, {1, 0, 2.0}}), InputError);
    CHECK_THROWS_AS(IsingModel(2, {{0, 2, 1.0}}), InputError);
    CHECK_THROWS_AS(IsingModel(2, {}, {1.0}), InputError);
    const IsingModel m(2, {{1, 0, 1.0}});
    CHECK(m.couplings()[0].i == 0);
    CHECK_THROWS_AS(m.energy(SpinConfig{1}), InputError);
    CHECK_THROWS_AS(m.energy(SpinConfig{1, 0}), InputError);
  }

  TEST_CASE("energy matches direct evaluation and enumeration minimum") {
    const auto m = random_ising(10, 11);
    double best = INFINITY;
    for (std::uint64_t mask = 0; mask < 1024; ++mask) {
      const auto s = spins_of(mask, 10);
      CHECK(m.energy(s) == doctest::Approx(sbqa::testing::direct_ising_energy(m, s)).epsilon(1e-12));
      best = std::min(best, m.energy(s));
    }
    CHECK(best == doctest::Approx(sbqa::testing::oracle_ising(m).energy).epsilon(1e-12));
    CHECK(ground_state_energy(m) == doctest::Approx(best).epsilon(1e-12));
  }

  TEST_CASE("energy is invariant under coupling permutation") {
    const auto m = random_ising(9, 5);
    auto cs = m.couplings();
    std::reverse(cs.begin(), cs.end());
    const IsingModel r(9, cs, m.fields(), m.offset());
    for (std::uint64_t mask = 0; mask < 512; mask += 7) {
      const auto s = spins_of(mask, 9);
      CHECK(r.energy(s) == doctest::Approx(m.energy(s)).epsilon(1e-12));
    }
  }

  TEST_CASE("global flip symmetry without fields") {
    Rng rng(3);
    std::vector<Coupling> cs;
    for (std::uint32_t i = 0; i < 8; ++i) cs.push_back({i, (i + 1) % 8, rng.normal()});
    for (std::uint32_t i = 0; i < 4; ++i) cs.push_back({i, i + 4, rng.normal()});
    const IsingModel m(8, cs);
    for (std::uint64_t mask = 0; mask < 256; ++mask) {
      CHECK(m.energy(spins_of(mask, 8)) == m.energy(spins_of(~mask & 255, 8)));
    }
  }

  TEST_CASE("hubo energies") {
    const HuboModel m(3, {make_term(0, 1, 2, 1.0)});
    CHECK(m.energy(SpinConfig{1, 1, 1}) == 1.0);
    CHECK(m.energy(SpinConfig{-1, 1, 1}) == -1.0);
    CHECK(m.cubic_count() == 1);
    CHECK_THROWS_AS(HuboModel(3, {make_term(0, 0, 1.0)}), InputError);
    CHECK_THROWS_AS(HuboModel(3, {make_term(0, 1, 1.0), make_term(1, 0, 2.0)}), InputError);
    CHECK_THROWS_AS(HuboModel(3, {make_term(0, 1, 3, 1.0)}), InputError);
    HuboTerm bad = make_term(0, 1, 1.0);
    bad.degree = 4;
    CHECK_THROWS_AS(HuboModel(3, {bad}), InputError);
  }

  TEST_CASE("hubo minimum over 12 variables matches enumeration") {
    Rng rng(21);
    const auto h = sbqa::testing::random_integer_hubo(12, 14, 10, rng);
    double best = INFINITY;
    for (std::uint64_t mask = 0; mask < 4096; ++mask) best = std::min(best, hubo_energy(h, spins_of(mask, 12)));
    CHECK(best == sbqa::testing::oracle_hubo(h).energy);
  }

  TEST_CASE("qubo to ising on a single variable") {
    const auto m = qubo_to_ising(QuboMatrix(1, {{0, 0, 1.0}}));
    CHECK(m.fields()[0] == -0.5);
    CHECK(m.offset() == 0.5);
    CHECK(m.energy(SpinConfig{-1}) == 0.0);
    CHECK(m.energy(SpinConfig{1}) == 1.0);
  }

  TEST_CASE("zero qubo gives zero ising") {
    const auto m = qubo_to_ising(QuboMatrix(3, {}));
    CHECK(m.couplings().empty());
    CHECK_FALSE(m.has_fields());
    CHECK(m.offset() == 0.0);
  }

  TEST_CASE("qubo and ising round trips preserve every energy") {
    Rng rng(8);
    std::vector<QuboEntry> es;
    for (std::uint32_t i = 0; i < 8; ++i)
      for (std::uint32_t j = i; j < 8; ++j)
        if (rng.uniform() < 0.7) es.push_back({i, j, rng.uniform(-1, 1)});
    const QuboMatrix q(8, es, 0.25);
    const auto ising = qubo_to_ising(q);
    const auto back = ising_to_qubo(ising);
    for (std::uint64_t mask = 0; mask < 256; ++mask) {
      const auto s = spins_of(mask, 8);
      const auto x = binary_from_spins(s);
      CHECK(ising.energy(s) == doctest::Approx(q.energy(x)).epsilon(1e-12));
      CHECK(back.energy(x) == doctest::Approx(q.energy(x)).epsilon(1e-12));
    }
    const auto m = random_ising(8, 4);
    const auto again = qubo_to_ising(ising_to_qubo(m));
    for (std::uint64_t mask = 0; mask < 256; ++mask) {
      const auto s = spins_of(mask, 8);
      CHECK(again.energy(s) == doctest::Approx(m.energy(s)).epsilon(1e-12));
    }
  }

  TEST_CASE("integer models round trip exactly") {
    const IsingModel m(3, {{0, 1, 2.0}, {1, 2, -3.0}}, {1.0, 0.0, -1.0}, 4.0);
    const auto again = qubo_to_ising(ising_to_qubo(m));
    for (std::uint64_t mask = 0; mask < 8; ++mask) CHECK(again.energy(spins_of(mask, 3)) == m.energy(spins_of(mask, 3)));
  }

  TEST_CASE("binary and spin conversions") {
    const SpinConfig s{1, -1, 1};
    CHECK(binary_from_spins(s) == BinaryConfig{1, 0, 1});
    CHECK(spins_from_binary(binary_from_spins(s)) == s);
  }

  TEST_CASE("quadratic hubo adapter negates weights") {
    const HuboModel h(3, {make_term(0, 1, 1.5), make_term(1, 2, -2.0)}, 0.5);
    const auto m = hubo_to_ising(h);
    for (std::uint64_t mask = 0; mask < 8; ++mask) CHECK(m.energy(spins_of(mask, 3)) == h.energy(spins_of(mask, 3)));
    CHECK_THROWS_AS(hubo_to_ising(HuboModel(3, {make_term(0, 1, 2, 1.0)})), InputError);
  }
}
