#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "sbqa/distributions.hpp"
#include "sbqa/errors.hpp"
#include "sbqa/rng.hpp"

using namespace sbqa;

namespace {

constexpr int kDraws = 100000;
// Kolmogorov-Smirnov critical value at the 1% level.
const double kKsCritical = 1.628 / std::sqrt(static_cast<double>(kDraws));

std::vector<double> draws(const CouplingDistribution& d, std::uint64_t seed, int count = kDraws) {
  Rng rng(seed);
  std::vector<double> v(count);
  for (auto& x : v) x = d.sample(rng);
  std::sort(v.begin(), v.end());
  return v;
}

double ks_statistic(const std::vector<double>& sorted, const std::function<double(double)>& cdf) {
  double d = 0.0;
  const double n = static_cast<double>(sorted.size());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const double f = cdf(sorted[k]);
    d = std::max({d, f - k / n, (k + 1) / n - f});
  }
  return d;
}

double quantile(const std::vector<double>& sorted, double q) {
  return sorted[static_cast<std::size_t>(q * (sorted.size() - 1))];
}

}  // namespace

TEST_SUITE("random") {
  TEST_CASE("derived seeds separate streams") {
    CHECK(derive_seed(1, {0}) != derive_seed(1, {1}));
    CHECK(derive_seed(1, {0, 1}) != derive_seed(1, {1, 0}));
    CHECK(derive_seed(1, {2}) == derive_seed(1, {2}));
    CHECK(derive_seed(1, {}) != derive_seed(2, {}));
  }

  TEST_CASE("generator is reproducible and in range") {
    Rng a(99), b(99);
    for (int k = 0; k < 1000; ++k) {
      const double u = a.uniform();
      CHECK(u == b.uniform());
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
      CHECK(a.below(7) < 7);
      b.below(7);
    }
    CHECK(counter_uniform(5, 3) == counter_uniform(5, 3));
    CHECK(counter_uniform(5, 3) != counter_uniform(5, 4));
  }

  TEST_CASE("uniform passes KS") {
    const auto v = draws(dist::Uniform{-1.0, 1.0}, 1);
    CHECK(ks_statistic(v, [](double x) { return std::clamp((x + 1.0) / 2.0, 0.0, 1.0); }) < kKsCritical);
  }

  TEST_CASE("normal passes KS") {
    const auto v = draws(dist::Normal{}, 2);
    CHECK(ks_statistic(v, [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }) < kKsCritical);
  }

  TEST_CASE("counter uniforms pass KS") {
    std::vector<double> v(kDraws);
    for (int k = 0; k < kDraws; ++k) v[k] = counter_uniform(derive_seed(7, {0x57e9, 3}), k);
    std::sort(v.begin(), v.end());
    CHECK(ks_statistic(v, [](double x) { return x; }) < kKsCritical);
  }

  TEST_CASE("cauchy quantiles") {
    const auto v = draws(dist::Cauchy{}, 3);
    CHECK(std::abs(quantile(v, 0.5)) < 0.02);
    CHECK(quantile(v, 0.25) == doctest::Approx(-1.0).epsilon(0.03));
    CHECK(quantile(v, 0.75) == doctest::Approx(1.0).epsilon(0.03));
    CHECK(quantile(v, 0.9) == doctest::Approx(std::tan(M_PI * 0.4)).epsilon(0.05));
  }

  TEST_CASE("symmetrized pareto quantiles") {
    auto v = draws(dist::SymPareto{2.0}, 4);
    const auto negative = std::count_if(v.begin(), v.end(), [](double x) { return x < 0; });
    CHECK(std::abs(negative - kDraws / 2) < 3 * std::sqrt(kDraws / 4.0));
    for (auto& x : v) x = std::abs(x);
    std::sort(v.begin(), v.end());
    CHECK(v.front() >= 1.0);
    for (double q : {0.5, 0.75, 0.9, 0.99}) {
      CHECK(quantile(v, q) == doctest::Approx(std::pow(1.0 - q, -0.5)).epsilon(0.05));
    }
  }

  TEST_CASE("sidon28 draws the eight values uniformly") {
    const std::set<double> allowed{-1.0, -19.0 / 28, -13.0 / 28, -8.0 / 28, 8.0 / 28, 13.0 / 28, 19.0 / 28, 1.0};
    std::map<double, int> counts;
    Rng rng(5);
    const CouplingDistribution d = dist::Sidon28{};
    for (int k = 0; k < 80000; ++k) counts[d.sample(rng)]++;
    CHECK(counts.size() == 8);
    double chi2 = 0.0;
    for (const auto& [v, c] : counts) {
      CHECK(allowed.count(v) == 1);
      chi2 += (c - 10000.0) * (c - 10000.0) / 10000.0;
    }
    CHECK(chi2 < 18.48);  // chi-square, 7 dof, 1% level
  }

  TEST_CASE("parse and describe") {
    for (const char* spec : {"uniform:-2:3", "normal:0:0.5", "cauchy", "pareto:3", "sidon28", "pm1", "discrete:1,2"}) {
      const auto d = CouplingDistribution::parse(spec);
      CHECK(CouplingDistribution::parse(d.describe()).describe() == d.describe());
    }
    CHECK_THROWS_AS(CouplingDistribution::parse("gamma"), InputError);
    CHECK_THROWS_AS(CouplingDistribution::parse("normal:x"), InputError);
    CHECK_THROWS_AS(CouplingDistribution::parse("pareto:-1"), InputError);
  }
}
