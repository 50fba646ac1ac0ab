#pragma once

#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "sbqa/rng.hpp"

namespace sbqa {

namespace dist {
struct Uniform { double lo = -1.0, hi = 1.0; };
struct Normal { double mu = 0.0, sigma = 1.0; };
struct Cauchy { double x0 = 0.0, gamma = 1.0; };
/// Pareto(shape) with unit scale, multiplied by a fair random sign.
struct SymPareto { double shape = 2.0; };
/// Uniform over {+-8/28, +-13/28, +-19/28, +-1}.
struct Sidon28 {};
/// Uniform over an explicit value set.
struct Discrete { std::vector<double> values; };
}  // namespace dist

class CouplingDistribution {
 public:
  using Variant = std::variant<dist::Uniform, dist::Normal, dist::Cauchy, dist::SymPareto, dist::Sidon28,
                               dist::Discrete>;

  CouplingDistribution() : kind_(dist::Normal{}) {}
  template <class Kind>
    requires std::is_constructible_v<Variant, Kind>
  CouplingDistribution(Kind kind) : kind_(std::move(kind)) {}  // NOLINT(implicit)

  double sample(Rng& rng) const;
  const Variant& kind() const noexcept { return kind_; }

  /// "uniform[:lo:hi]", "normal[:mu:sigma]", "cauchy[:x0:gamma]", "pareto[:shape]",
  /// "sidon28", "pm1", "discrete:v1,v2,...". Throws InputError otherwise.
  static CouplingDistribution parse(std::string_view spec);
  /// Inverse of parse.
  std::string describe() const;

 private:
  Variant kind_;
};

inline const std::vector<double>& sidon28_values() {
  static const std::vector<double> values{-1.0, -19.0 / 28, -13.0 / 28, -8.0 / 28,
                                          8.0 / 28, 13.0 / 28, 19.0 / 28, 1.0};
  return values;
}

}  // namespace sbqa
