#include "sbqa/distributions.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sbqa/errors.hpp"
#include "sbqa/io.hpp"

namespace sbqa {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(s.substr(pos, next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

double to_double(std::string_view tok) {
  double v = 0.0;
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw InputError("invalid number '" + std::string(tok) + "' in distribution spec");
  }
  return v;
}

}  // namespace

double CouplingDistribution::sample(Rng& rng) const {
  struct Sampler {
    Rng& rng;
    double operator()(const dist::Uniform& d) const { return rng.uniform(d.lo, d.hi); }
    double operator()(const dist::Normal& d) const { return d.mu + d.sigma * rng.normal(); }
    double operator()(const dist::Cauchy& d) const {
      return d.x0 + d.gamma * std::tan(std::numbers::pi * (rng.uniform() - 0.5));
    }
    double operator()(const dist::SymPareto& d) const {
      const double magnitude = std::pow(1.0 - rng.uniform(), -1.0 / d.shape);
      return rng.coin() ? magnitude : -magnitude;
    }
    double operator()(const dist::Sidon28&) const { return sidon28_values()[rng.below(8)]; }
    double operator()(const dist::Discrete& d) const { return d.values[rng.below(d.values.size())]; }
  };
  return std::visit(Sampler{rng}, kind_);
}

CouplingDistribution CouplingDistribution::parse(std::string_view spec) {
  const auto parts = split(spec, ':');
  const std::string_view name = parts[0];
  auto arg = [&](std::size_t k, double fallback) { return parts.size() > k ? to_double(parts[k]) : fallback; };
  if (name == "uniform") return dist::Uniform{arg(1, -1.0), arg(2, 1.0)};
  if (name == "normal") return dist::Normal{arg(1, 0.0), arg(2, 1.0)};
  if (name == "cauchy") return dist::Cauchy{arg(1, 0.0), arg(2, 1.0)};
  if (name == "pareto" || name == "sym_pareto") {
    const double shape = arg(1, 2.0);
    if (!(shape > 0.0)) throw InputError("pareto shape must be positive");
    return dist::SymPareto{shape};
  }
  if (name == "sidon28") return dist::Sidon28{};
  if (name == "pm1") return dist::Discrete{{-1.0, 1.0}};
  if (name == "discrete") {
    if (parts.size() != 2 || parts[1].empty()) throw InputError("discrete needs a value list");
    dist::Discrete d;
    for (auto tok : split(parts[1], ',')) d.values.push_back(to_double(tok));
    return d;
  }
  throw InputError("unknown distribution '" + std::string(spec) + "'");
}

std::string CouplingDistribution::describe() const {
  struct Describe {
    std::string operator()(const dist::Uniform& d) const {
      return "uniform:" + format_double(d.lo) + ":" + format_double(d.hi);
    }
    std::string operator()(const dist::Normal& d) const {
      return "normal:" + format_double(d.mu) + ":" + format_double(d.sigma);
    }
    std::string operator()(const dist::Cauchy& d) const {
      return "cauchy:" + format_double(d.x0) + ":" + format_double(d.gamma);
    }
    std::string operator()(const dist::SymPareto& d) const { return "pareto:" + format_double(d.shape); }
    std::string operator()(const dist::Sidon28&) const { return "sidon28"; }
    std::string operator()(const dist::Discrete& d) const {
      std::string s = "discrete:";
      for (std::size_t k = 0; k < d.values.size(); ++k) s += (k ? "," : "") + format_double(d.values[k]);
      return s;
    }
  };
  return std::visit(Describe{}, kind_);
}

}  // namespace sbqa
