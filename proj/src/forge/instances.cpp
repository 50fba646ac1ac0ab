#include <algorithm>
#include <cmath>
#include <set>

#include "sbqa/errors.hpp"
#include "sbqa/forge.hpp"

namespace sbqa {

IsingModel ising_on_graph(const TopologyGraph& g, const CouplingDistribution& couplings, std::uint64_t seed,
                          const std::optional<CouplingDistribution>& fields) {
  Rng rng(derive_seed(seed, {0x15}));
  std::vector<Coupling> cs;
  cs.reserve(g.edges.size());
  for (const auto& [a, b] : g.edges) cs.push_back({a, b, couplings.sample(rng)});
  std::vector<double> h;
  if (fields) {
    h.resize(g.nodes);
    for (auto& v : h) v = fields->sample(rng);
  }
  return IsingModel(g.nodes, std::move(cs), std::move(h));
}

IsingModel gen_zephyr_instance(int m, std::uint64_t seed) {
  const auto g = gen_zephyr(m);
  Rng rng(derive_seed(seed, {0x2e9}));
  std::vector<QuboEntry> entries;
  entries.reserve(g.nodes + g.edges.size());
  for (std::uint32_t i = 0; i < g.nodes; ++i) entries.push_back({i, i, rng.uniform(-1.0, 1.0)});
  for (const auto& [a, b] : g.edges) entries.push_back({a, b, rng.uniform(-1.0, 1.0)});
  return qubo_to_ising(QuboMatrix(g.nodes, std::move(entries)));
}

IsingModel gen_cubic_instance(int L, int Lz, const CouplingDistribution& dist, std::uint64_t seed) {
  return ising_on_graph(gen_cubic_lattice(L, Lz), dist, seed);
}

SpinConfig EmbeddedInstance::embed_spins(std::span<const Spin> logical_spins) const {
  if (logical_spins.size() != chains.size()) throw InputError("logical configuration has the wrong length");
  SpinConfig out(physical.size(), 1);
  for (std::size_t v = 0; v < chains.size(); ++v) {
    out[chains[v][0]] = logical_spins[v];
    out[chains[v][1]] = logical_spins[v];
  }
  return out;
}

SpinConfig EmbeddedInstance::unembed_spins(std::span<const Spin> physical_spins) const {
  if (physical_spins.size() != physical.size()) throw InputError("physical configuration has the wrong length");
  SpinConfig out(chains.size());
  for (std::size_t v = 0; v < chains.size(); ++v) out[v] = physical_spins[chains[v][0]];
  return out;
}

EmbeddedInstance embed_cubic_into_pegasus(const IsingModel& logical, int L, int Lz, int M,
                                          std::optional<double> chain_strength) {
  if (L < 2 || Lz < 1) throw InputError("lattice needs L >= 2 and Lz >= 1");
  if (L > M - 1 || Lz > 12) {
    throw InputError("lattice " + std::to_string(L) + "x" + std::to_string(L) + "x" + std::to_string(Lz) +
                     " does not fit Pegasus P" + std::to_string(M));
  }
  const std::size_t n = static_cast<std::size_t>(L) * L * Lz;
  if (logical.size() != n) throw InputError("logical model size does not match the lattice");
  if (chain_strength && !(*chain_strength > 0.0)) throw InputError("chain strength must be positive");

  auto coords = [L](std::uint32_t v) {
    const int x = static_cast<int>(v) % L;
    const int y = (static_cast<int>(v) / L) % L;
    const int z = static_cast<int>(v) / (L * L);
    return std::array<int, 3>{x, y, z};
  };
  auto neighbors = [L](int a, int b) { return (a + 1) % L == b || (b + 1) % L == a; };

  EmbeddedInstance out;
  out.logical = logical;
  out.chains.resize(n);
  for (std::uint32_t v = 0; v < n; ++v) out.chains[v] = {2 * v, 2 * v + 1};

  std::vector<double> incident(n, 0.0);
  std::vector<Coupling> phys;
  phys.reserve(logical.couplings().size() + n);
  for (const auto& c : logical.couplings()) {
    const auto a = coords(c.i);
    const auto b = coords(c.j);
    std::uint32_t p = 0, q = 0;
    if (a[1] == b[1] && a[2] == b[2] && neighbors(a[0], b[0])) {
      p = 2 * c.i;
      q = 2 * c.j;
    } else if (a[0] == b[0] && a[2] == b[2] && neighbors(a[1], b[1])) {
      p = 2 * c.i + 1;
      q = 2 * c.j + 1;
    } else if (a[0] == b[0] && a[1] == b[1] && std::abs(a[2] - b[2]) == 1) {
      const auto lower = a[2] < b[2] ? c.i : c.j;
      const auto upper = a[2] < b[2] ? c.j : c.i;
      p = 2 * lower;
      q = 2 * upper + 1;
    } else {
      throw InputError("coupling (" + std::to_string(c.i) + ", " + std::to_string(c.j) + ") is not a lattice bond");
    }
    phys.push_back({p, q, c.weight});
    incident[c.i] = std::max(incident[c.i], std::abs(c.weight));
    incident[c.j] = std::max(incident[c.j], std::abs(c.weight));
  }

  out.chain_strength.resize(n);
  double offset = logical.offset();
  for (std::uint32_t v = 0; v < n; ++v) {
    double s = chain_strength ? *chain_strength : 2.0 * incident[v];
    if (!(s > 0.0)) s = 1.0;
    out.chain_strength[v] = s;
    phys.push_back({2 * v, 2 * v + 1, s});
    offset += s;
  }

  std::vector<double> h;
  if (logical.has_fields()) {
    h.resize(2 * n);
    for (std::size_t v = 0; v < n; ++v) h[2 * v] = h[2 * v + 1] = 0.5 * logical.fields()[v];
  }
  out.physical = IsingModel(2 * n, std::move(phys), std::move(h), offset);
  return out;
}

namespace {

Adjacency dedup(Adjacency adj) {
  for (auto& row : adj) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return adj;
}

// Color classes of the line graph: each class is a matching (edge indices).
std::vector<std::vector<std::uint32_t>> edge_classes(const TopologyGraph& g) {
  std::vector<std::vector<std::uint32_t>> edges_at(g.nodes);
  for (std::uint32_t e = 0; e < g.edges.size(); ++e) {
    edges_at[g.edges[e].first].push_back(e);
    edges_at[g.edges[e].second].push_back(e);
  }
  Adjacency line(g.edges.size());
  for (const auto& incident : edges_at)
    for (auto e : incident)
      for (auto f : incident)
        if (e != f) line[e].push_back(f);
  return color_classes(dsatur_coloring(dedup(std::move(line))));
}

// Length-2 paths (a, center, c), colored so that each class is node-disjoint.
std::vector<std::vector<std::array<std::uint32_t, 3>>> path_classes(const TopologyGraph& g) {
  const auto adj = g.adjacency();
  std::vector<std::array<std::uint32_t, 3>> paths;
  for (std::uint32_t b = 0; b < g.nodes; ++b) {
    const auto& nb = adj[b];
    for (std::size_t x = 0; x < nb.size(); ++x)
      for (std::size_t y = x + 1; y < nb.size(); ++y) paths.push_back({nb[x], b, nb[y]});
  }
  std::vector<std::vector<std::uint32_t>> paths_at(g.nodes);
  for (std::uint32_t p = 0; p < paths.size(); ++p)
    for (auto v : paths[p]) paths_at[v].push_back(p);
  Adjacency conflict(paths.size());
  for (const auto& incident : paths_at)
    for (auto p : incident)
      for (auto q : incident)
        if (p != q) conflict[p].push_back(q);
  std::vector<std::vector<std::array<std::uint32_t, 3>>> out;
  for (const auto& cls : color_classes(dsatur_coloring(dedup(std::move(conflict))))) {
    auto& dst = out.emplace_back();
    for (auto p : cls) dst.push_back(paths[p]);
  }
  return out;
}

}  // namespace

HuboTopology heavy_hex_topology(const TopologyGraph& base, int n_swap, int s2q, int s3q) {
  if (n_swap < 0 || s2q < 0 || s3q < 0) throw InputError("n_swap, s2q and s3q must be non-negative");

  // Interaction sets live on physical positions; at[p] is the variable
  // currently held by position p. Swap layer k exchanges the variables
  // across matching k mod (number of matchings).
  const auto matchings = edge_classes(base);
  const auto paths = path_classes(base);
  std::vector<std::uint32_t> at(base.nodes);
  for (std::uint32_t v = 0; v < base.nodes; ++v) at[v] = v;

  std::set<std::array<std::uint32_t, 2>> pairs;
  std::set<std::array<std::uint32_t, 3>> triples;
  for (int layer = 0; layer <= n_swap; ++layer) {
    for (std::size_t c = 0; c < matchings.size() && c < static_cast<std::size_t>(s2q); ++c) {
      for (auto e : matchings[c]) {
        const auto [a, b] = base.edges[e];
        pairs.insert({std::min(at[a], at[b]), std::max(at[a], at[b])});
      }
    }
    for (std::size_t c = 0; c < paths.size() && c < static_cast<std::size_t>(s3q); ++c) {
      for (const auto& p : paths[c]) {
        std::array<std::uint32_t, 3> t{at[p[0]], at[p[1]], at[p[2]]};
        std::sort(t.begin(), t.end());
        triples.insert(t);
      }
    }
    if (layer < n_swap && !matchings.empty()) {
      for (auto e : matchings[static_cast<std::size_t>(layer) % matchings.size()]) {
        std::swap(at[base.edges[e].first], at[base.edges[e].second]);
      }
    }
  }

  HuboTopology out;
  out.nodes = base.nodes;
  out.pairs.assign(pairs.begin(), pairs.end());
  out.triples.assign(triples.begin(), triples.end());
  return out;
}

HuboModel gen_heavyhex_hubo(int n_swap, int s2q, int s3q, const CouplingDistribution& dist, std::uint64_t seed,
                            const TopologyGraph& base) {
  const auto topo = heavy_hex_topology(base, n_swap, s2q, s3q);
  Rng rng(derive_seed(seed, {0x4e8}));
  std::vector<HuboTerm> terms;
  terms.reserve(topo.pairs.size() + topo.triples.size());
  for (const auto& p : topo.pairs) terms.push_back(make_term(p[0], p[1], dist.sample(rng)));
  for (const auto& t : topo.triples) terms.push_back(make_term(t[0], t[1], t[2], dist.sample(rng)));
  return HuboModel(topo.nodes, std::move(terms));
}

}  // namespace sbqa
