#pragma once

// Benchmark instance families: hardware topologies, lattices, coupling
// samplers, the chain-of-two cubic embedding and heavy-hex HUBO construction.
// Every generator is a pure function of its parameters and seed.

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sbqa/coloring.hpp"
#include "sbqa/distributions.hpp"
#include "sbqa/model.hpp"

namespace sbqa {

using Edge = std::pair<std::uint32_t, std::uint32_t>;

struct TopologyGraph {
  std::size_t nodes = 0;
  std::vector<Edge> edges;  ///< simple graph, each edge once with first < second
  std::string family;
  std::map<std::string, long> dims;  ///< size parameters (m, t, L, Lz, ...)
  std::string boundary;

  Adjacency adjacency() const;
  std::size_t max_degree() const;
};

/// D-Wave Zephyr Z_{m,t}; 4 t m (2m + 1) nodes. Node labels follow the
/// linear index of the (u, w, k, j, z) coordinates.
TopologyGraph gen_zephyr(int m, int t = 4);

struct LatticeBoundary {
  bool periodic_x = true;
  bool periodic_y = true;
  bool periodic_z = false;
};

/// L x L x Lz cubic lattice, node index (z * L + y) * L + x. Wrapped
/// neighbors that coincide with a direct neighbor (L = 2) appear once.
TopologyGraph gen_cubic_lattice(int L, int Lz, LatticeBoundary bc = {});
TopologyGraph gen_square_lattice(int L, bool periodic = false);
TopologyGraph gen_ring(int n);
TopologyGraph gen_complete(int n);
/// IBM heavy-hex layout: `rows` rows of `cols` qubits joined by bridge
/// qubits every fourth column, alternating offsets. Defaults give the
/// 156-qubit, 176-edge Heron layout.
TopologyGraph gen_heavy_hex(int rows = 8, int cols = 16);

/// Subgraph induced by `keep`, relabeled 0..keep.size()-1 in the given order.
TopologyGraph induced_subgraph(const TopologyGraph& g, const std::vector<std::uint32_t>& keep);

/// Edge-list file: header "graph <n>", then one "i j" per line; '#' comments.
TopologyGraph load_topology(const std::filesystem::path& path);
void save_topology(const std::filesystem::path& path, const TopologyGraph& g);

/// Couplings drawn from `couplings` on every edge; fields from `fields` when given.
IsingModel ising_on_graph(const TopologyGraph& g, const CouplingDistribution& couplings, std::uint64_t seed,
                          const std::optional<CouplingDistribution>& fields = std::nullopt);

/// QUBO with uniform[-1, 1] entries on the Zephyr edges and diagonal, as an IsingModel.
IsingModel gen_zephyr_instance(int m, std::uint64_t seed);
/// Cubic-lattice spin glass (periodic in x, y; open in z).
IsingModel gen_cubic_instance(int L, int Lz, const CouplingDistribution& dist, std::uint64_t seed);

struct EmbeddedInstance {
  IsingModel logical;
  IsingModel physical;
  /// Physical nodes of each logical spin's chain.
  std::vector<std::array<std::uint32_t, 2>> chains;
  std::vector<double> chain_strength;

  /// Physical configuration with every chain aligned to the logical spin.
  SpinConfig embed_spins(std::span<const Spin> logical_spins) const;
  /// Logical readout: a tied chain of two takes its first spin.
  SpinConfig unembed_spins(std::span<const Spin> physical_spins) const;
};

/// Chain-of-two embedding of an L x L x Lz cubic lattice (as produced by
/// gen_cubic_lattice) into a Pegasus P_M working graph. x bonds join the
/// first chain qubits, y bonds the second, z bonds first-to-second. Chain
/// coupling defaults to 2 max|J| over each spin's bonds. Energies of
/// chain-consistent states equal the logical energies.
/// Throws InputError when the lattice exceeds (M-1) x (M-1) x 12 or a
/// coupling is not a lattice bond.
EmbeddedInstance embed_cubic_into_pegasus(const IsingModel& logical, int L, int Lz, int M,
                                          std::optional<double> chain_strength = std::nullopt);

struct HuboTopology {
  std::vector<std::array<std::uint32_t, 2>> pairs;
  std::vector<std::array<std::uint32_t, 3>> triples;
  std::size_t nodes = 0;
};

/// Interaction sets of the heavy-hex construction. Each layer takes the
/// first s2q color classes of an edge coloring (independent 2-body sets) and
/// the first s3q color classes of a coloring of the length-2 paths
/// (independent 3-body sets); between layers the lowest class of the edge
/// coloring is applied as a SWAP layer. n_swap swaps give n_swap + 1 layers.
HuboTopology heavy_hex_topology(const TopologyGraph& base, int n_swap, int s2q = 1, int s3q = 6);

HuboModel gen_heavyhex_hubo(int n_swap, int s2q, int s3q, const CouplingDistribution& dist, std::uint64_t seed,
                            const TopologyGraph& base = gen_heavy_hex());

}  // namespace sbqa
