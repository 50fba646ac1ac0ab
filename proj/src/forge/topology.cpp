#include <algorithm>
#include <fstream>
#include <sstream>

#include "sbqa/errors.hpp"
#include "sbqa/forge.hpp"

namespace sbqa {

namespace {

void normalize(TopologyGraph& g) {
  for (auto& e : g.edges) {
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  g.edges.erase(std::remove_if(g.edges.begin(), g.edges.end(), [](const Edge& e) { return e.first == e.second; }),
                g.edges.end());
}

}  // namespace

Adjacency TopologyGraph::adjacency() const {
  Adjacency adj(nodes);
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

std::size_t TopologyGraph::max_degree() const {
  std::vector<std::size_t> deg(nodes, 0);
  for (const auto& [a, b] : edges) {
    ++deg[a];
    ++deg[b];
  }
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

TopologyGraph gen_zephyr(int m, int t) {
  if (m < 1 || t < 1) throw InputError("zephyr needs m >= 1 and t >= 1");
  const std::uint32_t M = 2 * static_cast<std::uint32_t>(m) + 1;
  const auto um = static_cast<std::uint32_t>(m);
  const auto ut = static_cast<std::uint32_t>(t);
  auto label = [&](std::uint32_t u, std::uint32_t w, std::uint32_t k, std::uint32_t j, std::uint32_t z) {
    return (((u * M + w) * ut + k) * 2 + j) * um + z;
  };

  TopologyGraph g;
  g.family = "zephyr";
  g.dims = {{"m", m}, {"t", t}};
  g.nodes = 4ULL * ut * um * M;
  const std::size_t internal = 16ULL * um * um * ut * ut;
  g.edges.reserve(internal + 4ULL * M * ut * um);

  for (std::uint32_t u = 0; u < 2; ++u)
    for (std::uint32_t w = 0; w < M; ++w)
      for (std::uint32_t k = 0; k < ut; ++k) {
        // external: along z within a line
        for (std::uint32_t j = 0; j < 2; ++j)
          for (std::uint32_t z = 0; z + 1 < um; ++z) g.edges.emplace_back(label(u, w, k, j, z), label(u, w, k, j, z + 1));
        // odd: between the two half-lines
        for (std::uint32_t a = 0; a < 2; ++a)
          for (std::uint32_t z = a; z < um; ++z) g.edges.emplace_back(label(u, w, k, 0, z), label(u, w, k, 1, z - a));
      }
  // internal: vertical/horizontal crossings
  for (std::uint32_t w = 0; w < um; ++w)
    for (std::uint32_t z = 0; z < um; ++z)
      for (std::uint32_t h = 0; h < ut; ++h)
        for (std::uint32_t k = 0; k < ut; ++k)
          for (std::uint32_t i = 0; i < 2; ++i)
            for (std::uint32_t j = 0; j < 2; ++j)
              for (std::uint32_t a = 0; a < 2; ++a)
                for (std::uint32_t b = 0; b < 2; ++b) {
                  const std::uint32_t wv = 2 * w + 1 + a * (2 * i) - a;
                  const std::uint32_t wh = 2 * z + 1 + b * (2 * j) - b;
                  g.edges.emplace_back(label(0, wv, k, j, z), label(1, wh, h, i, w));
                }
  normalize(g);
  return g;
}

TopologyGraph gen_cubic_lattice(int L, int Lz, LatticeBoundary bc) {
  if (L < 2 || Lz < 1) throw InputError("cubic lattice needs L >= 2 and Lz >= 1");
  TopologyGraph g;
  g.family = "cubic";
  g.dims = {{"L", L}, {"Lz", Lz}};
  g.boundary = std::string(bc.periodic_x ? "p" : "o") + (bc.periodic_y ? "p" : "o") + (bc.periodic_z ? "p" : "o");
  g.nodes = static_cast<std::size_t>(L) * L * Lz;
  auto id = [L](int x, int y, int z) { return static_cast<std::uint32_t>((z * L + y) * L + x); };
  for (int z = 0; z < Lz; ++z)
    for (int y = 0; y < L; ++y)
      for (int x = 0; x < L; ++x) {
        if (x + 1 < L || bc.periodic_x) g.edges.emplace_back(id(x, y, z), id((x + 1) % L, y, z));
        if (y + 1 < L || bc.periodic_y) g.edges.emplace_back(id(x, y, z), id(x, (y + 1) % L, z));
        if (z + 1 < Lz || (bc.periodic_z && Lz > 1)) g.edges.emplace_back(id(x, y, z), id(x, y, (z + 1) % Lz));
      }
  normalize(g);
  return g;
}

TopologyGraph gen_square_lattice(int L, bool periodic) {
  auto g = gen_cubic_lattice(L, 1, {periodic, periodic, false});
  g.family = "square";
  g.dims = {{"L", L}};
  g.boundary = periodic ? "pp" : "oo";
  return g;
}

TopologyGraph gen_ring(int n) {
  if (n < 2) throw InputError("ring needs n >= 2");
  TopologyGraph g;
  g.family = "ring";
  g.dims = {{"n", n}};
  g.nodes = static_cast<std::size_t>(n);
  for (int i = 0; i < n; ++i) g.edges.emplace_back(i, (i + 1) % n);
  normalize(g);
  return g;
}

TopologyGraph gen_complete(int n) {
  if (n < 1) throw InputError("complete graph needs n >= 1");
  TopologyGraph g;
  g.family = "complete";
  g.dims = {{"n", n}};
  g.nodes = static_cast<std::size_t>(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.edges.emplace_back(i, j);
  return g;
}

TopologyGraph gen_heavy_hex(int rows, int cols) {
  if (rows < 1 || cols < 2) throw InputError("heavy-hex needs rows >= 1 and cols >= 2");
  TopologyGraph g;
  g.family = "heavy_hex";
  g.dims = {{"rows", rows}, {"cols", cols}};
  std::uint32_t next = 0;
  std::vector<std::pair<std::uint32_t, int>> pending;  // bridge node, column
  for (int r = 0; r < rows; ++r) {
    std::vector<std::uint32_t> row(static_cast<std::size_t>(cols));
    for (int c = 0; c < cols; ++c) row[static_cast<std::size_t>(c)] = next++;
    for (int c = 0; c + 1 < cols; ++c) g.edges.emplace_back(row[static_cast<std::size_t>(c)], row[static_cast<std::size_t>(c) + 1]);
    for (auto [bridge, c] : pending) g.edges.emplace_back(bridge, row[static_cast<std::size_t>(c)]);
    pending.clear();
    if (r + 1 < rows) {
      for (int c = (r % 2 == 0) ? 3 : 1; c < cols; c += 4) {
        const std::uint32_t bridge = next++;
        g.edges.emplace_back(row[static_cast<std::size_t>(c)], bridge);
        pending.emplace_back(bridge, c);
      }
    }
  }
  g.nodes = next;
  normalize(g);
  return g;
}

TopologyGraph induced_subgraph(const TopologyGraph& g, const std::vector<std::uint32_t>& keep) {
  std::vector<std::int64_t> relabel(g.nodes, -1);
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (keep[k] >= g.nodes) throw InputError("subgraph node out of range");
    relabel[keep[k]] = static_cast<std::int64_t>(k);
  }
  TopologyGraph sub;
  sub.family = g.family + "_sub";
  sub.dims = g.dims;
  sub.boundary = g.boundary;
  sub.nodes = keep.size();
  for (const auto& [a, b] : g.edges) {
    if (relabel[a] >= 0 && relabel[b] >= 0) {
      sub.edges.emplace_back(static_cast<std::uint32_t>(relabel[a]), static_cast<std::uint32_t>(relabel[b]));
    }
  }
  normalize(sub);
  return sub;
}

TopologyGraph load_topology(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  TopologyGraph g;
  g.family = path.stem().string();
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string tok;
    if (!(ss >> tok) || tok[0] == '#') continue;
    if (!header) {
      if (tok != "graph" || !(ss >> g.nodes)) throw ParseError("expected 'graph <n>' header", lineno);
      header = true;
      continue;
    }
    std::uint64_t a = 0, b = 0;
    std::istringstream es(line);
    if (!(es >> a >> b)) throw ParseError("expected 'i j'", lineno);
    if (a >= g.nodes || b >= g.nodes) throw ParseError("edge index out of range", lineno);
    g.edges.emplace_back(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
  }
  if (!header) throw ParseError("missing 'graph <n>' header", lineno);
  normalize(g);
  return g;
}

void save_topology(const std::filesystem::path& path, const TopologyGraph& g) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << "# family " << g.family << '\n';
  for (const auto& [k, v] : g.dims) out << "# " << k << ' ' << v << '\n';
  out << "graph " << g.nodes << '\n';
  for (const auto& [a, b] : g.edges) out << a << ' ' << b << '\n';
}

}  // namespace sbqa
