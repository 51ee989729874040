#include "netepi/graph.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "netepi/rng.hpp"

namespace netepi {

Graph::Graph(std::vector<NodeId> nodes, std::vector<WeightedEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  std::sort(nodes_.begin(), nodes_.end());
  if (std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end())
    throw std::invalid_argument("graph: duplicate node id");
  index_.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) index_.emplace(nodes_[i], static_cast<std::uint32_t>(i));

  for (auto& e : edges_) {
    if (e.a == e.b) throw std::invalid_argument("graph: self-loop");
    if (e.a > e.b) std::swap(e.a, e.b);
    if (!index_.count(e.a) || !index_.count(e.b))
      throw std::invalid_argument("graph: edge endpoint not in node set");
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const WeightedEdge& x, const WeightedEdge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  for (std::size_t i = 1; i < edges_.size(); ++i)
    if (edges_[i].a == edges_[i - 1].a && edges_[i].b == edges_[i - 1].b)
      throw std::invalid_argument("graph: duplicate edge");

  adj_off_.assign(nodes_.size() + 1, 0);
  for (const auto& e : edges_) {
    ++adj_off_[index_.at(e.a) + 1];
    ++adj_off_[index_.at(e.b) + 1];
  }
  std::partial_sum(adj_off_.begin(), adj_off_.end(), adj_off_.begin());
  adj_.resize(2 * edges_.size());
  std::vector<std::uint32_t> cursor(adj_off_.begin(), adj_off_.end() - 1);
  for (const auto& e : edges_) {
    const auto ia = index_.at(e.a);
    const auto ib = index_.at(e.b);
    adj_[cursor[ia]++] = ib;
    adj_[cursor[ib]++] = ia;
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    std::sort(adj_.begin() + adj_off_[i], adj_.begin() + adj_off_[i + 1]);
}

std::size_t Graph::index_of(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw std::out_of_range("graph: unknown node id");
  return it->second;
}

namespace {

// Union-find with path halving and union by size.
class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
};

}  // namespace

ComponentInfo component_info(const Graph& g) {
  const std::size_t n = g.node_count();
  DisjointSet ds(n);
  for (const auto& e : g.edges())
    ds.unite(static_cast<std::uint32_t>(g.index_of(e.a)), static_cast<std::uint32_t>(g.index_of(e.b)));

  ComponentInfo info;
  info.comp_of.assign(n, 0);
  std::unordered_map<std::uint32_t, std::uint32_t> label;  // root -> component id
  label.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto root = ds.find(static_cast<std::uint32_t>(i));
    auto [it, fresh] = label.emplace(root, static_cast<std::uint32_t>(label.size()));
    info.comp_of[i] = it->second;
    if (fresh) info.sizes.push_back(0);
    ++info.sizes[it->second];
  }
  info.count = static_cast<std::uint32_t>(info.sizes.size());
  info.lcc = 0;
  for (std::uint32_t c = 1; c < info.count; ++c)
    if (info.sizes[c] > info.sizes[info.lcc]) info.lcc = c;
  // Component ids are assigned in ascending first-member order, so on a size
  // tie the component containing the smallest node index wins.
  return info;
}

ComponentPartition components(const Graph& g) {
  const ComponentInfo info = component_info(g);
  ComponentPartition part;
  part.components.resize(info.count);
  for (std::uint32_t c = 0; c < info.count; ++c) part.components[c].reserve(info.sizes[c]);
  for (std::size_t i = 0; i < g.node_count(); ++i)
    part.components[info.comp_of[i]].push_back(g.id_at(i));
  std::stable_sort(part.components.begin(), part.components.end(),
                   [](const auto& x, const auto& y) { return x.size() > y.size(); });
  return part;
}

namespace {

std::vector<NodeId> iota_nodes(std::size_t n) {
  std::vector<NodeId> nodes(n);
  std::iota(nodes.begin(), nodes.end(), NodeId{0});
  return nodes;
}

void require_min_nodes(std::size_t n, std::size_t min, const char* what) {
  if (n < min) throw std::invalid_argument(std::string(what) + ": need at least " + std::to_string(min) + " nodes");
}

}  // namespace

Graph gen_complete(std::size_t n) {
  require_min_nodes(n, 3, "gen_complete");
  std::vector<WeightedEdge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j), 1.0});
  return Graph(iota_nodes(n), std::move(edges));
}

Graph gen_cycle(std::size_t n) {
  require_min_nodes(n, 3, "gen_cycle");
  std::vector<WeightedEdge> edges;
  edges.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>((i + 1) % n), 1.0});
  return Graph(iota_nodes(n), std::move(edges));
}

Graph gen_wheel(std::size_t n) {
  require_min_nodes(n, 4, "gen_wheel");  // rim must be a proper cycle
  // Hub is node 0; the rim is a cycle over 1..n-1.
  std::vector<WeightedEdge> edges;
  edges.reserve(2 * (n - 1));
  for (std::size_t i = 1; i < n; ++i) edges.push_back({0, static_cast<NodeId>(i), 1.0});
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t j = (i == n - 1) ? 1 : i + 1;
    edges.push_back({static_cast<NodeId>(std::min(i, j)), static_cast<NodeId>(std::max(i, j)), 1.0});
  }
  return Graph(iota_nodes(n), std::move(edges));
}

Graph gen_er(std::size_t n, double p, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_er: n must be >= 1");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("gen_er: p must be in [0,1]");
  RngEngine eng(seed);
  std::vector<WeightedEdge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (bernoulli(eng, p)) edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j), 1.0});
  return Graph(iota_nodes(n), std::move(edges));
}

Graph gen_ws(std::size_t n, std::size_t k, double beta, std::uint64_t seed) {
  if (k < 2 || k % 2 != 0 || k >= n) throw std::invalid_argument("gen_ws: k must be even, >= 2 and < n");
  if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("gen_ws: beta must be in [0,1]");
  RngEngine eng(seed);

  // Adjacency matrix of the working graph; n stays small enough for this.
  std::vector<char> adj(n * n, 0);
  auto connected = [&](std::size_t a, std::size_t b) { return adj[a * n + b] != 0; };
  auto set_edge = [&](std::size_t a, std::size_t b, char v) {
    adj[a * n + b] = v;
    adj[b * n + a] = v;
  };

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t d = 1; d <= k / 2; ++d) set_edge(i, (i + d) % n, 1);

  // Rewire each lattice edge (i, i+d) with probability beta, keeping i as one
  // endpoint. A node already adjacent to everyone keeps its edge.
  for (std::size_t d = 1; d <= k / 2; ++d) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = (i + d) % n;
      if (!bernoulli(eng, beta)) continue;
      std::size_t tries = 0;
      while (tries++ < 4 * n) {
        const std::size_t w = static_cast<std::size_t>(uniform_below(eng, n));
        if (w == i || connected(i, w)) continue;
        set_edge(i, j, 0);
        set_edge(i, w, 1);
        break;
      }
    }
  }

  std::vector<WeightedEdge> edges;
  edges.reserve(n * k / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (connected(i, j)) edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j), 1.0});
  return Graph(iota_nodes(n), std::move(edges));
}

Graph gen_ba(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m < 1 || m >= n) throw std::invalid_argument("gen_ba: need 1 <= m < n");
  RngEngine eng(seed);

  // m isolated seed nodes; each arriving node attaches m edges to distinct
  // existing nodes, chosen degree-proportionally via the repeated-endpoint
  // list. While total degree is zero the choice is uniform.
  std::vector<std::uint32_t> endpoints;
  endpoints.reserve(2 * (n - m) * m);
  std::vector<WeightedEdge> edges;
  edges.reserve((n - m) * m);
  std::vector<std::uint32_t> picked;

  for (std::size_t v = m; v < n; ++v) {
    picked.clear();
    while (picked.size() < m) {
      std::uint32_t t;
      if (endpoints.empty())
        t = static_cast<std::uint32_t>(uniform_below(eng, v));
      else
        t = endpoints[uniform_below(eng, endpoints.size())];
      if (std::find(picked.begin(), picked.end(), t) != picked.end()) continue;
      picked.push_back(t);
    }
    for (const auto t : picked) {
      edges.push_back({static_cast<NodeId>(std::min<std::size_t>(t, v)),
                       static_cast<NodeId>(std::max<std::size_t>(t, v)), 1.0});
      endpoints.push_back(t);
      endpoints.push_back(static_cast<std::uint32_t>(v));
    }
  }
  return Graph(iota_nodes(n), std::move(edges));
}

void write_edge_csv(const Graph& g, std::ostream& out) {
  out << "# nodes=" << g.node_count() << "\n";
  bool contiguous = true;
  for (std::size_t i = 0; i < g.node_count(); ++i)
    if (g.id_at(i) != static_cast<NodeId>(i)) {
      contiguous = false;
      break;
    }
  if (!contiguous) {
    out << "# ids=";
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      if (i) out << ' ';
      out << g.id_at(i);
    }
    out << "\n";
  }
  out << "node_a,node_b\n";
  for (const auto& e : g.edges()) out << e.a << ',' << e.b << "\n";
}

Graph read_edge_csv(std::istream& in) {
  std::string line;
  std::size_t declared = 0;
  bool have_count = false;
  std::vector<NodeId> ids;
  std::vector<WeightedEdge> edges;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string key;
      ls >> key;
      if (key.rfind("nodes=", 0) == 0) {
        declared = std::stoull(key.substr(6));
        have_count = true;
      } else if (key.rfind("ids=", 0) == 0) {
        std::string rest = key.substr(4);
        std::istringstream is(rest + " ");
        std::string tail;
        std::getline(ls, tail);
        is.str(rest + tail);
        NodeId id;
        while (is >> id) ids.push_back(id);
      }
      continue;
    }
    if (!header_seen) {
      if (line != "node_a,node_b") throw std::runtime_error("edge csv: bad header: " + line);
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("edge csv: bad row: " + line);
    edges.push_back({std::stoll(line.substr(0, comma)), std::stoll(line.substr(comma + 1)), 1.0});
  }
  if (!header_seen) throw std::runtime_error("edge csv: missing header");
  if (ids.empty()) {
    if (!have_count) throw std::runtime_error("edge csv: missing # nodes= comment");
    ids.resize(declared);
    std::iota(ids.begin(), ids.end(), NodeId{0});
  }
  return Graph(std::move(ids), std::move(edges));
}

}  // namespace netepi
