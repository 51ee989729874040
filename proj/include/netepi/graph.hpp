#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <vector>

namespace netepi {

using NodeId = std::int64_t;

// Undirected weighted edge, stored with a < b.
struct WeightedEdge {
  NodeId a = 0;
  NodeId b = 0;
  double weight = 1.0;
};

// Immutable undirected simple graph. Node ids are arbitrary non-negative
// integers (so real contact-log ids survive); simulation loops address nodes
// by dense index via the CSR adjacency built at construction.
class Graph {
 public:
  Graph() = default;
  Graph(std::vector<NodeId> nodes, std::vector<WeightedEdge> edges);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<NodeId>& nodes() const { return nodes_; }
  const std::vector<WeightedEdge>& edges() const { return edges_; }

  NodeId id_at(std::size_t idx) const { return nodes_[idx]; }
  std::size_t index_of(NodeId id) const;

  std::span<const std::uint32_t> neighbors(std::size_t idx) const {
    return {adj_.data() + adj_off_[idx], adj_.data() + adj_off_[idx + 1]};
  }
  std::size_t degree(std::size_t idx) const { return adj_off_[idx + 1] - adj_off_[idx]; }

 private:
  std::vector<NodeId> nodes_;  // sorted ascending, unique
  std::vector<WeightedEdge> edges_;  // a < b, sorted, unique
  std::vector<std::uint32_t> adj_;
  std::vector<std::uint32_t> adj_off_;
  std::unordered_map<NodeId, std::uint32_t> index_;
};

// Connected components as node-id sets, largest first; ties broken by the
// smallest contained id. Singleton nodes count as components.
struct ComponentPartition {
  std::vector<std::vector<NodeId>> components;
  std::size_t count() const { return components.size(); }
};

ComponentPartition components(const Graph& g);

// Dense-index component labeling used by the simulator's per-iteration stats.
struct ComponentInfo {
  std::vector<std::uint32_t> comp_of;  // node index -> component id
  std::vector<std::uint32_t> sizes;    // component id -> size
  std::uint32_t lcc = 0;               // id of the largest component (0 if empty graph)
  std::uint32_t count = 0;
};

ComponentInfo component_info(const Graph& g);

// Topology generators. Nodes are 0..n-1; all results are simple graphs and
// deterministic per (arguments, seed).
Graph gen_complete(std::size_t n);
Graph gen_cycle(std::size_t n);
Graph gen_wheel(std::size_t n);
Graph gen_er(std::size_t n, double p, std::uint64_t seed);
Graph gen_ws(std::size_t n, std::size_t k, double beta, std::uint64_t seed);
Graph gen_ba(std::size_t n, std::size_t m, std::uint64_t seed);

// Edge-list CSV (`node_a,node_b`) with a `# nodes=<n>` header comment so
// isolated nodes survive round-trips. Graphs whose node set is not 0..n-1
// carry an extra `# ids=...` comment.
void write_edge_csv(const Graph& g, std::ostream& out);
Graph read_edge_csv(std::istream& in);

}  // namespace netepi
