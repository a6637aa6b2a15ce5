#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dynconn/types.hpp"

namespace dynconn {

// Immutable adjacency snapshot used as ground truth by tests and --check
// runs. Deliberately shares no code with the maintained structures.
class SnapshotGraph {
 public:
  SnapshotGraph() = default;
  explicit SnapshotGraph(std::size_t n) : adj_(n) {}

  void ensure_vertex(VertexId v) {
    if (v >= adj_.size()) adj_.resize(v + 1);
  }
  void add_edge(VertexId u, VertexId v) {
    ensure_vertex(u);
    ensure_vertex(v);
    adj_[u].push_back(v);
    adj_[v].push_back(u);
    edges_.emplace_back(u, v);
  }

  std::size_t vertex_count() const { return adj_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<VertexId>& neighbors(VertexId v) const { return adj_[v]; }
  const std::vector<std::pair<VertexId, VertexId>>& edges() const { return edges_; }

 private:
  std::vector<std::vector<VertexId>> adj_;
  std::vector<std::pair<VertexId, VertexId>> edges_;
};

// Component label per vertex, labels normalized to the smallest vertex in
// the class. BFS from scratch.
std::vector<VertexId> oracle_partition(const SnapshotGraph& g);

// Second, independent implementation (union-find) for cross-checks.
std::vector<VertexId> oracle_partition_unionfind(const SnapshotGraph& g);

std::size_t oracle_component_count(const SnapshotGraph& g);

// Kruskal. weights[i] belongs to edges()[i].
double oracle_msf_weight(const SnapshotGraph& g, const std::vector<double>& weights);
// Prim-based cross check.
double oracle_msf_weight_prim(const SnapshotGraph& g, const std::vector<double>& weights);

// forest_edges must be a subset of g's edges (checked by endpoints), acyclic,
// and span every component of g.
bool oracle_maximal_forest_check(const SnapshotGraph& g,
                                 const std::vector<std::pair<VertexId, VertexId>>& forest_edges);

}  // namespace dynconn
