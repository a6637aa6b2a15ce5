#include "dynconn/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace dynconn {

std::vector<VertexId> oracle_partition(const SnapshotGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<VertexId> label(n, kNoVertex);
  std::vector<VertexId> queue;
  for (VertexId s = 0; s < n; ++s) {
    if (label[s] != kNoVertex) continue;
    label[s] = s;
    queue.assign(1, s);
    while (!queue.empty()) {
      VertexId v = queue.back();
      queue.pop_back();
      for (VertexId w : g.neighbors(v)) {
        if (label[w] == kNoVertex) {
          label[w] = s;
          queue.push_back(w);
        }
      }
    }
  }
  return label;
}

namespace {

struct Dsu {
  std::vector<VertexId> parent;
  explicit Dsu(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  VertexId find(VertexId v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  }
  bool unite(VertexId a, VertexId b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent[b] = a;  // root at smaller id, keeps labels canonical
    return true;
  }
};

}  // namespace

std::vector<VertexId> oracle_partition_unionfind(const SnapshotGraph& g) {
  Dsu dsu(g.vertex_count());
  for (const auto& [u, v] : g.edges()) dsu.unite(u, v);
  std::vector<VertexId> label(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) label[v] = dsu.find(v);
  return label;
}

std::size_t oracle_component_count(const SnapshotGraph& g) {
  auto label = oracle_partition(g);
  std::size_t count = 0;
  for (VertexId v = 0; v < label.size(); ++v)
    if (label[v] == v) ++count;
  return count;
}

double oracle_msf_weight(const SnapshotGraph& g, const std::vector<double>& weights) {
  std::vector<std::size_t> order(g.edge_count());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return weights[a] < weights[b]; });
  Dsu dsu(g.vertex_count());
  double total = 0.0;
  for (std::size_t i : order) {
    const auto& [u, v] = g.edges()[i];
    if (dsu.unite(u, v)) total += weights[i];
  }
  return total;
}

double oracle_msf_weight_prim(const SnapshotGraph& g, const std::vector<double>& weights) {
  const std::size_t n = g.vertex_count();
  // adjacency with edge indices
  std::vector<std::vector<std::pair<VertexId, std::size_t>>> adj(n);
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const auto& [u, v] = g.edges()[i];
    adj[u].emplace_back(v, i);
    adj[v].emplace_back(u, i);
  }
  std::vector<bool> seen(n, false);
  double total = 0.0;
  using Item = std::pair<double, VertexId>;
  for (VertexId s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    seen[s] = true;
    for (auto [w, i] : adj[s]) pq.emplace(weights[i], w);
    while (!pq.empty()) {
      auto [wgt, v] = pq.top();
      pq.pop();
      if (seen[v]) continue;
      seen[v] = true;
      total += wgt;
      for (auto [w, i] : adj[v])
        if (!seen[w]) pq.emplace(weights[i], w);
    }
  }
  return total;
}

bool oracle_maximal_forest_check(const SnapshotGraph& g,
                                 const std::vector<std::pair<VertexId, VertexId>>& forest_edges) {
  // subset check: every forest edge must exist in g (by multiset of endpoint
  // pairs; parallel edges are interchangeable for connectivity)
  std::vector<std::pair<VertexId, VertexId>> have;
  have.reserve(g.edge_count());
  for (auto [u, v] : g.edges()) have.emplace_back(std::min(u, v), std::max(u, v));
  std::sort(have.begin(), have.end());
  for (auto [u, v] : forest_edges) {
    if (u >= g.vertex_count() || v >= g.vertex_count()) return false;
    if (!std::binary_search(have.begin(), have.end(),
                            std::make_pair(std::min(u, v), std::max(u, v))))
      return false;
  }
  // acyclicity
  Dsu dsu(g.vertex_count());
  for (auto [u, v] : forest_edges)
    if (!dsu.unite(u, v)) return false;
  // spanning per component: forest partition must equal graph partition
  auto glabel = oracle_partition(g);
  for (const auto& [u, v] : g.edges())
    if (dsu.find(u) != dsu.find(v)) return false;
  (void)glabel;
  return true;
}

}  // namespace dynconn
