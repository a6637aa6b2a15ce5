#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dynconn/types.hpp"

namespace dynconn {

// Dynamic forest over dense vertex ids. Splay-based link-cut trees carry the
// path queries (connectivity, midpoint); a plain adjacency mirror carries the
// traversal-style operations (component enumeration, volumes, branch-free
// sets). Copying the object yields an independent snapshot.
class LinkCutForest {
 public:
  LinkCutForest() = default;
  explicit LinkCutForest(std::size_t n) { ensure_vertex(n == 0 ? 0 : static_cast<VertexId>(n - 1)); }

  void ensure_vertex(VertexId v);
  std::size_t vertex_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  std::size_t component_count() const { return nodes_.size() - edge_count_; }

  // Underlying tree roots are stable under queries: only link and cut move
  // them. link roots the merged tree at v's old root; cut leaves the side
  // holding the old root rooted there and roots the other side at its cut
  // endpoint. Callers that key state by root (the core graphs) rely on this.

  // u and v must be in different trees.
  void link(VertexId u, VertexId v);
  // (u, v) must be a forest edge.
  void cut(VertexId u, VertexId v);

  bool has_edge(VertexId u, VertexId v) const;
  bool connected(VertexId u, VertexId v);
  VertexId find_root(VertexId v);

  // Vertex z on the tree path u..v with |dist(u,z) - dist(z,v)| <= 1.
  VertexId path_midpoint(VertexId u, VertexId v);
  // Number of vertices on the tree path u..v, endpoints included.
  std::size_t path_length(VertexId u, VertexId v);

  std::size_t component_size(VertexId u) const;
  std::uint64_t component_volume(VertexId u, const std::function<std::uint64_t(VertexId)>& deg) const;
  std::vector<VertexId> tree_vertices(VertexId u) const;

  // marked plus every vertex with three marked-bearing directions in its
  // tree (the Steiner branching vertices). Sorted. Result per tree is at
  // most twice the marked count in that tree.
  std::vector<VertexId> branch_free_set(const std::vector<VertexId>& marked) const;

  LinkCutForest snapshot() const { return *this; }

  const std::vector<VertexId>& neighbors(VertexId v) const { return adj_[v]; }
  // Edges as (min, max) pairs, sorted; costs a full scan.
  std::vector<std::pair<VertexId, VertexId>> edges() const;

 private:
  struct Node {
    std::int32_t parent = -1;
    std::int32_t child[2] = {-1, -1};
    std::uint32_t size = 1;  // splay subtree size, real children only
    bool flip = false;
  };

  int dir(std::int32_t x) const;
  void push(std::int32_t x);
  void update(std::int32_t x);
  void attach(std::int32_t p, int d, std::int32_t c);
  void rotate(std::int32_t x);
  void splay(std::int32_t x);
  std::int32_t access(std::int32_t x);
  void evert(std::int32_t x);

  std::vector<Node> nodes_;
  std::vector<std::vector<VertexId>> adj_;
  std::size_t edge_count_ = 0;

  // scratch for tree DFS (epoch-stamped so reuse avoids O(n) clears)
  mutable std::vector<std::uint32_t> stamp_;
  mutable std::uint32_t epoch_ = 0;
  mutable std::vector<VertexId> dfs_parent_;
  mutable std::vector<VertexId> dfs_order_;
  mutable std::vector<std::uint8_t> down_marked_;
  mutable std::vector<std::uint8_t> up_marked_;
  void dfs_tree(VertexId start) const;  // fills dfs_parent_/dfs_order_ for start's tree
};

}  // namespace dynconn
