#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "dynconn/dyn_graph.hpp"
#include "dynconn/link_cut_forest.hpp"
#include "dynconn/types.hpp"

namespace dynconn {

// Contraction of (forest ∪ base edges) along the forest trees. Super-vertices
// are materialized lazily: trees that carry no base edge stay implicit. A
// base edge whose endpoints share a tree is recorded as an internal edge of
// that super-vertex so a later tree split can surface it as a core edge.
// Core edges are identified by their single pre-image edge id.
class CoreGraph {
 public:
  struct SplitInfo {
    SuperId old_super = kNoSuper;
    SuperId side_u = kNoSuper, side_v = kNoSuper;
    std::vector<EdgeId> rehomed;       // incident core edges with a moved endpoint
    std::vector<EdgeId> materialized;  // internal edges that became core edges
  };

  void attach(const DynGraph& g, LinkCutForest& forest) {
    graph_ = &g;
    forest_ = &forest;
  }

  // Full reconstruction from the sorted base edge list. Forest edges are
  // implicitly part of the base (they contract to self-loops).
  void build(const std::vector<EdgeId>& base_edges);
  void clear();

  // Tree lookup; materializes an id for untouched trees on demand.
  SuperId super_of(VertexId v);
  // Lookup without materializing; kNoSuper if the tree carries nothing.
  SuperId try_super_of(VertexId v) const;

  // Base edge inserted. Returns (a, b) when a core edge appears, nullopt for
  // an intra-tree edge.
  std::optional<std::pair<SuperId, SuperId>> on_base_insert(EdgeId e);
  void on_base_delete(EdgeId e);

  // The forest cut must already be applied; old_super captured beforehand
  // (kNoSuper if the tree was unmaterialized, in which case this is a no-op
  // and the sides stay implicit).
  SplitInfo on_forest_cut(VertexId u, VertexId v, SuperId old_super);

  bool has_edge(EdgeId e) const { return status_.count(e) != 0; }
  bool is_core_edge(EdgeId e) const;
  // (a, b) for core edges; (s, s) for internal edges.
  std::pair<SuperId, SuperId> endpoints(EdgeId e) const;
  // The endpoint super on the far side of `s`.
  SuperId other_endpoint(EdgeId e, SuperId s) const;

  bool super_alive(SuperId s) const { return supers_[s].alive; }
  const std::vector<EdgeId>& incident(SuperId s) const { return supers_[s].incident; }
  const std::vector<EdgeId>& internal_edges(SuperId s) const { return supers_[s].internal; }

  std::size_t super_count() const { return supers_.size(); }
  std::vector<SuperId> live_supers_sorted() const;
  std::vector<EdgeId> core_edges_sorted() const;
  std::size_t core_edge_count() const { return core_edge_count_; }

 private:
  struct Super {
    bool alive = true;
    std::vector<EdgeId> incident;
    std::vector<EdgeId> internal;
  };

  SuperId materialize(VertexId root);
  static void drop_from(std::vector<EdgeId>& list, EdgeId e);

  const DynGraph* graph_ = nullptr;
  LinkCutForest* forest_ = nullptr;
  std::vector<Super> supers_;
  std::unordered_map<VertexId, SuperId> root_map_;
  std::unordered_map<EdgeId, std::pair<SuperId, SuperId>> status_;
  std::size_t core_edge_count_ = 0;
};

}  // namespace dynconn
