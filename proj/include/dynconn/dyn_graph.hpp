#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dynconn/oracle.hpp"
#include "dynconn/types.hpp"

namespace dynconn {

struct InternalUpdate {
  enum Kind : std::uint8_t { kInsert, kDelete };
  Kind kind;
  EdgeId edge;
  VertexId u = kNoVertex, v = kNoVertex;  // endpoints for inserts
};

// User-facing dynamic graph plus its maximum-degree-3 reduction. Every user
// vertex owns a chain of gadget slots; each alive user edge is carried by one
// internal edge between two slots. Chain edges are flagged gadget edges and
// never surface in forest output. User updates are translated into a stream
// of internal edge insertions/deletions; the hierarchy consumes that stream
// one update at a time.
class DynGraph {
 public:
  explicit DynGraph(std::size_t user_vertices = 0);

  VertexId add_vertex();
  EdgeId insert_edge(VertexId u, VertexId v);
  void delete_edge(EdgeId e);
  // side_a keeps the listed edges; the rest move to the second new vertex.
  std::pair<VertexId, VertexId> split_vertex(VertexId v, const std::vector<EdgeId>& side_a);

  // Pending internal updates since the last drain, in emission order.
  std::vector<InternalUpdate> drain_internal_updates();
  std::size_t pending_internal_updates() const { return pending_.size(); }

  // --- user view ---
  std::size_t user_vertex_count() const { return users_.size(); }
  bool user_alive(VertexId v) const { return v < users_.size() && users_[v].alive; }
  bool edge_alive(EdgeId e) const { return e < edges_.size() && edges_[e].alive; }
  std::pair<VertexId, VertexId> edge_endpoints(EdgeId e) const;
  std::size_t alive_edge_count() const { return alive_edges_; }
  EdgeId find_alive_edge(VertexId u, VertexId v) const;  // lowest id, kNoEdge if none
  std::vector<EdgeId> incident_edges(VertexId v) const;  // alive, sorted
  std::size_t time() const { return time_; }

  // Connected-component label per alive user vertex (kNoVertex for retired),
  // derived from the reduced graph. Labels are canonical (smallest member).
  std::vector<VertexId> components() const;
  std::size_t user_component_count() const;
  SnapshotGraph user_snapshot() const;

  // --- internal (reduced) view ---
  struct InternalEdge {
    VertexId u, v;
    bool alive;
    bool gadget;      // chain edge inside one user vertex
    EdgeId user_edge; // kNoEdge for gadget edges
  };
  std::size_t internal_vertex_count() const { return owner_.size(); }
  std::size_t internal_edge_count() const { return internal_.size(); }
  std::size_t internal_alive_edge_count() const { return internal_alive_; }
  const InternalEdge& internal_edge(EdgeId e) const { return internal_[e]; }
  VertexId owner_of(VertexId internal_v) const { return owner_[internal_v]; }
  VertexId anchor(VertexId user_v) const { return users_[user_v].slots.front(); }
  const std::vector<EdgeId>& internal_incident(VertexId internal_v) const { return iadj_[internal_v]; }
  std::size_t internal_degree(VertexId internal_v) const { return iadj_[internal_v].size(); }
  SnapshotGraph internal_snapshot() const;

 private:
  struct Gadget {
    bool alive = true;
    std::vector<VertexId> slots;     // slots[0] is the anchor
    std::vector<EdgeId> carried;     // per slot: user edge or kNoEdge
    std::vector<std::uint32_t> free; // slot indexes with no carried edge
  };
  struct UserEdge {
    VertexId u, v;
    bool alive;
    EdgeId carrier;  // internal edge id
  };

  VertexId new_internal_vertex(VertexId owner);
  std::uint32_t acquire_slot(VertexId user_v);  // may emit a gadget-edge insert
  EdgeId emit_internal_insert(VertexId a, VertexId b, bool gadget, EdgeId user_edge);
  void emit_internal_delete(EdgeId internal_e);
  void attach_user_edge(EdgeId ue, VertexId user_v, std::uint32_t slot_idx);

  std::vector<Gadget> users_;
  std::vector<UserEdge> edges_;
  std::size_t alive_edges_ = 0;

  std::vector<InternalEdge> internal_;
  std::vector<std::vector<EdgeId>> iadj_;  // alive internal edges per internal vertex
  std::vector<VertexId> owner_;            // internal vertex -> user vertex
  std::vector<std::uint32_t> slot_index_;  // internal vertex -> index in owner's chain
  std::size_t internal_alive_ = 0;

  std::vector<InternalUpdate> pending_;
  std::size_t time_ = 0;
};

}  // namespace dynconn
