#include "dynconn/dyn_graph.hpp"

#include <algorithm>
#include <cassert>

namespace dynconn {

DynGraph::DynGraph(std::size_t user_vertices) {
  for (std::size_t i = 0; i < user_vertices; ++i) add_vertex();
}

VertexId DynGraph::add_vertex() {
  VertexId id = static_cast<VertexId>(users_.size());
  users_.emplace_back();
  VertexId a = new_internal_vertex(id);
  users_[id].slots.push_back(a);
  users_[id].carried.push_back(kNoEdge);
  users_[id].free.push_back(0);
  return id;
}

VertexId DynGraph::new_internal_vertex(VertexId owner) {
  VertexId id = static_cast<VertexId>(owner_.size());
  owner_.push_back(owner);
  slot_index_.push_back(0);
  iadj_.emplace_back();
  return id;
}

EdgeId DynGraph::emit_internal_insert(VertexId a, VertexId b, bool gadget, EdgeId user_edge) {
  EdgeId id = static_cast<EdgeId>(internal_.size());
  internal_.push_back(InternalEdge{a, b, true, gadget, user_edge});
  iadj_[a].push_back(id);
  iadj_[b].push_back(id);
  assert(iadj_[a].size() <= 3 && iadj_[b].size() <= 3);
  ++internal_alive_;
  pending_.push_back(InternalUpdate{InternalUpdate::kInsert, id, a, b});
  return id;
}

void DynGraph::emit_internal_delete(EdgeId e) {
  InternalEdge& ie = internal_[e];
  assert(ie.alive);
  ie.alive = false;
  auto drop = [&](VertexId v) {
    auto& a = iadj_[v];
    a.erase(std::find(a.begin(), a.end(), e));
  };
  drop(ie.u);
  drop(ie.v);
  --internal_alive_;
  pending_.push_back(InternalUpdate{InternalUpdate::kDelete, e, ie.u, ie.v});
}

std::uint32_t DynGraph::acquire_slot(VertexId user_v) {
  Gadget& g = users_[user_v];
  if (!g.free.empty()) {
    std::uint32_t idx = g.free.back();
    g.free.pop_back();
    return idx;
  }
  VertexId w = new_internal_vertex(user_v);
  std::uint32_t idx = static_cast<std::uint32_t>(g.slots.size());
  slot_index_[w] = idx;
  emit_internal_insert(g.slots.back(), w, /*gadget=*/true, kNoEdge);
  g.slots.push_back(w);
  g.carried.push_back(kNoEdge);
  return idx;
}

void DynGraph::attach_user_edge(EdgeId ue, VertexId user_v, std::uint32_t slot_idx) {
  users_[user_v].carried[slot_idx] = ue;
}

EdgeId DynGraph::insert_edge(VertexId u, VertexId v) {
  if (!user_alive(u) || !user_alive(v)) throw DomainError("insert_edge: unknown vertex");
  if (u == v) throw DomainError("insert_edge: self-loops are rejected");
  ++time_;
  std::uint32_t su = acquire_slot(u);
  std::uint32_t sv = acquire_slot(v);
  EdgeId id = static_cast<EdgeId>(edges_.size());
  EdgeId carrier =
      emit_internal_insert(users_[u].slots[su], users_[v].slots[sv], /*gadget=*/false, id);
  edges_.push_back(UserEdge{u, v, true, carrier});
  attach_user_edge(id, u, su);
  attach_user_edge(id, v, sv);
  ++alive_edges_;
  return id;
}

void DynGraph::delete_edge(EdgeId e) {
  if (e >= edges_.size() || !edges_[e].alive) throw DomainError("delete_edge: edge not alive");
  ++time_;
  UserEdge& ue = edges_[e];
  ue.alive = false;
  --alive_edges_;
  const InternalEdge& ie = internal_[ue.carrier];
  for (VertexId slot : {ie.u, ie.v}) {
    VertexId who = owner_[slot];
    std::uint32_t idx = slot_index_[slot];
    users_[who].carried[idx] = kNoEdge;
    if (users_[who].alive) users_[who].free.push_back(idx);
  }
  emit_internal_delete(ue.carrier);
}

std::pair<VertexId, VertexId> DynGraph::split_vertex(VertexId v, const std::vector<EdgeId>& side_a) {
  if (!user_alive(v)) throw DomainError("split_vertex: unknown vertex");
  std::vector<EdgeId> incident = incident_edges(v);
  for (EdgeId e : side_a)
    if (!std::binary_search(incident.begin(), incident.end(), e))
      throw DomainError("split_vertex: edge not incident to vertex");
  ++time_;

  std::vector<EdgeId> a(side_a);
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  std::vector<EdgeId> b;
  for (EdgeId e : incident)
    if (!std::binary_search(a.begin(), a.end(), e)) b.push_back(e);

  users_[v].alive = false;
  VertexId v1 = add_vertex();
  VertexId v2 = add_vertex();

  auto move_edge = [&](EdgeId e, VertexId target) {
    UserEdge& ue = edges_[e];
    const InternalEdge old = internal_[ue.carrier];
    VertexId v_slot = owner_[old.u] == v ? old.u : old.v;
    VertexId other_slot = v_slot == old.u ? old.v : old.u;
    assert(owner_[v_slot] == v);
    emit_internal_delete(ue.carrier);
    users_[v].carried[slot_index_[v_slot]] = kNoEdge;  // retired chain, slot not reused
    std::uint32_t tslot = acquire_slot(target);
    ue.carrier = emit_internal_insert(other_slot, users_[target].slots[tslot], false, e);
    attach_user_edge(e, target, tslot);
    if (ue.u == v)
      ue.u = target;
    else
      ue.v = target;
  };
  for (EdgeId e : a) move_edge(e, v1);
  for (EdgeId e : b) move_edge(e, v2);
  return {v1, v2};
}

std::vector<InternalUpdate> DynGraph::drain_internal_updates() {
  std::vector<InternalUpdate> out;
  out.swap(pending_);
  return out;
}

std::pair<VertexId, VertexId> DynGraph::edge_endpoints(EdgeId e) const {
  return {edges_[e].u, edges_[e].v};
}

EdgeId DynGraph::find_alive_edge(VertexId u, VertexId v) const {
  EdgeId best = kNoEdge;
  if (!user_alive(u) || !user_alive(v)) return best;
  for (EdgeId e : incident_edges(u)) {
    const UserEdge& ue = edges_[e];
    if ((ue.u == u && ue.v == v) || (ue.u == v && ue.v == u)) best = std::min(best, e);
  }
  return best;
}

std::vector<EdgeId> DynGraph::incident_edges(VertexId v) const {
  std::vector<EdgeId> out;
  for (EdgeId e : users_[v].carried)
    if (e != kNoEdge) out.push_back(e);
  std::sort(out.begin(), out.end());
  return out;
}

SnapshotGraph DynGraph::internal_snapshot() const {
  SnapshotGraph g(internal_vertex_count());
  for (const InternalEdge& ie : internal_)
    if (ie.alive) g.add_edge(ie.u, ie.v);
  return g;
}

SnapshotGraph DynGraph::user_snapshot() const {
  SnapshotGraph g(users_.size());
  for (const UserEdge& ue : edges_)
    if (ue.alive) g.add_edge(ue.u, ue.v);
  return g;
}

std::vector<VertexId> DynGraph::components() const {
  auto internal_labels = oracle_partition(internal_snapshot());
  // quotient to user vertices via anchors, canonicalized to smallest user id
  std::vector<VertexId> rep(owner_.size(), kNoVertex);
  std::vector<VertexId> label(users_.size(), kNoVertex);
  for (VertexId u = 0; u < users_.size(); ++u) {
    if (!users_[u].alive) continue;
    VertexId cls = internal_labels[anchor(u)];
    if (rep[cls] == kNoVertex) rep[cls] = u;
    label[u] = rep[cls];
  }
  return label;
}

std::size_t DynGraph::user_component_count() const {
  auto label = components();
  std::size_t count = 0;
  for (VertexId u = 0; u < label.size(); ++u)
    if (label[u] == u) ++count;
  return count;
}

}  // namespace dynconn
