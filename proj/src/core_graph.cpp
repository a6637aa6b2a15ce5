#include "dynconn/core_graph.hpp"

#include <algorithm>
#include <cassert>

namespace dynconn {

void CoreGraph::clear() {
  supers_.clear();
  root_map_.clear();
  status_.clear();
  core_edge_count_ = 0;
}

SuperId CoreGraph::materialize(VertexId root) {
  auto it = root_map_.find(root);
  if (it != root_map_.end()) return it->second;
  SuperId id = static_cast<SuperId>(supers_.size());
  supers_.emplace_back();
  root_map_.emplace(root, id);
  return id;
}

SuperId CoreGraph::super_of(VertexId v) { return materialize(forest_->find_root(v)); }

SuperId CoreGraph::try_super_of(VertexId v) const {
  auto it = root_map_.find(forest_->find_root(v));
  return it == root_map_.end() ? kNoSuper : it->second;
}

void CoreGraph::build(const std::vector<EdgeId>& base_edges) {
  clear();
  for (EdgeId e : base_edges) {
    const auto& ie = graph_->internal_edge(e);
    if (forest_->has_edge(ie.u, ie.v)) continue;  // forest edges contract away
    SuperId a = super_of(ie.u);
    SuperId b = super_of(ie.v);
    status_.emplace(e, std::minmax(a, b));
    if (a == b) {
      supers_[a].internal.push_back(e);
    } else {
      supers_[a].incident.push_back(e);
      supers_[b].incident.push_back(e);
      ++core_edge_count_;
    }
  }
}

bool CoreGraph::is_core_edge(EdgeId e) const {
  auto it = status_.find(e);
  return it != status_.end() && it->second.first != it->second.second;
}

std::pair<SuperId, SuperId> CoreGraph::endpoints(EdgeId e) const {
  auto it = status_.find(e);
  assert(it != status_.end());
  return it->second;
}

SuperId CoreGraph::other_endpoint(EdgeId e, SuperId s) const {
  auto [a, b] = endpoints(e);
  return a == s ? b : a;
}

std::optional<std::pair<SuperId, SuperId>> CoreGraph::on_base_insert(EdgeId e) {
  const auto& ie = graph_->internal_edge(e);
  assert(!status_.count(e));
  SuperId a = super_of(ie.u);
  SuperId b = super_of(ie.v);
  status_.emplace(e, std::minmax(a, b));
  if (a == b) {
    supers_[a].internal.push_back(e);
    return std::nullopt;
  }
  supers_[a].incident.push_back(e);
  supers_[b].incident.push_back(e);
  ++core_edge_count_;
  return std::make_pair(a, b);
}

void CoreGraph::drop_from(std::vector<EdgeId>& list, EdgeId e) {
  auto it = std::find(list.begin(), list.end(), e);
  assert(it != list.end());
  *it = list.back();
  list.pop_back();
}

void CoreGraph::on_base_delete(EdgeId e) {
  auto it = status_.find(e);
  if (it == status_.end()) return;
  auto [a, b] = it->second;
  if (a == b) {
    drop_from(supers_[a].internal, e);
  } else {
    drop_from(supers_[a].incident, e);
    drop_from(supers_[b].incident, e);
    --core_edge_count_;
  }
  status_.erase(it);
}

CoreGraph::SplitInfo CoreGraph::on_forest_cut(VertexId u, VertexId v, SuperId old_super) {
  SplitInfo info;
  info.old_super = old_super;
  if (old_super == kNoSuper) return info;  // nothing materialized on this tree

  VertexId ru = forest_->find_root(u);
  VertexId rv = forest_->find_root(v);
  assert(ru != rv);

  // retire the old super, hand out fresh ids for both sides
  Super old = std::move(supers_[old_super]);
  supers_[old_super].alive = false;
  supers_[old_super].incident.clear();
  supers_[old_super].internal.clear();
  // the old root key may coincide with ru or rv; overwrite below either way
  for (auto it = root_map_.begin(); it != root_map_.end();) {
    if (it->second == old_super)
      it = root_map_.erase(it);
    else
      ++it;
  }
  SuperId a = static_cast<SuperId>(supers_.size());
  supers_.emplace_back();
  root_map_.emplace(ru, a);
  SuperId b = static_cast<SuperId>(supers_.size());
  supers_.emplace_back();
  root_map_.emplace(rv, b);
  info.side_u = a;
  info.side_v = b;

  auto side_of = [&](VertexId x) {
    VertexId r = forest_->find_root(x);
    assert(r == ru || r == rv);
    return r == ru ? a : b;
  };

  for (EdgeId e : old.incident) {
    const auto& ie = graph_->internal_edge(e);
    auto& st = status_.at(e);
    SuperId far = st.first == old_super ? st.second : st.first;
    assert(far != old_super);
    // exactly one pre-image endpoint lay in the old tree
    VertexId r1 = forest_->find_root(ie.u);
    VertexId mine = (r1 == ru || r1 == rv) ? ie.u : ie.v;
    SuperId here = side_of(mine);
    st = {std::min(here, far), std::max(here, far)};
    supers_[here].incident.push_back(e);
    info.rehomed.push_back(e);
  }
  for (EdgeId e : old.internal) {
    const auto& ie = graph_->internal_edge(e);
    SuperId su = side_of(ie.u);
    SuperId sv = side_of(ie.v);
    auto& st = status_.at(e);
    if (su == sv) {
      st = {su, su};
      supers_[su].internal.push_back(e);
    } else {
      st = {std::min(su, sv), std::max(su, sv)};
      supers_[su].incident.push_back(e);
      supers_[sv].incident.push_back(e);
      ++core_edge_count_;
      info.materialized.push_back(e);
    }
  }
  return info;
}

std::vector<SuperId> CoreGraph::live_supers_sorted() const {
  std::vector<SuperId> out;
  for (SuperId s = 0; s < supers_.size(); ++s)
    if (supers_[s].alive) out.push_back(s);
  return out;
}

std::vector<EdgeId> CoreGraph::core_edges_sorted() const {
  std::vector<EdgeId> out;
  out.reserve(core_edge_count_);
  for (const auto& [e, st] : status_)
    if (st.first != st.second) out.push_back(e);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace dynconn
