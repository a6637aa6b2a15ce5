#include "dynconn/sparsifier.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

namespace dynconn {

void Sparsifier::add_to_h(EdgeId e, std::vector<EdgeId>& delta) {
  if (h_.insert(e).second) {
    delta.push_back(e);
    if (cfg_.strategy == Strategy::kEmbedding) set_self_path(e);
  }
}

void Sparsifier::set_self_path(EdgeId e) {
  auto it = paths_.find(e);
  if (it != paths_.end()) {
    for (EdgeId h : it->second)
      if (h != e) carried_[h].erase(e);
  }
  paths_[e] = {e};
}

void Sparsifier::drop_path(EdgeId e) {
  auto it = paths_.find(e);
  if (it == paths_.end()) return;
  for (EdgeId h : it->second)
    if (h != e) carried_[h].erase(e);
  paths_.erase(it);
  carried_.erase(e);
}

std::vector<EdgeId> Sparsifier::holders_of(EdgeId h_edge) const {
  std::vector<EdgeId> out;
  auto it = carried_.find(h_edge);
  if (it == carried_.end()) return out;
  out.assign(it->second.begin(), it->second.end());
  std::sort(out.begin(), out.end());
  return out;
}

void Sparsifier::rebuild(CoreGraph& core, std::uint64_t seed, std::size_t* work) {
  h_.clear();
  parts_.clear();
  part_of_.clear();
  paths_.clear();
  carried_.clear();
  congestion_ = 0;

  // vertex set: supers touched by core edges (isolated trees stay implicit)
  std::vector<EdgeId> core_edges = core.core_edges_sorted();
  std::vector<SuperId> supers;
  for (EdgeId e : core_edges) {
    auto [a, b] = core.endpoints(e);
    supers.push_back(a);
    supers.push_back(b);
  }
  std::sort(supers.begin(), supers.end());
  supers.erase(std::unique(supers.begin(), supers.end()), supers.end());
  std::unordered_map<SuperId, std::uint32_t> global_local;
  for (std::uint32_t i = 0; i < supers.size(); ++i) global_local.emplace(supers[i], i);

  LocalGraph lg;
  lg.n = supers.size();
  for (EdgeId e : core_edges) {
    auto [a, b] = core.endpoints(e);
    lg.edges.emplace_back(global_local.at(a), global_local.at(b));
  }
  auto dec = decompose(lg, cfg_.phi_sparse, seed, cfg_.decompose, work);

  std::vector<std::uint32_t> part_index(lg.n, 0);
  for (std::uint32_t p = 0; p < dec.parts.size(); ++p)
    for (std::uint32_t v : dec.parts[p].vertices) part_index[v] = p;

  parts_.resize(dec.parts.size());
  for (std::uint32_t p = 0; p < dec.parts.size(); ++p) {
    Part& part = parts_[p];
    for (std::uint32_t lv : dec.parts[p].vertices) {
      SuperId s = supers[lv];
      part.local.emplace(s, static_cast<std::uint32_t>(part.members.size()));
      part.members.push_back(s);
      part_of_.emplace(s, p);
    }
    part.incident.resize(part.members.size());
    part.member_gone.assign(part.members.size(), 0);
  }
  // distribute edges: in-part vs crossing
  for (std::size_t i = 0; i < core_edges.size(); ++i) {
    EdgeId e = core_edges[i];
    auto [la, lb] = lg.edges[i];
    if (part_index[la] != part_index[lb]) {
      h_.insert(e);  // crossing edge
      continue;
    }
    Part& part = parts_[part_index[la]];
    std::size_t idx = part.edges.size();
    part.edges.emplace_back(part.local.at(supers[la]), part.local.at(supers[lb]));
    part.edge_ids.push_back(e);
    part.edge_alive.push_back(1);
    part.in_tree.push_back(0);
    part.incident[part.edges[idx].first].push_back(idx);
    part.incident[part.edges[idx].second].push_back(idx);
  }
  // spanning tree per part (BFS from local 0), pruning state, reference H
  for (std::uint32_t p = 0; p < parts_.size(); ++p) {
    Part& part = parts_[p];
    const std::size_t k = part.members.size();
    if (k > 1) {
      std::vector<std::uint8_t> seen(k, 0);
      std::vector<std::uint32_t> queue{0};
      seen[0] = 1;
      std::size_t reached = 1;
      for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        std::uint32_t v = queue[qi];
        for (std::size_t idx : part.incident[v]) {
          std::uint32_t w = part.edges[idx].first == v ? part.edges[idx].second : part.edges[idx].first;
          if (seen[w]) continue;
          seen[w] = 1;
          ++reached;
          part.in_tree[idx] = 1;
          h_.insert(part.edge_ids[idx]);
          queue.push_back(w);
        }
      }
      if (reached != k) throw RestartSignal("expander part came back disconnected");
    }
    LocalGraph pg;
    pg.n = k;
    for (auto [a, b] : part.edges) pg.edges.emplace_back(a, b);
    part.pruning = PruningState(pg, cfg_.phi_sparse, cfg_.gamma_prune);
    if (work) *work += k + part.edges.size();
  }

  if (cfg_.strategy == Strategy::kEmbedding) {
    // every H edge carries itself; every in-part non-tree edge routes
    // through its part's tree
    for (EdgeId e : h_) paths_[e] = {e};
    for (Part& part : parts_) {
      const std::size_t k = part.members.size();
      if (k <= 1) continue;
      // tree adjacency for path extraction
      std::vector<std::vector<std::pair<std::uint32_t, std::size_t>>> tadj(k);
      for (std::size_t idx = 0; idx < part.edges.size(); ++idx)
        if (part.in_tree[idx]) {
          tadj[part.edges[idx].first].emplace_back(part.edges[idx].second, idx);
          tadj[part.edges[idx].second].emplace_back(part.edges[idx].first, idx);
        }
      std::vector<std::uint32_t> parent(k, kNoVertex);
      std::vector<std::size_t> parent_edge(k, 0);
      std::vector<std::uint32_t> order{0};
      parent[0] = 0;
      for (std::size_t qi = 0; qi < order.size(); ++qi)
        for (auto [w, idx] : tadj[order[qi]])
          if (parent[w] == kNoVertex) {
            parent[w] = order[qi];
            parent_edge[w] = idx;
            order.push_back(w);
          }
      std::vector<std::uint32_t> depth(k, 0);
      for (std::size_t qi = 1; qi < order.size(); ++qi)
        depth[order[qi]] = depth[parent[order[qi]]] + 1;
      for (std::size_t idx = 0; idx < part.edges.size(); ++idx) {
        if (part.in_tree[idx]) continue;
        auto [x, y] = part.edges[idx];
        std::vector<EdgeId> up, down;
        std::uint32_t a = x, b = y;
        while (depth[a] > depth[b]) {
          up.push_back(part.edge_ids[parent_edge[a]]);
          a = parent[a];
        }
        while (depth[b] > depth[a]) {
          down.push_back(part.edge_ids[parent_edge[b]]);
          b = parent[b];
        }
        while (a != b) {
          up.push_back(part.edge_ids[parent_edge[a]]);
          down.push_back(part.edge_ids[parent_edge[b]]);
          a = parent[a];
          b = parent[b];
        }
        std::reverse(down.begin(), down.end());
        up.insert(up.end(), down.begin(), down.end());
        EdgeId e = part.edge_ids[idx];
        for (EdgeId h : up) carried_[h].insert(e);
        paths_[e] = std::move(up);
        if (work) *work += paths_[e].size();
      }
    }
    for (const auto& [h, set] : carried_) congestion_ = std::max(congestion_, set.size());
  }
}

bool Sparsifier::handle_insertion(EdgeId e, const std::optional<std::pair<SuperId, SuperId>>& image) {
  if (!image.has_value()) return false;
  bool added = h_.insert(e).second;
  assert(added);
  if (cfg_.strategy == Strategy::kEmbedding) set_self_path(e);
  return added;
}

void Sparsifier::retire_part(std::size_t j, std::vector<EdgeId>& delta, SparsifierCounters& ctr) {
  Part& part = parts_[j];
  if (part.retired) return;
  part.retired = true;
  ++ctr.retired_parts;
  for (std::size_t idx = 0; idx < part.edges.size(); ++idx)
    if (part.edge_alive[idx]) add_to_h(part.edge_ids[idx], delta);
}

void Sparsifier::add_extra_edges(std::size_t j, std::vector<EdgeId>& delta) {
  Part& part = parts_[j];
  double raw = 2.0 * cfg_.gamma_prune * static_cast<double>(cfg_.kappa) / cfg_.phi_sparse;
  std::size_t want = raw > 1e9 ? static_cast<std::size_t>(1e9) : static_cast<std::size_t>(raw);
  if (want == 0) return;
  // lowest-id D̂ edges not yet in H, endpoints still present
  std::vector<std::size_t> order(part.edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return part.edge_ids[a] < part.edge_ids[b]; });
  for (std::size_t idx : order) {
    if (want == 0) break;
    if (!part.edge_alive[idx] || h_.count(part.edge_ids[idx])) continue;
    add_to_h(part.edge_ids[idx], delta);
    --want;
  }
}

void Sparsifier::repair_tree(std::size_t j, std::vector<EdgeId>& delta, Rng& rng,
                             SparsifierCounters& ctr) {
  Part& part = parts_[j];
  const std::size_t k = part.members.size();
  while (true) {
    // components of the current tree over surviving members
    std::vector<std::int32_t> comp(k, -1);
    std::vector<std::vector<std::uint32_t>> tadj(k);
    for (std::size_t idx = 0; idx < part.edges.size(); ++idx)
      if (part.edge_alive[idx] && part.in_tree[idx]) {
        tadj[part.edges[idx].first].push_back(part.edges[idx].second);
        tadj[part.edges[idx].second].push_back(part.edges[idx].first);
      }
    std::vector<std::size_t> comp_size;
    for (std::uint32_t s = 0; s < k; ++s) {
      if (part.member_gone[s] || comp[s] != -1) continue;
      std::int32_t c = static_cast<std::int32_t>(comp_size.size());
      comp_size.push_back(0);
      std::vector<std::uint32_t> stack{s};
      comp[s] = c;
      while (!stack.empty()) {
        std::uint32_t v = stack.back();
        stack.pop_back();
        ++comp_size[c];
        for (std::uint32_t w : tadj[v])
          if (!part.member_gone[w] && comp[w] == -1) {
            comp[w] = c;
            stack.push_back(w);
          }
      }
    }
    if (comp_size.size() <= 1) return;
    // smallest component (ties to the lower component id, deterministic)
    std::size_t c1 = 0;
    for (std::size_t c = 1; c < comp_size.size(); ++c)
      if (comp_size[c] < comp_size[c1]) c1 = c;
    // candidate edges: alive, incident to c1
    std::vector<std::size_t> candidates;
    bool any_leaving = false;
    for (std::uint32_t v = 0; v < k; ++v) {
      if (part.member_gone[v] || comp[v] != static_cast<std::int32_t>(c1)) continue;
      for (std::size_t idx : part.incident[v]) {
        if (!part.edge_alive[idx]) continue;
        std::uint32_t w = part.edges[idx].first == v ? part.edges[idx].second : part.edges[idx].first;
        if (part.member_gone[w]) continue;
        candidates.push_back(idx);
        if (comp[w] != static_cast<std::int32_t>(c1)) any_leaving = true;
      }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    if (candidates.empty() || !any_leaving) {
      ++ctr.restarts_signaled;
      throw RestartSignal("tree repair found no edge leaving the smallest component");
    }
    double phi = std::max(cfg_.phi_sparse, 1e-9);
    double cap_f = cfg_.restart_attempt_factor * std::log2(static_cast<double>(k + 2)) *
                   cfg_.gamma_prune / phi;
    std::size_t cap = cap_f > 1e7 ? static_cast<std::size_t>(1e7)
                                  : std::max<std::size_t>(16, static_cast<std::size_t>(cap_f));
    std::size_t attempts = 0;
    while (true) {
      if (++attempts > cap) {
        ++ctr.restarts_signaled;
        throw RestartSignal("tree repair sampling exceeded its attempt cap");
      }
      ++ctr.sampling_attempts;
      std::size_t idx = candidates[rand_below(rng, candidates.size())];
      std::uint32_t a = part.edges[idx].first, b = part.edges[idx].second;
      if (comp[a] == comp[b]) continue;  // stays inside c1 (both endpoints sampled in c1 side)
      part.in_tree[idx] = 1;
      add_to_h(part.edge_ids[idx], delta);
      ++ctr.tree_repairs;
      break;
    }
  }
}

void Sparsifier::detach_part_edge(EdgeId e, SuperId endpoint) {
  auto it = part_of_.find(endpoint);
  if (it == part_of_.end()) return;
  Part& part = parts_[it->second];
  for (std::size_t idx = 0; idx < part.edge_ids.size(); ++idx) {
    if (part.edge_ids[idx] != e) continue;
    part.edge_alive[idx] = 0;
    part.in_tree[idx] = 0;
    return;
  }
}

void Sparsifier::process_super_removal(SuperId z, std::vector<EdgeId>& delta, Rng& rng,
                                       SparsifierCounters& ctr) {
  auto it = part_of_.find(z);
  if (it == part_of_.end()) return;
  std::size_t j = it->second;
  Part& part = parts_[j];
  if (part.retired) return;
  std::uint32_t lz = part.local.at(z);
  if (part.member_gone[lz]) return;

  // feed the pruning state every still-alive part edge at z, one deletion at
  // a time; endpoints pruned mid-batch drop out of the batch
  std::vector<std::size_t> batch;
  for (std::size_t idx : part.incident[lz])
    if (part.edge_alive[idx]) batch.push_back(idx);
  std::sort(batch.begin(), batch.end());

  std::vector<std::uint32_t> pruned_now;
  bool exceeded = false;
  for (std::size_t idx : batch) {
    auto [a, b] = part.edges[idx];
    if (part.pruning.pruned(a) || part.pruning.pruned(b)) {
      part.edge_alive[idx] = 0;  // already detached by an earlier cascade
      continue;
    }
    ++ctr.prune_feeds;
    auto r = part.pruning.on_delete(a, b);
    part.edge_alive[idx] = 0;
    for (std::uint32_t v : r.delta) pruned_now.push_back(v);
    if (r.status == PruningState::Result::kBudgetExceeded) {
      exceeded = true;
      break;
    }
  }
  if (exceeded) {
    retire_part(j, delta, ctr);
    return;
  }
  // z itself always leaves the part; trimming reaches it once its degree hits
  // zero, but guard for the parallel-edge-free corner where it had none
  if (!part.pruning.pruned(lz)) pruned_now.push_back(lz);
  std::sort(pruned_now.begin(), pruned_now.end());
  pruned_now.erase(std::unique(pruned_now.begin(), pruned_now.end()), pruned_now.end());
  ctr.pruned_vertices += pruned_now.size();

  // edges incident to the pruned set join H, then leave the part
  for (std::uint32_t v : pruned_now) {
    part.member_gone[v] = 1;
    for (std::size_t idx : part.incident[v]) {
      if (!part.edge_alive[idx]) continue;
      ++ctr.pruned_volume;
      add_to_h(part.edge_ids[idx], delta);
    }
  }
  for (std::uint32_t v : pruned_now)
    for (std::size_t idx : part.incident[v])
      if (part.edge_alive[idx] && (part.member_gone[part.edges[idx].first] ||
                                   part.member_gone[part.edges[idx].second])) {
        part.edge_alive[idx] = 0;
        part.in_tree[idx] = 0;  // induced out of the tree, kept in H
      }

  add_extra_edges(j, delta);
  repair_tree(j, delta, rng, ctr);
}

std::vector<EdgeId> Sparsifier::handle_core_deletion(CoreGraph& core, EdgeId e, SuperId a,
                                                     SuperId b, Rng& rng,
                                                     SparsifierCounters& ctr) {
  std::vector<EdgeId> delta;
  if (cfg_.strategy == Strategy::kEmbedding) {
    // deterministic rule: re-add everything routed over the deleted edge
    for (EdgeId holder : holders_of(e)) {
      if (holder == e) continue;
      add_to_h(holder, delta);
    }
    drop_path(e);
    detach_part_edge(e, a);
    return delta;
  }
  // the deleted edge is gone from the base; detach its part entry first so
  // the pruning feed and retirements never resurrect it
  detach_part_edge(e, a);
  // simulate both endpoint supers leaving their parts, then re-add their
  // remaining core edges
  process_super_removal(a, delta, rng, ctr);
  if (b != a) process_super_removal(b, delta, rng, ctr);
  for (SuperId z : {a, b}) {
    if (!core.super_alive(z)) continue;
    for (EdgeId inc : core.incident(z)) add_to_h(inc, delta);
    if (b == a) break;
  }
  return delta;
}

std::vector<EdgeId> Sparsifier::handle_forest_cut(CoreGraph& core,
                                                  const CoreGraph::SplitInfo& split, Rng& rng,
                                                  SparsifierCounters& ctr) {
  std::vector<EdgeId> delta;
  if (split.old_super == kNoSuper) return delta;
  if (cfg_.strategy == Strategy::kEmbedding) {
    // paths through the split super-vertex may no longer be walks; re-add
    // every edge routed over any of its former incident edges
    std::vector<EdgeId> broken;
    for (EdgeId h : split.rehomed)
      for (EdgeId holder : holders_of(h))
        if (holder != h) broken.push_back(holder);
    std::sort(broken.begin(), broken.end());
    broken.erase(std::unique(broken.begin(), broken.end()), broken.end());
    for (EdgeId e : broken) add_to_h(e, delta);
    for (SuperId z : {split.side_u, split.side_v})
      for (EdgeId inc : core.incident(z)) add_to_h(inc, delta);
    return delta;
  }
  process_super_removal(split.old_super, delta, rng, ctr);
  for (SuperId z : {split.side_u, split.side_v})
    for (EdgeId inc : core.incident(z)) add_to_h(inc, delta);
  return delta;
}

std::vector<EdgeId> Sparsifier::h_sorted() const {
  std::vector<EdgeId> out(h_.begin(), h_.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t Sparsifier::live_part_count() const {
  std::size_t n = 0;
  for (const Part& p : parts_)
    if (!p.retired && p.members.size() > 1) ++n;
  return n;
}

std::vector<EdgeId> Sparsifier::largest_live_part_edges() const {
  const Part* best = nullptr;
  for (const Part& p : parts_) {
    if (p.retired) continue;
    std::size_t alive = std::count(p.edge_alive.begin(), p.edge_alive.end(), 1);
    if (alive == 0) continue;
    if (!best || alive > static_cast<std::size_t>(
                             std::count(best->edge_alive.begin(), best->edge_alive.end(), 1)))
      best = &p;
  }
  std::vector<EdgeId> out;
  if (!best) return out;
  for (std::size_t idx = 0; idx < best->edges.size(); ++idx)
    if (best->edge_alive[idx]) out.push_back(best->edge_ids[idx]);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t Sparsifier::load_of(EdgeId e) const {
  auto it = carried_.find(e);
  if (it == carried_.end()) return 0;
  std::size_t n = it->second.size();
  if (it->second.count(e)) --n;  // self paths never count toward load
  return n;
}

const std::vector<EdgeId>* Sparsifier::path_of(EdgeId e) const {
  auto it = paths_.find(e);
  return it == paths_.end() ? nullptr : &it->second;
}

std::size_t Sparsifier::measured_congestion() const { return congestion_; }

std::uint64_t Sparsifier::path_length_sum() const {
  std::uint64_t total = 0;
  for (const auto& [e, p] : paths_) total += p.size();
  return total;
}

std::size_t Sparsifier::self_path_count() const {
  std::size_t n = 0;
  for (const auto& [e, p] : paths_)
    if (p.size() == 1 && p[0] == e) ++n;
  return n;
}

std::size_t Sparsifier::path_count() const { return paths_.size(); }

}  // namespace dynconn
