#include "dynconn/shattering.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_map>

namespace dynconn {

std::vector<std::size_t> tree_cluster(std::size_t n,
                                      const std::vector<std::pair<VertexId, VertexId>>& edges,
                                      std::uint32_t z) {
  if (z == 0) throw DomainError("tree_cluster: z must be positive");
  if (n < 3 * static_cast<std::size_t>(z) - 2)
    throw DomainError("tree_cluster: tree smaller than 3z-2");
  assert(edges.size() + 1 == n);
  std::vector<std::vector<std::pair<VertexId, std::size_t>>> adj(n);  // (neighbor, edge idx)
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto [u, v] = edges[i];
    adj[u].emplace_back(v, i);
    adj[v].emplace_back(u, i);
    if (adj[u].size() > 3 || adj[v].size() > 3)
      throw DomainError("tree_cluster: degree above 3");
  }
  if (n == 1) return {};

  // root at the smallest vertex of degree <= 2 so every vertex has <= 2
  // children; an open bucket then never exceeds 2z-1 before it closes
  VertexId root = kNoVertex;
  for (VertexId v = 0; v < n; ++v)
    if (adj[v].size() <= 2) {
      root = v;
      break;
    }
  assert(root != kNoVertex);

  std::vector<VertexId> parent(n, kNoVertex);
  std::vector<std::size_t> parent_edge(n, 0);
  std::vector<VertexId> order;
  order.reserve(n);
  order.push_back(root);
  for (std::size_t i = 0; i < order.size(); ++i) {
    VertexId v = order[i];
    for (auto [w, idx] : adj[v]) {
      if (w == parent[v] && v != root) continue;
      if (w == root || parent[w] != kNoVertex) continue;
      parent[w] = v;
      parent_edge[w] = idx;
      order.push_back(w);
    }
  }
  assert(order.size() == n);

  std::vector<std::uint32_t> open(n, 1);
  std::vector<std::size_t> cuts;             // edge indexes, in cut order
  std::vector<std::uint32_t> cut_size;       // closed cluster size per cut
  std::vector<VertexId> cut_parent;          // parent-side vertex per cut
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    VertexId v = *it;
    if (v == root) continue;
    if (open[v] >= z) {
      cuts.push_back(parent_edge[v]);
      cut_size.push_back(open[v]);
      cut_parent.push_back(parent[v]);
    } else {
      open[parent[v]] += open[v];
    }
  }

  if (open[root] < z) {
    // merge the leftover with the most recent closed cluster hanging off it
    std::vector<std::uint8_t> residual(n, 0);
    // residual component: vertices still open up to the root
    // walk the order: v is residual iff v == root or (parent edge not cut and parent residual)
    std::vector<std::uint8_t> edge_cut(edges.size(), 0);
    for (std::size_t i : cuts) edge_cut[i] = 1;
    residual[root] = 1;
    for (VertexId v : order) {
      if (v == root) continue;
      residual[v] = static_cast<std::uint8_t>(residual[parent[v]] && !edge_cut[parent_edge[v]]);
    }
    std::size_t merge_at = cuts.size();
    for (std::size_t i = cuts.size(); i-- > 0;) {
      if (residual[cut_parent[i]]) {
        merge_at = i;
        break;
      }
    }
    assert(merge_at < cuts.size() && "no cut adjacent to the residual component");
    assert(open[root] + cut_size[merge_at] <= 3 * z - 2);
    cuts.erase(cuts.begin() + merge_at);
  }
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

ReinitResult reinit_forest(const LinkCutForest& f_prev,
                           const std::vector<std::pair<VertexId, VertexId>>& h_pairs,
                           const ShatterConfig& cfg, std::size_t* work_units) {
  ReinitResult out;
  out.stats.h_edges = h_pairs.size();
  std::size_t units = 0;
  if (h_pairs.empty()) {
    if (work_units) *work_units += 1;
    return out;  // nothing to shatter around: forest unchanged
  }
  if (cfg.kappa < 9) throw DomainError("reinit_forest: kappa must be at least 9");

  std::vector<VertexId> marked;
  marked.reserve(2 * h_pairs.size());
  for (auto [u, v] : h_pairs) {
    marked.push_back(u);
    marked.push_back(v);
  }
  std::sort(marked.begin(), marked.end());
  marked.erase(std::unique(marked.begin(), marked.end()), marked.end());
  out.stats.marked = marked.size();

  std::vector<VertexId> b = f_prev.branch_free_set(marked);
  out.stats.branch_free = b.size();
  units += b.size() + marked.size();

  auto in_b = [&](VertexId v) { return std::binary_search(b.begin(), b.end(), v); };

  // One aux node (blob) per vertex of b. A forest segment between two b
  // vertices loses exactly one boundary edge (toward the smaller b id) and
  // merges into the other blob; a segment dangling off a single b vertex
  // keeps its edge and merges without cost. Direct b-b edges are removed.
  // This keeps every blob's aux degree within 3 and the aux edge count
  // within |h| + (number of b-adjacencies cut) <= 5 |h|.
  std::unordered_map<VertexId, std::uint32_t> blob_of_b;
  std::uint32_t aux_n = 0;
  for (VertexId v : b) blob_of_b.emplace(v, aux_n++);

  struct Segment {
    std::vector<std::pair<VertexId, VertexId>> boundary;  // (b vertex, segment vertex)
  };
  std::unordered_map<VertexId, VertexId> seg_rep;  // segment vertex -> representative
  std::unordered_map<VertexId, Segment> segments;  // representative -> info
  std::vector<VertexId> stack;
  auto segment_of = [&](VertexId w) {
    auto it = seg_rep.find(w);
    if (it != seg_rep.end()) return it->second;
    stack.assign(1, w);
    seg_rep.emplace(w, w);
    Segment seg;
    while (!stack.empty()) {
      VertexId x = stack.back();
      stack.pop_back();
      ++units;
      for (VertexId y : f_prev.neighbors(x)) {
        if (in_b(y)) {
          seg.boundary.emplace_back(y, x);
          continue;
        }
        if (seg_rep.count(y)) continue;
        seg_rep.emplace(y, w);
        stack.push_back(y);
      }
    }
    std::sort(seg.boundary.begin(), seg.boundary.end());
    assert(seg.boundary.size() <= 2 && "segment with three attachment points");
    segments.emplace(w, std::move(seg));
    return w;
  };
  // blob lookup for any vertex on an aux edge
  auto blob_for = [&](VertexId v) -> std::uint32_t {
    if (in_b(v)) return blob_of_b.at(v);
    VertexId rep = segment_of(v);
    const Segment& seg = segments.at(rep);
    // host = the larger-id b endpoint (its boundary edge is the kept one);
    // dangling segments attach to their unique neighbor
    return blob_of_b.at(seg.boundary.back().first);
  };

  std::vector<std::pair<VertexId, VertexId>> h_canon;
  h_canon.reserve(h_pairs.size());
  for (auto [u, v] : h_pairs) h_canon.emplace_back(std::min(u, v), std::max(u, v));
  std::sort(h_canon.begin(), h_canon.end());
  h_canon.erase(std::unique(h_canon.begin(), h_canon.end()), h_canon.end());

  struct AuxEdge {
    std::uint32_t a, b;
    std::pair<VertexId, VertexId> pre;
  };
  std::vector<AuxEdge> aux_edges;
  for (VertexId v : b) {
    for (VertexId w : f_prev.neighbors(v)) {
      ++units;
      if (in_b(w)) {
        if (w < v) continue;  // handle each b-b edge once
        auto p = std::make_pair(std::min(v, w), std::max(v, w));
        out.removals.push_back(p);
        if (!std::binary_search(h_canon.begin(), h_canon.end(), p))
          aux_edges.push_back({blob_of_b.at(v), blob_of_b.at(w), p});
        continue;
      }
      VertexId rep = segment_of(w);
      const Segment& seg = segments.at(rep);
      if (seg.boundary.size() == 1) continue;  // dangling subtree stays attached
      // two-boundary segment: cut the smaller-id side, keep the larger
      auto [cut_b, cut_w] = seg.boundary.front();
      if (cut_b != v || cut_w != w) continue;  // not our end, or kept end
      auto p = std::make_pair(std::min(cut_b, cut_w), std::max(cut_b, cut_w));
      out.removals.push_back(p);
      VertexId host = seg.boundary.back().first;
      aux_edges.push_back({blob_of_b.at(v), blob_of_b.at(host), p});
    }
  }
  // reference edges always cross two distinct blobs
  for (auto p : h_canon) {
    ++units;
    aux_edges.push_back({blob_for(p.first), blob_for(p.second), p});
  }
  std::sort(out.removals.begin(), out.removals.end());
  out.removals.erase(std::unique(out.removals.begin(), out.removals.end()), out.removals.end());

  out.stats.aux_vertices = aux_n;
  out.stats.aux_edges = aux_edges.size();

  // deterministic maximal spanning forest of the aux graph
  std::vector<std::vector<std::pair<std::uint32_t, std::size_t>>> aux_adj(aux_n);
  for (std::size_t i = 0; i < aux_edges.size(); ++i) {
    aux_adj[aux_edges[i].a].emplace_back(aux_edges[i].b, i);
    aux_adj[aux_edges[i].b].emplace_back(aux_edges[i].a, i);
  }
  for (const auto& a : aux_adj) out.stats.aux_max_degree = std::max(out.stats.aux_max_degree, a.size());

  std::vector<std::uint8_t> seen(aux_n, 0);
  std::vector<std::int32_t> comp(aux_n, -1);
  std::vector<std::vector<std::size_t>> comp_tree_edges;  // aux edge idx per component
  std::vector<std::vector<std::uint32_t>> comp_nodes;
  for (std::uint32_t s = 0; s < aux_n; ++s) {
    if (seen[s]) continue;
    std::int32_t c = static_cast<std::int32_t>(comp_tree_edges.size());
    comp_tree_edges.emplace_back();
    comp_nodes.emplace_back();
    seen[s] = 1;
    comp[s] = c;
    std::vector<std::uint32_t> dfs{s};
    comp_nodes[c].push_back(s);
    while (!dfs.empty()) {
      std::uint32_t v = dfs.back();
      dfs.pop_back();
      ++units;
      for (auto [w, idx] : aux_adj[v]) {
        if (seen[w]) continue;
        seen[w] = 1;
        comp[w] = c;
        comp_nodes[c].push_back(w);
        comp_tree_edges[c].push_back(idx);
        dfs.push_back(w);
      }
    }
  }

  const std::uint32_t z = cfg.z();
  for (std::size_t c = 0; c < comp_tree_edges.size(); ++c) {
    const auto& nodes = comp_nodes[c];
    const auto& tree = comp_tree_edges[c];
    std::vector<std::uint8_t> keep(tree.size(), 1);
    if (nodes.size() >= 3 * static_cast<std::size_t>(z) - 2 && z >= 1) {
      // relabel to [0, |nodes|) for the clustering call
      std::unordered_map<std::uint32_t, VertexId> local;
      local.reserve(nodes.size());
      for (std::uint32_t i = 0; i < nodes.size(); ++i) local.emplace(nodes[i], i);
      std::vector<std::pair<VertexId, VertexId>> local_edges;
      local_edges.reserve(tree.size());
      for (std::size_t idx : tree)
        local_edges.emplace_back(local.at(aux_edges[idx].a), local.at(aux_edges[idx].b));
      auto cuts = tree_cluster(nodes.size(), local_edges, z);
      for (std::size_t cut : cuts) keep[cut] = 0;
      ++out.stats.clustered_trees;
      out.stats.cluster_cuts += cuts.size();
      units += nodes.size();
    }
    for (std::size_t i = 0; i < tree.size(); ++i)
      if (keep[i]) out.additions.push_back(aux_edges[tree[i]].pre);
  }

  // net out pairs both removed and re-added
  std::sort(out.additions.begin(), out.additions.end());
  out.additions.erase(std::unique(out.additions.begin(), out.additions.end()), out.additions.end());
  std::vector<std::pair<VertexId, VertexId>> net_rm, net_add;
  std::set_difference(out.removals.begin(), out.removals.end(), out.additions.begin(),
                      out.additions.end(), std::back_inserter(net_rm));
  std::set_difference(out.additions.begin(), out.additions.end(), out.removals.begin(),
                      out.removals.end(), std::back_inserter(net_add));
  out.removals = std::move(net_rm);
  out.additions = std::move(net_add);

  if (work_units) *work_units += units;
  return out;
}

}  // namespace dynconn
