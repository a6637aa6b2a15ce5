#include "dynconn/link_cut_forest.hpp"

#include <algorithm>
#include <cassert>

namespace dynconn {

void LinkCutForest::ensure_vertex(VertexId v) {
  if (v < nodes_.size()) return;
  nodes_.resize(v + 1);
  adj_.resize(v + 1);
  stamp_.resize(v + 1, 0);
  dfs_parent_.resize(v + 1, kNoVertex);
  down_marked_.resize(v + 1, 0);
  up_marked_.resize(v + 1, 0);
}

int LinkCutForest::dir(std::int32_t x) const {
  std::int32_t p = nodes_[x].parent;
  if (p < 0) return -1;
  if (nodes_[p].child[0] == x) return 0;
  if (nodes_[p].child[1] == x) return 1;
  return -1;  // path-parent
}

void LinkCutForest::push(std::int32_t x) {
  Node& n = nodes_[x];
  if (!n.flip) return;
  std::swap(n.child[0], n.child[1]);
  for (int d = 0; d < 2; ++d)
    if (n.child[d] >= 0) nodes_[n.child[d]].flip ^= 1;
  n.flip = false;
}

void LinkCutForest::update(std::int32_t x) {
  Node& n = nodes_[x];
  n.size = 1;
  for (int d = 0; d < 2; ++d)
    if (n.child[d] >= 0) n.size += nodes_[n.child[d]].size;
}

void LinkCutForest::attach(std::int32_t p, int d, std::int32_t c) {
  nodes_[p].child[d] = c;
  if (c >= 0) nodes_[c].parent = p;
}

void LinkCutForest::rotate(std::int32_t x) {
  std::int32_t y = nodes_[x].parent;
  std::int32_t z = nodes_[y].parent;
  int dx = dir(x);
  int dy = dir(y);
  attach(y, dx, nodes_[x].child[!dx]);
  attach(x, !dx, y);
  if (dy >= 0)
    attach(z, dy, x);
  else
    nodes_[x].parent = z;  // keep path-parent (or -1)
  update(y);
  update(x);
}

void LinkCutForest::splay(std::int32_t x) {
  while (dir(x) != -1) {
    std::int32_t y = nodes_[x].parent;
    std::int32_t z = nodes_[y].parent;
    if (dir(y) != -1) push(z);
    push(y);
    push(x);
    int dx = dir(x);
    int dy = dir(y);
    if (dy == -1) {
      rotate(x);
    } else if (dx == dy) {
      rotate(y);
      rotate(x);
    } else {
      rotate(x);
      rotate(x);
    }
  }
  push(x);
}

std::int32_t LinkCutForest::access(std::int32_t x) {
  std::int32_t last = -1;
  for (std::int32_t y = x; y >= 0; y = nodes_[y].parent) {
    splay(y);
    nodes_[y].child[1] = last;  // old right child becomes virtual
    if (last >= 0) nodes_[last].parent = y;
    update(y);
    last = y;
  }
  splay(x);
  return last;
}

void LinkCutForest::evert(std::int32_t x) {
  access(x);
  nodes_[x].flip ^= 1;
  push(x);
}

bool LinkCutForest::has_edge(VertexId u, VertexId v) const {
  if (u >= adj_.size() || v >= adj_.size()) return false;
  const auto& a = adj_[u];
  return std::find(a.begin(), a.end(), v) != a.end();
}

VertexId LinkCutForest::find_root(VertexId v) {
  access(v);
  std::int32_t r = v;
  push(r);
  while (nodes_[r].child[0] >= 0) {
    r = nodes_[r].child[0];
    push(r);
  }
  splay(r);
  return static_cast<VertexId>(r);
}

bool LinkCutForest::connected(VertexId u, VertexId v) {
  if (u == v) return true;
  if (u >= nodes_.size() || v >= nodes_.size()) return false;
  return find_root(u) == find_root(v);
}

void LinkCutForest::link(VertexId u, VertexId v) {
  ensure_vertex(std::max(u, v));
  if (u == v || connected(u, v)) throw DomainError("link would close a cycle");
  evert(u);
  access(v);
  nodes_[u].parent = v;
  adj_[u].push_back(v);
  adj_[v].push_back(u);
  ++edge_count_;
}

void LinkCutForest::cut(VertexId u, VertexId v) {
  if (!has_edge(u, v)) throw DomainError("cut of a non-forest edge");
  VertexId old_root = find_root(u);
  evert(u);
  access(v);
  push(v);
  std::int32_t left = nodes_[v].child[0];
  assert(left == static_cast<std::int32_t>(u));
  nodes_[v].child[0] = -1;
  nodes_[left].parent = -1;
  update(v);
  if (old_root != u && old_root != v) evert(old_root);
  auto drop = [](std::vector<VertexId>& a, VertexId x) {
    a.erase(std::find(a.begin(), a.end(), x));
  };
  drop(adj_[u], v);
  drop(adj_[v], u);
  --edge_count_;
}

std::size_t LinkCutForest::path_length(VertexId u, VertexId v) {
  if (!connected(u, v)) throw DomainError("path query on disconnected vertices");
  if (u == v) return 1;
  VertexId old_root = find_root(u);
  evert(u);
  access(v);
  std::size_t len = nodes_[v].size;
  evert(old_root);
  return len;
}

VertexId LinkCutForest::path_midpoint(VertexId u, VertexId v) {
  if (!connected(u, v)) throw DomainError("midpoint of disconnected vertices");
  if (u == v) return u;
  VertexId old_root = find_root(u);
  evert(u);
  access(v);
  std::int32_t x = v;
  push(x);
  std::uint32_t k = (nodes_[x].size - 1) / 2;  // 0-indexed position from u
  while (true) {
    push(x);
    std::int32_t l = nodes_[x].child[0];
    std::uint32_t ls = l >= 0 ? nodes_[l].size : 0;
    if (k < ls) {
      x = l;
    } else if (k == ls) {
      splay(x);
      evert(old_root);
      return static_cast<VertexId>(x);
    } else {
      k -= ls + 1;
      x = nodes_[x].child[1];
    }
  }
}

void LinkCutForest::dfs_tree(VertexId start) const {
  ++epoch_;
  dfs_order_.clear();
  dfs_order_.push_back(start);
  stamp_[start] = epoch_;
  dfs_parent_[start] = kNoVertex;
  for (std::size_t i = 0; i < dfs_order_.size(); ++i) {
    VertexId v = dfs_order_[i];
    for (VertexId w : adj_[v]) {
      if (stamp_[w] != epoch_) {
        stamp_[w] = epoch_;
        dfs_parent_[w] = v;
        dfs_order_.push_back(w);
      }
    }
  }
}

std::size_t LinkCutForest::component_size(VertexId u) const {
  dfs_tree(u);
  return dfs_order_.size();
}

std::uint64_t LinkCutForest::component_volume(
    VertexId u, const std::function<std::uint64_t(VertexId)>& deg) const {
  dfs_tree(u);
  std::uint64_t total = 0;
  for (VertexId v : dfs_order_) total += deg(v);
  return total;
}

std::vector<VertexId> LinkCutForest::tree_vertices(VertexId u) const {
  dfs_tree(u);
  return dfs_order_;
}

std::vector<VertexId> LinkCutForest::branch_free_set(const std::vector<VertexId>& marked) const {
  std::vector<VertexId> result;
  if (marked.empty()) return result;
  std::vector<VertexId> ms(marked);
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());

  std::vector<std::uint8_t> is_marked(nodes_.size(), 0);
  for (VertexId m : ms) is_marked[m] = 1;

  std::vector<std::uint8_t> done(nodes_.size(), 0);
  for (VertexId s : ms) {
    if (done[s]) continue;
    dfs_tree(s);  // fills dfs_order_ (preorder) and dfs_parent_
    const auto& order = dfs_order_;
    for (VertexId v : order) done[v] = 1;
    // down_marked_[v]: any marked vertex in v's rooted subtree
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      VertexId v = *it;
      std::uint8_t any = is_marked[v];
      for (VertexId w : adj_[v])
        if (w != dfs_parent_[v]) any |= down_marked_[w];
      down_marked_[v] = any;
    }
    // up_marked_[v]: any marked vertex outside v's rooted subtree
    for (VertexId v : order) {
      VertexId p = dfs_parent_[v];
      if (p == kNoVertex) {
        up_marked_[v] = 0;
        continue;
      }
      std::uint8_t any = static_cast<std::uint8_t>(up_marked_[p] | is_marked[p]);
      if (!any) {
        for (VertexId w : adj_[p]) {
          if (w == dfs_parent_[p] || w == v) continue;
          any |= down_marked_[w];
          if (any) break;
        }
      }
      up_marked_[v] = any;
    }
    for (VertexId v : order) {
      if (is_marked[v]) {
        result.push_back(v);
        continue;
      }
      int dirs = 0;
      for (VertexId w : adj_[v]) {
        if (w == dfs_parent_[v])
          dirs += up_marked_[v] ? 1 : 0;
        else
          dirs += down_marked_[w] ? 1 : 0;
      }
      if (dirs >= 3) result.push_back(v);
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

std::vector<std::pair<VertexId, VertexId>> LinkCutForest::edges() const {
  std::vector<std::pair<VertexId, VertexId>> out;
  out.reserve(edge_count_);
  for (VertexId v = 0; v < adj_.size(); ++v)
    for (VertexId w : adj_[v])
      if (v < w) out.emplace_back(v, w);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace dynconn
