#include "dynconn/expander.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

namespace dynconn {

std::vector<std::vector<std::pair<std::uint32_t, std::size_t>>> LocalGraph::adjacency() const {
  std::vector<std::vector<std::pair<std::uint32_t, std::size_t>>> adj(n);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    adj[edges[i].first].emplace_back(edges[i].second, i);
    adj[edges[i].second].emplace_back(edges[i].first, i);
  }
  return adj;
}

std::vector<std::size_t> LocalGraph::degrees() const {
  std::vector<std::size_t> deg(n, 0);
  for (auto [u, v] : edges) {
    ++deg[u];
    ++deg[v];
  }
  return deg;
}

double Conductance::value() const {
  if (infinite()) return std::numeric_limits<double>::infinity();
  return static_cast<double>(cut) / static_cast<double>(vol);
}

bool Conductance::operator<(const Conductance& o) const {
  if (infinite()) return false;
  if (o.infinite()) return true;
  return static_cast<unsigned __int128>(cut) * o.vol < static_cast<unsigned __int128>(o.cut) * vol;
}

bool Conductance::at_least(double phi) const {
  if (infinite()) return true;
  return static_cast<double>(cut) >= phi * static_cast<double>(vol) - 1e-12;
}

namespace {

struct SubsetScan {
  Conductance best{0, 0};
  std::uint32_t best_mask = 0;
};

// exhaustive sparsest cut over the induced subgraph on `part`
SubsetScan scan_cuts(const LocalGraph& g, const std::vector<std::uint32_t>& part) {
  const std::size_t k = part.size();
  std::vector<std::uint32_t> local(g.n, kNoVertex);
  for (std::uint32_t i = 0; i < k; ++i) local[part[i]] = i;
  // induced edges as local index pairs
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (auto [u, v] : g.edges) {
    if (local[u] == kNoVertex || local[v] == kNoVertex) continue;
    edges.emplace_back(local[u], local[v]);
  }
  std::vector<std::uint64_t> deg(k, 0);
  for (auto [u, v] : edges) {
    ++deg[u];
    ++deg[v];
  }
  std::uint64_t total_vol = std::accumulate(deg.begin(), deg.end(), std::uint64_t{0});

  SubsetScan out;
  const std::uint32_t limit = 1u << k;
  for (std::uint32_t mask = 1; mask + 1 < limit; ++mask) {
    std::uint64_t vol = 0;
    for (std::uint32_t i = 0; i < k; ++i)
      if (mask & (1u << i)) vol += deg[i];
    if (2 * vol > total_vol) continue;
    std::uint64_t cut = 0;
    for (auto [u, v] : edges) {
      bool au = mask & (1u << u);
      bool av = mask & (1u << v);
      if (au != av) ++cut;
    }
    if (vol == 0) continue;  // isolated set: infinite ratio, never the minimum
    Conductance c{cut, vol};
    if (out.best.vol == 0 || c < out.best) {
      out.best = c;
      out.best_mask = mask;
    }
  }
  return out;
}

}  // namespace

Conductance conductance_exact(const LocalGraph& g, const std::vector<std::uint32_t>& part) {
  if (part.size() > 20) throw DomainError("conductance_exact: part above enumeration limit");
  if (part.size() <= 1) return Conductance{0, 0};  // +infinity
  auto scan = scan_cuts(g, part);
  if (scan.best.vol == 0) return Conductance{0, 0};  // no cut with positive volume
  return scan.best;
}

namespace {

struct Decomposer {
  const LocalGraph& g;
  double phi;
  const DecomposeConfig& cfg;
  Rng rng;
  ExpanderDecomposition out;
  std::vector<std::vector<std::pair<std::uint32_t, std::size_t>>> adj;
  std::size_t units = 0;

  Decomposer(const LocalGraph& g_, double phi_, std::uint64_t seed, const DecomposeConfig& cfg_)
      : g(g_), phi(phi_), cfg(cfg_), rng(seed), adj(g_.adjacency()) {}

  void emit(std::vector<std::uint32_t> part, bool exact) {
    std::sort(part.begin(), part.end());
    out.parts.push_back({std::move(part), exact});
  }

  // sweep cut over an eigenvector-ish ordering; returns the best prefix cut
  std::optional<std::pair<Conductance, std::vector<std::uint32_t>>> sweep_cut(
      const std::vector<std::uint32_t>& part) {
    const std::size_t k = part.size();
    std::vector<std::uint32_t> local(g.n, kNoVertex);
    for (std::uint32_t i = 0; i < k; ++i) local[part[i]] = i;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t i = 0; i < k; ++i)
      for (auto [w, idx] : adj[part[i]]) {
        if (local[w] == kNoVertex || local[w] < i) continue;
        if (w == part[i]) continue;
        edges.emplace_back(i, local[w]);
        (void)idx;
      }
    std::vector<double> deg(k, 0.0);
    for (auto [u, v] : edges) {
      deg[u] += 1;
      deg[v] += 1;
    }
    double total_vol = std::accumulate(deg.begin(), deg.end(), 0.0);
    if (total_vol == 0) return std::nullopt;

    // power iteration for the second eigenvector of the lazy random walk
    // matrix, deflated against the stationary direction d^(1/2)
    Eigen::VectorXd x(k), d_sqrt(k);
    for (std::size_t i = 0; i < k; ++i) d_sqrt[i] = std::sqrt(std::max(deg[i], 1e-12));
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (std::size_t i = 0; i < k; ++i) x[i] = uni(rng);
    Eigen::VectorXd stat = d_sqrt.normalized();
    for (std::uint32_t it = 0; it < cfg.power_iterations; ++it) {
      x -= stat.dot(x) * stat;
      Eigen::VectorXd y = x;  // (I + D^-1/2 A D^-1/2) x / 2
      for (auto [u, v] : edges) {
        y[u] += x[v] / (d_sqrt[u] * d_sqrt[v]);
        y[v] += x[u] / (d_sqrt[u] * d_sqrt[v]);
      }
      y *= 0.5;
      double norm = y.norm();
      if (norm < 1e-15) break;
      x = y / norm;
      units += edges.size() + k;
    }
    // sweep order by x_i / sqrt(d_i)
    std::vector<std::uint32_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      double xa = x[a] / d_sqrt[a], xb = x[b] / d_sqrt[b];
      if (xa != xb) return xa < xb;
      return part[a] < part[b];
    });
    // evaluate all prefixes
    std::vector<std::uint32_t> pos(k);
    for (std::uint32_t i = 0; i < k; ++i) pos[order[i]] = i;
    std::uint64_t cut = 0, vol = 0;
    Conductance best{0, 0};
    std::size_t best_prefix = 0;
    for (std::size_t p = 0; p + 1 < k; ++p) {
      std::uint32_t v = order[p];
      vol += static_cast<std::uint64_t>(deg[v]);
      // update cut: edges from v to earlier prefix leave the cut, others join
      for (auto [w, idx] : adj[part[v]]) {
        (void)idx;
        if (local[w] == kNoVertex) continue;
        if (pos[local[w]] < p)
          --cut;
        else if (pos[local[w]] > p)
          ++cut;
      }
      units += adj[part[v]].size();
      std::uint64_t side_vol = std::min<std::uint64_t>(vol, static_cast<std::uint64_t>(total_vol) - vol);
      if (side_vol == 0) continue;
      Conductance c{cut, side_vol};
      if (best.vol == 0 || c < best) {
        best = c;
        best_prefix = p;
      }
    }
    if (best.vol == 0) return std::nullopt;
    std::vector<std::uint32_t> side;
    for (std::size_t p = 0; p <= best_prefix; ++p) side.push_back(part[order[p]]);
    return std::make_pair(best, side);
  }

  void recurse(std::vector<std::uint32_t> part) {
    if (part.size() == 1) {
      emit(std::move(part), true);
      return;
    }
    // split disconnected pieces first
    {
      std::vector<std::uint32_t> local(g.n, kNoVertex);
      for (std::uint32_t i = 0; i < part.size(); ++i) local[part[i]] = i;
      std::vector<int> comp(part.size(), -1);
      int nc = 0;
      for (std::uint32_t s = 0; s < part.size(); ++s) {
        if (comp[s] != -1) continue;
        std::vector<std::uint32_t> stack{s};
        comp[s] = nc;
        while (!stack.empty()) {
          std::uint32_t v = stack.back();
          stack.pop_back();
          ++units;
          for (auto [w, idx] : adj[part[v]]) {
            (void)idx;
            if (local[w] == kNoVertex || comp[local[w]] != -1) continue;
            comp[local[w]] = nc;
            stack.push_back(local[w]);
          }
        }
        ++nc;
      }
      if (nc > 1) {
        std::vector<std::vector<std::uint32_t>> pieces(nc);
        for (std::uint32_t i = 0; i < part.size(); ++i) pieces[comp[i]].push_back(part[i]);
        for (auto& piece : pieces) recurse(std::move(piece));
        return;
      }
    }

    const bool small = part.size() <= cfg.exact_check_threshold;
    const bool oversize = cfg.max_part_size != 0 && part.size() > cfg.max_part_size;
    if (small) {
      auto scan = scan_cuts(g, part);
      units += (std::size_t{1} << part.size());
      if (scan.best.vol != 0 && (!scan.best.at_least(phi) || oversize)) {
        std::vector<std::uint32_t> a, b;
        for (std::uint32_t i = 0; i < part.size(); ++i)
          ((scan.best_mask >> i) & 1u ? a : b).push_back(part[i]);
        recurse(std::move(a));
        recurse(std::move(b));
        return;
      }
      emit(std::move(part), true);
      return;
    }
    auto cutres = sweep_cut(part);
    if (cutres && (!cutres->first.at_least(phi) || oversize)) {
      std::vector<std::uint32_t> side = std::move(cutres->second);
      std::vector<std::uint8_t> in_side(g.n, 0);
      for (std::uint32_t v : side) in_side[v] = 1;
      std::vector<std::uint32_t> rest;
      for (std::uint32_t v : part)
        if (!in_side[v]) rest.push_back(v);
      recurse(std::move(side));
      recurse(std::move(rest));
      return;
    }
    emit(std::move(part), false);  // heuristic acceptance
  }
};

}  // namespace

ExpanderDecomposition decompose(const LocalGraph& g, double phi, std::uint64_t seed,
                                const DecomposeConfig& cfg, std::size_t* work_units) {
  Decomposer d(g, phi, seed, cfg);
  d.out.phi = phi;
  std::vector<std::uint32_t> all(g.n);
  std::iota(all.begin(), all.end(), 0);
  if (!all.empty()) d.recurse(std::move(all));
  // crossing edges: endpoints in different parts
  std::vector<std::uint32_t> part_of(g.n, 0);
  for (std::uint32_t p = 0; p < d.out.parts.size(); ++p)
    for (std::uint32_t v : d.out.parts[p].vertices) part_of[v] = p;
  for (auto [u, v] : g.edges)
    if (part_of[u] != part_of[v]) ++d.out.crossing_edges;
  d.out.quality_q =
      g.m() == 0 || phi == 0
          ? 0.0
          : static_cast<double>(d.out.crossing_edges) / (phi * static_cast<double>(g.m()));
  if (work_units) *work_units += d.units;
  return d.out;
}

PruningState::PruningState(const LocalGraph& part_graph, double phi, double gamma_prune)
    : phi_(phi), gamma_(gamma_prune) {
  degree_.assign(part_graph.n, 0);
  adj_.assign(part_graph.n, {});
  pruned_.assign(part_graph.n, 0);
  for (auto [u, v] : part_graph.edges) {
    ++degree_[u];
    ++degree_[v];
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }
  orig_degree_ = degree_;
  budget_ = static_cast<std::size_t>(phi_ * static_cast<double>(part_graph.m()) / gamma_);
  growth_cap_ = phi_ > 0 ? static_cast<std::size_t>(std::ceil(gamma_ / (phi_ * phi_))) : 1;
}

void PruningState::enqueue_if_weak(std::uint32_t v, std::vector<std::uint32_t>& queue) {
  if (pruned_[v]) return;
  if (static_cast<double>(degree_[v]) < phi_ * static_cast<double>(orig_degree_[v]) / gamma_)
    queue.push_back(v);
}

PruningState::Result PruningState::on_delete(std::uint32_t u, std::uint32_t v) {
  assert(!pruned_[u] && !pruned_[v] && "deletions must target unpruned endpoints");
  Result out;
  if (deletions_seen_ >= budget_) {
    out.status = Result::kBudgetExceeded;
    return out;
  }
  ++deletions_seen_;
  auto drop = [&](std::uint32_t a, std::uint32_t b) {
    auto it = std::find(adj_[a].begin(), adj_[a].end(), b);
    assert(it != adj_[a].end());
    *it = adj_[a].back();
    adj_[a].pop_back();
    --degree_[a];
  };
  drop(u, v);
  drop(v, u);

  std::vector<std::uint32_t> queue;
  enqueue_if_weak(u, queue);
  enqueue_if_weak(v, queue);
  while (!queue.empty()) {
    std::uint32_t x = queue.back();
    queue.pop_back();
    if (pruned_[x]) continue;
    if (static_cast<double>(degree_[x]) >= phi_ * static_cast<double>(orig_degree_[x]) / gamma_)
      continue;
    if (out.delta.size() >= growth_cap_) {
      out.status = Result::kBudgetExceeded;  // cap overflow: caller retires the part
      return out;
    }
    pruned_[x] = 1;
    pruned_order_.push_back(x);
    out.delta.push_back(x);
    for (std::uint32_t w : adj_[x]) {
      if (pruned_[w]) continue;
      --degree_[w];  // x leaves the unpruned side
      enqueue_if_weak(w, queue);
    }
  }
  std::sort(out.delta.begin(), out.delta.end());
  return out;
}

}  // namespace dynconn
