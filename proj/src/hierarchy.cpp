#include "dynconn/hierarchy.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "dynconn/oracle.hpp"

namespace dynconn {

// Placeholder until background rebuilds land; synchronous rebuilds cover both
// modes when no job is scheduled.
struct Hierarchy::RebuildJob {};

namespace {

std::uint32_t compute_lambda(std::size_t m) {
  std::size_t m2 = std::max<std::size_t>(m, 2);
  std::uint32_t bits = 0;
  std::size_t v = m2 - 1;
  while (v) {
    ++bits;
    v >>= 1;
  }
  return bits + 4;  // ceil(log2(m)) + 4
}

}  // namespace

Hierarchy::Hierarchy(DynGraph& g, const HierarchyConfig& cfg) : g_(g), cfg_(cfg) {
  init_structures();
}

Hierarchy::~Hierarchy() = default;

void Hierarchy::init_structures() {
  std::size_t m0 = g_.internal_alive_edge_count();
  lambda_ = compute_lambda(m0);
  assert(lambda_ + 1 < 63);
  gamma_exp_ = cfg_.gamma_exp;
  if (gamma_exp_ <= 0.0) {
    double lg = std::log2(static_cast<double>(std::max<std::size_t>(m0, 2)));
    gamma_exp_ = std::max(1.0, std::round(lg * lg * lg));
  }
  phi_sparse_ = cfg_.phi_sparse > 0.0 ? cfg_.phi_sparse : 1.0 / (20.0 * gamma_exp_);
  epoch_limit_ = std::max<std::uint64_t>(m0, cfg_.min_epoch);

  x_.assign(lambda_ + 1, 1);
  for (std::uint32_t i = 0; i <= lambda_; ++i) {
    int shift = static_cast<int>(lambda_) - static_cast<int>(i) - 3;
    x_[i] = shift > 0 ? (std::uint64_t{1} << shift) : 1;
  }

  t_ = 0;
  levels_.clear();
  levels_.resize(lambda_ + 1);
  f_bits_.assign(g_.internal_edge_count(), 0);
  h_bits_.assign(g_.internal_edge_count(), 0);
  for (EdgeId e = 0; e < g_.internal_edge_count(); ++e)
    if (g_.internal_edge(e).alive) h_bits_[e] = 1;  // H_0 is the graph itself

  SparsifierConfig scfg;
  scfg.phi_sparse = phi_sparse_;
  scfg.gamma_prune = cfg_.gamma_prune;
  scfg.kappa = cfg_.kappa;
  scfg.strategy = cfg_.strategy;
  scfg.decompose = cfg_.decompose;
  scfg.restart_attempt_factor = cfg_.restart_attempt_factor;
  VertexId top_vertex =
      g_.internal_vertex_count() == 0 ? 0 : static_cast<VertexId>(g_.internal_vertex_count() - 1);
  for (std::uint32_t i = 0; i <= lambda_; ++i) {
    Level& lv = levels_[i];
    lv.forest.ensure_vertex(top_vertex);
    lv.core.attach(g_, lv.forest);
    lv.sparse.configure(scfg);
    lv.live_rng.seed(derive_seed(cfg_.seed, (std::uint64_t{restarts_} << 32) | i, 0x11fe));
  }
  step_.level_insertions.assign(lambda_ + 1, 0);
  step_.level_deletions.assign(lambda_ + 1, 0);
  for (std::uint32_t i = 1; i <= lambda_; ++i) rebuild_level(i);
}

void Hierarchy::restart() {
  ++restarts_;
  init_structures();
}

void Hierarchy::grow_bits(EdgeId e) {
  if (e >= f_bits_.size()) {
    f_bits_.resize(e + 1, 0);
    h_bits_.resize(e + 1, 0);
  }
}

bool Hierarchy::f_bit(EdgeId e, std::uint32_t i) const { return (f_bits_[e] >> i) & 1u; }
bool Hierarchy::h_bit(EdgeId e, std::uint32_t i) const { return (h_bits_[e] >> i) & 1u; }
void Hierarchy::set_f_bit(EdgeId e, std::uint32_t i, bool v) {
  if (v)
    f_bits_[e] |= std::uint64_t{1} << i;
  else
    f_bits_[e] &= ~(std::uint64_t{1} << i);
}
void Hierarchy::set_h_bit(EdgeId e, std::uint32_t i, bool v) {
  if (v)
    h_bits_[e] |= std::uint64_t{1} << i;
  else
    h_bits_[e] &= ~(std::uint64_t{1} << i);
}

std::vector<EdgeId> Hierarchy::h_edge_ids(std::uint32_t i) const {
  if (i == 0) {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < g_.internal_edge_count(); ++e)
      if (g_.internal_edge(e).alive) out.push_back(e);
    return out;
  }
  return levels_[i].sparse.h_sorted();
}

std::vector<std::pair<VertexId, VertexId>> Hierarchy::h_pairs(std::uint32_t i) const {
  std::vector<std::pair<VertexId, VertexId>> out;
  for (EdgeId e : h_edge_ids(i)) {
    const auto& ie = g_.internal_edge(e);
    out.emplace_back(ie.u, ie.v);
  }
  return out;
}

EdgeId Hierarchy::resolve_forest_pair(VertexId u, VertexId v) const {
  for (EdgeId e : g_.internal_incident(u)) {
    const auto& ie = g_.internal_edge(e);
    if ((ie.u == u && ie.v == v) || (ie.u == v && ie.v == u)) return e;
  }
  throw std::logic_error("forest pair does not resolve to an alive edge");
}

void Hierarchy::forest_cut(std::uint32_t i, EdgeId e) {
  Level& lv = levels_[i];
  const auto& ie = g_.internal_edge(e);
  lv.forest.cut(ie.u, ie.v);
  lv.f_edges.erase(e);
  set_f_bit(e, i, false);
  ++lv.f_epoch;
  if (i == lambda_) ++step_.top_forest_changes;
  ++step_.work_units;
}

void Hierarchy::forest_link(std::uint32_t i, EdgeId e) {
  Level& lv = levels_[i];
  const auto& ie = g_.internal_edge(e);
  lv.forest.link(ie.u, ie.v);
  lv.f_edges.insert(e);
  set_f_bit(e, i, true);
  ++lv.f_epoch;
  if (i == lambda_) ++step_.top_forest_changes;
  ++step_.work_units;
}

void Hierarchy::sync_forest_to_parent(std::uint32_t i) {
  Level& lv = levels_[i];
  Level& parent = levels_[i - 1];
  std::vector<EdgeId> cuts, links;
  for (EdgeId e : lv.f_edges)
    if (!parent.f_edges.count(e)) cuts.push_back(e);
  for (EdgeId e : parent.f_edges)
    if (!lv.f_edges.count(e)) links.push_back(e);
  std::sort(cuts.begin(), cuts.end());
  std::sort(links.begin(), links.end());
  for (EdgeId e : cuts) forest_cut(i, e);
  for (EdgeId e : links) forest_link(i, e);
  step_.work_units += lv.f_edges.size() + parent.f_edges.size();
}

void Hierarchy::set_h_edges(std::uint32_t i, const std::vector<EdgeId>& sorted_old,
                            const std::vector<EdgeId>& sorted_new) {
  Level& lv = levels_[i];
  bool changed = false;
  for (EdgeId e : sorted_old) {
    if (!std::binary_search(sorted_new.begin(), sorted_new.end(), e)) {
      set_h_bit(e, i, false);
      changed = true;
    }
  }
  for (EdgeId e : sorted_new) {
    if (!h_bit(e, i)) {
      set_h_bit(e, i, true);
      changed = true;
    }
  }
  if (changed) ++lv.h_epoch;
  step_.work_units += sorted_old.size() + sorted_new.size();
}

void Hierarchy::rebuild_level(std::uint32_t i) {
  Level& lv = levels_[i];
  Level& parent = levels_[i - 1];
  // nothing moved below and this level is untouched since its last build:
  // the previous build still stands and its bounds are at least as fresh
  bool skippable = t_ != 0 && parent.f_epoch == lv.parent_f_epoch_at_build &&
                   parent.h_epoch == lv.parent_h_epoch_at_build &&
                   lv.f_epoch == lv.f_epoch_at_build && lv.h_epoch == lv.h_epoch_at_build;
  if (skippable) {
    lv.t_built = t_;
    ++step_.work_units;
    return;
  }

  sync_forest_to_parent(i);
  auto ref_pairs = h_pairs(i - 1);
  ShatterConfig scfg;
  scfg.kappa = cfg_.kappa;
  auto product = reinit_forest(lv.forest, ref_pairs, scfg, &step_.work_units);
  for (auto [u, v] : product.removals) forest_cut(i, resolve_forest_pair(u, v));
  for (auto [u, v] : product.additions) forest_link(i, resolve_forest_pair(u, v));

  auto old_h = lv.sparse.h_sorted();
  auto base = h_edge_ids(i - 1);
  lv.core.build(base);
  step_.work_units += base.size();
  lv.sparse.rebuild(lv.core, derive_seed(cfg_.seed, (std::uint64_t{restarts_} << 32) | i, t_),
                    &step_.work_units);
  set_h_edges(i, old_h, lv.sparse.h_sorted());

  lv.t_built = t_;
  lv.parent_f_epoch_at_build = parent.f_epoch;
  lv.parent_h_epoch_at_build = parent.h_epoch;
  lv.f_epoch_at_build = lv.f_epoch;
  lv.h_epoch_at_build = lv.h_epoch;
}

void Hierarchy::ensure_vertices() {
  if (g_.internal_vertex_count() == 0) return;
  VertexId top = static_cast<VertexId>(g_.internal_vertex_count() - 1);
  for (Level& lv : levels_) lv.forest.ensure_vertex(top);
}

void Hierarchy::apply(const InternalUpdate& u) {
  if (t_ + 1 > epoch_limit_) restart();
  ++t_;
  std::fill(step_.level_insertions.begin(), step_.level_insertions.end(), 0);
  std::fill(step_.level_deletions.begin(), step_.level_deletions.end(), 0);
  step_.top_forest_changes = 0;
  step_.work_units = 0;

  try {
    apply_step(u);
  } catch (const RestartSignal&) {
    restart();
  }
}

void Hierarchy::apply_step(const InternalUpdate& u) {
  grow_bits(u.edge);
  // a restart mid-batch rebuilds from the full current graph; updates the
  // restart already absorbed arrive here as no-ops
  if (u.kind == InternalUpdate::kInsert && h_bit(u.edge, 0)) return;
  if (u.kind == InternalUpdate::kDelete && !h_bit(u.edge, 0)) return;
  if (u.kind == InternalUpdate::kInsert) {
    ensure_vertices();
    set_h_bit(u.edge, 0, true);
    ++levels_[0].h_epoch;
    ++step_.level_insertions[0];
    process_levels(std::nullopt, {u.edge});
  } else {
    set_h_bit(u.edge, 0, false);
    ++levels_[0].h_epoch;
    ++step_.level_deletions[0];
    process_levels(u.edge, {});
  }
}

void Hierarchy::process_levels(std::optional<EdgeId> deletion, std::vector<EdgeId> insertions) {
  std::uint64_t del_f = 0, del_h = 0;
  if (deletion) {
    del_f = f_bits_[*deletion];
    del_h = h_bits_[*deletion] | 1;  // it was part of the graph
  }
  for (std::uint32_t i = 1; i <= lambda_; ++i) {
    if (t_ % x_[i] == 0) {
      for (std::uint32_t j = i; j <= lambda_; ++j) rebuild_level(j);
      return;
    }
    Level& lv = levels_[i];
    std::vector<EdgeId> delta;
    if (deletion) {
      EdgeId e = *deletion;
      bool in_f = (del_f >> i) & 1u;
      bool in_base = in_f || ((del_h >> (i - 1)) & 1u);
      if (in_base) {
        ++step_.level_deletions[i];
        if (in_f) {
          const auto& ie = g_.internal_edge(e);
          SuperId old_super = lv.core.try_super_of(ie.u);
          forest_cut(i, e);
          auto split = lv.core.on_forest_cut(ie.u, ie.v, old_super);
          if (getenv("DYNCONN_DEBUG"))
            fprintf(stderr, "L%u cut e%u old_super=%d rehomed=%zu mat=%zu\n", i, e,
                    (int)old_super, split.rehomed.size(), split.materialized.size());
          step_.work_units += split.rehomed.size() + split.materialized.size();
          delta = lv.sparse.handle_forest_cut(lv.core, split, lv.live_rng, lv.counters);
        } else {
          bool was_core = lv.core.is_core_edge(e);
          SuperId a = kNoSuper, b = kNoSuper;
          if (was_core) std::tie(a, b) = lv.core.endpoints(e);
          lv.core.on_base_delete(e);
          ++step_.work_units;
          if (was_core) {
            if (lv.sparse.erase(e)) {
              set_h_bit(e, i, false);
              ++lv.h_epoch;
            }
            delta = lv.sparse.handle_core_deletion(lv.core, e, a, b, lv.live_rng, lv.counters);
          }
        }
      }
    }
    std::vector<EdgeId> next;
    next.reserve(delta.size() + insertions.size());
    for (EdgeId d : delta) {
      set_h_bit(d, i, true);
      ++lv.h_epoch;
      next.push_back(d);
    }
    for (EdgeId e : insertions) {
      auto image = lv.core.on_base_insert(e);
      ++step_.work_units;
      if (lv.sparse.handle_insertion(e, image)) {
        set_h_bit(e, i, true);
        ++lv.h_epoch;
        next.push_back(e);
      }
    }
    step_.level_insertions[i] += next.size();
    step_.work_units += delta.size();
    insertions = std::move(next);
  }
}

bool Hierarchy::is_connected_internal(VertexId a, VertexId b) {
  return levels_[lambda_].forest.connected(a, b);
}

bool Hierarchy::is_connected(VertexId user_u, VertexId user_v) {
  return is_connected_internal(g_.anchor(user_u), g_.anchor(user_v));
}

std::size_t Hierarchy::user_component_count() {
  std::unordered_set<VertexId> roots;
  for (VertexId u = 0; u < g_.user_vertex_count(); ++u)
    if (g_.user_alive(u)) roots.insert(levels_[lambda_].forest.find_root(g_.anchor(u)));
  return roots.size();
}

std::size_t Hierarchy::internal_component_count() const {
  return oracle_component_count(g_.internal_snapshot());
}

std::size_t Hierarchy::h_size(std::uint32_t i) const {
  return i == 0 ? g_.internal_alive_edge_count() : levels_[i].sparse.h_size();
}

std::vector<std::pair<VertexId, VertexId>> Hierarchy::top_forest_user_edges() const {
  std::vector<std::pair<VertexId, VertexId>> out;
  for (EdgeId e : levels_[lambda_].f_edges) {
    const auto& ie = g_.internal_edge(e);
    if (ie.gadget) continue;
    out.push_back(g_.edge_endpoints(ie.user_edge));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<EdgeId> Hierarchy::sample_part_edges() const {
  for (std::uint32_t i = 1; i <= lambda_; ++i) {
    auto edges = levels_[i].sparse.largest_live_part_edges();
    if (!edges.empty()) return edges;
  }
  return {};
}

void Hierarchy::check_invariants() {
  std::size_t comp_g = internal_component_count();
  for (std::uint32_t i = 1; i <= lambda_; ++i) {
    const Level& lv = levels_[i];
    std::size_t comp_f = lv.forest.component_count();
    auto fail = [&](const std::string& what) {
      throw std::logic_error("invariant violated at level " + std::to_string(i) + ", t=" +
                             std::to_string(t_) + ": " + what);
    };
    std::uint64_t slack_key = lambda_ >= i + 1 ? (std::uint64_t{1} << (lambda_ - i - 1)) : 0;
    if (comp_f > comp_g + slack_key) fail("component bound");
    std::uint64_t slack_strong = lambda_ >= i + 2 ? (std::uint64_t{1} << (lambda_ - i - 2)) : 0;
    if (comp_f > comp_g + slack_strong + (t_ - lv.t_built)) fail("strengthened component bound");
    double size_bound = 4.0 * i * double(cfg_.kappa) * double(cfg_.kappa) * cfg_.gamma_prune /
                        (phi_sparse_ * phi_sparse_) *
                        (std::pow(2.0, double(lambda_) - double(i)) + double(t_ - lv.t_built));
    if (static_cast<double>(h_size(i)) > size_bound) fail("sparsifier size bound");

    if (cfg_.check_level >= 2) {
      for (EdgeId e : lv.f_edges) {
        if (!g_.internal_edge(e).alive) fail("forest edge not alive");
        bool in_parent = i == 1 ? true : (f_bit(e, i - 1) || h_bit(e, i - 1));
        if (!in_parent) fail("forest edge outside parent union");
      }
      for (EdgeId e : h_edge_ids(i))
        if (!g_.internal_edge(e).alive) fail("sparsifier edge not alive");
    }
  }
  if (static_cast<double>(h_size(0)) > std::pow(2.0, double(lambda_)))
    throw std::logic_error("graph grew past the level-0 budget");
  if (cfg_.check_level >= 2) {
    // top forest is maximal: subset + acyclic by construction, counts equal
    if (levels_[lambda_].forest.component_count() != comp_g)
      throw std::logic_error("top forest is not maximal at t=" + std::to_string(t_));
  }
}

}  // namespace dynconn
