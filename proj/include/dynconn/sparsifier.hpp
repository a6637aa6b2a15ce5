#pragma once

#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dynconn/core_graph.hpp"
#include "dynconn/expander.hpp"
#include "dynconn/rng.hpp"
#include "dynconn/types.hpp"

namespace dynconn {

enum class Strategy : std::uint8_t { kRandomized, kEmbedding };

struct SparsifierConfig {
  double phi_sparse = 0.0;  // 0 = derive 1/(20 gamma_exp) at the hierarchy level
  double gamma_prune = 8.0;
  std::uint32_t kappa = 8 * 108;
  Strategy strategy = Strategy::kRandomized;
  DecomposeConfig decompose;
  double restart_attempt_factor = 4.0;
};

struct SparsifierCounters {
  std::uint64_t prune_feeds = 0;
  std::uint64_t pruned_vertices = 0;
  std::uint64_t pruned_volume = 0;  // edge-volume of pruned sets
  std::uint64_t sampling_attempts = 0;
  std::uint64_t tree_repairs = 0;
  std::uint64_t retired_parts = 0;
  std::uint64_t restarts_signaled = 0;
  std::size_t congestion = 0;  // embedding strategy, measured at rebuild
};

// Connectivity sparsifier of one level's core graph: expander parts with
// spanning trees and pruning states, the crossing edges, and everything
// forwarded in since the last rebuild. Edges are pre-image ids throughout.
class Sparsifier {
 public:
  void configure(const SparsifierConfig& cfg) { cfg_ = cfg; }
  const SparsifierConfig& config() const { return cfg_; }

  // Rebuild from the current core graph. Throws RestartSignal if a part's
  // induced subgraph comes back disconnected.
  void rebuild(CoreGraph& core, std::uint64_t seed, std::size_t* work = nullptr);

  // Base-edge insertion already applied to the core; image from
  // CoreGraph::on_base_insert. Returns true when the edge joined H.
  bool handle_insertion(EdgeId e, const std::optional<std::pair<SuperId, SuperId>>& image);

  // Deletion of a base edge whose image was the core edge (a, b); the core
  // has already dropped it. Returns edges newly added to H, in order.
  std::vector<EdgeId> handle_core_deletion(CoreGraph& core, EdgeId e, SuperId a, SuperId b,
                                           Rng& rng, SparsifierCounters& ctr);

  // Forest cut: old_super split into split.side_u / split.side_v (core
  // already re-homed). Returns edges newly added to H.
  std::vector<EdgeId> handle_forest_cut(CoreGraph& core, const CoreGraph::SplitInfo& split,
                                        Rng& rng, SparsifierCounters& ctr);

  // The one H deletion a step can carry; call before the handlers.
  bool erase(EdgeId e) { return h_.erase(e) != 0; }

  bool contains(EdgeId e) const { return h_.count(e) != 0; }
  std::size_t h_size() const { return h_.size(); }
  std::vector<EdgeId> h_sorted() const;

  std::size_t part_count() const { return parts_.size(); }
  std::size_t live_part_count() const;
  // Alive in-part edges of the largest live part (workload introspection).
  std::vector<EdgeId> largest_live_part_edges() const;

  // Embedding-strategy accessors.
  std::size_t load_of(EdgeId e) const;
  const std::vector<EdgeId>* path_of(EdgeId e) const;
  std::size_t measured_congestion() const;
  std::uint64_t path_length_sum() const;
  std::size_t self_path_count() const;
  std::size_t path_count() const;

 private:
  struct Part {
    std::vector<SuperId> members;
    std::unordered_map<SuperId, std::uint32_t> local;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // local endpoints
    std::vector<EdgeId> edge_ids;
    std::vector<std::uint8_t> edge_alive;
    std::vector<std::uint8_t> in_tree;
    std::vector<std::vector<std::size_t>> incident;  // local vertex -> edge indexes
    std::vector<std::uint8_t> member_gone;           // pruned or retired-by-split
    PruningState pruning;
    bool retired = false;
  };

  void add_to_h(EdgeId e, std::vector<EdgeId>& delta);
  void retire_part(std::size_t j, std::vector<EdgeId>& delta, SparsifierCounters& ctr);
  void detach_part_edge(EdgeId e, SuperId endpoint);
  // Simulates removing super z from its part: prune feed, incident adds,
  // extra adds, induce, tree repair. No-op when z has no live part.
  void process_super_removal(SuperId z, std::vector<EdgeId>& delta, Rng& rng,
                             SparsifierCounters& ctr);
  void repair_tree(std::size_t j, std::vector<EdgeId>& delta, Rng& rng, SparsifierCounters& ctr);
  void add_extra_edges(std::size_t j, std::vector<EdgeId>& delta);

  // embedding bookkeeping
  void set_self_path(EdgeId e);
  void drop_path(EdgeId e);
  std::vector<EdgeId> holders_of(EdgeId h_edge) const;

  SparsifierConfig cfg_;
  std::unordered_set<EdgeId> h_;
  std::vector<Part> parts_;
  std::unordered_map<SuperId, std::uint32_t> part_of_;

  // embedding strategy state
  std::unordered_map<EdgeId, std::vector<EdgeId>> paths_;
  std::unordered_map<EdgeId, std::unordered_set<EdgeId>> carried_;  // h edge -> edges routed over it
  std::size_t congestion_ = 0;
};

}  // namespace dynconn
