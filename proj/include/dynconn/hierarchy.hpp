#pragma once

#include <memory>
#include <optional>
#include <unordered_set>
#include <vector>

#include "dynconn/core_graph.hpp"
#include "dynconn/dyn_graph.hpp"
#include "dynconn/link_cut_forest.hpp"
#include "dynconn/shattering.hpp"
#include "dynconn/sparsifier.hpp"
#include "dynconn/types.hpp"

namespace dynconn {

enum class Mode : std::uint8_t { kAmortized, kDeamortized };

struct HierarchyConfig {
  std::uint32_t kappa = 8 * 108;
  double gamma_prune = 8.0;
  double gamma_exp = 0.0;   // 0: round(log2(m)^3), at least 1
  double phi_sparse = 0.0;  // 0: 1 / (20 * gamma_exp)
  Mode mode = Mode::kAmortized;
  Strategy strategy = Strategy::kRandomized;
  std::uint64_t seed = 1;
  // 0: no checking; 1: counting invariants per step; 2: plus full subset /
  // maximality verification per step (test runs)
  int check_level = 0;
  std::uint32_t min_epoch = 32;
  DecomposeConfig decompose;
  double restart_attempt_factor = 4.0;
};

// Per-step recourse, reset at every apply().
struct StepDelta {
  std::vector<std::uint64_t> level_insertions;  // H_i additions, index 0..levels
  std::vector<std::uint64_t> level_deletions;
  std::uint64_t top_forest_changes = 0;
  std::uint64_t work_units = 0;
};

// The layered structure: forests F_i, core graphs, and sparsifiers, with the
// doubling rebuild schedule. Consumes the reduced graph's internal update
// stream one update per time step.
class Hierarchy {
 public:
  Hierarchy(DynGraph& g, const HierarchyConfig& cfg);
  ~Hierarchy();

  void apply(const InternalUpdate& u);

  bool is_connected(VertexId user_u, VertexId user_v);
  bool is_connected_internal(VertexId a, VertexId b);
  std::size_t user_component_count();

  std::uint32_t top_level() const { return lambda_; }
  LinkCutForest& top_forest() { return levels_[lambda_].forest; }
  const std::unordered_set<EdgeId>& top_forest_edges() const { return levels_[lambda_].f_edges; }
  // Pre-image pairs of the top forest translated to user edges (gadget edges
  // skipped), for oracle checks.
  std::vector<std::pair<VertexId, VertexId>> top_forest_user_edges() const;

  std::uint64_t time() const { return t_; }
  std::uint64_t restarts() const { return restarts_; }
  std::uint64_t epoch_limit() const { return epoch_limit_; }
  const StepDelta& last_step() const { return step_; }
  const SparsifierCounters& level_counters(std::uint32_t i) const { return levels_[i].counters; }
  std::size_t h_size(std::uint32_t i) const;
  std::uint64_t rebuild_period(std::uint32_t i) const { return x_[i]; }
  std::uint64_t last_rebuild_input_time(std::uint32_t i) const { return levels_[i].t_built; }
  double phi_sparse() const { return phi_sparse_; }
  double gamma_exp() const { return gamma_exp_; }
  const HierarchyConfig& config() const { return cfg_; }

  // edges (pre-image ids) inside the largest live expander part of the
  // lowest level that has one; workload introspection
  std::vector<EdgeId> sample_part_edges() const;

  // Throws std::logic_error on any violated invariant (per check_level).
  void check_invariants();

  std::size_t internal_component_count() const;

 private:
  struct RebuildJob;

  struct Level {
    LinkCutForest forest;
    std::unordered_set<EdgeId> f_edges;
    CoreGraph core;
    Sparsifier sparse;
    SparsifierCounters counters;
    Rng live_rng;
    std::uint64_t t_built = 0;
    // epochs bump on every content change; children compare to skip no-op
    // rebuilds
    std::uint64_t f_epoch = 0;
    std::uint64_t h_epoch = 0;
    std::uint64_t parent_f_epoch_at_build = 0;
    std::uint64_t parent_h_epoch_at_build = 0;
    std::uint64_t f_epoch_at_build = 0;
    std::uint64_t h_epoch_at_build = 0;
    std::unique_ptr<RebuildJob> job;
  };

  void init_structures();
  void restart();
  void ensure_vertices();
  void apply_step(const InternalUpdate& u);
  void process_levels(std::optional<EdgeId> deletion, std::vector<EdgeId> first_insertions);
  void rebuild_level(std::uint32_t i);
  void sync_forest_to_parent(std::uint32_t i);
  void set_h_edges(std::uint32_t i, const std::vector<EdgeId>& sorted_old,
                   const std::vector<EdgeId>& sorted_new);
  std::vector<EdgeId> h_edge_ids(std::uint32_t i) const;  // sorted
  std::vector<std::pair<VertexId, VertexId>> h_pairs(std::uint32_t i) const;
  EdgeId resolve_forest_pair(VertexId u, VertexId v) const;
  void forest_cut(std::uint32_t i, EdgeId e);
  void forest_link(std::uint32_t i, EdgeId e);
  bool f_bit(EdgeId e, std::uint32_t i) const;
  bool h_bit(EdgeId e, std::uint32_t i) const;
  void set_f_bit(EdgeId e, std::uint32_t i, bool v);
  void set_h_bit(EdgeId e, std::uint32_t i, bool v);
  void grow_bits(EdgeId e);

  // de-amortization
  void tick_jobs();
  void create_due_jobs();
  bool job_pipelined(std::uint32_t i, std::uint64_t swap_t) const;

  DynGraph& g_;
  HierarchyConfig cfg_;
  std::uint32_t lambda_ = 0;
  double gamma_exp_ = 1.0;
  double phi_sparse_ = 0.05;
  std::vector<std::uint64_t> x_;
  std::vector<Level> levels_;
  std::vector<std::uint64_t> f_bits_, h_bits_;
  std::uint64_t t_ = 0;
  std::uint64_t epoch_limit_ = 0;
  std::uint64_t restarts_ = 0;
  StepDelta step_;
};

}  // namespace dynconn
