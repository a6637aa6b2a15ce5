#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dynconn/rng.hpp"
#include "dynconn/types.hpp"

namespace dynconn {

// Multigraph over dense local vertex ids, the working representation for
// decomposition and pruning. Parallel edges count separately in degrees,
// cuts, and volumes.
struct LocalGraph {
  std::size_t n = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

  std::size_t m() const { return edges.size(); }
  std::vector<std::vector<std::pair<std::uint32_t, std::size_t>>> adjacency() const;
  std::vector<std::size_t> degrees() const;
};

// Exact cut ratio as a fraction; comparisons cross-multiply so 1/3 vs 2/6
// behave. Infinite for single-vertex parts (no nonempty proper cut).
struct Conductance {
  std::uint64_t cut = 0;
  std::uint64_t vol = 0;  // vol == 0 encodes +infinity
  bool infinite() const { return vol == 0; }
  double value() const;
  bool operator<(const Conductance& o) const;
  bool at_least(double phi) const;
};

// Exhaustive minimum over subsets with vol(A) <= vol(V)/2 of cut(A)/vol(A).
// part indexes into g's vertex ids; |part| <= 20.
Conductance conductance_exact(const LocalGraph& g, const std::vector<std::uint32_t>& part);

struct ExpanderDecomposition {
  struct Part {
    std::vector<std::uint32_t> vertices;
    bool exact_certified = false;  // exhaustively checked >= phi
  };
  std::vector<Part> parts;
  double phi = 0;
  std::size_t crossing_edges = 0;
  double quality_q = 0;  // crossing / (phi * m), measured
};

struct DecomposeConfig {
  std::uint32_t exact_check_threshold = 14;
  // parts larger than this are force-split at their best cut (0 = unlimited);
  // keeps every part exhaustively certifiable when set to the threshold
  std::uint32_t max_part_size = 0;
  std::uint32_t power_iterations = 200;
};

// Recursive sparsest-cut decomposition: exhaustive minimum cuts on small
// pieces, spectral sweep cuts (second eigenvector of the normalized
// Laplacian) above the threshold. Deterministic under one seed.
ExpanderDecomposition decompose(const LocalGraph& g, double phi, std::uint64_t seed,
                                const DecomposeConfig& cfg = {},
                                std::size_t* work_units = nullptr);

// Pruning state over one part. Maintains a monotone set A of pruned local
// vertices; trimming moves a vertex into A once its in-part degree falls
// below phi * original_degree / gamma_prune, cascading.
class PruningState {
 public:
  struct Result {
    enum Status : std::uint8_t { kOk, kBudgetExceeded };
    Status status = kOk;
    std::vector<std::uint32_t> delta;  // vertices newly pruned (empty on budget)
  };

  PruningState() = default;
  PruningState(const LocalGraph& part_graph, double phi, double gamma_prune);

  // One edge deletion inside the part (by local endpoints).
  Result on_delete(std::uint32_t u, std::uint32_t v);

  bool pruned(std::uint32_t v) const { return pruned_[v]; }
  const std::vector<std::uint32_t>& pruned_list() const { return pruned_order_; }
  std::size_t deletions_seen() const { return deletions_seen_; }
  std::size_t budget() const { return budget_; }
  std::size_t growth_cap() const { return growth_cap_; }
  double phi() const { return phi_; }

 private:
  void enqueue_if_weak(std::uint32_t v, std::vector<std::uint32_t>& queue);

  double phi_ = 0;
  double gamma_ = 1;
  std::vector<std::size_t> degree_;       // current in-part degree (unpruned side)
  std::vector<std::size_t> orig_degree_;
  std::vector<std::vector<std::uint32_t>> adj_;  // multi-adjacency
  std::vector<std::uint8_t> pruned_;
  std::vector<std::uint32_t> pruned_order_;
  std::size_t deletions_seen_ = 0;
  std::size_t budget_ = 0;
  std::size_t growth_cap_ = 0;
};

}  // namespace dynconn
