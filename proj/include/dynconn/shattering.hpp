#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "dynconn/link_cut_forest.hpp"
#include "dynconn/types.hpp"

namespace dynconn {

struct ShatterConfig {
  std::uint32_t kappa = 8 * 108;
  std::uint32_t z() const { return kappa / 9; }
};

// Splits a tree with maximum degree 3 into clusters of between z and 3z-2
// vertices by cutting edges. The tree is given as an edge list over [0, n);
// returns indexes of edges to cut. Requires n >= 3z-2. Linear time.
std::vector<std::size_t> tree_cluster(std::size_t n,
                                      const std::vector<std::pair<VertexId, VertexId>>& edges,
                                      std::uint32_t z);

struct ReinitStats {
  std::size_t h_edges = 0;
  std::size_t marked = 0;
  std::size_t branch_free = 0;
  std::size_t aux_vertices = 0;
  std::size_t aux_edges = 0;
  std::size_t aux_max_degree = 0;
  std::size_t clustered_trees = 0;
  std::size_t cluster_cuts = 0;
};

// Forest re-initialization product: the new forest is
//   f_prev minus `removals` plus `additions` (vertex pairs, net of overlap).
// Every addition's pre-image is an h edge or a removed forest edge, so the
// result stays inside f_prev ∪ h.
struct ReinitResult {
  std::vector<std::pair<VertexId, VertexId>> removals;
  std::vector<std::pair<VertexId, VertexId>> additions;
  ReinitStats stats;
};

// h_pairs: endpoints of the reference edge set, sorted and deduplicated by
// the caller's ordering discipline (the product is deterministic in them).
ReinitResult reinit_forest(const LinkCutForest& f_prev,
                           const std::vector<std::pair<VertexId, VertexId>>& h_pairs,
                           const ShatterConfig& cfg, std::size_t* work_units = nullptr);

}  // namespace dynconn
