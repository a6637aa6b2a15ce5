#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "dynconn/hierarchy.hpp"
#include "test_support.hpp"

using namespace dynconn;

namespace {

struct Session {
  DynGraph g;
  std::unique_ptr<Hierarchy> h;

  explicit Session(std::size_t n) : g(n) {}

  void start(HierarchyConfig cfg = {}) {
    cfg.check_level = std::max(cfg.check_level, 2);
    g.drain_internal_updates();
    h = std::make_unique<Hierarchy>(g, cfg);
  }
  void feed() {
    for (const auto& up : g.drain_internal_updates()) h->apply(up);
    h->check_invariants();
  }
  EdgeId insert(VertexId u, VertexId v) {
    EdgeId e = g.insert_edge(u, v);
    feed();
    return e;
  }
  void remove(EdgeId e) {
    g.delete_edge(e);
    feed();
  }
  void split(VertexId v, const std::vector<EdgeId>& side) {
    g.split_vertex(v, side);
    feed();
  }
  // user partition from the hierarchy vs fresh BFS
  bool matches_oracle() {
    auto label = oracle_partition(g.user_snapshot());
    for (VertexId u = 0; u < g.user_vertex_count(); ++u) {
      if (!g.user_alive(u)) continue;
      for (VertexId v = u + 1; v < g.user_vertex_count(); ++v) {
        if (!g.user_alive(v)) continue;
        if (h->is_connected(u, v) != (label[u] == label[v])) return false;
      }
    }
    return true;
  }
};

HierarchyConfig small_config(std::uint64_t seed = 1) {
  HierarchyConfig cfg;
  cfg.seed = seed;
  cfg.check_level = 2;
  return cfg;
}

HierarchyConfig reduced_config(std::uint64_t seed = 1) {
  // reduced kappa exercises shattering and parts at desk scale; constants
  // re-derived from the same formulas
  HierarchyConfig cfg;
  cfg.seed = seed;
  cfg.check_level = 2;
  cfg.kappa = 18;
  cfg.gamma_exp = 2.0;
  cfg.phi_sparse = 1.0 / 40.0;
  cfg.gamma_prune = 2.0;
  return cfg;
}

}  // namespace

TEST_CASE("empty graph initializes with empty forests") {
  Session s(4);
  s.start(small_config());
  CHECK(s.h->user_component_count() == 4);
  CHECK(s.matches_oracle());
}

TEST_CASE("tree input yields one component and a maximal forest") {
  Session s(6);
  for (VertexId v = 1; v < 6; ++v) s.g.insert_edge(v - 1, v);
  s.start(small_config());
  CHECK(s.h->user_component_count() == 1);
  CHECK(s.matches_oracle());
}

TEST_CASE("random graph initialization is maximal vs oracle") {
  Rng rng(5);
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    Session s(64);
    for (int i = 0; i < 256; ++i) {
      VertexId u = static_cast<VertexId>(rand_below(rng, 64));
      VertexId v = static_cast<VertexId>(rand_below(rng, 64));
      if (u != v) s.g.insert_edge(u, v);
    }
    s.start(small_config(seed));
    CHECK(s.matches_oracle());
    CHECK(s.h->user_component_count() == oracle_component_count(s.g.user_snapshot()));
  }
}

TEST_CASE("single insert and delete round trip") {
  Session s(2);
  s.start(small_config());
  EdgeId e = s.insert(0, 1);
  CHECK(s.h->is_connected(0, 1));
  s.remove(e);
  CHECK_FALSE(s.h->is_connected(0, 1));
  CHECK(s.matches_oracle());
}

TEST_CASE("deleting a non-forest non-sparsifier edge is ignored above level zero") {
  Session s(3);
  for (int rep = 0; rep < 3; ++rep) s.g.insert_edge(0, 1);
  s.g.insert_edge(1, 2);
  s.start(small_config());
  // find a parallel (0,1) edge that is in no forest or sparsifier
  EdgeId victim = kNoEdge;
  for (EdgeId e = 0; e < 3; ++e) {
    // carrier of user edge e
    bool used = false;
    for (std::uint32_t i = 1; i <= s.h->top_level(); ++i) {
      // bits are private; use the public view: membership in the top forest
      // pre-images or H sets is visible through step deltas after deletion
    }
    (void)used;
    (void)e;
  }
  (void)victim;
  // delete each parallel edge; at least one of them must touch only level 0
  bool saw_quiet_delete = false;
  for (EdgeId e = 0; e < 3; ++e) {
    s.remove(e);
    const auto& d = s.h->last_step();
    std::uint64_t touched = 0;
    for (std::uint32_t i = 1; i < d.level_deletions.size(); ++i) touched += d.level_deletions[i];
    if (touched == 0) saw_quiet_delete = true;
    CHECK(s.matches_oracle());
  }
  CHECK(saw_quiet_delete);
  CHECK(s.h->is_connected(0, 1));
}

TEST_CASE("forest edge deletion in a cycle keeps the component") {
  Session s(4);
  std::vector<EdgeId> cyc;
  for (VertexId v = 0; v < 4; ++v) cyc.push_back(s.g.insert_edge(v, (v + 1) % 4));
  s.start(small_config());
  for (EdgeId e : cyc) {
    std::size_t before = s.h->user_component_count();
    s.remove(e);
    CHECK(s.matches_oracle());
    if (s.h->user_component_count() != before) break;
  }
}

TEST_CASE("random trace with checks stays oracle-consistent") {
  for (auto cfg : {small_config(11), reduced_config(12)}) {
    Session s(48);
    Rng rng(cfg.seed);
    for (int i = 0; i < 120; ++i) {
      VertexId u = static_cast<VertexId>(rand_below(rng, 48));
      VertexId v = static_cast<VertexId>(rand_below(rng, 48));
      if (u != v) s.g.insert_edge(u, v);
    }
    s.start(cfg);
    std::vector<EdgeId> alive;
    for (EdgeId e = 0; e < s.g.user_vertex_count() * 10; ++e)
      if (s.g.edge_alive(e)) alive.push_back(e);
    for (int step = 0; step < 900; ++step) {
      double roll = std::uniform_real_distribution<>(0, 1)(rng);
      if (roll < 0.45 || alive.empty()) {
        VertexId u = static_cast<VertexId>(rand_below(rng, 48));
        VertexId v = static_cast<VertexId>(rand_below(rng, 48));
        if (u == v) continue;
        alive.push_back(s.insert(u, v));
      } else {
        std::size_t i = rand_below(rng, alive.size());
        if (!s.g.edge_alive(alive[i])) {
          alive[i] = alive.back();
          alive.pop_back();
          continue;
        }
        s.remove(alive[i]);
        alive[i] = alive.back();
        alive.pop_back();
      }
      if (step % 37 == 0) REQUIRE(s.matches_oracle());
    }
    CHECK(s.matches_oracle());
  }
}

TEST_CASE("vertex splits flow through the hierarchy") {
  Session s(8);
  Rng rng(77);
  std::vector<EdgeId> alive;
  for (int i = 0; i < 12; ++i) {
    VertexId u = static_cast<VertexId>(rand_below(rng, 8));
    VertexId v = static_cast<VertexId>(rand_below(rng, 8));
    if (u != v) alive.push_back(s.g.insert_edge(u, v));
  }
  s.start(small_config());
  for (int round = 0; round < 6; ++round) {
    VertexId v;
    do {
      v = static_cast<VertexId>(rand_below(rng, s.g.user_vertex_count()));
    } while (!s.g.user_alive(v));
    auto inc = s.g.incident_edges(v);
    std::vector<EdgeId> side;
    for (EdgeId e : inc)
      if (rand_below(rng, 2)) side.push_back(e);
    s.split(v, side);
    REQUIRE(s.matches_oracle());
  }
}

TEST_CASE("adaptive deletions against the top forest stay correct") {
  Session s(32);
  Rng rng(99);
  for (int i = 0; i < 96; ++i) {
    VertexId u = static_cast<VertexId>(rand_below(rng, 32));
    VertexId v = static_cast<VertexId>(rand_below(rng, 32));
    if (u != v) s.g.insert_edge(u, v);
  }
  s.start(reduced_config(99));
  for (int step = 0; step < 400; ++step) {
    if (step % 2 == 0) {
      // adversary: delete a current top-forest user edge
      auto forest_edges = s.h->top_forest_user_edges();
      if (!forest_edges.empty()) {
        auto [u, v] = forest_edges[rand_below(rng, forest_edges.size())];
        EdgeId e = s.g.find_alive_edge(u, v);
        if (e != kNoEdge) {
          s.remove(e);
          REQUIRE(s.matches_oracle());
          continue;
        }
      }
    }
    VertexId u = static_cast<VertexId>(rand_below(rng, 32));
    VertexId v = static_cast<VertexId>(rand_below(rng, 32));
    if (u != v) s.insert(u, v);
    if (step % 23 == 0) REQUIRE(s.matches_oracle());
  }
  CHECK(s.matches_oracle());
}

TEST_CASE("updates beyond the epoch limit trigger an automatic restart") {
  Session s(4);
  s.g.insert_edge(0, 1);
  s.start(small_config());
  std::uint64_t limit = s.h->epoch_limit();
  std::uint64_t before = s.h->restarts();
  for (std::uint64_t i = 0; i <= limit + 4; ++i) {
    EdgeId e = s.insert(2, 3);
    s.remove(e);
  }
  CHECK(s.h->restarts() > before);
  CHECK(s.matches_oracle());
}
