#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <set>

#include "dynconn/expander.hpp"
#include "dynconn/rng.hpp"

using namespace dynconn;

namespace {

LocalGraph clique(std::uint32_t n) {
  LocalGraph g;
  g.n = n;
  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t v = u + 1; v < n; ++v) g.edges.emplace_back(u, v);
  return g;
}

LocalGraph path(std::uint32_t n) {
  LocalGraph g;
  g.n = n;
  for (std::uint32_t v = 0; v + 1 < n; ++v) g.edges.emplace_back(v, v + 1);
  return g;
}

std::vector<std::uint32_t> all_of(const LocalGraph& g) {
  std::vector<std::uint32_t> v(g.n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

// independent full enumeration (all nonempty proper subsets, volume side
// chosen by the definition), used to pin the frozen constants below
double brute_conductance(const LocalGraph& g) {
  auto deg = g.degrees();
  std::uint64_t total = std::accumulate(deg.begin(), deg.end(), std::uint64_t{0});
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask + 1 < (1u << g.n); ++mask) {
    std::uint64_t vol = 0, cut = 0;
    for (std::uint32_t i = 0; i < g.n; ++i)
      if (mask & (1u << i)) vol += deg[i];
    if (2 * vol > total || vol == 0) continue;
    for (auto [u, v] : g.edges)
      if (((mask >> u) & 1u) != ((mask >> v) & 1u)) ++cut;
    best = std::min(best, static_cast<double>(cut) / static_cast<double>(vol));
  }
  return best;
}

}  // namespace

TEST_CASE("conductance of a single edge is 1") {
  LocalGraph g;
  g.n = 2;
  g.edges.emplace_back(0, 1);
  auto c = conductance_exact(g, all_of(g));
  CHECK(c.value() == doctest::Approx(1.0));
  CHECK(c.value() == doctest::Approx(brute_conductance(g)));
}

TEST_CASE("conductance of the 4-path is 1/3") {
  auto g = path(4);
  auto c = conductance_exact(g, all_of(g));
  // one endpoint plus its neighbor: volume 3 (half the total), one crossing edge
  CHECK(c.cut == 1);
  CHECK(c.vol == 3);
  CHECK(c.value() == doctest::Approx(brute_conductance(g)));
}

TEST_CASE("conductance of K4 is 2/3") {
  auto g = clique(4);
  auto c = conductance_exact(g, all_of(g));
  CHECK(c.value() == doctest::Approx(2.0 / 3.0));
  CHECK(c.value() == doctest::Approx(brute_conductance(g)));
}

TEST_CASE("conductance frozen values for K6 and K8") {
  CHECK(conductance_exact(clique(6), all_of(clique(6))).value() == doctest::Approx(0.6));
  CHECK(conductance_exact(clique(8), all_of(clique(8))).value() == doctest::Approx(4.0 / 7.0));
  CHECK(brute_conductance(clique(8)) == doctest::Approx(4.0 / 7.0));
}

TEST_CASE("single-vertex parts have infinite conductance") {
  auto g = clique(3);
  CHECK(conductance_exact(g, {1}).infinite());
}

TEST_CASE("enumeration limit is enforced") {
  auto g = clique(21);
  CHECK_THROWS_AS(conductance_exact(g, all_of(g)), DomainError);
}

TEST_CASE("decompose keeps K8 whole at phi 0.1") {
  auto g = clique(8);
  auto d = decompose(g, 0.1, 1);
  REQUIRE(d.parts.size() == 1);
  CHECK(d.parts[0].exact_certified);
  CHECK(d.crossing_edges == 0);
}

TEST_CASE("decompose splits two K6s joined by a bridge at phi 0.4") {
  LocalGraph g;
  g.n = 12;
  for (std::uint32_t base : {0u, 6u})
    for (std::uint32_t u = 0; u < 6; ++u)
      for (std::uint32_t v = u + 1; v < 6; ++v) g.edges.emplace_back(base + u, base + v);
  g.edges.emplace_back(0, 6);
  auto d = decompose(g, 0.4, 7);
  REQUIRE(d.parts.size() == 2);
  CHECK(d.crossing_edges == 1);
  std::set<std::uint32_t> a(d.parts[0].vertices.begin(), d.parts[0].vertices.end());
  std::set<std::uint32_t> b(d.parts[1].vertices.begin(), d.parts[1].vertices.end());
  std::set<std::uint32_t> left{0, 1, 2, 3, 4, 5}, right{6, 7, 8, 9, 10, 11};
  CHECK(((a == left && b == right) || (a == right && b == left)));
  CHECK(d.quality_q == doctest::Approx(1.0 / (0.4 * 31.0)));
}

TEST_CASE("edgeless graph decomposes into singletons") {
  LocalGraph g;
  g.n = 4;
  auto d = decompose(g, 0.5, 3);
  CHECK(d.parts.size() == 4);
  CHECK(d.crossing_edges == 0);
}

TEST_CASE("decompose partitions the vertex set exactly once and is deterministic") {
  Rng rng(97);
  for (int trial = 0; trial < 40; ++trial) {
    LocalGraph g;
    g.n = 4 + rand_below(rng, 30);
    std::size_t m = rand_below(rng, 3 * g.n);
    for (std::size_t i = 0; i < m; ++i) {
      std::uint32_t u = static_cast<std::uint32_t>(rand_below(rng, g.n));
      std::uint32_t v = static_cast<std::uint32_t>(rand_below(rng, g.n));
      if (u != v) g.edges.emplace_back(u, v);
    }
    std::uint64_t seed = rng();
    auto d1 = decompose(g, 0.3, seed);
    auto d2 = decompose(g, 0.3, seed);
    REQUIRE(d1.parts.size() == d2.parts.size());
    std::vector<std::uint32_t> seen(g.n, 0);
    for (std::size_t p = 0; p < d1.parts.size(); ++p) {
      CHECK(d1.parts[p].vertices == d2.parts[p].vertices);
      for (std::uint32_t v : d1.parts[p].vertices) ++seen[v];
    }
    for (std::uint32_t v = 0; v < g.n; ++v) CHECK(seen[v] == 1);
  }
}

TEST_CASE("every sufficiently small part is exactly certified at phi") {
  Rng rng(101);
  DecomposeConfig cfg;
  cfg.max_part_size = 14;
  for (int trial = 0; trial < 30; ++trial) {
    LocalGraph g;
    g.n = 6 + rand_below(rng, 34);
    std::size_t m = g.n + rand_below(rng, 2 * g.n);
    for (std::size_t i = 0; i < m; ++i) {
      std::uint32_t u = static_cast<std::uint32_t>(rand_below(rng, g.n));
      std::uint32_t v = static_cast<std::uint32_t>(rand_below(rng, g.n));
      if (u != v) g.edges.emplace_back(u, v);
    }
    auto d = decompose(g, 0.25, rng(), cfg);
    for (const auto& part : d.parts) {
      REQUIRE(part.vertices.size() <= 14);
      CHECK(part.exact_certified);
      CHECK(conductance_exact(g, part.vertices).at_least(0.25));
    }
  }
}

TEST_CASE("pruning leaves K6 alone after one deletion at phi 0.3") {
  auto g = clique(6);
  PruningState st(g, 0.3, 2.0);
  REQUIRE(st.budget() >= 1);
  auto r = st.on_delete(0, 1);
  CHECK(r.status == PruningState::Result::kOk);
  CHECK(r.delta.empty());
  // remainder is K6 minus an edge; exhaustively still well connected
  LocalGraph rem = g;
  rem.edges.erase(std::find(rem.edges.begin(), rem.edges.end(), std::make_pair(0u, 1u)));
  CHECK(conductance_exact(rem, {0, 1, 2, 3, 4, 5}).at_least(0.3 / 2.0));
}

TEST_CASE("deletion storm on K8 prunes the stripped vertex") {
  auto g = clique(8);
  const double phi = 0.3, gamma = 1.0;
  PruningState st(g, phi, gamma);
  LocalGraph current = g;
  bool exceeded = false;
  for (std::uint32_t w = 1; w < 8; ++w) {
    if (st.pruned(0)) break;
    auto r = st.on_delete(0, w);
    if (r.status == PruningState::Result::kBudgetExceeded) {
      exceeded = true;
      break;
    }
    current.edges.erase(std::find(current.edges.begin(), current.edges.end(), std::make_pair(0u, w)));
    CHECK(r.delta.size() <= st.growth_cap());
    // exact conductance of the unpruned remainder
    std::vector<std::uint32_t> alive;
    for (std::uint32_t v = 0; v < 8; ++v)
      if (!st.pruned(v)) alive.push_back(v);
    CHECK(conductance_exact(current, alive).at_least(phi / gamma));
  }
  CHECK((st.pruned(0) || exceeded));
  CHECK(st.pruned(0));  // with gamma 1 the budget is wide enough
}

TEST_CASE("zero budget signals immediately") {
  auto g = clique(6);
  PruningState st(g, 0.3, 8.0);  // budget floor(0.5625) = 0
  CHECK(st.budget() == 0);
  auto r = st.on_delete(0, 1);
  CHECK(r.status == PruningState::Result::kBudgetExceeded);
}

TEST_CASE("pruned set grows monotonically") {
  auto g = clique(6);
  PruningState st(g, 0.9, 1.0);
  std::set<std::uint32_t> seen;
  for (std::uint32_t w = 1; w < 6; ++w) {
    if (st.pruned(0) || st.pruned(w)) continue;
    auto r = st.on_delete(0, w);
    for (std::uint32_t v : r.delta) {
      CHECK(!seen.count(v));
      seen.insert(v);
    }
    if (r.status != PruningState::Result::kOk) break;
  }
  CHECK(st.pruned_list().size() == seen.size());
}
