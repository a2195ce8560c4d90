#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "kpath/copra.hpp"
#include "kpath/graph.hpp"
#include "kpath/partition.hpp"

using namespace kpath;

namespace {

Graph two_triangles() {
  return Graph::from_edges(
      6, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}, {3, 4, 1}, {4, 5, 1}, {5, 3, 1}});
}

}  // namespace

TEST_CASE("isolated vertices keep their own label", "[copra]") {
  const Graph g = Graph::from_edges(4, {{0, 1, 1.0}});
  const CoverPartition cover = copra(g, {});
  REQUIRE(cover.memberships[2].size() == 1);
  CHECK(cover.memberships[2][0].community == 2);
  CHECK(cover.memberships[2][0].coefficient == 1.0);
  REQUIRE(cover.memberships[3].size() == 1);
  CHECK(cover.memberships[3][0].community == 3);
}

TEST_CASE("two triangles collapse to their components", "[copra]") {
  CopraConfig cfg;
  cfg.v_max = 1;
  cfg.seed = 3;  // pinned; label propagation tie-breaks are random by design
  const Partition p = crisp_projection(copra(two_triangles(), cfg));
  REQUIRE(p.community_count == 2);
  CHECK(p.assignment[0] == p.assignment[1]);
  CHECK(p.assignment[1] == p.assignment[2]);
  CHECK(p.assignment[3] == p.assignment[4]);
  CHECK(p.assignment[4] == p.assignment[5]);
  CHECK(p.assignment[0] != p.assignment[3]);
}

TEST_CASE("a clique converges to a single label", "[copra]") {
  std::vector<Edge> edges;
  for (VertexId a = 0; a < 5; ++a)
    for (VertexId b = a + 1; b < 5; ++b) edges.push_back({a, b, 1.0});
  const Graph k5 = Graph::from_edges(5, edges);
  CopraConfig cfg;
  cfg.v_max = 1;
  cfg.seed = 1;
  const Partition p = crisp_projection(copra(k5, cfg));
  CHECK(p.community_count == 1);
}

TEST_CASE("coefficients stay normalized and within (0,1]", "[copra]") {
  Rng rng(404);
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const VertexId n = 8 + static_cast<VertexId>(rng.next_below(8));
    std::vector<Edge> edges;
    for (VertexId v = 1; v < n; ++v)
      edges.push_back({static_cast<VertexId>(rng.next_below(v)), v, 1.0});
    for (VertexId a = 0; a < n; ++a)
      for (VertexId b = a + 1; b < n; ++b)
        if (rng.next_double() < 0.2) edges.push_back({a, b, rng.next_double() + 0.5});
    const Graph g = Graph::from_edges(n, edges);

    CopraConfig cfg;
    cfg.v_max = 3;
    cfg.seed = seed;
    const CoverPartition cover = copra(g, cfg);
    REQUIRE(cover.size() == n);
    for (const auto& entries : cover.memberships) {
      REQUIRE(!entries.empty());
      CHECK(entries.size() <= cfg.v_max);
      double total = 0.0;
      for (const CoverEntry& e : entries) {
        CHECK(e.coefficient > 0.0);
        CHECK(e.coefficient <= 1.0);
        total += e.coefficient;
      }
      CHECK(total == Catch::Approx(1.0).margin(1e-12));
    }
  }
}

TEST_CASE("v_max=1 always produces a crisp cover", "[copra]") {
  const Graph g = two_triangles();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    CopraConfig cfg;
    cfg.v_max = 1;
    cfg.seed = seed;
    const CoverPartition cover = copra(g, cfg);
    for (const auto& entries : cover.memberships) {
      REQUIRE(entries.size() == 1);
      CHECK(entries[0].coefficient == 1.0);
    }
  }
}

TEST_CASE("copra input validation", "[copra]") {
  CHECK_THROWS_AS(copra(Graph::from_edges(0, {}), {}), std::domain_error);
  CopraConfig cfg;
  cfg.v_max = 0;
  CHECK_THROWS_AS(copra(two_triangles(), cfg), ValidationError);
}

TEST_CASE("crisp projection picks the strongest membership", "[copra]") {
  CoverPartition cover;
  cover.memberships = {
      {{4, 0.3}, {9, 0.7}},
      {{4, 0.5}, {9, 0.5}},  // tie: lowest community id wins
      {{2, 1.0}},
  };
  const Partition p = crisp_projection(cover);
  CHECK(p.community_count == 3);
  CHECK(p.assignment[0] != p.assignment[1]);  // 9 vs 4
  CHECK(p.assignment[2] != p.assignment[0]);
}
