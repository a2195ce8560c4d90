#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <iostream>

#include "kpath/community.hpp"
#include "kpath/metrics.hpp"
#include "kpath/oracle.hpp"
#include "kpath/walk.hpp"

using namespace kpath;

namespace {

Graph two_triangles() {
  return Graph::from_edges(
      6, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}, {3, 4, 1}, {4, 5, 1}, {5, 3, 1}});
}

Graph random_connected(std::uint64_t seed, VertexId n, double p) {
  Rng rng(seed);
  std::vector<Edge> edges;
  for (VertexId v = 1; v < n; ++v)
    edges.push_back({static_cast<VertexId>(rng.next_below(v)), v, 1.0});  // spanning tree
  for (VertexId a = 0; a < n; ++a)
    for (VertexId b = a + 1; b < n; ++b)
      if (rng.next_double() < p) edges.push_back({a, b, 1.0});
  return Graph::from_edges(n, edges);
}

}  // namespace

TEST_CASE("exact walk distribution on pinned instances", "[oracle]") {
  SECTION("K2: the single edge is certain") {
    const Graph g = Graph::from_edges(2, {{0, 1, 1.0}});
    for (const auto policy : {SourcePolicy::kUniform, SourcePolicy::kDegreeProportional}) {
      const auto dist = oracle::exact_walk_distribution(g, 1, policy);
      CHECK(dist.edge_probability[0] == Catch::Approx(1.0).margin(1e-15));
    }
  }
  SECTION("path A-B-C, kappa=1, uniform sources: each edge 0.5") {
    const Graph g = Graph::from_edges(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    const auto dist = oracle::exact_walk_distribution(g, 1, SourcePolicy::kUniform);
    CHECK(dist.edge_probability[0] == Catch::Approx(0.5).margin(1e-15));
    CHECK(dist.edge_probability[1] == Catch::Approx(0.5).margin(1e-15));
  }
  SECTION("triangle, kappa=2: edges equal by symmetry") {
    const Graph g = Graph::from_edges(3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}});
    const auto dist = oracle::exact_walk_distribution(g, 2, SourcePolicy::kUniform);
    CHECK(dist.edge_probability[0] == Catch::Approx(dist.edge_probability[1]).epsilon(1e-14));
    CHECK(dist.edge_probability[1] == Catch::Approx(dist.edge_probability[2]).epsilon(1e-14));
  }
  SECTION("size bound enforced") {
    const Graph big = random_connected(3, 40, 0.3);
    REQUIRE(big.edge_count() > 64);
    CHECK_THROWS_AS(oracle::exact_walk_distribution(big, 2, SourcePolicy::kUniform),
                    std::domain_error);
  }
}

TEST_CASE("trace probabilities sum to one", "[oracle]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = random_connected(seed, 6, 0.3);
    for (const auto policy : {SourcePolicy::kUniform, SourcePolicy::kDegreeProportional}) {
      const auto dist = oracle::exact_walk_distribution(g, 3, policy);
      double total = 0.0;
      for (const auto& [trace, prob] : dist.traces) total += prob;
      CHECK(total == Catch::Approx(1.0).margin(1e-12));
    }
  }
}

TEST_CASE("static-weight walk frequencies converge to the oracle", "[oracle]") {
  const Graph g = random_connected(17, 5, 0.5);
  const std::uint64_t runs = 100000;
  const auto dist = oracle::exact_walk_distribution(g, 3, SourcePolicy::kDegreeProportional);

  WalkConfig cfg;
  cfg.kappa = 3;
  cfg.rho = runs;
  cfg.seed = 555;
  cfg.static_weights = true;
  const CentralityMap c = werw_kpath(g, cfg);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const double p = dist.edge_probability[e];
    const double freq = c.estimate[e];  // (omega-1)/rho = empirical frequency
    const double se = std::sqrt(p * (1 - p) / static_cast<double>(runs));
    if (se == 0.0)
      CHECK(freq == p);
    else
      CHECK(std::fabs(freq - p) < 3 * se);
  }
}

TEST_CASE("exhaustive modularity maximum on pinned instances", "[oracle]") {
  SECTION("two triangles") {
    const auto result = oracle::exhaustive_modularity_max(two_triangles());
    CHECK(result.best_q == Catch::Approx(0.5).margin(1e-12));
    CHECK(result.best.community_count == 2);
    CHECK(result.partitions_enumerated == 203);  // Bell(6)
    CHECK(result.best.assignment[0] == result.best.assignment[1]);
    CHECK(result.best.assignment[0] == result.best.assignment[2]);
    CHECK(result.best.assignment[3] == result.best.assignment[4]);
    CHECK(result.best.assignment[0] != result.best.assignment[3]);
  }
  SECTION("complete graph K4 has no positive-Q split") {
    const Graph k4 = Graph::from_edges(
        4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {1, 2, 1}, {1, 3, 1}, {2, 3, 1}});
    const auto result = oracle::exhaustive_modularity_max(k4);
    CHECK(result.best_q == Catch::Approx(0.0).margin(1e-12));
    CHECK(result.best.community_count == 1);
  }
  SECTION("K2") {
    const Graph k2 = Graph::from_edges(2, {{0, 1, 1.0}});
    CHECK(oracle::exhaustive_modularity_max(k2).best_q == Catch::Approx(0.0).margin(1e-15));
  }
  SECTION("scale bound") {
    const Graph big = random_connected(1, 11, 0.2);
    CHECK_THROWS_AS(oracle::exhaustive_modularity_max(big), std::domain_error);
  }
}

TEST_CASE("edge betweenness on pinned instances", "[oracle]") {
  SECTION("K2 counts both ordered pairs") {
    const Graph k2 = Graph::from_edges(2, {{0, 1, 1.0}});
    CHECK(oracle::edge_betweenness(k2)[0] == Catch::Approx(2.0).margin(1e-12));
  }
  SECTION("path A-B-C") {
    const Graph g = Graph::from_edges(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    const auto b = oracle::edge_betweenness(g);
    CHECK(b[0] == Catch::Approx(4.0).margin(1e-12));
    CHECK(b[1] == Catch::Approx(4.0).margin(1e-12));
  }
  SECTION("4-leaf star: every edge carries its leaf plus all leaf pairs") {
    const Graph star = Graph::from_edges(5, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {0, 4, 1}});
    // per edge: 2 ordered pairs with the center + 2*3 ordered leaf pairs = 8
    for (const double b : oracle::edge_betweenness(star))
      CHECK(b == Catch::Approx(8.0).margin(1e-12));
  }
  SECTION("disconnected pairs contribute nothing") {
    const Graph g = Graph::from_edges(4, {{0, 1, 1.0}, {2, 3, 1.0}});
    const auto b = oracle::edge_betweenness(g);
    CHECK(b[0] == Catch::Approx(2.0).margin(1e-12));
    CHECK(b[1] == Catch::Approx(2.0).margin(1e-12));
  }
}

TEST_CASE("louvain never beats the exhaustive optimum", "[oracle]") {
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 200; ++seed) {
    const VertexId n = 4 + static_cast<VertexId>(seed % 5);  // up to 8 vertices
    Graph g = random_connected(seed, n, 0.35);
    const auto best = oracle::exhaustive_modularity_max(g);
    LouvainConfig cfg;
    cfg.seed = seed;
    const auto result = louvain(g, cfg);
    CHECK(result.q_per_level.back() <= best.best_q + 1e-9);
    ++checked;
  }
}

TEST_CASE("kpath centrality correlates positively with edge betweenness", "[oracle]") {
  // diagnostic link to the heavy-tail comparison; reported, not asserted
  double total = 0.0;
  int samples = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = random_connected(seed * 7 + 1, 16, 0.15);
    WalkConfig cfg;
    cfg.kappa = 20;
    cfg.rho = 20000;
    cfg.seed = seed;
    const CentralityMap c = werw_kpath(g, cfg);
    const auto betweenness = oracle::edge_betweenness(g);
    total += spearman(c.estimate, betweenness);
    ++samples;
  }
  std::cout << "[oracle] mean Spearman(kpath kappa=20, edge betweenness) over " << samples
            << " graphs: " << total / samples << "\n";
}
