#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "kpath/community.hpp"
#include "kpath/graph.hpp"
#include "kpath/partition.hpp"
#include "kpath/walk.hpp"

// Brute-force references used by tests and the acceptance suite. Everything
// here enumerates; nothing shares code with the estimators it checks.

namespace kpath::oracle {

struct WalkDistribution {
  std::vector<double> edge_probability;  // per edge: chance a single walk traverses it
  std::vector<std::pair<std::vector<EdgeId>, double>> traces;  // every realization
};

// Exact distribution of one message propagation with all selection weights
// fixed at 1 (the first-iteration model): every (source, maximal bounded
// trail) realization is enumerated, multiplying the source probability by the
// uniform edge choices along the way. The per-edge sums equal E[Y(e)], the
// quantity the estimator converges to under static weights.
//
// Bounds: at most 64 edges (traversal set is a bitmask) and kappa <= 4, with
// a realization budget to keep dense cases from exploding.
inline WalkDistribution exact_walk_distribution(const Graph& g, std::uint32_t kappa,
                                                SourcePolicy policy) {
  if (g.edge_count() == 0) throw std::domain_error("exact_walk_distribution: no edges");
  if (g.edge_count() > 64 || kappa > 4 || kappa == 0)
    throw std::domain_error("exact_walk_distribution: enumeration bound exceeded");
  constexpr std::size_t kTraceBudget = 2'000'000;

  WalkDistribution dist;
  dist.edge_probability.assign(g.edge_count(), 0.0);
  std::vector<EdgeId> path;

  auto record = [&](double prob) {
    if (dist.traces.size() >= kTraceBudget)
      throw std::domain_error("exact_walk_distribution: enumeration budget exceeded");
    dist.traces.emplace_back(path, prob);
    for (const EdgeId e : path) dist.edge_probability[e] += prob;
  };

  auto walk = [&](auto&& self, VertexId at, std::uint64_t mask, std::uint32_t steps,
                  double prob) -> void {
    if (steps == kappa) {
      record(prob);
      return;
    }
    std::uint32_t open = 0;
    for (const IncidentEdge& inc : g.incident(at))
      if (!(mask & (1ULL << inc.edge))) ++open;
    if (open == 0) {
      record(prob);
      return;
    }
    const double step_prob = prob / open;
    for (const IncidentEdge& inc : g.incident(at)) {
      if (mask & (1ULL << inc.edge)) continue;
      path.push_back(inc.edge);
      self(self, inc.neighbor, mask | (1ULL << inc.edge), steps + 1, step_prob);
      path.pop_back();
    }
  };

  for (VertexId s = 0; s < g.vertex_count(); ++s) {
    double source_prob = 0.0;
    if (policy == SourcePolicy::kUniform) {
      source_prob = 1.0 / static_cast<double>(g.vertex_count());
    } else {
      source_prob =
          static_cast<double>(g.degree(s)) / (2.0 * static_cast<double>(g.edge_count()));
    }
    if (source_prob == 0.0) continue;
    walk(walk, s, 0, 0, source_prob);
  }
  return dist;
}

struct ExhaustiveQResult {
  Partition best;
  double best_q = -2.0;
  std::uint64_t partitions_enumerated = 0;
};

// Maximum modularity by enumerating every set partition of the vertices
// (restricted growth strings, Bell(|V|) candidates).
inline ExhaustiveQResult exhaustive_modularity_max(const Graph& g) {
  if (g.vertex_count() > 10)
    throw std::domain_error("exhaustive_modularity_max: too many vertices to enumerate");
  if (g.edge_count() == 0 || g.total_weight() <= 0.0)
    throw std::domain_error("exhaustive_modularity_max: zero total edge weight");
  const std::uint32_t n = g.vertex_count();
  const double m = g.total_weight();

  ExhaustiveQResult result;
  std::vector<std::uint32_t> labels(n, 0);
  std::vector<double> intra(n, 0.0), strength(n, 0.0);

  auto evaluate = [&]() {
    ++result.partitions_enumerated;
    std::uint32_t count = 0;
    for (const std::uint32_t c : labels) count = std::max(count, c + 1);
    std::fill(intra.begin(), intra.begin() + count, 0.0);
    std::fill(strength.begin(), strength.begin() + count, 0.0);
    for (const Edge& e : g.edges())
      if (labels[e.a] == labels[e.b]) intra[labels[e.a]] += e.weight;
    for (VertexId v = 0; v < n; ++v) strength[labels[v]] += g.strength(v);
    double q = 0.0;
    for (std::uint32_t c = 0; c < count; ++c) {
      const double frac = strength[c] / (2.0 * m);
      q += intra[c] / m - frac * frac;
    }
    if (q > result.best_q) {
      result.best_q = q;
      result.best.assignment = labels;
      result.best.community_count = count;
    }
  };

  auto enumerate = [&](auto&& self, std::uint32_t v, std::uint32_t max_used) -> void {
    if (v == n) {
      evaluate();
      return;
    }
    for (std::uint32_t c = 0; c <= max_used + 1 && c < n; ++c) {
      labels[v] = c;
      self(self, v + 1, std::max(max_used, c));
    }
  };

  labels[0] = 0;
  if (n == 1) {
    evaluate();
  } else {
    enumerate(enumerate, 1, 0);
  }
  return result;
}

// Edge betweenness over ordered vertex pairs,
//   B(e) = sum_{u} sum_{v} np_e(u, v) / np(u, v),
// by Brandes' dependency accumulation with one BFS per source (unweighted
// shortest paths; disconnected pairs contribute nothing).
inline std::vector<double> edge_betweenness(const Graph& g) {
  if (g.vertex_count() > 1000)
    throw std::domain_error("edge_betweenness: oracle scale exceeded");
  const VertexId n = g.vertex_count();
  std::vector<double> betweenness(g.edge_count(), 0.0);

  std::vector<std::int32_t> dist(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<VertexId> queue_storage;
  queue_storage.reserve(n);

  for (VertexId s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    queue_storage.clear();

    dist[s] = 0;
    sigma[s] = 1.0;
    queue_storage.push_back(s);
    for (std::size_t head = 0; head < queue_storage.size(); ++head) {
      const VertexId v = queue_storage[head];
      for (const IncidentEdge& inc : g.incident(v)) {
        if (dist[inc.neighbor] < 0) {
          dist[inc.neighbor] = dist[v] + 1;
          queue_storage.push_back(inc.neighbor);
        }
        if (dist[inc.neighbor] == dist[v] + 1) sigma[inc.neighbor] += sigma[v];
      }
    }

    for (std::size_t i = queue_storage.size(); i-- > 0;) {
      const VertexId w = queue_storage[i];
      for (const IncidentEdge& inc : g.incident(w)) {
        const VertexId v = inc.neighbor;  // predecessor on a shortest path?
        if (dist[v] != dist[w] - 1) continue;
        const double contribution = sigma[v] / sigma[w] * (1.0 + delta[w]);
        betweenness[inc.edge] += contribution;
        delta[v] += contribution;
      }
    }
  }
  return betweenness;
}

}  // namespace kpath::oracle
