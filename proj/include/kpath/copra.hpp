#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "kpath/error.hpp"
#include "kpath/graph.hpp"
#include "kpath/partition.hpp"
#include "kpath/rng.hpp"

namespace kpath {

struct CopraConfig {
  std::uint32_t v_max = 1;  // max memberships per vertex; filter threshold is 1/v_max
  std::uint32_t max_iterations = 100;
  std::uint64_t seed = 0;
};

// Community Overlap PRopagation. Every vertex starts as its own community
// with coefficient 1; each synchronous round replaces a vertex's label set
// with the union of its neighbors' labels, coefficients averaged with edge
// weights (plain averaging when the incident weights sum to zero):
//
//   b_i(c, v) = sum_{w in N(v)} weight(v,w) * b_{i-1}(c, w) / strength(v)
//
// Pairs below 1/v_max are filtered; if the filter would empty the label set,
// the max-coefficient pair survives (ties broken by a seeded random pick).
// Survivors are renormalized to sum 1. Iteration stops once no vertex's
// community-id set changed (a fixed point of the id dynamics; coefficient
// drift alone does not keep it running), or at max_iterations.
inline CoverPartition copra(const Graph& g, const CopraConfig& cfg = {}) {
  if (g.vertex_count() == 0) throw std::domain_error("copra: empty graph");
  if (cfg.v_max == 0) throw ValidationError("v_max must be positive");

  const VertexId n = g.vertex_count();
  const double threshold = 1.0 / static_cast<double>(cfg.v_max);
  Rng rng(cfg.seed, 0);

  std::vector<std::vector<CoverEntry>> current(n);
  for (VertexId v = 0; v < n; ++v) current[v] = {{v, 1.0}};

  auto id_sets = [&](const std::vector<std::vector<CoverEntry>>& labels) {
    std::vector<std::vector<std::uint32_t>> sets(labels.size());
    for (std::size_t v = 0; v < labels.size(); ++v) {
      sets[v].reserve(labels[v].size());
      for (const CoverEntry& e : labels[v]) sets[v].push_back(e.community);
      // entries are kept sorted by community id, so sets[v] is sorted
    }
    return sets;
  };

  std::vector<std::vector<std::uint32_t>> previous_sets = id_sets(current);
  std::unordered_map<std::uint32_t, double> acc;

  for (std::uint32_t iter = 0; iter < cfg.max_iterations; ++iter) {
    std::vector<std::vector<CoverEntry>> next(n);
    for (VertexId v = 0; v < n; ++v) {
      if (g.degree(v) == 0) {
        next[v] = current[v];  // nothing to propagate; the label stays
        continue;
      }
      acc.clear();
      const double strength = g.strength(v);
      const bool weighted = strength > 0.0;
      const double denom = weighted ? strength : static_cast<double>(g.degree(v));
      for (const IncidentEdge& inc : g.incident(v)) {
        const double w = weighted ? g.edge(inc.edge).weight : 1.0;
        if (w == 0.0) continue;
        for (const CoverEntry& e : current[inc.neighbor])
          acc[e.community] += w * e.coefficient;
      }

      std::vector<CoverEntry> entries;
      entries.reserve(acc.size());
      for (const auto& [c, sum] : acc) entries.push_back({c, sum / denom});
      std::sort(entries.begin(), entries.end(),
                [](const CoverEntry& x, const CoverEntry& y) { return x.community < y.community; });

      std::vector<CoverEntry> kept;
      for (const CoverEntry& e : entries)
        if (e.coefficient >= threshold) kept.push_back(e);
      if (kept.empty()) {
        double best = 0.0;
        for (const CoverEntry& e : entries) best = std::max(best, e.coefficient);
        std::vector<CoverEntry> tied;
        for (const CoverEntry& e : entries)
          if (e.coefficient == best) tied.push_back(e);
        kept.push_back(tied.size() == 1 ? tied[0]
                                        : tied[rng.next_below(tied.size())]);
      }
      double total = 0.0;
      for (const CoverEntry& e : kept) total += e.coefficient;
      for (CoverEntry& e : kept) e.coefficient /= total;
      next[v] = std::move(kept);
    }

    current = std::move(next);
    auto sets = id_sets(current);
    if (sets == previous_sets) break;
    previous_sets = std::move(sets);
  }
  return CoverPartition{std::move(current)};
}

}  // namespace kpath
