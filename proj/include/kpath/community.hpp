#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "kpath/error.hpp"
#include "kpath/graph.hpp"
#include "kpath/partition.hpp"
#include "kpath/rng.hpp"

namespace kpath {

// Newman modularity, weighted form:
//   Q = sum_c [ l_c / m  -  (d_c / 2m)^2 ]
// with l_c the intra-community edge weight, d_c the summed vertex strength of
// the community and m the total edge weight.
inline double modularity(const Graph& g, const Partition& p) {
  if (p.size() != g.vertex_count())
    throw std::domain_error("modularity: partition does not cover the graph");
  const double m = g.total_weight();
  if (g.edge_count() == 0 || m <= 0.0)
    throw std::domain_error("modularity: undefined for zero total edge weight");
  std::vector<double> intra(p.community_count, 0.0);
  std::vector<double> strength(p.community_count, 0.0);
  for (const Edge& e : g.edges())
    if (p.assignment[e.a] == p.assignment[e.b]) intra[p.assignment[e.a]] += e.weight;
  for (VertexId v = 0; v < g.vertex_count(); ++v) strength[p.assignment[v]] += g.strength(v);
  double q = 0.0;
  for (std::uint32_t c = 0; c < p.community_count; ++c) {
    const double frac = strength[c] / (2.0 * m);
    q += intra[c] / m - frac * frac;
  }
  return q;
}

struct LouvainConfig {
  std::uint64_t seed = 0;      // vertex scan order
  double min_gain = 1e-9;      // a move must improve Q by more than this
  std::uint32_t max_levels = 32;
  // Optional per-move probe: partitions over the *original* vertices just
  // before and after the move, plus the gain the incremental formula claimed.
  std::function<void(const Partition& before, const Partition& after, double gain)> observer;
};

struct LouvainResult {
  Partition partition;               // coarsest level, over original vertices
  std::vector<Partition> hierarchy;  // finest to coarsest, over original vertices
  std::vector<double> q_per_level;   // computed on the aggregated level graphs
};

namespace detail {

// Aggregated working graph for the Louvain hierarchy. Unlike kpath::Graph it
// carries self-loops: a self-loop counts once in the intra-community weight
// and twice in the vertex strength, which keeps level modularity identical to
// the unrolled original.
struct LevelGraph {
  std::uint32_t n = 0;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;  // no self entries
  std::vector<double> self_loop;
  std::vector<double> strength;
  double total_weight = 0.0;

  static LevelGraph from_graph(const Graph& g) {
    LevelGraph lg;
    lg.n = g.vertex_count();
    lg.adj.resize(lg.n);
    lg.self_loop.assign(lg.n, 0.0);
    lg.strength.assign(lg.n, 0.0);
    for (const Edge& e : g.edges()) {
      lg.adj[e.a].emplace_back(e.b, e.weight);
      lg.adj[e.b].emplace_back(e.a, e.weight);
    }
    for (std::uint32_t v = 0; v < lg.n; ++v) lg.strength[v] = g.strength(v);
    lg.total_weight = g.total_weight();
    return lg;
  }
};

inline double level_modularity(const LevelGraph& lg, const std::vector<std::uint32_t>& comm,
                               std::uint32_t community_count) {
  const double m = lg.total_weight;
  std::vector<double> intra(community_count, 0.0);
  std::vector<double> strength(community_count, 0.0);
  for (std::uint32_t v = 0; v < lg.n; ++v) {
    intra[comm[v]] += lg.self_loop[v];
    strength[comm[v]] += lg.strength[v];
    for (const auto& [nb, w] : lg.adj[v])
      if (nb > v && comm[nb] == comm[v]) intra[comm[v]] += w;
  }
  double q = 0.0;
  for (std::uint32_t c = 0; c < community_count; ++c) {
    const double frac = strength[c] / (2.0 * m);
    q += intra[c] / m - frac * frac;
  }
  return q;
}

// Phase 1: greedy local moves in a seeded random vertex order until a full
// pass makes no move whose gain exceeds min_gain. `comm` ends compacted.
// Returns whether anything moved.
template <typename MoveProbe>
bool louvain_one_level(const LevelGraph& lg, Rng& rng, double min_gain,
                       std::vector<std::uint32_t>& comm, std::uint32_t& community_count,
                       MoveProbe&& probe) {
  const std::uint32_t n = lg.n;
  const double m = lg.total_weight;
  comm.resize(n);
  std::iota(comm.begin(), comm.end(), 0);
  std::vector<double> community_strength(lg.strength);

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);

  // sparse accumulator of edge weight from v into each touched community
  std::vector<double> weight_to(n, 0.0);
  std::vector<std::uint32_t> touched;
  touched.reserve(64);

  bool any_move = false;
  bool moved_in_pass = true;
  while (moved_in_pass) {
    moved_in_pass = false;
    for (const std::uint32_t v : order) {
      const std::uint32_t home = comm[v];
      touched.clear();
      touched.push_back(home);
      for (const auto& [nb, w] : lg.adj[v]) {
        const std::uint32_t c = comm[nb];
        if (weight_to[c] == 0.0 && c != home) touched.push_back(c);
        weight_to[c] += w;
      }

      // gain of placing v (removed from its community) into c, in Q units:
      //   weight_to[c]/m - strength_c * strength_v / (2 m^2)
      community_strength[home] -= lg.strength[v];
      const double scale = lg.strength[v] / (2.0 * m * m);
      double best_gain = weight_to[home] / m - community_strength[home] * scale;
      const double stay_gain = best_gain;
      std::uint32_t best = home;
      for (const std::uint32_t c : touched) {
        if (c == home) continue;
        const double gain = weight_to[c] / m - community_strength[c] * scale;
        if (gain > best_gain) {
          best_gain = gain;
          best = c;
        }
      }

      if (best != home && best_gain - stay_gain > min_gain) {
        probe(comm, v, home, best, best_gain - stay_gain);
        comm[v] = best;
        community_strength[best] += lg.strength[v];
        moved_in_pass = true;
        any_move = true;
      } else {
        community_strength[home] += lg.strength[v];
      }
      for (const std::uint32_t c : touched) weight_to[c] = 0.0;
    }
  }

  // compact community ids
  std::vector<std::uint32_t> remap(n, UINT32_MAX);
  community_count = 0;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (remap[comm[v]] == UINT32_MAX) remap[comm[v]] = community_count++;
    comm[v] = remap[comm[v]];
  }
  return any_move;
}

// Phase 2: communities become vertices, parallel weights sum, intra weight
// becomes the aggregated vertex's self-loop.
inline LevelGraph aggregate(const LevelGraph& lg, const std::vector<std::uint32_t>& comm,
                            std::uint32_t community_count) {
  LevelGraph out;
  out.n = community_count;
  out.adj.resize(out.n);
  out.self_loop.assign(out.n, 0.0);
  out.strength.assign(out.n, 0.0);
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> between;
  for (std::uint32_t v = 0; v < lg.n; ++v) {
    out.self_loop[comm[v]] += lg.self_loop[v];
    for (const auto& [nb, w] : lg.adj[v]) {
      if (nb < v) continue;  // each undirected edge once
      const std::uint32_t cu = comm[v], cv = comm[nb];
      if (cu == cv)
        out.self_loop[cu] += w;
      else
        between[{std::min(cu, cv), std::max(cu, cv)}] += w;
    }
  }
  for (const auto& [key, w] : between) {
    out.adj[key.first].emplace_back(key.second, w);
    out.adj[key.second].emplace_back(key.first, w);
  }
  for (std::uint32_t v = 0; v < out.n; ++v) {
    double s = 2.0 * out.self_loop[v];
    for (const auto& [nb, w] : out.adj[v]) s += w;
    out.strength[v] = s;
    out.total_weight += out.self_loop[v];
  }
  for (std::uint32_t v = 0; v < out.n; ++v)
    for (const auto& [nb, w] : out.adj[v])
      if (nb > v) out.total_weight += w;
  return out;
}

}  // namespace detail

// Two-phase greedy modularity maximization. Returns the level hierarchy
// (unrolled to original vertices) and the modularity reached at each level;
// Q is non-decreasing across levels.
inline LouvainResult louvain(const Graph& g, const LouvainConfig& cfg = {}) {
  if (g.edge_count() == 0 || g.total_weight() <= 0.0)
    throw std::domain_error("louvain: undefined for zero total edge weight");
  if (cfg.min_gain < 0.0) throw ValidationError("min_gain must be non-negative");

  Rng rng(cfg.seed, 0);
  detail::LevelGraph lg = detail::LevelGraph::from_graph(g);
  // orig_to_level[v] = level vertex currently containing original vertex v
  std::vector<std::uint32_t> orig_to_level(g.vertex_count());
  std::iota(orig_to_level.begin(), orig_to_level.end(), 0);

  LouvainResult result;
  double prev_q = -2.0;
  for (std::uint32_t level = 0; level < cfg.max_levels; ++level) {
    std::vector<std::uint32_t> comm;
    std::uint32_t community_count = 0;

    auto probe = [&](const std::vector<std::uint32_t>& current, std::uint32_t v,
                     std::uint32_t from, std::uint32_t to, double gain) {
      if (!cfg.observer) return;
      std::vector<std::uint32_t> before(g.vertex_count()), after(g.vertex_count());
      for (VertexId o = 0; o < g.vertex_count(); ++o) {
        const std::uint32_t lv = orig_to_level[o];
        before[o] = current[lv];
        after[o] = lv == v ? to : current[lv];
      }
      (void)from;
      cfg.observer(make_partition(before), make_partition(after), gain);
    };

    const bool moved = detail::louvain_one_level(lg, rng, cfg.min_gain, comm, community_count, probe);
    if (!moved && level > 0) break;  // identical to the previous level

    const double q = detail::level_modularity(lg, comm, community_count);
    std::vector<std::uint32_t> unrolled(g.vertex_count());
    for (VertexId o = 0; o < g.vertex_count(); ++o) unrolled[o] = comm[orig_to_level[o]];
    result.hierarchy.push_back(make_partition(unrolled));
    result.q_per_level.push_back(q);

    if (!moved || q - prev_q <= cfg.min_gain) break;
    prev_q = q;
    for (VertexId o = 0; o < g.vertex_count(); ++o) orig_to_level[o] = comm[orig_to_level[o]];
    lg = detail::aggregate(lg, comm, community_count);
  }
  result.partition = result.hierarchy.back();
  return result;
}

}  // namespace kpath
