#pragma once

#include <cassert>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "kpath/error.hpp"
#include "kpath/graph.hpp"
#include "kpath/rng.hpp"

namespace kpath {

enum class SourcePolicy {
  kDegreeProportional,  // Pr(v) = degree(v) / 2|E|
  kUniform,             // Pr(v) = 1 / |V|
};

enum class CentralityConvention {
  kTheoremForm,     // (omega - 1) / rho; the estimator the error bounds govern
  kPseudocodeForm,  // omega / rho; keeps the initial unit weight in the value
};

struct WalkConfig {
  std::uint32_t kappa = 20;          // max edges per walk
  std::optional<std::uint64_t> rho;  // number of walks; defaults to |E|
  std::uint64_t seed = 0;
  SourcePolicy source_policy = SourcePolicy::kDegreeProportional;
  CentralityConvention convention = CentralityConvention::kTheoremForm;
  // Freeze selection weights at 1 while still counting traversals. Walks
  // become i.i.d., which is what the exact enumeration oracle models.
  bool static_weights = false;
};

struct CentralityMap {
  std::vector<double> omega;     // accumulated weight per edge, starts at 1
  std::vector<double> estimate;  // per the chosen convention
  std::uint64_t rho_used = 0;
  std::uint32_t kappa_used = 0;
};

// One realized walk; edge ids are pairwise distinct and consecutive edges
// share an endpoint.
struct WalkTrace {
  VertexId source = 0;
  std::vector<EdgeId> edge_ids;
};

struct EdgeChoice {
  EdgeId edge = 0;
  double omega = 1.0;
  bool traversed = false;
};

// Weight-proportional selection among the untraversed entries: entry m wins
// with probability omega(m) / sum of untraversed omegas. Consumes exactly one
// uniform draw; entries are scanned in the order given (callers pass ascending
// edge ids), so results are reproducible.
inline EdgeId select_edge(std::span<const EdgeChoice> incident, Rng& rng) {
  double total = 0.0;
  for (const EdgeChoice& c : incident)
    if (!c.traversed) total += c.omega;
  if (total <= 0.0)
    throw std::logic_error("select_edge: no untraversed incident edge");
  const double threshold = rng.next_double() * total;
  double cum = 0.0;
  const EdgeChoice* last = nullptr;
  for (const EdgeChoice& c : incident) {
    if (c.traversed) continue;
    cum += c.omega;
    last = &c;
    if (cum > threshold) return c.edge;
  }
  return last->edge;  // threshold landed on the final rounding sliver
}

inline VertexId select_source(const Graph& g, SourcePolicy policy, Rng& rng) {
  if (g.vertex_count() == 0) throw std::domain_error("select_source: empty graph");
  if (policy == SourcePolicy::kUniform) {
    auto idx = static_cast<VertexId>(rng.next_double() * g.vertex_count());
    return idx < g.vertex_count() ? idx : g.vertex_count() - 1;
  }
  if (g.edge_count() == 0)
    throw std::domain_error("select_source: degree-proportional sampling needs edges");
  const double threshold = rng.next_double() * (2.0 * static_cast<double>(g.edge_count()));
  double cum = 0.0;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    cum += static_cast<double>(g.degree(v));
    if (cum > threshold) return v;
  }
  return g.vertex_count() - 1;
}

// Bounded self-avoiding random-walk simulator. Each iteration clears the
// traversal flags, draws a source, and propagates a message for at most kappa
// hops; every traversal bumps the edge's weight, and future selections are
// biased toward the weights accumulated so far.
//
// The full algorithm is run(); begin_iteration()/propagate() expose single
// walks so tests can watch traces. Sources come from rng stream 0, edge
// choices from stream 1.
class WalkEngine {
 public:
  WalkEngine(const Graph& g, const WalkConfig& cfg)
      : graph_(g),
        config_(cfg),
        source_rng_(cfg.seed, 0),
        edge_rng_(cfg.seed, 1),
        omega_(g.edge_count(), 1.0),
        stamp_(g.edge_count(), 0) {
    if (g.edge_count() == 0) throw std::domain_error("werw_kpath: graph has no edges");
    if (cfg.kappa == 0) throw ValidationError("kappa must be positive");
    if (cfg.rho && *cfg.rho == 0) throw ValidationError("rho must be positive");
  }

  // Marks every edge as not traversed (step 2 of each iteration).
  void begin_iteration() { ++iteration_; }

  bool traversed(EdgeId e) const { return stamp_[e] == iteration_; }

  VertexId draw_source() { return select_source(graph_, config_.source_policy, source_rng_); }

  // One message propagation from `start` under the current weights and flags.
  WalkTrace propagate(VertexId start) {
    WalkTrace trace{start, {}};
    VertexId at = start;
    for (std::uint32_t n = 0; n < config_.kappa; ++n) {
      scratch_.clear();
      bool any_open = false;
      for (const IncidentEdge& inc : graph_.incident(at)) {
        const bool done = traversed(inc.edge);
        any_open |= !done;
        scratch_.push_back({inc.edge, config_.static_weights ? 1.0 : omega_[inc.edge], done});
      }
      if (!any_open) break;  // |I(v)| == sum of flags: the walk is stuck
      const EdgeId chosen = select_edge(scratch_, edge_rng_);
      omega_[chosen] += 1.0;
      stamp_[chosen] = iteration_;
      at = graph_.opposite(chosen, at);
      trace.edge_ids.push_back(chosen);
    }
    assert(trace.edge_ids.size() <= config_.kappa);
    return trace;
  }

  const std::vector<double>& omega() const { return omega_; }

  CentralityMap run() {
    const std::uint64_t rho = config_.rho.value_or(graph_.edge_count());
    for (std::uint64_t i = 0; i < rho; ++i) {
      begin_iteration();
      propagate(draw_source());
    }
    CentralityMap result;
    result.omega = omega_;
    result.rho_used = rho;
    result.kappa_used = config_.kappa;
    result.estimate.resize(omega_.size());
    const double denom = static_cast<double>(rho);
    for (std::size_t e = 0; e < omega_.size(); ++e) {
      if (config_.convention == CentralityConvention::kTheoremForm) {
        result.estimate[e] = (omega_[e] - 1.0) / denom;
        assert(result.estimate[e] >= 0.0 && result.estimate[e] <= 1.0);
      } else {
        result.estimate[e] = omega_[e] / denom;
      }
    }
    return result;
  }

 private:
  const Graph& graph_;
  WalkConfig config_;
  Rng source_rng_;
  Rng edge_rng_;
  std::vector<double> omega_;
  std::vector<std::uint64_t> stamp_;  // stamp == iteration  <=>  traversed
  std::uint64_t iteration_ = 0;
  std::vector<EdgeChoice> scratch_;
};

// kappa-path edge centrality estimates for every edge of g. Deterministic in
// (g, cfg) including the seed.
inline CentralityMap werw_kpath(const Graph& g, const WalkConfig& cfg) {
  return WalkEngine(g, cfg).run();
}

inline void write_weighted_edge_list(const Graph& g, const CentralityMap& centrality,
                                     std::ostream& out) {
  write_weighted_edge_list(g, std::span<const double>(centrality.estimate), out);
}

}  // namespace kpath
