#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kpath/error.hpp"

namespace kpath {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

// Undirected edge, endpoints stored with a <= b after normalization.
struct Edge {
  VertexId a = 0;
  VertexId b = 0;
  double weight = 1.0;
};

struct IncidentEdge {
  EdgeId edge = 0;
  VertexId neighbor = 0;
};

struct EdgeListOptions {
  // Directed inputs are read as undirected; reciprocal arcs collapse into one
  // edge with summed weight, which is also how plain duplicate lines are
  // handled. The flag is kept for callers that want to state the intent.
  bool treat_directed_as_undirected = true;
};

// Immutable simple undirected graph. Construction normalizes the edge list:
// self-loops are dropped, parallel edges merge with weights summed, vertex
// ids are compacted to 0..n-1 (the original ids are kept for output).
// Safe to share across threads once built.
class Graph {
 public:
  Graph() = default;

  // `edges` uses internal ids < vertex_count. `original_ids`, when given,
  // maps internal id -> external id and must have vertex_count entries.
  static Graph from_edges(VertexId vertex_count, std::vector<Edge> edges,
                          std::vector<std::uint64_t> original_ids = {}) {
    Graph g;
    g.vertex_count_ = vertex_count;
    if (original_ids.empty()) {
      g.original_ids_.resize(vertex_count);
      for (VertexId v = 0; v < vertex_count; ++v) g.original_ids_[v] = v;
    } else {
      if (original_ids.size() != vertex_count)
        throw ValidationError("original id map does not cover every vertex");
      g.original_ids_ = std::move(original_ids);
    }

    std::unordered_map<std::uint64_t, EdgeId> seen;
    seen.reserve(edges.size());
    for (const Edge& e : edges) {
      if (e.a >= vertex_count || e.b >= vertex_count)
        throw ValidationError("edge endpoint out of range");
      if (!std::isfinite(e.weight) || e.weight < 0.0)
        throw ValidationError("edge weight must be finite and non-negative");
      if (e.a == e.b) continue;  // self-loops can never lie on a simple path
      const VertexId lo = std::min(e.a, e.b);
      const VertexId hi = std::max(e.a, e.b);
      const std::uint64_t key = (static_cast<std::uint64_t>(lo) << 32) | hi;
      auto [it, inserted] = seen.emplace(key, static_cast<EdgeId>(g.edges_.size()));
      if (inserted) {
        g.edges_.push_back({lo, hi, e.weight});
      } else {
        g.edges_[it->second].weight += e.weight;
      }
    }

    g.adjacency_.resize(vertex_count);
    g.strength_.assign(vertex_count, 0.0);
    for (EdgeId id = 0; id < g.edges_.size(); ++id) {
      const Edge& e = g.edges_[id];
      g.adjacency_[e.a].push_back({id, e.b});
      g.adjacency_[e.b].push_back({id, e.a});
      g.strength_[e.a] += e.weight;
      g.strength_[e.b] += e.weight;
      g.total_weight_ += e.weight;
    }
    return g;
  }

  VertexId vertex_count() const { return vertex_count_; }
  EdgeId edge_count() const { return static_cast<EdgeId>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }

  // Incident edges of v, in ascending edge-id order.
  std::span<const IncidentEdge> incident(VertexId v) const {
    check_vertex(v);
    return adjacency_[v];
  }

  std::size_t degree(VertexId v) const {
    check_vertex(v);
    return adjacency_[v].size();
  }

  double strength(VertexId v) const {
    check_vertex(v);
    return strength_[v];
  }

  // |I(v)| / |V|; the source-sampling weight of the walk engine.
  double normalized_degree(VertexId v) const {
    check_vertex(v);
    return static_cast<double>(adjacency_[v].size()) / static_cast<double>(vertex_count_);
  }

  double total_weight() const { return total_weight_; }

  std::uint64_t original_id(VertexId v) const {
    check_vertex(v);
    return original_ids_[v];
  }

  VertexId vertex_from_original(std::uint64_t original) const {
    if (reverse_ids_.empty() && vertex_count_ > 0) {
      reverse_ids_.reserve(vertex_count_);
      for (VertexId v = 0; v < vertex_count_; ++v) reverse_ids_.emplace(original_ids_[v], v);
    }
    auto it = reverse_ids_.find(original);
    if (it == reverse_ids_.end())
      throw std::domain_error("unknown vertex id " + std::to_string(original));
    return it->second;
  }

  // Other endpoint of e as seen from v.
  VertexId opposite(EdgeId e, VertexId v) const {
    const Edge& ed = edges_[e];
    return ed.a == v ? ed.b : ed.a;
  }

 private:
  void check_vertex(VertexId v) const {
    if (v >= vertex_count_)
      throw std::domain_error("vertex id " + std::to_string(v) + " out of range");
  }

  VertexId vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<IncidentEdge>> adjacency_;
  std::vector<double> strength_;
  std::vector<std::uint64_t> original_ids_;
  double total_weight_ = 0.0;
  mutable std::unordered_map<std::uint64_t, VertexId> reverse_ids_;
};

namespace detail {

inline bool parse_u64(std::string_view tok, std::uint64_t& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

inline bool parse_double(std::string_view tok, double& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> toks;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) toks.push_back(line.substr(i, j - i));
    i = j;
  }
  return toks;
}

// Shortest decimal form that round-trips the double exactly.
inline std::string format_weight(double w) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", w);
  double back = 0.0;
  if (parse_double(buf, back) && back == w) {
    for (int prec = 1; prec < 17; ++prec) {
      char shorter[40];
      std::snprintf(shorter, sizeof(shorter), "%.*g", prec, w);
      if (parse_double(shorter, back) && back == w) return shorter;
    }
  }
  return buf;
}

}  // namespace detail

// Reads a whitespace-separated edge list: "u v" or "u v weight" per line,
// '#'/'%' comment lines and blank lines skipped. Vertex ids are arbitrary
// non-negative integers and get compacted (ascending) to 0..n-1.
inline Graph load_edge_list(std::istream& in, const EdgeListOptions& options = {}) {
  (void)options;  // both readings normalize to the same undirected graph
  struct RawEdge {
    std::uint64_t u, v;
    double w;
  };
  std::vector<RawEdge> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto toks = detail::split_ws(line);
    if (toks.empty() || toks[0][0] == '#' || toks[0][0] == '%') continue;
    if (toks.size() != 2 && toks.size() != 3)
      throw ParseError("expected 2 or 3 columns, found " + std::to_string(toks.size()), line_no);
    RawEdge e{0, 0, 1.0};
    if (!detail::parse_u64(toks[0], e.u) || !detail::parse_u64(toks[1], e.v))
      throw ParseError("vertex ids must be non-negative integers", line_no);
    if (toks.size() == 3) {
      if (!detail::parse_double(toks[2], e.w) || std::isnan(e.w))
        throw ParseError("weight is not a number", line_no);
      if (!std::isfinite(e.w) || e.w < 0.0)
        throw ValidationError("line " + std::to_string(line_no) + ": negative or non-finite weight");
    }
    raw.push_back(e);
  }
  if (in.bad()) throw IoError("read failure on edge-list stream");
  if (raw.empty()) throw ValidationError("empty edge-list input");

  std::vector<std::uint64_t> ids;
  ids.reserve(raw.size() * 2);
  for (const RawEdge& e : raw) {
    ids.push_back(e.u);
    ids.push_back(e.v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  std::unordered_map<std::uint64_t, VertexId> to_internal;
  to_internal.reserve(ids.size());
  for (VertexId i = 0; i < ids.size(); ++i) to_internal.emplace(ids[i], i);

  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (const RawEdge& e : raw)
    edges.push_back({to_internal[e.u], to_internal[e.v], e.w});
  const auto vertex_count = static_cast<VertexId>(ids.size());
  return Graph::from_edges(vertex_count, std::move(edges), std::move(ids));
}

// One line per edge, ascending edge id: "u v value" with original vertex ids
// and a decimal value that reloads bit-for-bit.
inline void write_weighted_edge_list(const Graph& g, std::span<const double> edge_values,
                                     std::ostream& out) {
  if (edge_values.size() != g.edge_count())
    throw ValidationError("edge values do not cover every edge");
  for (EdgeId id = 0; id < g.edge_count(); ++id) {
    const Edge& e = g.edge(id);
    out << g.original_id(e.a) << ' ' << g.original_id(e.b) << ' '
        << detail::format_weight(edge_values[id]) << '\n';
  }
  if (!out) throw IoError("write failure on edge-list stream");
}

}  // namespace kpath
