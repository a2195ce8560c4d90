#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "kpath/error.hpp"
#include "kpath/graph.hpp"

namespace kpath {

// Crisp assignment of every vertex to exactly one community; ids are dense
// 0..community_count-1.
struct Partition {
  std::vector<std::uint32_t> assignment;
  std::uint32_t community_count = 0;

  std::size_t size() const { return assignment.size(); }
};

// Relabels arbitrary community ids to dense ids in order of first appearance.
inline Partition make_partition(const std::vector<std::uint32_t>& labels) {
  Partition p;
  p.assignment.resize(labels.size());
  std::unordered_map<std::uint32_t, std::uint32_t> remap;
  remap.reserve(labels.size());
  for (std::size_t v = 0; v < labels.size(); ++v) {
    auto [it, inserted] = remap.emplace(labels[v], p.community_count);
    if (inserted) ++p.community_count;
    p.assignment[v] = it->second;
  }
  return p;
}

// One membership of an overlapping cover; coefficients at a vertex sum to 1.
struct CoverEntry {
  std::uint32_t community = 0;
  double coefficient = 1.0;
};

struct CoverPartition {
  std::vector<std::vector<CoverEntry>> memberships;

  std::size_t size() const { return memberships.size(); }
};

// Max-coefficient community per vertex (ties: lowest community id), with ids
// compacted. This is what modularity and NMI are evaluated on.
inline Partition crisp_projection(const CoverPartition& cover) {
  std::vector<std::uint32_t> labels(cover.size(), 0);
  for (std::size_t v = 0; v < cover.size(); ++v) {
    const auto& entries = cover.memberships[v];
    if (entries.empty()) throw std::domain_error("vertex without any community membership");
    const CoverEntry* best = &entries[0];
    for (const CoverEntry& e : entries)
      if (e.coefficient > best->coefficient ||
          (e.coefficient == best->coefficient && e.community < best->community))
        best = &e;
    labels[v] = best->community;
  }
  return make_partition(labels);
}

// "vertex_id community_id" per line, original vertex ids, ascending.
inline void write_partition(const Graph& g, const Partition& p, std::ostream& out) {
  if (p.size() != g.vertex_count())
    throw std::domain_error("partition does not cover the graph's vertices");
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    out << g.original_id(v) << ' ' << p.assignment[v] << '\n';
  if (!out) throw IoError("write failure on partition stream");
}

inline Partition read_partition(const Graph& g, std::istream& in) {
  std::vector<std::uint32_t> labels(g.vertex_count(), 0);
  std::vector<bool> seen(g.vertex_count(), false);
  std::string line;
  std::size_t line_no = 0;
  std::size_t assigned = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto toks = detail::split_ws(line);
    if (toks.empty() || toks[0][0] == '#' || toks[0][0] == '%') continue;
    if (toks.size() != 2) throw ParseError("expected \"vertex community\"", line_no);
    std::uint64_t vid = 0, cid = 0;
    if (!detail::parse_u64(toks[0], vid) || !detail::parse_u64(toks[1], cid))
      throw ParseError("vertex and community ids must be non-negative integers", line_no);
    const VertexId v = g.vertex_from_original(vid);
    if (seen[v]) throw ParseError("vertex " + std::to_string(vid) + " assigned twice", line_no);
    seen[v] = true;
    ++assigned;
    if (cid > 0xFFFFFFFFULL) throw ParseError("community id out of range", line_no);
    labels[v] = static_cast<std::uint32_t>(cid);
  }
  if (in.bad()) throw IoError("read failure on partition stream");
  if (assigned != g.vertex_count())
    throw std::domain_error("partition covers " + std::to_string(assigned) + " of " +
                            std::to_string(g.vertex_count()) + " vertices");
  return make_partition(labels);
}

// "vertex_id c1:b1 c2:b2 ..." per line.
inline void write_cover(const Graph& g, const CoverPartition& cover, std::ostream& out) {
  if (cover.size() != g.vertex_count())
    throw std::domain_error("cover does not match the graph's vertices");
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    out << g.original_id(v);
    for (const CoverEntry& e : cover.memberships[v])
      out << ' ' << e.community << ':' << detail::format_weight(e.coefficient);
    out << '\n';
  }
  if (!out) throw IoError("write failure on cover stream");
}

}  // namespace kpath
