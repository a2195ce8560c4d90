#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "kpath/error.hpp"
#include "kpath/graph.hpp"
#include "kpath/partition.hpp"
#include "kpath/rng.hpp"

namespace kpath {

// Planted-community benchmark parameters: power-law degrees (exponent gamma)
// with mean avg_degree, power-law community sizes (exponent beta) summing to
// n, and mixing parameter mu = the fraction of each vertex's edges that leave
// its community (mu = 0.5 is the tipping point beyond which vertices have
// more neighbors outside than inside).
struct GenSpec {
  std::uint32_t n = 1000;
  double avg_degree = 20.0;
  double gamma = 2.0;
  double beta = 1.0;
  double mu = 0.3;
  std::uint32_t max_degree = 0;  // 0: defaults to n/10
  std::uint64_t seed = 0;
};

struct Benchmark {
  Graph graph;
  Partition truth;
  double realized_mu = 0.0;
  double realized_avg_degree = 0.0;
};

namespace detail {

// Truncated continuous power law x^(-gamma) on [x_min, x_max + 1), sampled by
// inverse CDF and floored to integer degrees in [floor(x_min), x_max].
struct PowerLawDegrees {
  double x_min, exponent, norm_a, norm_b;
  std::uint32_t x_max;

  PowerLawDegrees(double xmin, std::uint32_t xmax, double gamma)
      : x_min(xmin), exponent(1.0 - gamma), x_max(xmax) {
    norm_a = std::pow(xmin, exponent);
    norm_b = std::pow(static_cast<double>(xmax) + 1.0, exponent);
  }

  double quantile(double u) const {
    return std::pow(norm_a + u * (norm_b - norm_a), 1.0 / exponent);
  }

  std::uint32_t sample(Rng& rng) const {
    const auto k = static_cast<std::uint32_t>(quantile(rng.next_double()));
    return std::min(k, x_max);
  }

  double mean_of_floor() const {
    // P(floor(X) = k) = F(k+1) - F(k), all in closed form
    double mean = 0.0;
    const auto lo = static_cast<std::uint32_t>(x_min);
    for (std::uint32_t k = lo; k <= x_max; ++k) {
      const double a = std::pow(std::max(static_cast<double>(k), x_min), exponent);
      const double b = std::pow(static_cast<double>(k) + 1.0, exponent);
      mean += static_cast<double>(k) * (b - a) / (norm_b - norm_a);
    }
    return mean;
  }
};

// Lower cutoff that makes the sampled-degree mean hit the target; the mean is
// monotone in the cutoff, so bisection suffices.
inline PowerLawDegrees fit_degree_law(double target_mean, std::uint32_t k_max, double gamma) {
  double lo = 1.0, hi = static_cast<double>(k_max);
  if (PowerLawDegrees(lo, k_max, gamma).mean_of_floor() > target_mean * 1.05)
    throw GenerationError("average degree " + std::to_string(target_mean) +
                          " unreachable: even k_min = 1 overshoots");
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (PowerLawDegrees(mid, k_max, gamma).mean_of_floor() < target_mean)
      lo = mid;
    else
      hi = mid;
  }
  PowerLawDegrees law(0.5 * (lo + hi), k_max, gamma);
  if (std::fabs(law.mean_of_floor() - target_mean) > 0.05 * target_mean)
    throw GenerationError("degree distribution mean cannot be tuned within 5% of target");
  return law;
}

// Community sizes ~ s^(-beta) on [s_min, s_max], drawn until they sum to n;
// the final draw is truncated to the remainder, and a remainder below s_min
// is spread by repeatedly incrementing the smallest community.
inline std::vector<std::uint32_t> sample_community_sizes(std::uint32_t n, std::uint32_t s_min,
                                                         std::uint32_t s_max, double beta,
                                                         Rng& rng) {
  if (s_min >= n) return {n};
  s_max = std::min(s_max, n);
  std::vector<double> cumulative;
  cumulative.reserve(s_max - s_min + 1);
  double total = 0.0;
  for (std::uint32_t s = s_min; s <= s_max; ++s) {
    total += std::pow(static_cast<double>(s), -beta);
    cumulative.push_back(total);
  }

  std::vector<std::uint32_t> sizes;
  std::uint32_t sum = 0;
  while (n - sum >= s_min) {
    const double u = rng.next_double() * total;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    auto s = static_cast<std::uint32_t>(s_min + (it - cumulative.begin()));
    s = std::min(s, s_max);
    s = std::min(s, n - sum);
    sizes.push_back(s);
    sum += s;
  }
  while (sum < n) {
    auto smallest = std::min_element(sizes.begin(), sizes.end());
    ++*smallest;
    ++sum;
  }
  return sizes;
}

inline std::uint64_t edge_key(std::uint32_t u, std::uint32_t v) {
  return (static_cast<std::uint64_t>(std::min(u, v)) << 32) | std::max(u, v);
}

// Erdos-Gallai test; `d` sorted descending, sum assumed even.
inline bool is_graphical(const std::vector<std::uint32_t>& d) {
  const std::size_t n = d.size();
  std::vector<std::uint64_t> prefix(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + d[i];
  if (prefix[n] % 2 != 0) return false;
  for (std::size_t k = 1; k <= n; ++k) {
    std::uint64_t rhs = k * (k - 1);
    for (std::size_t i = k; i < n; ++i) rhs += std::min<std::uint64_t>(d[i], k);
    if (prefix[k] > rhs) return false;
  }
  return true;
}

// Configuration-model stub matching. Pairs a shuffled stub list, redrawing
// partners for pairs that violate `valid`; leftover bad pairs go through up
// to 10 degree-preserving repair sweeps against this phase's edges. A
// matching that still has violations is discarded and redrawn from a fresh
// shuffle (bounded restarts), since a single unlucky tail can be unfixable by
// local swaps alone. Returns false when every restart fails.
template <typename Valid>
inline bool match_stubs(std::vector<std::uint32_t> stubs, Rng& rng,
                        std::unordered_set<std::uint64_t>& edge_set,
                        std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges_out,
                        Valid&& valid, const char* phase) {
  if (stubs.empty()) return true;
  if (stubs.size() % 2 != 0) throw GenerationError(std::string(phase) + ": odd stub count");

  std::unordered_set<std::uint64_t> local_set;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> local_edges;
  auto ok = [&](std::uint32_t u, std::uint32_t v) {
    return u != v && !edge_set.contains(edge_key(u, v)) &&
           !local_set.contains(edge_key(u, v)) && valid(u, v);
  };

  for (int restart = 0; restart < 50; ++restart) {
    rng.shuffle(stubs);
    local_set.clear();
    local_edges.clear();
    std::vector<std::pair<std::uint32_t, std::uint32_t>> bad;
    std::uint64_t rejections = 0;
    const std::uint64_t budget = 100 * (stubs.size() / 2);

    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      const std::uint32_t u = stubs[i];
      bool placed = false;
      for (std::size_t attempt = 0; attempt < 64 && rejections < budget; ++attempt) {
        const std::size_t j = i + 1 + rng.next_below(stubs.size() - i - 1);
        if (ok(u, stubs[j])) {
          std::swap(stubs[i + 1], stubs[j]);
          local_set.insert(edge_key(u, stubs[i + 1]));
          local_edges.emplace_back(u, stubs[i + 1]);
          placed = true;
          break;
        }
        ++rejections;
      }
      if (!placed) bad.emplace_back(u, stubs[i + 1]);
    }

    for (int sweep = 0; sweep < 10 && !bad.empty(); ++sweep) {
      std::vector<std::pair<std::uint32_t, std::uint32_t>> still_bad;
      for (const auto& [u, v] : bad) {
        if (ok(u, v)) {  // an earlier repair may have freed this pair
          local_set.insert(edge_key(u, v));
          local_edges.emplace_back(u, v);
          continue;
        }
        bool repaired = false;
        for (std::size_t attempt = 0; attempt < 200 && !local_edges.empty(); ++attempt) {
          const std::size_t pick = rng.next_below(local_edges.size());
          auto [a, b] = local_edges[pick];
          // rewire (u,v) + (a,b) -> (u,a) + (v,b), trying both orientations
          for (int flip = 0; flip < 2 && !repaired; ++flip) {
            if (flip) std::swap(a, b);
            if (ok(u, a) && ok(v, b) && edge_key(u, a) != edge_key(v, b)) {
              local_set.erase(edge_key(local_edges[pick].first, local_edges[pick].second));
              local_edges[pick] = {u, a};
              local_set.insert(edge_key(u, a));
              local_set.insert(edge_key(v, b));
              local_edges.emplace_back(v, b);
              repaired = true;
            }
          }
          if (repaired) break;
        }
        if (!repaired) still_bad.emplace_back(u, v);
      }
      bad = std::move(still_bad);
    }

    if (bad.empty()) {
      for (const auto& [u, v] : local_edges) edge_set.insert(detail::edge_key(u, v));
      edges_out.insert(edges_out.end(), local_edges.begin(), local_edges.end());
      return true;
    }
  }
  return false;
}

// Fallback wiring for a graphical degree sequence: Havel-Hakimi construction
// (always succeeds on graphical input) followed by randomizing double-edge
// swaps so the result is not the deterministic extremal graph.
inline bool havel_hakimi_wire(const std::vector<std::uint32_t>& vertices,
                              const std::vector<std::uint32_t>& wanted_degree, Rng& rng,
                              std::unordered_set<std::uint64_t>& edge_set,
                              std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges_out) {
  const std::size_t n = vertices.size();
  std::vector<std::uint32_t> residual(wanted_degree);
  std::vector<std::size_t> index(n);
  std::iota(index.begin(), index.end(), 0);

  std::vector<std::pair<std::uint32_t, std::uint32_t>> local;
  for (;;) {
    std::sort(index.begin(), index.end(),
              [&](std::size_t a, std::size_t b) { return residual[a] > residual[b]; });
    const std::size_t top = index[0];
    if (residual[top] == 0) break;
    if (residual[top] >= n) return false;
    for (std::size_t i = 1; i <= residual[top]; ++i) {
      if (residual[index[i]] == 0) return false;  // not graphical
      --residual[index[i]];
      local.emplace_back(vertices[top], vertices[index[i]]);
    }
    residual[top] = 0;
  }

  // double-edge swaps; keeps the degree sequence, breaks up the HH structure
  std::unordered_set<std::uint64_t> local_set;
  for (const auto& [u, v] : local) local_set.insert(edge_key(u, v));
  const std::size_t swaps = 10 * local.size();
  for (std::size_t attempt = 0; attempt < swaps && local.size() > 1; ++attempt) {
    const std::size_t i = rng.next_below(local.size());
    const std::size_t j = rng.next_below(local.size());
    if (i == j) continue;
    auto [a, b] = local[i];
    auto [c, d] = local[j];
    if (rng.next_double() < 0.5) std::swap(c, d);
    // propose (a,d) + (c,b)
    if (a == d || c == b) continue;
    const std::uint64_t k1 = edge_key(a, d), k2 = edge_key(c, b);
    if (k1 == k2 || local_set.contains(k1) || local_set.contains(k2) ||
        edge_set.contains(k1) || edge_set.contains(k2))
      continue;
    local_set.erase(edge_key(a, b));
    local_set.erase(edge_key(local[j].first, local[j].second));
    local[i] = {a, d};
    local[j] = {c, b};
    local_set.insert(k1);
    local_set.insert(k2);
  }

  for (const auto& [u, v] : local) {
    edge_set.insert(edge_key(u, v));
    edges_out.emplace_back(u, v);
  }
  return true;
}

}  // namespace detail

// LFR-style planted-partition benchmark: sample degrees and community sizes,
// assign vertices so the internal quota round((1-mu)*k) fits its community,
// then wire internal stubs inside each community and external stubs across
// communities by configuration-model matching.
inline Benchmark generate(const GenSpec& spec) {
  if (spec.n < 10) throw ValidationError("generator needs n >= 10");
  if (spec.mu <= 0.0 || spec.mu >= 1.0) throw ValidationError("mu must lie in (0, 1)");
  if (spec.gamma <= 1.0) throw ValidationError("gamma must exceed 1");
  if (spec.beta < 1.0) throw ValidationError("beta must be at least 1");
  const std::uint32_t k_max = spec.max_degree ? spec.max_degree : std::max(2u, spec.n / 10);
  if (spec.avg_degree < 1.0 || spec.avg_degree > static_cast<double>(k_max))
    throw ValidationError("average degree must lie in [1, max_degree]");

  Rng degree_rng(spec.seed, 10);
  Rng size_rng(spec.seed, 11);
  Rng assign_rng(spec.seed, 12);
  Rng internal_rng(spec.seed, 13);
  Rng external_rng(spec.seed, 14);

  const detail::PowerLawDegrees law = detail::fit_degree_law(spec.avg_degree, k_max, spec.gamma);
  std::vector<std::uint32_t> degree(spec.n);
  for (auto& k : degree) k = law.sample(degree_rng);

  const auto k_min = static_cast<std::uint32_t>(law.x_min);
  const std::uint32_t s_min = std::max(10u, k_min + 1);
  const std::uint32_t s_max = std::max(2 * k_max, s_min + 1);

  // internal quota per vertex; round-to-nearest keeps realized mu unbiased
  std::vector<std::uint32_t> internal(spec.n);
  for (std::uint32_t v = 0; v < spec.n; ++v) {
    const auto quota = static_cast<std::uint32_t>(
        std::floor((1.0 - spec.mu) * static_cast<double>(degree[v]) + 0.5));
    internal[v] = std::min(quota, degree[v]);
  }

  // sample community sizes, then place vertices (largest internal quota
  // first) into communities that can host them: quota <= size - 1 and a free
  // slot left. When the hubs cannot be placed the size sample was unlucky,
  // so it is redrawn.
  std::vector<std::uint32_t> sizes;
  std::vector<std::uint32_t> community(spec.n, 0);
  {
    std::vector<std::uint32_t> order(spec.n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return internal[a] > internal[b]; });
    bool placed_all = false;
    for (int resample = 0; resample < 20 && !placed_all; ++resample) {
      sizes = detail::sample_community_sizes(spec.n, s_min, s_max, spec.beta, size_rng);
      std::vector<std::uint32_t> candidates;
      for (int attempt = 0; attempt < 10 && !placed_all; ++attempt) {
        std::vector<std::uint32_t> free_slots(sizes.begin(), sizes.end());
        placed_all = true;
        for (const std::uint32_t v : order) {
          candidates.clear();
          for (std::uint32_t c = 0; c < sizes.size(); ++c)
            if (free_slots[c] > 0 && sizes[c] > internal[v]) candidates.push_back(c);
          if (candidates.empty()) {
            placed_all = false;
            break;
          }
          const std::uint32_t c = candidates[assign_rng.next_below(candidates.size())];
          community[v] = c;
          --free_slots[c];
        }
      }
    }
    if (!placed_all)
      throw GenerationError("no community can host a vertex with internal degree quota; "
                            "lower the average degree or the mixing parameter");
  }
  const auto community_count = static_cast<std::uint32_t>(sizes.size());

  std::vector<std::vector<std::uint32_t>> members(community_count);
  for (std::uint32_t v = 0; v < spec.n; ++v) members[community[v]].push_back(v);

  // Per community the internal stub total must be even, and the internal
  // degree sequence must be graphical (a random assignment can pack several
  // near-clique hubs together); violations shift stubs to the external pool
  // two at a time, largest quotas first.
  for (std::uint32_t c = 0; c < community_count; ++c) {
    std::uint64_t sum = 0;
    for (const std::uint32_t v : members[c]) sum += internal[v];
    if (sum % 2 != 0) {
      std::uint32_t raise = UINT32_MAX, lower = UINT32_MAX;
      for (const std::uint32_t v : members[c]) {
        if (internal[v] < degree[v] && internal[v] + 1 < sizes[c] && raise == UINT32_MAX)
          raise = v;
        if (internal[v] > 0 && lower == UINT32_MAX) lower = v;
      }
      if (raise != UINT32_MAX)
        ++internal[raise];
      else
        --internal[lower];
    }
    auto by_internal = [&](std::uint32_t a, std::uint32_t b) { return internal[a] < internal[b]; };
    for (std::uint64_t guard = 0; guard <= sum; ++guard) {
      std::vector<std::uint32_t> sequence;
      sequence.reserve(members[c].size());
      for (const std::uint32_t v : members[c]) sequence.push_back(internal[v]);
      std::sort(sequence.rbegin(), sequence.rend());
      if (detail::is_graphical(sequence)) break;
      // shift one stub pair to the external pool, largest quotas first
      // (the all-zero sequence is graphical, so two positive entries exist)
      const auto top = *std::max_element(members[c].begin(), members[c].end(), by_internal);
      --internal[top];
      const auto next = *std::max_element(members[c].begin(), members[c].end(), by_internal);
      if (internal[next] == 0)
        throw GenerationError("internal degree repair ran out of stubs");
      --internal[next];
    }
  }

  std::vector<std::uint32_t> external(spec.n);
  std::uint64_t external_sum = 0;
  for (std::uint32_t v = 0; v < spec.n; ++v) {
    external[v] = degree[v] - std::min(degree[v], internal[v]);
    external_sum += external[v];
  }
  if (external_sum % 2 != 0) {
    auto busiest = std::max_element(external.begin(), external.end());
    --*busiest;  // one vertex ends a single edge short of its sampled degree
  }

  std::unordered_set<std::uint64_t> edge_set;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::uint32_t c = 0; c < community_count; ++c) {
    std::vector<std::uint32_t> stubs;
    for (const std::uint32_t v : members[c])
      stubs.insert(stubs.end(), internal[v], v);
    const bool matched =
        detail::match_stubs(std::move(stubs), internal_rng, edge_set, pairs,
                            [](std::uint32_t, std::uint32_t) { return true; }, "internal wiring");
    if (!matched) {
      // the sequence is graphical, so constructive wiring cannot fail
      std::vector<std::uint32_t> wanted;
      wanted.reserve(members[c].size());
      for (const std::uint32_t v : members[c]) wanted.push_back(internal[v]);
      if (!detail::havel_hakimi_wire(members[c], wanted, internal_rng, edge_set, pairs))
        throw GenerationError("internal wiring failed on a graphical sequence");
    }
  }
  {
    std::vector<std::uint32_t> stubs;
    for (std::uint32_t v = 0; v < spec.n; ++v)
      stubs.insert(stubs.end(), external[v], v);
    const bool matched = detail::match_stubs(
        std::move(stubs), external_rng, edge_set, pairs,
        [&](std::uint32_t u, std::uint32_t v) { return community[u] != community[v]; },
        "external wiring");
    if (!matched)
      throw GenerationError(
          "external wiring could not avoid self-loops, duplicates, and intra-community edges; "
          "the spec leaves too few cross-community partners");
  }

  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [u, v] : pairs) edges.push_back({u, v, 1.0});

  Benchmark bench;
  bench.graph = Graph::from_edges(spec.n, std::move(edges));
  bench.truth = make_partition(community);
  bench.realized_avg_degree =
      2.0 * static_cast<double>(bench.graph.edge_count()) / static_cast<double>(spec.n);

  double mu_sum = 0.0;
  std::uint32_t mu_n = 0;
  for (VertexId v = 0; v < spec.n; ++v) {
    const auto deg = bench.graph.degree(v);
    if (deg == 0) continue;
    std::uint32_t crossing = 0;
    for (const IncidentEdge& inc : bench.graph.incident(v))
      if (community[inc.neighbor] != community[v]) ++crossing;
    mu_sum += static_cast<double>(crossing) / static_cast<double>(deg);
    ++mu_n;
  }
  bench.realized_mu = mu_n ? mu_sum / mu_n : 0.0;
  return bench;
}

// The 72-configuration grid: (gamma, beta) in {(2,1), (2,2), (3,1), (3,2)},
// average degree in {15, 20, 25}, mu in {0.1 .. 0.6}.
inline std::vector<GenSpec> parameter_grid(std::uint32_t n = 1000, std::uint64_t base_seed = 0) {
  static constexpr std::pair<double, double> kShapes[] = {{2, 1}, {2, 2}, {3, 1}, {3, 2}};
  static constexpr double kDegrees[] = {15, 20, 25};
  static constexpr double kMixings[] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  std::vector<GenSpec> grid;
  grid.reserve(72);
  std::uint64_t index = 0;
  for (const auto& [gamma, beta] : kShapes)
    for (const double k : kDegrees)
      for (const double mu : kMixings) {
        GenSpec spec;
        spec.n = n;
        spec.avg_degree = k;
        spec.gamma = gamma;
        spec.beta = beta;
        spec.mu = mu;
        spec.seed = base_seed + index++;
        grid.push_back(spec);
      }
  return grid;
}

}  // namespace kpath
