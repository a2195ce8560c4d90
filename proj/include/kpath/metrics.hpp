#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "kpath/error.hpp"
#include "kpath/partition.hpp"
#include "kpath/walk.hpp"

namespace kpath {

namespace detail {

// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction;
// standard construction, good to ~1e-14 for the df we use.
inline double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const bool swap_tail = x > (a + 1.0) / (a + b + 2.0);
  if (swap_tail) return 1.0 - incomplete_beta(b, a, 1.0 - x);

  const double tiny = 1e-30;
  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    const double m2 = 2.0 * m;
    double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
    d = 1.0 + num * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
    d = 1.0 + num * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-15) break;
  }
  return std::exp(ln_front) * h / a;
}

// Two-sided p-value of a Student t statistic.
inline double student_t_two_sided(double t, double df) {
  if (!std::isfinite(t)) return 0.0;
  return incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

inline double normal_two_sided(double z) { return std::erfc(std::fabs(z) / std::sqrt(2.0)); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Partition similarity
// ---------------------------------------------------------------------------

// Normalized mutual information (Danon form) from the confusion matrix of two
// crisp partitions:
//
//         -2 sum_ij N_ij ln( N_ij N / (N_i. N_.j) )
//   NMI = ------------------------------------------
//         sum_i N_i. ln(N_i./N) + sum_j N_.j ln(N_.j/N)
//
// 0*ln(0) terms are 0. When both partitions are the trivial single community
// the ratio is 0/0; they are then identical, so the value is defined as 1.
inline double nmi(const Partition& a, const Partition& b) {
  if (a.size() != b.size() || a.size() == 0)
    throw std::domain_error("nmi: partitions must cover the same vertex set");
  const double n = static_cast<double>(a.size());

  std::map<std::pair<std::uint32_t, std::uint32_t>, double> counts;
  std::vector<double> row(a.community_count, 0.0);
  std::vector<double> col(b.community_count, 0.0);
  for (std::size_t v = 0; v < a.size(); ++v) {
    counts[{a.assignment[v], b.assignment[v]}] += 1.0;
    row[a.assignment[v]] += 1.0;
    col[b.assignment[v]] += 1.0;
  }

  double numerator = 0.0;
  for (const auto& [rc, nij] : counts)
    numerator += nij * std::log(nij * n / (row[rc.first] * col[rc.second]));
  numerator *= -2.0;

  // written as -ln(N/N_i) so identical partitions hit exactly 1
  double denominator = 0.0;
  for (const double r : row) denominator -= r * std::log(n / r);
  for (const double c : col) denominator -= c * std::log(n / c);

  if (denominator == 0.0) return 1.0;  // both trivial, hence identical
  const double value = numerator / denominator;
  return std::clamp(value, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Correlation coefficients
// ---------------------------------------------------------------------------

inline void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::domain_error("correlation: length mismatch");
  if (x.size() < 2) throw std::domain_error("correlation: need at least two samples");
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw std::domain_error("pearson: constant input vector");
  return sxy / std::sqrt(sxx * syy);
}

// Average ranks, 1-based; ties share the mean of the ranks they occupy.
inline std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  std::vector<double> ranks(values.size(), 0.0);
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && values[idx[j + 1]] == values[idx[i]]) ++j;
    const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

inline double spearman(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

// Kendall tau-a: (concordant - discordant) / total pairs; ties count as
// neither.
inline double kendall_tau(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const std::size_t n = x.size();
  std::int64_t concordant = 0, discordant = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j], dy = y[i] - y[j];
      const double prod = dx * dy;
      if (prod > 0.0)
        ++concordant;
      else if (prod < 0.0)
        ++discordant;
    }
  const double total = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return static_cast<double>(concordant - discordant) / total;
}

struct CorrelationReport {
  double pearson_r = 0.0;
  double spearman_rho = 0.0;
  double kendall = 0.0;
  std::size_t sample_size = 0;
  // two-sided asymptotic p-values (t approximation for r and rho, normal for tau)
  double p_pearson = 1.0;
  double p_spearman = 1.0;
  double p_kendall = 1.0;
};

inline CorrelationReport correlation_report(std::span<const double> x, std::span<const double> y) {
  CorrelationReport rep;
  rep.sample_size = x.size();
  rep.pearson_r = pearson(x, y);
  rep.spearman_rho = spearman(x, y);
  rep.kendall = kendall_tau(x, y);
  const double n = static_cast<double>(x.size());
  const double df = n - 2.0;
  auto t_p = [df](double r) {
    if (df <= 0.0) return 1.0;
    if (std::fabs(r) >= 1.0) return 0.0;
    const double t = r * std::sqrt(df / (1.0 - r * r));
    return detail::student_t_two_sided(t, df);
  };
  rep.p_pearson = t_p(rep.pearson_r);
  rep.p_spearman = t_p(rep.spearman_rho);
  const double z = 3.0 * rep.kendall * std::sqrt(n * (n - 1.0)) / std::sqrt(2.0 * (2.0 * n + 5.0));
  rep.p_kendall = detail::normal_two_sided(z);
  return rep;
}

// Paired two-sided t-test over matched samples.
struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  std::size_t df = 0;
};

inline TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::domain_error("paired_t_test: need two equal-length samples");
  const std::size_t n = a.size();
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (a[i] - b[i]) - mean;
    var += d * d;
  }
  var /= static_cast<double>(n - 1);
  TTestResult res;
  res.df = n - 1;
  if (var == 0.0) {
    res.t = mean == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    res.p = mean == 0.0 ? 1.0 : 0.0;
    return res;
  }
  res.t = mean / std::sqrt(var / static_cast<double>(n));
  res.p = detail::student_t_two_sided(res.t, static_cast<double>(res.df));
  return res;
}

// ---------------------------------------------------------------------------
// Centrality distribution summaries
// ---------------------------------------------------------------------------

struct Histogram {
  std::vector<double> bin_low;
  std::vector<double> bin_high;
  std::vector<double> probability;  // sums to 1
};

struct CentralitySummary {
  Histogram histogram;
  std::vector<double> sorted_desc;  // rank-ordered estimates
};

// Log-spaced histogram of the estimates plus the rank plot sequence. Values
// at or below the smallest positive estimate (including exact zeros) land in
// the first bin; a degenerate value range collapses to a single bin.
inline CentralitySummary centrality_summary(const CentralityMap& c, int bins) {
  if (bins < 1) throw ValidationError("bins must be >= 1");
  if (c.estimate.empty()) throw std::domain_error("centrality_summary: empty map");

  CentralitySummary s;
  s.sorted_desc = c.estimate;
  std::sort(s.sorted_desc.begin(), s.sorted_desc.end(), std::greater<>());

  double min_pos = 0.0, max_val = 0.0;
  for (const double v : c.estimate) {
    max_val = std::max(max_val, v);
    if (v > 0.0 && (min_pos == 0.0 || v < min_pos)) min_pos = v;
  }
  const double total = static_cast<double>(c.estimate.size());
  if (min_pos == 0.0 || min_pos == max_val) {
    s.histogram.bin_low = {min_pos == 0.0 ? 0.0 : min_pos};
    s.histogram.bin_high = {max_val};
    s.histogram.probability = {1.0};
    return s;
  }

  const double span = std::log(max_val / min_pos);
  s.histogram.bin_low.resize(bins);
  s.histogram.bin_high.resize(bins);
  s.histogram.probability.assign(bins, 0.0);
  for (int b = 0; b < bins; ++b) {
    s.histogram.bin_low[b] = min_pos * std::exp(span * b / bins);
    s.histogram.bin_high[b] = min_pos * std::exp(span * (b + 1) / bins);
  }
  for (const double v : c.estimate) {
    int b = 0;
    if (v > min_pos) {
      b = static_cast<int>(std::log(v / min_pos) / span * bins);
      b = std::clamp(b, 0, bins - 1);
    }
    s.histogram.probability[b] += 1.0 / total;
  }
  return s;
}

}  // namespace kpath
