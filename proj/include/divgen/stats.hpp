#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace divgen {

enum class Alternative { Less, Greater, TwoSided };
enum class UMethod { Exact, NormalApprox };

struct UTestResult {
  double u_statistic = 0.0;  // U of the first sample
  double p_value = 1.0;
  UMethod method = UMethod::Exact;
  Alternative alternative = Alternative::TwoSided;
};

namespace stats_detail {

/// U of sample a versus b: pairs where a_i > b_j count 1, ties count 1/2.
/// This is the rank-sum form U = R1 - n1(n1+1)/2, so a small U means the
/// first sample tends to be smaller.
inline double u_statistic(std::span<const double> a,
                          std::span<const double> b) {
  double u = 0.0;
  for (double x : a)
    for (double y : b) {
      if (x > y)
        u += 1.0;
      else if (x == y)
        u += 0.5;
    }
  return u;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Exact null distribution by enumerating all C(n1+n2, n1) assignments of the
// combined values to the first group. Handles tied values (each assignment
// remains equally likely under the null).
inline void enumerate_u(const std::vector<double>& pool, std::size_t n1,
                        double u_obs, long& le, long& ge, long& total) {
  const std::size_t n = pool.size();
  std::vector<std::size_t> idx(n1);
  std::vector<char> in_a(n, 0);
  // iterative combination enumeration
  for (std::size_t i = 0; i < n1; ++i) idx[i] = i;
  const double eps = 1e-9;
  while (true) {
    std::fill(in_a.begin(), in_a.end(), 0);
    for (std::size_t i : idx) in_a[i] = 1;
    double u = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!in_a[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (in_a[j]) continue;
        if (pool[i] > pool[j])
          u += 1.0;
        else if (pool[i] == pool[j])
          u += 0.5;
      }
    }
    ++total;
    if (u <= u_obs + eps) ++le;
    if (u >= u_obs - eps) ++ge;
    // next combination
    std::size_t k = n1;
    while (k > 0 && idx[k - 1] == n - n1 + k - 1) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t i = k; i < n1; ++i) idx[i] = idx[i - 1] + 1;
  }
}

inline UTestResult exact_test(std::span<const double> a,
                              std::span<const double> b, Alternative alt) {
  const double u = u_statistic(a, b);
  std::vector<double> pool(a.begin(), a.end());
  pool.insert(pool.end(), b.begin(), b.end());
  long le = 0, ge = 0, total = 0;
  enumerate_u(pool, a.size(), u, le, ge, total);
  const double p_le = static_cast<double>(le) / total;
  const double p_ge = static_cast<double>(ge) / total;
  double p;
  switch (alt) {
    case Alternative::Less: p = p_le; break;
    case Alternative::Greater: p = p_ge; break;
    default: p = std::min(1.0, 2.0 * std::min(p_le, p_ge)); break;
  }
  return {u, p, UMethod::Exact, alt};
}

inline UTestResult approx_test(std::span<const double> a,
                               std::span<const double> b, Alternative alt) {
  const double u = u_statistic(a, b);
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double n = n1 + n2;
  const double mu = n1 * n2 / 2.0;

  // tie correction over the combined sample
  std::vector<double> pool(a.begin(), a.end());
  pool.insert(pool.end(), b.begin(), b.end());
  std::sort(pool.begin(), pool.end());
  double tie_sum = 0.0;
  for (std::size_t i = 0; i < pool.size();) {
    std::size_t j = i;
    while (j < pool.size() && pool[j] == pool[i]) ++j;
    const double t = static_cast<double>(j - i);
    tie_sum += t * t * t - t;
    i = j;
  }
  const double var =
      n1 * n2 / 12.0 * ((n + 1.0) - tie_sum / (n * (n - 1.0)));
  if (var <= 0.0) return {u, 1.0, UMethod::NormalApprox, alt};
  const double sd = std::sqrt(var);

  const double p_le = normal_cdf((u - mu + 0.5) / sd);
  const double p_ge = 1.0 - normal_cdf((u - mu - 0.5) / sd);
  double p;
  switch (alt) {
    case Alternative::Less: p = p_le; break;
    case Alternative::Greater: p = p_ge; break;
    default: p = std::min(1.0, 2.0 * std::min(p_le, p_ge)); break;
  }
  return {u, p, UMethod::NormalApprox, alt};
}

}  // namespace stats_detail

/// Mann-Whitney U test. Exact p by enumeration of all labelings when both
/// samples have at most 8 elements (ties handled by half-counting),
/// otherwise normal approximation with continuity and tie correction.
/// One-sided p-values follow the convention p = P(U <= U_observed) for
/// `Less` (the first sample tends to be smaller).
inline UTestResult mann_whitney(std::span<const double> a,
                                std::span<const double> b, Alternative alt) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("mann_whitney: empty sample");
  if (a.size() <= 8 && b.size() <= 8) return stats_detail::exact_test(a, b, alt);
  return stats_detail::approx_test(a, b, alt);
}

/// Descriptive statistics for one summary-table row. R needs fields
/// fshc, wall_time_s and preferred_ratio.
struct TableRow {
  double mean_fshc = 0.0;
  double std_fshc = 0.0;  // sample standard deviation; 0 for a single run
  double mean_time_s = 0.0;
  double mean_preferred_pct = 0.0;
  int runs = 0;
};

template <class R>
TableRow descriptive(const std::vector<R>& results) {
  if (results.empty())
    throw std::invalid_argument("descriptive: no results");
  TableRow row;
  row.runs = static_cast<int>(results.size());
  for (const R& r : results) {
    row.mean_fshc += r.fshc;
    row.mean_time_s += r.wall_time_s;
    row.mean_preferred_pct += r.preferred_ratio;
  }
  row.mean_fshc /= row.runs;
  row.mean_time_s /= row.runs;
  row.mean_preferred_pct /= row.runs;
  if (row.runs > 1) {
    double ss = 0.0;
    for (const R& r : results) {
      const double d = r.fshc - row.mean_fshc;
      ss += d * d;
    }
    row.std_fshc = std::sqrt(ss / (row.runs - 1));
  }
  return row;
}

}  // namespace divgen
