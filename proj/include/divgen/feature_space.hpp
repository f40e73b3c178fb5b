#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string_view>
#include <tuple>
#include <vector>

namespace divgen {

/// Two integer features of an expression string: total character count and
/// count of decimal digit characters.
struct FeatureVector {
  int length = 0;
  int num_digits = 0;
  auto operator<=>(const FeatureVector&) const = default;
};

inline FeatureVector extract_features(std::string_view s) {
  FeatureVector fv;
  fv.length = static_cast<int>(s.size());
  for (char c : s)
    if (c >= '0' && c <= '9') ++fv.num_digits;
  return fv;
}

/// Inclusive per-feature integer ranges defining the tester's target region.
struct PreferenceHypercube {
  int len_lo = 3, len_hi = 50;
  int dig_lo = 2, dig_hi = 25;

  long cell_count() const {
    return static_cast<long>(len_hi - len_lo + 1) * (dig_hi - dig_lo + 1);
  }
  void check() const {
    if (len_lo > len_hi || dig_lo > dig_hi)
      throw std::invalid_argument("hypercube bounds inverted");
  }
};

enum class Region { Preferred, Outside };

inline Region classify(const FeatureVector& fv, const PreferenceHypercube& c) {
  const bool in = fv.length >= c.len_lo && fv.length <= c.len_hi &&
                  fv.num_digits >= c.dig_lo && fv.num_digits <= c.dig_hi;
  return in ? Region::Preferred : Region::Outside;
}

/// Per-cell counts of recorded data over the hypercube grid. Only data
/// classified Preferred may be recorded; the covered-cell count feeds FSHC
/// and the per-cell counts serve as the novelty-fitness signal.
class DensityArchive {
 public:
  explicit DensityArchive(const PreferenceHypercube& cube) : cube_(cube) {
    cube_.check();
    counts_.assign(static_cast<std::size_t>(cube_.cell_count()), 0);
  }

  const PreferenceHypercube& cube() const { return cube_; }

  void record(const FeatureVector& fv) {
    if (classify(fv, cube_) != Region::Preferred)
      throw std::logic_error("record(): datum outside the hypercube");
    long& c = counts_[index(fv)];
    if (c == 0) ++covered_;
    ++c;
    ++total_;
  }

  long count(const FeatureVector& fv) const {
    if (classify(fv, cube_) != Region::Preferred) return 0;
    return counts_[index(fv)];
  }

  long covered() const { return covered_; }
  long total_recorded() const { return total_; }

  double fshc() const {
    return 100.0 * static_cast<double>(covered_) /
           static_cast<double>(cube_.cell_count());
  }

  /// Covered cells as (length, digits, count), row-major over the grid.
  std::vector<std::tuple<int, int, long>> covered_cells() const {
    std::vector<std::tuple<int, int, long>> out;
    for (int l = cube_.len_lo; l <= cube_.len_hi; ++l)
      for (int d = cube_.dig_lo; d <= cube_.dig_hi; ++d) {
        const long c = counts_[index({l, d})];
        if (c > 0) out.emplace_back(l, d, c);
      }
    return out;
  }

  void dump_csv(std::ostream& os) const {
    os << "cell_length,cell_digits,count\n";
    for (const auto& [l, d, c] : covered_cells())
      os << l << ',' << d << ',' << c << '\n';
  }

 private:
  std::size_t index(const FeatureVector& fv) const {
    return static_cast<std::size_t>(fv.length - cube_.len_lo) *
               (cube_.dig_hi - cube_.dig_lo + 1) +
           (fv.num_digits - cube_.dig_lo);
  }

  PreferenceHypercube cube_;
  std::vector<long> counts_;
  long covered_ = 0;
  long total_ = 0;
};

/// Normalizes each coverage value by the maximum of the list, as a percent.
inline std::vector<double> nfshc(const std::vector<double>& fshc_values) {
  if (fshc_values.empty())
    throw std::invalid_argument("nfshc: empty input");
  double mx = 0.0;
  for (double v : fshc_values) mx = v > mx ? v : mx;
  if (mx <= 0.0)
    throw std::invalid_argument("nfshc: all values zero, normalization undefined");
  std::vector<double> out;
  out.reserve(fshc_values.size());
  for (double v : fshc_values) out.push_back(100.0 * v / mx);
  return out;
}

namespace detail {

/// Reachability table for the arithmetic-expression grammar: entry (l, d) is
/// true when some sentence with exactly l characters and d digits exists.
/// Computed by dynamic programming over the grammar, independent of any
/// sampling path.
///
/// Grammar: expr -> operand op operand; operand -> number | '(' expr ')';
/// number -> ['-'] digit+.
inline std::vector<std::vector<char>> achievable_expr_table(int max_len) {
  const int L = max_len;
  auto table = [&] {
    return std::vector<std::vector<char>>(L + 1,
                                          std::vector<char>(L + 1, 0));
  };
  auto number = table(), operand = table(), expr = table();

  for (int l = 1; l <= L; ++l) {
    // number of length l: d digits plus optional sign, so d = l or l - 1
    number[l][l] = 1;
    if (l >= 2) number[l][l - 1] = 1;

    for (int d = 0; d <= l; ++d) {
      operand[l][d] = number[l][d];
      if (l >= 2 && expr[l - 2][d]) operand[l][d] = 1;  // '(' expr ')'
    }

    // expr of length l = operand(l1) op operand(l2), l1 + l2 = l - 1
    for (int l1 = 1; l1 + 2 <= l; ++l1) {
      const int l2 = l - 1 - l1;
      if (l2 < 1) continue;
      for (int d1 = 0; d1 <= l1; ++d1) {
        if (!operand[l1][d1]) continue;
        for (int d2 = 0; d2 <= l2; ++d2)
          if (operand[l2][d2]) expr[l][d1 + d2] = 1;
      }
    }
  }
  return expr;
}

}  // namespace detail

/// Number of hypercube cells (L, D) for which at least one grammar sentence
/// with exactly those feature values exists. Upper bound on any achievable
/// covered-cell count.
inline long max_achievable_cells(const PreferenceHypercube& cube) {
  cube.check();
  const auto expr = detail::achievable_expr_table(cube.len_hi);
  long n = 0;
  for (int l = cube.len_lo; l <= cube.len_hi; ++l)
    for (int d = cube.dig_lo; d <= cube.dig_hi && d <= l; ++d)
      if (expr[l][d]) ++n;
  return n;
}

}  // namespace divgen
