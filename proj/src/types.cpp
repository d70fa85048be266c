#include "cogmac/types.hpp"

#include <cmath>
#include <numeric>

namespace cogmac {

TypeCount::TypeCount(int n_, std::vector<int> c) : n(n_), counts(std::move(c)) {
  long long s = 0;
  for (int v : counts) {
    if (v < 0) throw std::invalid_argument("TypeCount: negative count");
    s += v;
  }
  if (s != n) throw std::invalid_argument("TypeCount: counts sum to " + std::to_string(s) +
                                          ", expected n = " + std::to_string(n));
}

ArrayXd TypeCount::empirical() const {
  ArrayXd p(counts.size());
  for (size_t i = 0; i < counts.size(); ++i) p[i] = static_cast<double>(counts[i]) / n;
  return p;
}

double composition_count(int n, int m) {
  // C(n+m-1, m-1) in floating point (exact for the sizes used here).
  double c = 1.0;
  for (int i = 1; i <= m - 1; ++i) c = c * (n + i) / i;
  return std::round(c);
}

void for_each_composition(int n, int m,
                          const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> cur(m, 0);
  std::function<void(int, int)> rec = [&](int idx, int left) {
    if (idx == m - 1) {
      cur[idx] = left;
      fn(cur);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[idx] = v;
      rec(idx + 1, left - v);
    }
  };
  if (m == 0) {
    if (n == 0) fn(cur);
    return;
  }
  rec(0, n);
}

std::vector<TypeCount> enumerate_types(int n, int m, int cap) {
  if (n > cap)
    throw ResourceError("enumerate_types: n = " + std::to_string(n) + " exceeds cap " +
                        std::to_string(cap));
  std::vector<TypeCount> out;
  out.reserve(static_cast<size_t>(composition_count(n, m)));
  for_each_composition(n, m, [&](const std::vector<int>& c) { out.emplace_back(n, c); });
  return out;
}

std::vector<TypeCount> enumerate_cond_types(const std::vector<int>& slices, int m, int cap) {
  int n = std::accumulate(slices.begin(), slices.end(), 0);
  if (n > cap)
    throw ResourceError("enumerate_cond_types: n = " + std::to_string(n) + " exceeds cap " +
                        std::to_string(cap));
  std::vector<TypeCount> out;
  std::vector<int> table(slices.size() * m, 0);
  std::function<void(size_t)> rec = [&](size_t a) {
    if (a == slices.size()) {
      out.emplace_back(n, table);
      return;
    }
    for_each_composition(slices[a], m, [&](const std::vector<int>& row) {
      for (int b = 0; b < m; ++b) table[a * m + b] = row[b];
      rec(a + 1);
    });
  };
  rec(0);
  return out;
}

double log2_multinomial(int n, const std::vector<int>& counts) {
  constexpr double inv_ln2 = 1.4426950408889634;
  double lg = std::lgamma(n + 1.0);
  for (int c : counts) lg -= std::lgamma(c + 1.0);
  return lg * inv_ln2;
}

double log_type_class_size(const TypeCount& t) { return log2_multinomial(t.n, t.counts); }

double log_type_class_size_cond(const TypeCount& joint, const TypeCount& cond, int m) {
  if (joint.counts.size() != cond.counts.size() * static_cast<size_t>(m))
    throw std::invalid_argument("log_type_class_size_cond: shape mismatch");
  double total = 0.0;
  for (size_t a = 0; a < cond.counts.size(); ++a) {
    int row_sum = 0;
    std::vector<int> row(m);
    for (int b = 0; b < m; ++b) {
      row[b] = joint.counts[a * m + b];
      row_sum += row[b];
    }
    if (row_sum != cond.counts[a])
      throw std::invalid_argument("log_type_class_size_cond: inconsistent conditioning");
    total += log2_multinomial(cond.counts[a], row);
  }
  return total;
}

std::uint64_t multinomial_u64(int n, const std::vector<int>& counts) {
  // Sequential product of binomials; each intermediate value is an integer.
  std::uint64_t result = 1;
  int used = 0;
  for (int c : counts) {
    for (int i = 1; i <= c; ++i) {
      ++used;
      std::uint64_t num = result * static_cast<std::uint64_t>(used);
      if (used != 0 && num / used != result)
        throw ResourceError("multinomial_u64: overflow");
      result = num / i;  // exact: result*used is divisible by i at this point
    }
  }
  if (used != n) throw std::invalid_argument("multinomial_u64: counts do not sum to n");
  return result;
}

}  // namespace cogmac
