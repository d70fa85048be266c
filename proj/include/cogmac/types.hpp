#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cogmac/pmf.hpp"

namespace cogmac {

/// Integer occupation numbers of a length-n sequence over a cell set.
struct TypeCount {
  int n = 0;
  std::vector<int> counts;

  TypeCount() = default;
  TypeCount(int n_, std::vector<int> c);

  /// Empirical pmf counts / n.
  ArrayXd empirical() const;
};

/// Number of compositions of n into m nonnegative parts: C(n+m-1, m-1).
double composition_count(int n, int m);

/// All occupation vectors of n items over m cells. Throws ResourceError when
/// n exceeds `cap` (full enumeration only stays tractable for small n).
std::vector<TypeCount> enumerate_types(int n, int m, int cap = 24);

/// Conditional types: all joint occupation tables t[a][b] (a < slices.size(),
/// b < m) with row sums pinned to `slices`. Each result is flattened
/// row-major into a TypeCount over slices.size()*m cells.
std::vector<TypeCount> enumerate_cond_types(const std::vector<int>& slices, int m,
                                            int cap = 24);

/// Streaming variant: visit compositions of n into m parts without storing.
void for_each_composition(int n, int m, const std::function<void(const std::vector<int>&)>& fn);

/// log2 of the multinomial coefficient n! / prod(counts!), via log-gamma.
double log2_multinomial(int n, const std::vector<int>& counts);

/// log2 |T(t)| for an unconditional type class.
double log_type_class_size(const TypeCount& t);

/// log2 of the conditional type-class size: the joint counts table
/// `joint[a*m + b]` conditioned on a sequence with per-slice counts
/// `cond[a]`; equals sum over slices of log2 multinomial(cond[a]; joint[a,*]).
double log_type_class_size_cond(const TypeCount& joint, const TypeCount& cond, int m);

/// Exact multinomial coefficient as uint64 (valid while the value fits;
/// throws ResourceError on overflow).
std::uint64_t multinomial_u64(int n, const std::vector<int>& counts);

}  // namespace cogmac
