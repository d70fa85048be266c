#pragma once

#include <Eigen/Dense>

#include "cogmac/dims.hpp"

namespace cogmac {

using Eigen::ArrayXd;
using Eigen::ArrayXi;

inline constexpr double kPmfTol = 1e-12;

/// Dense joint probability table over X1 x X2 x Y.
///
/// Entries are validated on construction (nonnegative, sum to one within
/// 1e-12). Normalization is never applied implicitly; use renormalized().
struct JointPmf {
  AlphabetDims dims;
  ArrayXd p;

  JointPmf() = default;
  JointPmf(AlphabetDims d, ArrayXd table);

  double operator()(int x1, int x2, int y) const { return p[dims.cell(x1, x2, y)]; }

  /// Marginal over the variables in `mask`, laid out in (X1, X2, Y) order.
  ArrayXd marginal(unsigned mask) const;

  JointPmf renormalized() const;

  static JointPmf uniform(AlphabetDims d);
};

/// Distribution of the channel inputs (X1, X2); the random-coding distribution.
struct InputDist {
  AlphabetDims dims;
  ArrayXd p12;  // size k1*k2, cell x1*k2 + x2

  InputDist() = default;
  InputDist(AlphabetDims d, ArrayXd table);

  double operator()(int x1, int x2) const { return p12[x1 * dims.k2 + x2]; }

  ArrayXd marginal1() const;
  ArrayXd marginal2() const;
};

/// Channel law W(y|x1,x2) together with the decoding metric table q(x1,x2,y).
/// Rows of W (fixed (x1,x2)) must sum to one; q entries are arbitrary finite
/// reals.
struct ChannelSpec {
  AlphabetDims dims;
  ArrayXd W;  // conditional, cell layout as JointPmf
  ArrayXd q;

  ChannelSpec() = default;
  ChannelSpec(AlphabetDims d, ArrayXd w, ArrayXd metric);

  double w(int x1, int x2, int y) const { return W[dims.cell(x1, x2, y)]; }
  double metric(int x1, int x2, int y) const { return q[dims.cell(x1, x2, y)]; }

  /// Joint law P_{X1,X2} * W.
  JointPmf joint(const InputDist& in) const;

  /// The matched metric log2 W (cells with W = 0 get a large negative finite
  /// score so metric tables stay finite).
  ArrayXd matched_metric() const;
};

/// Raw marginalization without constructing a JointPmf.
ArrayXd marginal_of(const AlphabetDims& dims, const ArrayXd& p, unsigned mask);

/// Largest-remainder quantization of `p` to integer counts summing to n.
ArrayXi quantize_counts(const ArrayXd& p, int n);

}  // namespace cogmac
