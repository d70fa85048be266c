#pragma once

#include "cogmac/pmf.hpp"

namespace cogmac {

/// Base-2 information functionals. Conventions: 0*log 0 = 0 and
/// x*log(x/0) = +infinity (returned as an explicit infinity, never NaN).

/// Shannon entropy in bits of an arbitrary probability vector.
double entropy(const ArrayXd& p);

/// Entropy of the marginal over `mask`.
double entropy(const JointPmf& f, unsigned mask);

/// H(A | C) = H(A,C) - H(C).
double cond_entropy(const JointPmf& f, unsigned maskA, unsigned maskC);

/// I(A ; B | C) for disjoint variable groups A, B, C (C may be 0).
/// Throws std::invalid_argument if the groups overlap or are empty.
double mutual_info(const JointPmf& f, unsigned maskA, unsigned maskB, unsigned maskC = 0);

/// Kullback-Leibler divergence D(f || g) in bits; +infinity when f is not
/// absolutely continuous w.r.t. g.
double divergence(const JointPmf& f, const JointPmf& g);
double divergence(const ArrayXd& f, const ArrayXd& g);

/// Conditional divergence D(f_{Y|X1,X2} || W | f_{X1,X2}) in bits.
double divergence_cond(const JointPmf& f, const ArrayXd& W);

/// E_f { q(X1, X2, Y) }.
double metric_expectation(const JointPmf& f, const ArrayXd& q);
double metric_expectation(const ArrayXd& f, const ArrayXd& q);

/// Binary entropy h2(p) in bits.
double binary_entropy(double p);

}  // namespace cogmac
