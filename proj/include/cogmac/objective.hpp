#pragma once

#include "cogmac/pmf.hpp"

namespace cogmac {

/// Information objectives minimized over the feasible sets. Composite kinds
/// combine mutual informations with clipped |.|+ rate offsets.
enum class ObjKind {
  Zero,
  MI_X1_YX2,       // I(X1; Y,X2)
  MI_X2_YX1,       // I(X2; Y,X1)
  MI_X2_Y_g_X1,    // I(X2; Y | X1)
  MI_X1_Y_g_X2,    // I(X1; Y | X2)
  MI_X12_Y,        // I(X1,X2; Y)
  MI_X1_Y,         // I(X1; Y)
  MI_X2_Y,         // I(X2; Y)
  MI_X1_X2,        // I(X1; X2)
  SumRateLM,       // I(X1,X2; Y) + I(X1; X2)
  R1dd,            // I(X1;Y) + |I(X2;Y|X1) - r2|+
  R2dd,            // I(X2;Y) - I(X2;X1) + |I(X1;Y,X2) - r1|+
  RevR2,           // I(X2;Y) + |I(X1;Y|X2) - r1|+
  E2Inner,         // |I(X2;Y|X1) - r2|+
  E1SupInner,      // |I(X1;Y) + |I(X2;Y|X1) - r2|+ - r1|+
  E1BinInner,      // |I(X1;Y,X2) - r1|+
  E0bInner,        // |I(X2;Y) - cfix + |I(X1;Y,X2) - r1|+ - r2|+
};

const char* obj_kind_name(ObjKind k);

struct Objective {
  ObjKind kind = ObjKind::Zero;
  double r1 = 0.0;
  double r2 = 0.0;
  double cfix = 0.0;  // the I_P(X1;X2) offset in E0bInner

  double value(const AlphabetDims& dims, const ArrayXd& f) const;

  /// Accumulate w * d(value)/df into g. Uses the 0-slope subgradient at |.|+
  /// kinks. Marginals are floored inside logs, so entries stay finite.
  void add_grad(const AlphabetDims& dims, const ArrayXd& f, ArrayXd& g,
                double w = 1.0) const;

  /// Rigorous modulus of continuity: |value(f) - value(g)| whenever
  /// ||f - g||_1 <= l1, from Fannes-type entropy bounds.
  double modulus(const AlphabetDims& dims, double l1) const;
};

/// Entropy of the marginal over `mask`, as used by objectives.
double marginal_entropy(const AlphabetDims& dims, const ArrayXd& f, unsigned mask);

/// Accumulate w * dH(marginal over mask)/df into g.
void add_grad_entropy(const AlphabetDims& dims, const ArrayXd& f, unsigned mask, double w,
                      ArrayXd& g);

/// Fannes-type bound on |H(p)-H(q)| for K-cell pmfs with total variation t.
double entropy_modulus(double t, int K);

}  // namespace cogmac
