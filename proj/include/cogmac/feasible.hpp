#pragma once

#include <limits>
#include <vector>

#include "cogmac/info.hpp"
#include "cogmac/pmf.hpp"

namespace cogmac {

/// Constraint-set families over joint pmfs, anchored at a reference pmf.
/// K pins the (X1,X2) marginal; Gq adds the metric inequality; L1/L2/L0 pin
/// one further marginal; L0sup/L0bin add rate-dependent mutual-information
/// caps. D1/D2/D0 are the non-cognitive variants pinning different marginals.
enum class SetKind { K, Gq, L0, L1, L2, L0sup, L0bin, D1, D2, D0 };

const char* set_kind_name(SetKind k);

struct MarginalPin {
  unsigned mask;
  ArrayXd target;
};

/// Cap I(maskA ; maskB) <= bound.
struct InfoCap {
  unsigned maskA;
  unsigned maskB;
  double bound;
};

struct FeasibleSet {
  SetKind kind = SetKind::K;
  AlphabetDims dims;
  JointPmf ref;
  std::vector<MarginalPin> pins;
  ArrayXd metric;             // empty => no metric inequality
  double metric_floor = 0.0;  // E_f q >= metric_floor
  std::vector<InfoCap> caps;
  double rate1 = std::numeric_limits<double>::infinity();
  double rate2 = std::numeric_limits<double>::infinity();

  bool has_metric() const { return metric.size() > 0; }
};

/// Build the constraint set of the given kind anchored at `anchor`.
/// r1/r2 are required by the rate-dependent kinds (L0sup, L0bin, D0).
FeasibleSet make_set(SetKind kind, const JointPmf& anchor, const ArrayXd& q,
                     double r1 = std::numeric_limits<double>::infinity(),
                     double r2 = std::numeric_limits<double>::infinity());

/// One closed-form marginal re-coupling: replace the marginal over pin.mask by
/// pin.target, keeping conditionals. Slices with zero current mass but positive
/// target are filled uniformly over `support` (all cells when empty).
void recouple(const AlphabetDims& dims, ArrayXd& f, const MarginalPin& pin,
              const std::vector<char>& support = {});

struct IpfResult {
  bool converged = false;
  double residual = 0.0;
  int cycles = 0;
};

/// Cyclic iterative proportional fitting onto the pinned marginals.
IpfResult ipf_project(const AlphabetDims& dims, ArrayXd& f,
                      const std::vector<MarginalPin>& pins, double tol = 1e-13,
                      int max_cycles = 400, const std::vector<char>& support = {});

/// Largest violation of the set's equality pins (sup-norm over marginals).
double pin_violation(const FeasibleSet& S, const ArrayXd& f);

/// Largest violation over all constraints of S (pins, metric, caps); <= 0 when
/// f is a member.
double set_violation(const FeasibleSet& S, const ArrayXd& f);

struct ProjResult {
  JointPmf f;
  bool feasible = false;   // equality pins + metric restored
  double residual = 0.0;   // worst remaining violation including caps
};

/// Restore the equality pins exactly (IPF) and the metric inequality (by
/// exponential tilting toward higher metric). Rate caps are reported in the
/// residual but not restored. Idempotent on members.
ProjResult project_to_set(const JointPmf& f, const FeasibleSet& S);

}  // namespace cogmac
