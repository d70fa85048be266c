#pragma once

#include "cogmac/feasible.hpp"
#include "cogmac/objective.hpp"

namespace cogmac {

struct GridOracleResult {
  double value = 0.0;          // minimum over the feasibility-filtered lattice
  double error_bound = 0.0;    // value is within [true_min, true_min + error_bound]
  bool any_feasible = false;
  long long points_evaluated = 0;
  long long points_feasible = 0;
  ArrayXd argmin;
};

/// Exhaustive lattice minimum over the null-space parameterization of the
/// set's equality constraints, feasibility-filtered on the inequalities.
/// The reported error_bound is a rigorous modulus-of-continuity radius for the
/// lattice spacing (refinement rounds improve the value, the bound is from the
/// coarse pass). Independent of the mirror-descent solver path.
///
/// Throws ResourceError if the free dimension exceeds `max_free_dim`.
GridOracleResult grid_oracle(const Objective& obj, const FeasibleSet& S,
                             long long budget = 2'000'000, int refine_rounds = 2,
                             int max_free_dim = 4);

/// Two-level lattice oracle for the nested exponent problems:
/// min over P' in K(P), P~ in L_i(P') of D(P'||P) + inner_obj(P~).
GridOracleResult grid_oracle_nested(const JointPmf& anchor, const ArrayXd& q,
                                    SetKind inner_kind, const Objective& inner_obj,
                                    long long budget = 600'000, int refine_rounds = 2);

}  // namespace cogmac
