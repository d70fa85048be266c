#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "cogmac/feasible.hpp"
#include "cogmac/objective.hpp"

namespace cogmac {

enum class OptStatus { Converged, MaxIters, Infeasible };

const char* opt_status_name(OptStatus s);

struct OptOptions {
  int starts = 16;
  int max_iters = 10000;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  bool parallel = true;
  double constraint_tol = 1e-9;
};

struct OptResult {
  double value = 0.0;
  JointPmf argmin;
  OptStatus status = OptStatus::Infeasible;
  int starts_used = 0;
  double certificate_gap = 0.0;      // best minus second-best start
  double constraint_violation = 0.0;
  long long iters = 0;
};

/// Minimize the objective over the feasible set by multistart mirror descent:
/// multiplicative steps re-fitted to the equality pins after every move, the
/// metric and rate-cap inequalities enforced by an exact penalty with
/// increasing weight and a final feasibility check. Deterministic given
/// (opts.seed, opts.starts), independent of worker count.
OptResult minimize(const Objective& obj, const FeasibleSet& S, const OptOptions& opts = {},
                   const ArrayXd* warm = nullptr);

struct NestedResult {
  double value = 0.0;
  JointPmf outer;   // P' in K(P)
  JointPmf inner;   // P~ in L_i(P')
  OptStatus status = OptStatus::Infeasible;
  double constraint_violation = 0.0;
  double certificate_gap = 0.0;
};

/// Minimize D(P' || P) + inner_obj(P~) jointly over P' in K(P) and
/// P~ in L_i(P') (inner_kind one of L0, L1, L2). The coupling constraints
/// (P~'s pinned marginals come from P', E_{P~} q >= E_{P'} q) are kept by a
/// coupled proportional-fitting cycle; P' is restricted to the support of P.
NestedResult minimize_nested(const JointPmf& anchor, const ArrayXd& q, SetKind inner_kind,
                             const Objective& inner_obj, const OptOptions& opts = {},
                             const std::pair<ArrayXd, ArrayXd>* warm = nullptr);

}  // namespace cogmac
