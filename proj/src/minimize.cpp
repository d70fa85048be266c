#include "cogmac/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "cogmac/parallel.hpp"

namespace cogmac {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGradClamp = 40.0;

struct PenaltyState {
  double weight = 32.0;
  double cap = 1e7;
  void ramp() { weight = std::min(weight * 4.0, cap); }
  bool maxed() const { return weight >= cap; }
};

double cap_value(const AlphabetDims& d, const ArrayXd& f, const InfoCap& cap) {
  double v = marginal_entropy(d, f, cap.maskA) + marginal_entropy(d, f, cap.maskB) -
             marginal_entropy(d, f, cap.maskA | cap.maskB);
  return v;
}

void cap_grad(const AlphabetDims& d, const ArrayXd& f, const InfoCap& cap, double w,
              ArrayXd& g) {
  add_grad_entropy(d, f, cap.maskA, w, g);
  add_grad_entropy(d, f, cap.maskB, w, g);
  add_grad_entropy(d, f, cap.maskA | cap.maskB, -w, g);
}

// Penalized objective: true objective + weight * sum of positive violations.
double penalized(const Objective& obj, const FeasibleSet& S, const ArrayXd& f, double w,
                 double* viol_out = nullptr) {
  double v = obj.value(S.dims, f);
  double viol = 0.0;
  if (S.has_metric()) viol += std::max(0.0, S.metric_floor - metric_expectation(f, S.metric));
  for (const auto& cap : S.caps)
    viol += std::max(0.0, cap_value(S.dims, f, cap) - cap.bound);
  if (viol_out) *viol_out = viol;
  return v + w * viol;
}

void penalty_grad(const FeasibleSet& S, const ArrayXd& f, double w, ArrayXd& g) {
  if (S.has_metric() && S.metric_floor - metric_expectation(f, S.metric) > 0.0)
    g -= w * S.metric;
  for (const auto& cap : S.caps)
    if (cap_value(S.dims, f, cap) - cap.bound > 0.0) cap_grad(S.dims, f, cap, w, g);
}

double ineq_violation(const FeasibleSet& S, const ArrayXd& f) {
  double worst = 0.0;
  if (S.has_metric())
    worst = std::max(worst, S.metric_floor - metric_expectation(f, S.metric));
  for (const auto& cap : S.caps)
    worst = std::max(worst, cap_value(S.dims, f, cap) - cap.bound);
  return worst;
}

struct StartResult {
  double value = kInf;
  ArrayXd f;
  double violation = kInf;
  long long iters = 0;
  bool converged = false;
};

// One mirror-descent run from a strictly feasible (w.r.t. pins) start.
StartResult solve_single(const Objective& obj, const FeasibleSet& S, ArrayXd f,
                         const OptOptions& opts) {
  StartResult out;
  const AlphabetDims& d = S.dims;
  PenaltyState pen;
  double eta = 0.5;
  ArrayXd g(d.cells()), trial(d.cells());
  double cur = penalized(obj, S, f, pen.weight);
  int plateau = 0;
  const double tiny = 1e-15;

  for (int it = 0; it < opts.max_iters; ++it) {
    ++out.iters;
    g.setZero();
    obj.add_grad(d, f, g);
    penalty_grad(S, f, pen.weight, g);
    double mean = g.mean();
    bool accepted = false;
    for (int ls = 0; ls < 45; ++ls) {
      trial = f * ((-(eta) * (g - mean)).min(kGradClamp).max(-kGradClamp)).exp();
      ipf_project(d, trial, S.pins, 1e-13, 60);
      double tv = penalized(obj, S, trial, pen.weight);
      if (tv < cur - tiny) {
        f.swap(trial);
        double drop = cur - tv;
        cur = tv;
        eta = std::min(eta * 1.25, 4.0);
        accepted = true;
        plateau = (drop < opts.tol * std::max(1.0, std::abs(cur))) ? plateau + 1 : 0;
        break;
      }
      eta *= 0.5;
      if (eta < 1e-14) break;
    }
    bool stuck = !accepted || plateau > 30;
    if (stuck) {
      if (ineq_violation(S, f) > opts.constraint_tol && !pen.maxed()) {
        pen.ramp();
        cur = penalized(obj, S, f, pen.weight);
        eta = std::max(eta, 0.05);
        plateau = 0;
        continue;
      }
      out.converged = accepted || plateau > 30;
      break;
    }
    if ((it & 127) == 127 && ineq_violation(S, f) > opts.constraint_tol && !pen.maxed()) {
      pen.ramp();
      cur = penalized(obj, S, f, pen.weight);
    }
  }
  ipf_project(d, f, S.pins, 1e-14, 120);
  out.f = f;
  out.value = obj.value(d, f);
  out.violation = std::max(ineq_violation(S, f), pin_violation(S, f));
  return out;
}

ArrayXd dirichlet_table(const AlphabetDims& d, std::mt19937_64& rng,
                        const std::vector<char>& support = {}) {
  std::uniform_real_distribution<double> U(1e-12, 1.0);
  ArrayXd f(d.cells());
  for (int c = 0; c < d.cells(); ++c) {
    bool ok = support.empty() || support[c];
    f[c] = ok ? -std::log(U(rng)) : 0.0;
  }
  f /= f.sum();
  return f;
}

// Whether the inequality constraints admit any point (equality pins assumed
// nonempty since the reference realizes them). Metric feasibility is probed by
// tilting; each cap by minimizing its mutual information without caps.
bool set_is_feasible(const FeasibleSet& S, const OptOptions& opts) {
  if (S.caps.empty()) return true;  // reference itself is a member
  for (const auto& cap : S.caps) {
    FeasibleSet base = S;
    base.caps.clear();
    Objective capobj;
    if (cap.maskA == ax::X1 && cap.maskB == ax::Y)
      capobj.kind = ObjKind::MI_X1_Y;
    else if (cap.maskA == ax::X2 && cap.maskB == ax::Y)
      capobj.kind = ObjKind::MI_X2_Y;
    else
      return true;
    OptOptions o = opts;
    o.starts = std::max(4, opts.starts / 4);
    OptResult r = minimize(capobj, base, o);
    if (r.value > cap.bound + 1e-7) return false;
  }
  // Joint feasibility of all caps together plus metric: probe by solving the
  // sum of cap excesses.
  if (S.caps.size() > 1) {
    FeasibleSet base = S;
    OptOptions o = opts;
    o.starts = std::max(4, opts.starts / 4);
    Objective zero;  // penalties alone drive the caps
    OptResult r = minimize(zero, base, o);
    if (r.constraint_violation > 1e-6) return false;
  }
  return true;
}

}  // namespace

const char* opt_status_name(OptStatus s) {
  switch (s) {
    case OptStatus::Converged: return "converged";
    case OptStatus::MaxIters: return "max-iters";
    case OptStatus::Infeasible: return "infeasible";
  }
  return "?";
}

OptResult minimize(const Objective& obj, const FeasibleSet& S, const OptOptions& opts,
                   const ArrayXd* warm) {
  const AlphabetDims& d = S.dims;
  std::vector<ArrayXd> starts;
  starts.reserve(opts.starts + 2);

  auto push_start = [&](ArrayXd f) {
    ipf_project(d, f, S.pins, 1e-13, 400);
    starts.push_back(std::move(f));
  };

  // Reference (slightly mixed toward uniform so every admissible cell is
  // reachable by multiplicative updates), the max-entropy member, the warm
  // start, then random feasible points.
  push_start(0.98 * S.ref.p + 0.02 * ArrayXd::Constant(d.cells(), 1.0 / d.cells()));
  push_start(ArrayXd::Constant(d.cells(), 1.0 / d.cells()));
  if (warm && warm->size() == d.cells())
    push_start(0.98 * (*warm) + 0.02 * ArrayXd::Constant(d.cells(), 1.0 / d.cells()));
  int randoms = std::max(0, opts.starts - static_cast<int>(starts.size()));
  for (int i = 0; i < randoms; ++i) {
    auto rng = rng_stream(opts.seed, i + 1);
    push_start(dirichlet_table(d, rng));
  }

  std::vector<StartResult> results(starts.size());
  auto run = [&](int i) { results[i] = solve_single(obj, S, starts[i], opts); };
  if (opts.parallel)
    parallel_for(static_cast<int>(starts.size()), run);
  else
    for (size_t i = 0; i < starts.size(); ++i) run(static_cast<int>(i));

  // Deterministic reduction: feasible results first, then by value, then by
  // start index.
  int best = -1, second = -1;
  auto better = [&](int a, int b) {
    bool fa = results[a].violation <= opts.constraint_tol * 8;
    bool fb = results[b].violation <= opts.constraint_tol * 8;
    if (fa != fb) return fa;
    if (results[a].value != results[b].value) return results[a].value < results[b].value;
    return a < b;
  };
  for (int i = 0; i < static_cast<int>(results.size()); ++i) {
    if (best < 0 || better(i, best)) {
      second = best;
      best = i;
    } else if (second < 0 || better(i, second)) {
      second = i;
    }
  }

  OptResult out;
  out.starts_used = static_cast<int>(starts.size());
  for (const auto& r : results) out.iters += r.iters;
  const StartResult& b = results[best];
  out.value = b.value;
  out.argmin = JointPmf(d, b.f.max(0.0) / b.f.max(0.0).sum());
  out.constraint_violation = b.violation;
  out.certificate_gap = second >= 0 ? std::abs(results[second].value - b.value) : 0.0;
  if (b.violation <= opts.constraint_tol * 8) {
    out.status = b.converged ? OptStatus::Converged : OptStatus::MaxIters;
  } else if (!set_is_feasible(S, opts)) {
    out.status = OptStatus::Infeasible;
    out.value = kInf;
  } else {
    out.status = OptStatus::MaxIters;
  }
  return out;
}

namespace {

unsigned coupled_mask(SetKind inner_kind) {
  switch (inner_kind) {
    case SetKind::L0: return ax::Y;
    case SetKind::L1: return ax::X2Y;
    case SetKind::L2: return ax::X1Y;
    default: throw std::invalid_argument("minimize_nested: inner kind must be L0/L1/L2");
  }
}

struct NestedProblem {
  AlphabetDims d;
  ArrayXd P;        // anchor table
  ArrayXd logP;     // log2 of anchor on its support
  ArrayXd q;
  ArrayXd pin12;    // anchor (X1,X2) marginal
  unsigned cmask;
  const Objective* inner;
  std::vector<char> supp;
};

// Coupled proportional fitting: P' onto K(P), P~ onto the same (X1,X2)
// marginal, and the shared marginal over cmask equalized through its
// geometric mean.
void joint_fit(const NestedProblem& np, ArrayXd& fp, ArrayXd& ft, double tol = 1e-12,
               int max_cycles = 200) {
  MarginalPin pin12{ax::X1X2, np.pin12};
  for (int cyc = 0; cyc < max_cycles; ++cyc) {
    recouple(np.d, fp, pin12, np.supp);
    recouple(np.d, ft, pin12);
    ArrayXd mp = marginal_of(np.d, fp, np.cmask);
    ArrayXd mt = marginal_of(np.d, ft, np.cmask);
    ArrayXd mu = (mp * mt).sqrt();
    double s = mu.sum();
    if (s <= 0) break;
    mu /= s;
    recouple(np.d, fp, {np.cmask, mu}, np.supp);
    recouple(np.d, ft, {np.cmask, mu});
    double res = (marginal_of(np.d, fp, ax::X1X2) - np.pin12).abs().maxCoeff();
    res = std::max(res, (marginal_of(np.d, ft, ax::X1X2) - np.pin12).abs().maxCoeff());
    res = std::max(res, (marginal_of(np.d, fp, np.cmask) - marginal_of(np.d, ft, np.cmask))
                            .abs()
                            .maxCoeff());
    if (res < tol) break;
  }
}

double nested_divergence(const NestedProblem& np, const ArrayXd& fp) {
  double v = 0.0;
  for (int c = 0; c < fp.size(); ++c) {
    if (fp[c] <= 0.0) continue;
    if (np.P[c] <= 0.0) return kInf;
    v += fp[c] * (std::log2(fp[c]) - np.logP[c]);
  }
  return std::max(v, 0.0);
}

double nested_metric_gap(const NestedProblem& np, const ArrayXd& fp, const ArrayXd& ft) {
  return metric_expectation(fp, np.q) - metric_expectation(ft, np.q);
}

double nested_penalized(const NestedProblem& np, const ArrayXd& fp, const ArrayXd& ft,
                        double w, double* viol = nullptr) {
  double gap = std::max(0.0, nested_metric_gap(np, fp, ft));
  if (viol) *viol = gap;
  return nested_divergence(np, fp) + np.inner->value(np.d, ft) + w * gap;
}

struct NestedStart {
  ArrayXd fp, ft;
};

NestedResult solve_nested_single(const NestedProblem& np, NestedStart st,
                                 const OptOptions& opts) {
  NestedResult out;
  const AlphabetDims& d = np.d;
  joint_fit(np, st.fp, st.ft);
  PenaltyState pen;
  double eta = 0.5;
  double cur = nested_penalized(np, st.fp, st.ft, pen.weight);
  ArrayXd gp(d.cells()), gt(d.cells()), tp(d.cells()), tt(d.cells());
  int plateau = 0;

  for (int it = 0; it < opts.max_iters; ++it) {
    gp.setZero();
    gt.setZero();
    for (int c = 0; c < d.cells(); ++c)
      if (st.fp[c] > 0.0 && np.P[c] > 0.0)
        gp[c] = std::log2(std::max(st.fp[c], 1e-300)) - np.logP[c] + 1.4426950408889634;
    np.inner->add_grad(d, st.ft, gt);
    if (nested_metric_gap(np, st.fp, st.ft) > 0.0) {
      gp += pen.weight * np.q;
      gt -= pen.weight * np.q;
    }
    double meanp = gp.mean(), meant = gt.mean();
    bool accepted = false;
    for (int ls = 0; ls < 45; ++ls) {
      tp = st.fp * ((-(eta) * (gp - meanp)).min(kGradClamp).max(-kGradClamp)).exp();
      tt = st.ft * ((-(eta) * (gt - meant)).min(kGradClamp).max(-kGradClamp)).exp();
      joint_fit(np, tp, tt, 1e-12, 80);
      double tv = nested_penalized(np, tp, tt, pen.weight);
      if (tv < cur - 1e-15) {
        st.fp.swap(tp);
        st.ft.swap(tt);
        double drop = cur - tv;
        cur = tv;
        eta = std::min(eta * 1.25, 4.0);
        accepted = true;
        plateau = (drop < opts.tol * std::max(1.0, std::abs(cur))) ? plateau + 1 : 0;
        break;
      }
      eta *= 0.5;
      if (eta < 1e-14) break;
    }
    if (!accepted || plateau > 30) {
      double gap = std::max(0.0, nested_metric_gap(np, st.fp, st.ft));
      if (gap > opts.constraint_tol && !pen.maxed()) {
        pen.ramp();
        cur = nested_penalized(np, st.fp, st.ft, pen.weight);
        eta = std::max(eta, 0.05);
        plateau = 0;
        continue;
      }
      break;
    }
  }
  joint_fit(np, st.fp, st.ft, 1e-13, 300);
  out.value = nested_divergence(np, st.fp) + np.inner->value(d, st.ft);
  out.outer = JointPmf(d, st.fp.max(0.0) / st.fp.max(0.0).sum());
  out.inner = JointPmf(d, st.ft.max(0.0) / st.ft.max(0.0).sum());
  double viol = std::max(0.0, nested_metric_gap(np, st.fp, st.ft));
  viol = std::max(viol, (marginal_of(d, st.fp, ax::X1X2) - np.pin12).abs().maxCoeff());
  viol = std::max(viol, (marginal_of(d, st.ft, ax::X1X2) - np.pin12).abs().maxCoeff());
  viol = std::max(viol, (marginal_of(d, st.fp, np.cmask) - marginal_of(d, st.ft, np.cmask))
                            .abs()
                            .maxCoeff());
  out.constraint_violation = viol;
  out.status = viol <= opts.constraint_tol * 8 ? OptStatus::Converged : OptStatus::MaxIters;
  return out;
}

}  // namespace

NestedResult minimize_nested(const JointPmf& anchor, const ArrayXd& q, SetKind inner_kind,
                             const Objective& inner_obj, const OptOptions& opts,
                             const std::pair<ArrayXd, ArrayXd>* warm) {
  NestedProblem np;
  np.d = anchor.dims;
  np.P = anchor.p;
  np.logP = ArrayXd::Zero(np.P.size());
  for (int c = 0; c < np.P.size(); ++c)
    np.logP[c] = np.P[c] > 0 ? std::log2(np.P[c]) : 0.0;
  np.q = q;
  np.pin12 = anchor.marginal(ax::X1X2);
  np.cmask = coupled_mask(inner_kind);
  np.inner = &inner_obj;
  np.supp.assign(np.d.cells(), 0);
  for (int c = 0; c < np.d.cells(); ++c) np.supp[c] = np.P[c] > 0 ? 1 : 0;

  const ArrayXd mix = ArrayXd::Constant(np.d.cells(), 1.0 / np.d.cells());
  ArrayXd ref_mixed = 0.98 * anchor.p + 0.02 * mix;
  for (int c = 0; c < np.d.cells(); ++c)
    if (!np.supp[c]) ref_mixed[c] = 0.0;

  // The anchored start: P' = P, P~ = the single-level inner argmin at P.
  // With it the nested value never exceeds the pure inner value.
  OptOptions inner_opts = opts;
  inner_opts.starts = std::max(4, opts.starts / 2);
  OptResult pure = minimize(inner_obj, make_set(inner_kind, anchor, q), inner_opts);

  std::vector<NestedStart> starts;
  if (pure.argmin.p.size() == np.d.cells())
    starts.push_back({ref_mixed, 0.98 * pure.argmin.p + 0.02 * mix});
  starts.push_back({ref_mixed, 0.98 * anchor.p + 0.02 * mix});
  if (warm && warm->first.size() == np.d.cells() && warm->second.size() == np.d.cells()) {
    ArrayXd wp = 0.98 * warm->first + 0.02 * mix;
    for (int c = 0; c < np.d.cells(); ++c)
      if (!np.supp[c]) wp[c] = 0.0;
    starts.push_back({wp, 0.98 * warm->second + 0.02 * mix});
  }
  int randoms = std::max(0, opts.starts - static_cast<int>(starts.size()));
  for (int i = 0; i < randoms; ++i) {
    auto rng = rng_stream(opts.seed, 1000 + i);
    starts.push_back({dirichlet_table(np.d, rng, np.supp), dirichlet_table(np.d, rng)});
  }

  std::vector<NestedResult> results(starts.size());
  auto run = [&](int i) { results[i] = solve_nested_single(np, starts[i], opts); };
  if (opts.parallel)
    parallel_for(static_cast<int>(starts.size()), run);
  else
    for (size_t i = 0; i < starts.size(); ++i) run(static_cast<int>(i));

  int best = -1, second = -1;
  auto better = [&](int a, int b) {
    bool fa = results[a].constraint_violation <= opts.constraint_tol * 8;
    bool fb = results[b].constraint_violation <= opts.constraint_tol * 8;
    if (fa != fb) return fa;
    if (results[a].value != results[b].value) return results[a].value < results[b].value;
    return a < b;
  };
  for (int i = 0; i < static_cast<int>(results.size()); ++i) {
    if (best < 0 || better(i, best)) {
      second = best;
      best = i;
    } else if (second < 0 || better(i, second)) {
      second = i;
    }
  }
  NestedResult out = results[best];
  out.certificate_gap = second >= 0 ? std::abs(results[second].value - out.value) : 0.0;
  // Exponents are clipped at zero: the objective is a sum of nonnegative
  // terms, so tiny negative values are numerical noise.
  if (out.value < 0.0 && out.value > -1e-9) out.value = 0.0;
  return out;
}

}  // namespace cogmac
