#include "cogmac/grid_oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

#include "cogmac/info.hpp"

namespace cogmac {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Affine description M f = b of the pins plus total mass.
void build_constraints(const AlphabetDims& d, const std::vector<MarginalPin>& pins,
                       MatrixXd& M, VectorXd& b) {
  int rows = 1;
  for (const auto& pin : pins) rows += d.mask_size(pin.mask);
  M = MatrixXd::Zero(rows, d.cells());
  b = VectorXd::Zero(rows);
  int r = 0;
  M.row(r).setOnes();
  b[r++] = 1.0;
  for (const auto& pin : pins) {
    for (int j = 0; j < d.mask_size(pin.mask); ++j) b[r + j] = pin.target[j];
    for (int c = 0; c < d.cells(); ++c) M(r + d.mask_index(pin.mask, c), c) = 1.0;
    r += d.mask_size(pin.mask);
  }
}

// Orthonormal basis of the null space of M.
MatrixXd kernel_basis(const MatrixXd& M) {
  Eigen::FullPivLU<MatrixXd> lu(M);
  lu.setThreshold(1e-10);
  MatrixXd ker = lu.kernel();
  if (ker.cols() == 1 && ker.norm() < 1e-12) return MatrixXd::Zero(M.cols(), 0);
  Eigen::HouseholderQR<MatrixXd> qr(ker);
  MatrixXd Q = qr.householderQ() * MatrixXd::Identity(ker.rows(), ker.cols());
  return Q;
}

// Bounding box of the polytope {f >= 0, M f = b} in theta coordinates
// (f = f0 + Q theta). Vertices are basic solutions with free-dim cells at
// zero; the universal ball |theta_j| <= 2 is the fallback.
void theta_box(const MatrixXd& M, const VectorXd& b, const VectorXd& f0, const MatrixXd& Q,
               VectorXd& lo, VectorXd& hi) {
  const int k = static_cast<int>(M.cols());
  const int dfree = static_cast<int>(Q.cols());
  lo = VectorXd::Constant(dfree, -2.0);
  hi = VectorXd::Constant(dfree, 2.0);
  if (dfree == 0) return;

  std::vector<int> comb(dfree);
  for (int i = 0; i < dfree; ++i) comb[i] = i;
  VectorXd vlo = VectorXd::Constant(dfree, kInf), vhi = VectorXd::Constant(dfree, -kInf);
  long long tried = 0;
  bool any = false;
  auto process = [&](const std::vector<int>& zeros) {
    std::vector<char> isz(k, 0);
    for (int z : zeros) isz[z] = 1;
    std::vector<int> keep;
    for (int c = 0; c < k; ++c)
      if (!isz[c]) keep.push_back(c);
    MatrixXd Mr(M.rows(), keep.size());
    for (size_t j = 0; j < keep.size(); ++j) Mr.col(j) = M.col(keep[j]);
    VectorXd x = Mr.colPivHouseholderQr().solve(b);
    if ((Mr * x - b).lpNorm<Eigen::Infinity>() > 1e-9) return;
    if ((x.array() < -1e-9).any()) return;
    VectorXd v = VectorXd::Zero(k);
    for (size_t j = 0; j < keep.size(); ++j) v[keep[j]] = x[j];
    VectorXd th = Q.transpose() * (v - f0);
    vlo = vlo.cwiseMin(th);
    vhi = vhi.cwiseMax(th);
    any = true;
  };
  // Iterate d-subsets of cells (bounded; alphabets are tiny).
  while (true) {
    process(comb);
    if (++tried > 30000) break;
    int i = dfree - 1;
    while (i >= 0 && comb[i] == k - dfree + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int j = i + 1; j < dfree; ++j) comb[j] = comb[j - 1] + 1;
  }
  if (any) {
    for (int j = 0; j < dfree; ++j) {
      lo[j] = std::max(lo[j], vlo[j] - 1e-9);
      hi[j] = std::min(hi[j], vhi[j] + 1e-9);
      if (lo[j] > hi[j]) {
        double m = 0.5 * (lo[j] + hi[j]);
        lo[j] = hi[j] = m;
      }
    }
  }
}

struct Lattice {
  VectorXd lo, hi;
  int steps = 0;
  int dims = 0;

  double coord(int j, int i) const {
    return lo[j] + (hi[j] - lo[j]) * (i + 0.5) / steps;
  }
  double half_cell(int j) const { return 0.5 * (hi[j] - lo[j]) / steps; }
};

// L1 radius of a lattice cell mapped through the basis.
double cell_l1_radius(const Lattice& lat, const MatrixXd& Q) {
  double r = 0.0;
  for (int j = 0; j < lat.dims; ++j) r += lat.half_cell(j) * Q.col(j).lpNorm<1>();
  return r;
}

template <typename Fn>
void visit_lattice(const Lattice& lat, Fn&& fn) {
  if (lat.dims == 0) {
    VectorXd th(0);
    fn(th);
    return;
  }
  std::vector<int> idx(lat.dims, 0);
  VectorXd th(lat.dims);
  while (true) {
    for (int j = 0; j < lat.dims; ++j) th[j] = lat.coord(j, idx[j]);
    fn(th);
    int j = 0;
    while (j < lat.dims && ++idx[j] == lat.steps) idx[j++] = 0;
    if (j == lat.dims) break;
  }
}

double cap_mi(const AlphabetDims& d, const ArrayXd& f, const InfoCap& cap) {
  return marginal_entropy(d, f, cap.maskA) + marginal_entropy(d, f, cap.maskB) -
         marginal_entropy(d, f, cap.maskA | cap.maskB);
}

}  // namespace

GridOracleResult grid_oracle(const Objective& obj, const FeasibleSet& S, long long budget,
                             int refine_rounds, int max_free_dim) {
  const AlphabetDims& d = S.dims;
  GridOracleResult out;

  MatrixXd M;
  VectorXd b;
  build_constraints(d, S.pins, M, b);
  MatrixXd Q = kernel_basis(M);
  const int dfree = static_cast<int>(Q.cols());
  if (dfree > max_free_dim)
    throw ResourceError("grid_oracle: free dimension " + std::to_string(dfree) +
                        " exceeds cap " + std::to_string(max_free_dim));

  VectorXd f0 = S.ref.p.matrix();
  double qrange = S.has_metric() ? (S.metric.maxCoeff() - S.metric.minCoeff()) : 0.0;

  Lattice lat;
  lat.dims = dfree;
  theta_box(M, b, f0, Q, lat.lo, lat.hi);
  lat.steps = dfree == 0
                  ? 1
                  : std::max(2, static_cast<int>(std::floor(
                                    std::pow(static_cast<double>(budget), 1.0 / dfree))));

  ArrayXd f(d.cells());
  VectorXd best_theta = VectorXd::Zero(dfree);
  double best = kInf;
  double bound = 0.0;

  auto evaluate_round = [&](const Lattice& l, bool record_bound) {
    double l1 = cell_l1_radius(l, Q);
    double metric_slack = 0.5 * l1 * qrange;
    visit_lattice(l, [&](const VectorXd& th) {
      ++out.points_evaluated;
      VectorXd v = f0 + Q * th;
      double neg = 0.0;
      for (int c = 0; c < d.cells(); ++c) neg = std::min(neg, v[c]);
      if (neg < -1e-9) return;
      for (int c = 0; c < d.cells(); ++c) f[c] = std::max(v[c], 0.0);
      double s = f.sum();
      if (s <= 0) return;
      f /= s;
      if (S.has_metric() &&
          metric_expectation(f, S.metric) < S.metric_floor - metric_slack - 1e-9)
        return;
      for (const auto& cap : S.caps) {
        double slack = entropy_modulus(std::min(0.5 * l1, 1.0), d.mask_size(cap.maskA)) +
                       entropy_modulus(std::min(0.5 * l1, 1.0), d.mask_size(cap.maskB)) +
                       entropy_modulus(std::min(0.5 * l1, 1.0),
                                       d.mask_size(cap.maskA | cap.maskB));
        if (cap_mi(d, f, cap) > cap.bound + slack + 1e-9) return;
      }
      ++out.points_feasible;
      double val = obj.value(d, f);
      if (val < best) {
        best = val;
        best_theta = th;
        out.argmin = f;
      }
    });
    if (record_bound) bound = obj.modulus(d, 3.0 * l1) + 1e-9;
  };

  evaluate_round(lat, true);

  // The reference is an always-available member of the metric-free and
  // L-style sets; include it as a candidate.
  if (set_violation(S, S.ref.p) <= 1e-9) {
    double val = obj.value(d, S.ref.p);
    ++out.points_feasible;
    if (val < best) {
      best = val;
      best_theta = Q.transpose() * (S.ref.p.matrix() - f0);
      out.argmin = S.ref.p;
    }
  }

  for (int round = 0; round < refine_rounds && best < kInf && dfree > 0; ++round) {
    Lattice rl = lat;
    for (int j = 0; j < dfree; ++j) {
      double w = (lat.hi[j] - lat.lo[j]) / std::pow(3.0, round + 1);
      rl.lo[j] = std::max(lat.lo[j], best_theta[j] - 0.5 * w);
      rl.hi[j] = std::min(lat.hi[j], best_theta[j] + 0.5 * w);
    }
    Lattice cur = rl;
    evaluate_round(cur, false);
  }

  out.any_feasible = best < kInf;
  out.value = out.any_feasible ? best : kInf;
  out.error_bound = bound;
  return out;
}

GridOracleResult grid_oracle_nested(const JointPmf& anchor, const ArrayXd& q,
                                    SetKind inner_kind, const Objective& inner_obj,
                                    long long budget, int refine_rounds) {
  const AlphabetDims& d = anchor.dims;
  GridOracleResult out;

  FeasibleSet outerS = make_set(SetKind::K, anchor, ArrayXd());
  FeasibleSet innerS = make_set(inner_kind, anchor, q);  // masks reused; targets per-P'

  MatrixXd Mo, Mi;
  VectorXd bo, bi;
  build_constraints(d, outerS.pins, Mo, bo);
  build_constraints(d, innerS.pins, Mi, bi);
  MatrixXd Qo = kernel_basis(Mo);
  MatrixXd Qi = kernel_basis(Mi);
  const int dofree = static_cast<int>(Qo.cols());
  const int difree = static_cast<int>(Qi.cols());

  int steps = std::max(
      2, static_cast<int>(std::floor(
             std::pow(static_cast<double>(budget), 1.0 / std::max(1, dofree + difree)))));

  Lattice lato;
  lato.dims = dofree;
  lato.steps = steps;
  theta_box(Mo, bo, anchor.p.matrix(), Qo, lato.lo, lato.hi);
  Lattice lati;
  lati.dims = difree;
  lati.steps = steps;
  lati.lo = VectorXd::Constant(difree, -2.0);
  lati.hi = VectorXd::Constant(difree, 2.0);

  const double qrange = q.size() ? (q.maxCoeff() - q.minCoeff()) : 0.0;
  ArrayXd logP = ArrayXd::Zero(d.cells());
  double max_abs_logp = 0.0;
  for (int c = 0; c < d.cells(); ++c)
    if (anchor.p[c] > 0) {
      logP[c] = std::log2(anchor.p[c]);
      max_abs_logp = std::max(max_abs_logp, std::abs(logP[c]));
    }

  auto dterm = [&](const ArrayXd& fp) {
    double v = 0.0;
    for (int c = 0; c < d.cells(); ++c) {
      if (fp[c] <= 0.0) continue;
      if (anchor.p[c] <= 0.0) return kInf;
      v += fp[c] * (std::log2(fp[c]) - logP[c]);
    }
    return std::max(v, 0.0);
  };

  double best = kInf;
  VectorXd best_to = VectorXd::Zero(dofree), best_ti = VectorXd::Zero(difree);
  ArrayXd fp(d.cells()), ft(d.cells());

  auto run_round = [&](const Lattice& lo_, const Lattice& li_, bool first) {
    double l1o = cell_l1_radius(lo_, Qo);
    double l1i = cell_l1_radius(li_, Qi);
    double metric_slack = 0.5 * (l1o + l1i) * qrange;
    visit_lattice(lo_, [&](const VectorXd& tho) {
      VectorXd vp = anchor.p.matrix() + Qo * tho;
      double neg = 0.0;
      for (int c = 0; c < d.cells(); ++c) neg = std::min(neg, vp[c]);
      if (neg < -1e-9) return;
      for (int c = 0; c < d.cells(); ++c) fp[c] = std::max(vp[c], 0.0);
      double s = fp.sum();
      if (s <= 0) return;
      fp /= s;
      double dv = dterm(fp);
      if (dv >= best) return;  // inner value is nonnegative for the E-forms
      double floor = metric_expectation(fp, q);
      // Inner lattice around f0 = P' itself (always pin-feasible).
      VectorXd fi0 = fp.matrix();
      visit_lattice(li_, [&](const VectorXd& thi) {
        ++out.points_evaluated;
        VectorXd vt = fi0 + Qi * thi;
        double negi = 0.0;
        for (int c = 0; c < d.cells(); ++c) negi = std::min(negi, vt[c]);
        if (negi < -1e-9) return;
        for (int c = 0; c < d.cells(); ++c) ft[c] = std::max(vt[c], 0.0);
        double si = ft.sum();
        if (si <= 0) return;
        ft /= si;
        if (metric_expectation(ft, q) < floor - metric_slack - 1e-9) return;
        ++out.points_feasible;
        double val = dv + inner_obj.value(d, ft);
        if (val < best) {
          best = val;
          best_to = tho;
          best_ti = thi;
          out.argmin = ft;
        }
      });
    });
    if (first) {
      double div_mod = entropy_modulus(std::min(1.5 * l1o, 1.0), d.cells()) +
                       3.0 * l1o * max_abs_logp;
      out.error_bound = div_mod + inner_obj.modulus(d, 3.0 * (l1i + l1o)) + 1e-9;
    }
  };

  run_round(lato, lati, true);

  for (int round = 0; round < refine_rounds && best < kInf; ++round) {
    Lattice ro = lato, ri = lati;
    for (int j = 0; j < dofree; ++j) {
      double w = (lato.hi[j] - lato.lo[j]) / std::pow(3.0, round + 1);
      ro.lo[j] = std::max(lato.lo[j], best_to[j] - 0.5 * w);
      ro.hi[j] = std::min(lato.hi[j], best_to[j] + 0.5 * w);
    }
    for (int j = 0; j < difree; ++j) {
      double w = (lati.hi[j] - lati.lo[j]) / std::pow(3.0, round + 1);
      ri.lo[j] = std::max(lati.lo[j], best_ti[j] - 0.5 * w);
      ri.hi[j] = std::min(lati.hi[j], best_ti[j] + 0.5 * w);
    }
    run_round(ro, ri, false);
  }

  out.any_feasible = best < kInf;
  out.value = out.any_feasible ? best : kInf;
  return out;
}

}  // namespace cogmac
