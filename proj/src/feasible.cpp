#include "cogmac/feasible.hpp"

#include <cmath>

namespace cogmac {

const char* set_kind_name(SetKind k) {
  switch (k) {
    case SetKind::K: return "K";
    case SetKind::Gq: return "Gq";
    case SetKind::L0: return "L0";
    case SetKind::L1: return "L1";
    case SetKind::L2: return "L2";
    case SetKind::L0sup: return "L0sup";
    case SetKind::L0bin: return "L0bin";
    case SetKind::D1: return "D1";
    case SetKind::D2: return "D2";
    case SetKind::D0: return "D0";
  }
  return "?";
}

FeasibleSet make_set(SetKind kind, const JointPmf& anchor, const ArrayXd& q, double r1,
                     double r2) {
  FeasibleSet S;
  S.kind = kind;
  S.dims = anchor.dims;
  S.ref = anchor;
  S.rate1 = r1;
  S.rate2 = r2;

  auto pin = [&](unsigned mask) { S.pins.push_back({mask, anchor.marginal(mask)}); };
  auto metric_on = [&] {
    if (q.size() != anchor.dims.cells())
      throw std::invalid_argument("make_set: metric shape mismatch");
    S.metric = q;
    S.metric_floor = metric_expectation(anchor, q);
  };
  auto need = [&](double r, const char* nm) {
    if (!(r >= 0.0))
      throw std::invalid_argument(std::string("make_set: ") + set_kind_name(kind) +
                                  " needs nonnegative rate " + nm);
  };

  switch (kind) {
    case SetKind::K:
      pin(ax::X1X2);
      break;
    case SetKind::Gq:
      pin(ax::X1X2);
      metric_on();
      break;
    case SetKind::L1:
      pin(ax::X1X2);
      pin(ax::X2Y);
      metric_on();
      break;
    case SetKind::L2:
      pin(ax::X1X2);
      pin(ax::X1Y);
      metric_on();
      break;
    case SetKind::L0:
      pin(ax::X1X2);
      pin(ax::Y);
      metric_on();
      break;
    case SetKind::L0sup:
      need(r1, "R1");
      pin(ax::X1X2);
      pin(ax::Y);
      metric_on();
      S.caps.push_back({ax::X1, ax::Y, r1});
      break;
    case SetKind::L0bin: {
      need(r1, "R1");
      need(r2, "R2");
      pin(ax::X1X2);
      pin(ax::Y);
      metric_on();
      S.caps.push_back({ax::X1, ax::Y, r1});
      double i12 = mutual_info(anchor, ax::X1, ax::X2);
      S.caps.push_back({ax::X2, ax::Y, r2 + i12});
      break;
    }
    case SetKind::D1:
      pin(ax::X1);
      pin(ax::X2Y);
      metric_on();
      break;
    case SetKind::D2:
      pin(ax::X2);
      pin(ax::X1Y);
      metric_on();
      break;
    case SetKind::D0:
      need(r1, "R1");
      need(r2, "R2");
      pin(ax::X1);
      pin(ax::X2);
      pin(ax::Y);
      metric_on();
      S.caps.push_back({ax::X1, ax::Y, r1});
      S.caps.push_back({ax::X2, ax::Y, r2});
      break;
  }
  return S;
}

void recouple(const AlphabetDims& dims, ArrayXd& f, const MarginalPin& pin,
              const std::vector<char>& support) {
  const int msize = dims.mask_size(pin.mask);
  ArrayXd m = marginal_of(dims, f, pin.mask);
  // Scale factors; slices needing mass reintroduction are handled below.
  ArrayXd scale(msize);
  std::vector<char> refill(msize, 0);
  for (int j = 0; j < msize; ++j) {
    if (m[j] > 0.0) {
      scale[j] = pin.target[j] / m[j];
    } else {
      scale[j] = 0.0;
      if (pin.target[j] > 0.0) refill[j] = 1;
    }
  }
  std::vector<int> slice_free(msize, 0);
  bool any_refill = false;
  for (int j = 0; j < msize; ++j) any_refill |= (refill[j] != 0);
  if (any_refill) {
    for (int c = 0; c < dims.cells(); ++c) {
      if (!support.empty() && !support[c]) continue;
      ++slice_free[dims.mask_index(pin.mask, c)];
    }
  }
  for (int c = 0; c < dims.cells(); ++c) {
    int j = dims.mask_index(pin.mask, c);
    if (refill[j]) {
      bool ok = support.empty() || support[c];
      f[c] = (ok && slice_free[j] > 0) ? pin.target[j] / slice_free[j] : 0.0;
    } else {
      f[c] *= scale[j];
    }
  }
}

IpfResult ipf_project(const AlphabetDims& dims, ArrayXd& f,
                      const std::vector<MarginalPin>& pins, double tol, int max_cycles,
                      const std::vector<char>& support) {
  IpfResult r;
  if (pins.empty()) {
    double s = f.sum();
    if (s > 0) f /= s;
    r.converged = true;
    return r;
  }
  for (int cycle = 0; cycle < max_cycles; ++cycle) {
    for (const auto& pin : pins) recouple(dims, f, pin, support);
    double worst = 0.0;
    for (const auto& pin : pins) {
      ArrayXd m = marginal_of(dims, f, pin.mask);
      worst = std::max(worst, (m - pin.target).abs().maxCoeff());
    }
    r.residual = worst;
    r.cycles = cycle + 1;
    if (worst < tol) {
      r.converged = true;
      return r;
    }
  }
  return r;
}

double pin_violation(const FeasibleSet& S, const ArrayXd& f) {
  double worst = 0.0;
  for (const auto& pin : S.pins) {
    ArrayXd m = marginal_of(S.dims, f, pin.mask);
    worst = std::max(worst, (m - pin.target).abs().maxCoeff());
  }
  return worst;
}

double set_violation(const FeasibleSet& S, const ArrayXd& f) {
  double worst = pin_violation(S, f);
  if (S.has_metric())
    worst = std::max(worst, S.metric_floor - metric_expectation(f, S.metric));
  if (!S.caps.empty()) {
    JointPmf jf(S.dims, f / f.sum());
    for (const auto& cap : S.caps)
      worst = std::max(worst, mutual_info(jf, cap.maskA, cap.maskB) - cap.bound);
  }
  return worst;
}

ProjResult project_to_set(const JointPmf& f0, const FeasibleSet& S) {
  ProjResult out;
  ArrayXd f = f0.p;
  IpfResult ipf = ipf_project(S.dims, f, S.pins);
  bool ok = ipf.converged;

  if (ok && S.has_metric()) {
    double floor = S.metric_floor;
    if (metric_expectation(f, S.metric) < floor - 1e-12) {
      // Exponential tilt toward higher metric, re-fitting the pins after each
      // tilt; the achieved expectation is nondecreasing in lambda.
      ArrayXd qc = S.metric - S.metric.maxCoeff();
      auto tilted = [&](double lam) {
        ArrayXd g = f * (lam * qc).exp();
        ipf_project(S.dims, g, S.pins);
        return g;
      };
      double lo = 0.0, hi = 1.0;
      ArrayXd g;
      bool reached = false;
      for (int k = 0; k < 48; ++k) {
        g = tilted(hi);
        if (metric_expectation(g, S.metric) >= floor - 1e-12) {
          reached = true;
          break;
        }
        lo = hi;
        hi *= 2.0;
      }
      if (!reached) {
        ok = false;
        f = tilted(hi);
      } else {
        for (int k = 0; k < 80; ++k) {
          double mid = 0.5 * (lo + hi);
          ArrayXd gm = tilted(mid);
          if (metric_expectation(gm, S.metric) >= floor - 1e-12)
            hi = mid;
          else
            lo = mid;
        }
        f = tilted(hi);
      }
    }
  }

  double s = f.sum();
  if (s > 0) f /= s;
  out.f = JointPmf(S.dims, f.max(0.0) / f.max(0.0).sum());
  out.residual = set_violation(S, out.f.p);
  double eq_res = pin_violation(S, out.f.p);
  double met_res = S.has_metric()
                       ? S.metric_floor - metric_expectation(out.f.p, S.metric)
                       : 0.0;
  out.feasible = ok && eq_res < 1e-9 && met_res < 1e-9;
  return out;
}

}  // namespace cogmac
