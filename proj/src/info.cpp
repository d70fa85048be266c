#include "cogmac/info.hpp"

#include <cmath>
#include <limits>

namespace cogmac {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double entropy(const ArrayXd& p) {
  double h = 0.0;
  for (int i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) h -= p[i] * std::log2(p[i]);
  return h < 0.0 ? 0.0 : h;
}

double entropy(const JointPmf& f, unsigned mask) { return entropy(f.marginal(mask)); }

double cond_entropy(const JointPmf& f, unsigned maskA, unsigned maskC) {
  if (maskA & maskC) throw std::invalid_argument("cond_entropy: overlapping groups");
  if (maskC == 0) return entropy(f, maskA);
  return entropy(f, maskA | maskC) - entropy(f, maskC);
}

double mutual_info(const JointPmf& f, unsigned maskA, unsigned maskB, unsigned maskC) {
  if (maskA == 0 || maskB == 0) throw std::invalid_argument("mutual_info: empty group");
  if ((maskA & maskB) || (maskA & maskC) || (maskB & maskC))
    throw std::invalid_argument("mutual_info: overlapping groups");
  double i = entropy(f, maskA | maskC) + entropy(f, maskB | maskC) -
             entropy(f, maskA | maskB | maskC);
  if (maskC != 0) i -= entropy(f, maskC);
  return i > 0.0 ? i : 0.0;
}

double divergence(const ArrayXd& f, const ArrayXd& g) {
  if (f.size() != g.size()) throw std::invalid_argument("divergence: size mismatch");
  double d = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    if (f[i] <= 0.0) continue;
    if (g[i] <= 0.0) return kInf;
    d += f[i] * std::log2(f[i] / g[i]);
  }
  return d > 0.0 ? d : 0.0;
}

double divergence(const JointPmf& f, const JointPmf& g) {
  if (!(f.dims == g.dims)) throw std::invalid_argument("divergence: dims mismatch");
  return divergence(f.p, g.p);
}

double divergence_cond(const JointPmf& f, const ArrayXd& W) {
  const auto& d = f.dims;
  if (W.size() != d.cells()) throw std::invalid_argument("divergence_cond: size mismatch");
  ArrayXd m12 = f.marginal(ax::X1X2);
  double out = 0.0;
  for (int c = 0; c < d.cells(); ++c) {
    if (f.p[c] <= 0.0) continue;
    if (W[c] <= 0.0) return kInf;
    double cond = f.p[c] / m12[d.mask_index(ax::X1X2, c)];
    out += f.p[c] * std::log2(cond / W[c]);
  }
  return out > 0.0 ? out : 0.0;
}

double metric_expectation(const ArrayXd& f, const ArrayXd& q) {
  if (f.size() != q.size()) throw std::invalid_argument("metric_expectation: size mismatch");
  return (f * q).sum();
}

double metric_expectation(const JointPmf& f, const ArrayXd& q) {
  return metric_expectation(f.p, q);
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

}  // namespace cogmac
