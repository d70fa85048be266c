#include "cogmac/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace cogmac {

namespace {

void check_table(const ArrayXd& t, int expect, const char* what) {
  if (t.size() != expect)
    throw std::invalid_argument(std::string(what) + ": table has " +
                                std::to_string(t.size()) + " cells, expected " +
                                std::to_string(expect));
  if (!(t >= 0.0).all())
    throw std::invalid_argument(std::string(what) + ": negative entry");
  if (std::abs(t.sum() - 1.0) > kPmfTol)
    throw std::invalid_argument(std::string(what) + ": entries sum to " +
                                std::to_string(t.sum()) + ", expected 1 within 1e-12");
}

}  // namespace

JointPmf::JointPmf(AlphabetDims d, ArrayXd table) : dims(d), p(std::move(table)) {
  check_table(p, dims.cells(), "JointPmf");
}

ArrayXd JointPmf::marginal(unsigned mask) const { return marginal_of(dims, p, mask); }

JointPmf JointPmf::renormalized() const {
  double s = p.sum();
  if (s <= 0.0) throw std::invalid_argument("JointPmf::renormalized: zero mass");
  return JointPmf(dims, p / s);
}

JointPmf JointPmf::uniform(AlphabetDims d) {
  return JointPmf(d, ArrayXd::Constant(d.cells(), 1.0 / d.cells()));
}

InputDist::InputDist(AlphabetDims d, ArrayXd table) : dims(d), p12(std::move(table)) {
  check_table(p12, dims.k1 * dims.k2, "InputDist");
}

ArrayXd InputDist::marginal1() const {
  ArrayXd m = ArrayXd::Zero(dims.k1);
  for (int a = 0; a < dims.k1; ++a)
    for (int b = 0; b < dims.k2; ++b) m[a] += p12[a * dims.k2 + b];
  return m;
}

ArrayXd InputDist::marginal2() const {
  ArrayXd m = ArrayXd::Zero(dims.k2);
  for (int a = 0; a < dims.k1; ++a)
    for (int b = 0; b < dims.k2; ++b) m[b] += p12[a * dims.k2 + b];
  return m;
}

ChannelSpec::ChannelSpec(AlphabetDims d, ArrayXd w, ArrayXd metric)
    : dims(d), W(std::move(w)), q(std::move(metric)) {
  if (W.size() != dims.cells() || q.size() != dims.cells())
    throw std::invalid_argument("ChannelSpec: table shape mismatch");
  if (!(W >= 0.0).all()) throw std::invalid_argument("ChannelSpec: negative W entry");
  for (int a = 0; a < dims.k1; ++a)
    for (int b = 0; b < dims.k2; ++b) {
      double s = 0;
      for (int y = 0; y < dims.ky; ++y) s += W[dims.cell(a, b, y)];
      if (std::abs(s - 1.0) > kPmfTol)
        throw std::invalid_argument("ChannelSpec: W row (" + std::to_string(a) + "," +
                                    std::to_string(b) + ") sums to " + std::to_string(s));
    }
  if (!q.isFinite().all()) throw std::invalid_argument("ChannelSpec: non-finite metric entry");
}

JointPmf ChannelSpec::joint(const InputDist& in) const {
  if (!(in.dims == dims)) throw std::invalid_argument("ChannelSpec::joint: dims mismatch");
  ArrayXd t(dims.cells());
  for (int a = 0; a < dims.k1; ++a)
    for (int b = 0; b < dims.k2; ++b)
      for (int y = 0; y < dims.ky; ++y)
        t[dims.cell(a, b, y)] = in(a, b) * W[dims.cell(a, b, y)];
  return JointPmf(dims, std::move(t));
}

ArrayXd ChannelSpec::matched_metric() const {
  ArrayXd m(dims.cells());
  for (int c = 0; c < dims.cells(); ++c)
    m[c] = W[c] > 0 ? std::log2(W[c]) : -1e3;
  return m;
}

ArrayXd marginal_of(const AlphabetDims& dims, const ArrayXd& p, unsigned mask) {
  ArrayXd m = ArrayXd::Zero(dims.mask_size(mask));
  for (int c = 0; c < dims.cells(); ++c) m[dims.mask_index(mask, c)] += p[c];
  return m;
}

ArrayXi quantize_counts(const ArrayXd& p, int n) {
  const int m = static_cast<int>(p.size());
  ArrayXi counts(m);
  std::vector<std::pair<double, int>> rem(m);
  long long total = 0;
  for (int i = 0; i < m; ++i) {
    double scaled = p[i] * n;
    counts[i] = static_cast<int>(std::floor(scaled + 1e-12));
    rem[i] = {scaled - counts[i], i};
    total += counts[i];
  }
  std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (int k = 0; total < n && k < m; ++k, ++total) counts[rem[k].second] += 1;
  if (total != n) throw std::invalid_argument("quantize_counts: input not a pmf");
  return counts;
}

}  // namespace cogmac
