#include "cogmac/objective.hpp"

#include <cmath>

#include "cogmac/info.hpp"

namespace cogmac {

namespace {

constexpr double kInvLn2 = 1.4426950408889634;
constexpr double kFloor = 1e-300;

double pos(double t) { return t > 0.0 ? t : 0.0; }

// Signed entropy-atom lists for the mutual-information building blocks.
struct Atom {
  unsigned mask;
  double sign;
};

// I(X1;Y,X2), I(X2;Y,X1), I(X2;Y|X1), I(X1;Y|X2), I(X12;Y), I(X1;Y), I(X2;Y),
// I(X1;X2) expressed through marginal entropies.
const Atom kI_X1_YX2[] = {{ax::X1, 1}, {ax::X2Y, 1}, {ax::ALL, -1}};
const Atom kI_X2_YX1[] = {{ax::X2, 1}, {ax::X1Y, 1}, {ax::ALL, -1}};
const Atom kI_X2_Y_g_X1[] = {{ax::X1X2, 1}, {ax::X1Y, 1}, {ax::X1, -1}, {ax::ALL, -1}};
const Atom kI_X1_Y_g_X2[] = {{ax::X1X2, 1}, {ax::X2Y, 1}, {ax::X2, -1}, {ax::ALL, -1}};
const Atom kI_X12_Y[] = {{ax::X1X2, 1}, {ax::Y, 1}, {ax::ALL, -1}};
const Atom kI_X1_Y[] = {{ax::X1, 1}, {ax::Y, 1}, {ax::X1Y, -1}};
const Atom kI_X2_Y[] = {{ax::X2, 1}, {ax::Y, 1}, {ax::X2Y, -1}};
const Atom kI_X1_X2[] = {{ax::X1, 1}, {ax::X2, 1}, {ax::X1X2, -1}};
const Atom kSumRateLM[] = {{ax::X1, 1}, {ax::X2, 1}, {ax::Y, 1}, {ax::ALL, -1}};

template <size_t N>
double eval_atoms(const AlphabetDims& d, const ArrayXd& f, const Atom (&atoms)[N]) {
  double v = 0.0;
  for (const Atom& a : atoms) v += a.sign * marginal_entropy(d, f, a.mask);
  return v;
}

template <size_t N>
void grad_atoms(const AlphabetDims& d, const ArrayXd& f, const Atom (&atoms)[N], double w,
                ArrayXd& g) {
  for (const Atom& a : atoms) add_grad_entropy(d, f, a.mask, w * a.sign, g);
}

template <size_t N>
double mod_atoms(const AlphabetDims& d, double t, const Atom (&atoms)[N]) {
  double m = 0.0;
  for (const Atom& a : atoms) m += entropy_modulus(t, d.mask_size(a.mask));
  return m;
}

}  // namespace

double marginal_entropy(const AlphabetDims& dims, const ArrayXd& f, unsigned mask) {
  if (mask == ax::ALL) return entropy(f);
  return entropy(marginal_of(dims, f, mask));
}

void add_grad_entropy(const AlphabetDims& dims, const ArrayXd& f, unsigned mask, double w,
                      ArrayXd& g) {
  if (w == 0.0) return;
  if (mask == ax::ALL) {
    for (int c = 0; c < f.size(); ++c)
      g[c] += w * (-(std::log2(std::max(f[c], kFloor)) + kInvLn2));
    return;
  }
  ArrayXd m = marginal_of(dims, f, mask);
  for (int c = 0; c < f.size(); ++c) {
    double mv = m[dims.mask_index(mask, c)];
    g[c] += w * (-(std::log2(std::max(mv, kFloor)) + kInvLn2));
  }
}

double entropy_modulus(double t, int K) {
  if (K <= 1) return 0.0;
  double cap = std::log2(static_cast<double>(K));
  if (t >= 0.5) return cap;
  double b = t * std::log2(std::max(K - 1, 1)) + binary_entropy(t);
  return std::min(b, cap);
}

const char* obj_kind_name(ObjKind k) {
  switch (k) {
    case ObjKind::Zero: return "zero";
    case ObjKind::MI_X1_YX2: return "I(X1;Y,X2)";
    case ObjKind::MI_X2_YX1: return "I(X2;Y,X1)";
    case ObjKind::MI_X2_Y_g_X1: return "I(X2;Y|X1)";
    case ObjKind::MI_X1_Y_g_X2: return "I(X1;Y|X2)";
    case ObjKind::MI_X12_Y: return "I(X1,X2;Y)";
    case ObjKind::MI_X1_Y: return "I(X1;Y)";
    case ObjKind::MI_X2_Y: return "I(X2;Y)";
    case ObjKind::MI_X1_X2: return "I(X1;X2)";
    case ObjKind::SumRateLM: return "I(X1,X2;Y)+I(X1;X2)";
    case ObjKind::R1dd: return "R1''";
    case ObjKind::R2dd: return "R2''";
    case ObjKind::RevR2: return "r2";
    case ObjKind::E2Inner: return "E2 inner";
    case ObjKind::E1SupInner: return "E1 sup inner";
    case ObjKind::E1BinInner: return "E1 bin inner";
    case ObjKind::E0bInner: return "E0b inner";
  }
  return "?";
}

double Objective::value(const AlphabetDims& d, const ArrayXd& f) const {
  switch (kind) {
    case ObjKind::Zero: return 0.0;
    case ObjKind::MI_X1_YX2: return eval_atoms(d, f, kI_X1_YX2);
    case ObjKind::MI_X2_YX1: return eval_atoms(d, f, kI_X2_YX1);
    case ObjKind::MI_X2_Y_g_X1: return eval_atoms(d, f, kI_X2_Y_g_X1);
    case ObjKind::MI_X1_Y_g_X2: return eval_atoms(d, f, kI_X1_Y_g_X2);
    case ObjKind::MI_X12_Y: return eval_atoms(d, f, kI_X12_Y);
    case ObjKind::MI_X1_Y: return eval_atoms(d, f, kI_X1_Y);
    case ObjKind::MI_X2_Y: return eval_atoms(d, f, kI_X2_Y);
    case ObjKind::MI_X1_X2: return eval_atoms(d, f, kI_X1_X2);
    case ObjKind::SumRateLM: return eval_atoms(d, f, kSumRateLM);
    case ObjKind::R1dd:
      return eval_atoms(d, f, kI_X1_Y) + pos(eval_atoms(d, f, kI_X2_Y_g_X1) - r2);
    case ObjKind::R2dd:
      return eval_atoms(d, f, kI_X2_Y) - eval_atoms(d, f, kI_X1_X2) +
             pos(eval_atoms(d, f, kI_X1_YX2) - r1);
    case ObjKind::RevR2:
      return eval_atoms(d, f, kI_X2_Y) + pos(eval_atoms(d, f, kI_X1_Y_g_X2) - r1);
    case ObjKind::E2Inner: return pos(eval_atoms(d, f, kI_X2_Y_g_X1) - r2);
    case ObjKind::E1SupInner:
      return pos(eval_atoms(d, f, kI_X1_Y) + pos(eval_atoms(d, f, kI_X2_Y_g_X1) - r2) - r1);
    case ObjKind::E1BinInner: return pos(eval_atoms(d, f, kI_X1_YX2) - r1);
    case ObjKind::E0bInner:
      return pos(eval_atoms(d, f, kI_X2_Y) - cfix + pos(eval_atoms(d, f, kI_X1_YX2) - r1) -
                 r2);
  }
  return 0.0;
}

void Objective::add_grad(const AlphabetDims& d, const ArrayXd& f, ArrayXd& g, double w) const {
  switch (kind) {
    case ObjKind::Zero: return;
    case ObjKind::MI_X1_YX2: grad_atoms(d, f, kI_X1_YX2, w, g); return;
    case ObjKind::MI_X2_YX1: grad_atoms(d, f, kI_X2_YX1, w, g); return;
    case ObjKind::MI_X2_Y_g_X1: grad_atoms(d, f, kI_X2_Y_g_X1, w, g); return;
    case ObjKind::MI_X1_Y_g_X2: grad_atoms(d, f, kI_X1_Y_g_X2, w, g); return;
    case ObjKind::MI_X12_Y: grad_atoms(d, f, kI_X12_Y, w, g); return;
    case ObjKind::MI_X1_Y: grad_atoms(d, f, kI_X1_Y, w, g); return;
    case ObjKind::MI_X2_Y: grad_atoms(d, f, kI_X2_Y, w, g); return;
    case ObjKind::MI_X1_X2: grad_atoms(d, f, kI_X1_X2, w, g); return;
    case ObjKind::SumRateLM: grad_atoms(d, f, kSumRateLM, w, g); return;
    case ObjKind::R1dd: {
      grad_atoms(d, f, kI_X1_Y, w, g);
      if (eval_atoms(d, f, kI_X2_Y_g_X1) > r2) grad_atoms(d, f, kI_X2_Y_g_X1, w, g);
      return;
    }
    case ObjKind::R2dd: {
      grad_atoms(d, f, kI_X2_Y, w, g);
      grad_atoms(d, f, kI_X1_X2, -w, g);
      if (eval_atoms(d, f, kI_X1_YX2) > r1) grad_atoms(d, f, kI_X1_YX2, w, g);
      return;
    }
    case ObjKind::RevR2: {
      grad_atoms(d, f, kI_X2_Y, w, g);
      if (eval_atoms(d, f, kI_X1_Y_g_X2) > r1) grad_atoms(d, f, kI_X1_Y_g_X2, w, g);
      return;
    }
    case ObjKind::E2Inner: {
      if (eval_atoms(d, f, kI_X2_Y_g_X1) > r2) grad_atoms(d, f, kI_X2_Y_g_X1, w, g);
      return;
    }
    case ObjKind::E1SupInner: {
      double inner = pos(eval_atoms(d, f, kI_X2_Y_g_X1) - r2);
      if (eval_atoms(d, f, kI_X1_Y) + inner - r1 > 0.0) {
        grad_atoms(d, f, kI_X1_Y, w, g);
        if (inner > 0.0) grad_atoms(d, f, kI_X2_Y_g_X1, w, g);
      }
      return;
    }
    case ObjKind::E1BinInner: {
      if (eval_atoms(d, f, kI_X1_YX2) > r1) grad_atoms(d, f, kI_X1_YX2, w, g);
      return;
    }
    case ObjKind::E0bInner: {
      double inner = pos(eval_atoms(d, f, kI_X1_YX2) - r1);
      if (eval_atoms(d, f, kI_X2_Y) - cfix + inner - r2 > 0.0) {
        grad_atoms(d, f, kI_X2_Y, w, g);
        if (inner > 0.0) grad_atoms(d, f, kI_X1_YX2, w, g);
      }
      return;
    }
  }
}

double Objective::modulus(const AlphabetDims& d, double l1) const {
  double t = std::min(0.5 * l1, 1.0);
  switch (kind) {
    case ObjKind::Zero: return 0.0;
    case ObjKind::MI_X1_YX2: return mod_atoms(d, t, kI_X1_YX2);
    case ObjKind::MI_X2_YX1: return mod_atoms(d, t, kI_X2_YX1);
    case ObjKind::MI_X2_Y_g_X1: return mod_atoms(d, t, kI_X2_Y_g_X1);
    case ObjKind::MI_X1_Y_g_X2: return mod_atoms(d, t, kI_X1_Y_g_X2);
    case ObjKind::MI_X12_Y: return mod_atoms(d, t, kI_X12_Y);
    case ObjKind::MI_X1_Y: return mod_atoms(d, t, kI_X1_Y);
    case ObjKind::MI_X2_Y: return mod_atoms(d, t, kI_X2_Y);
    case ObjKind::MI_X1_X2: return mod_atoms(d, t, kI_X1_X2);
    case ObjKind::SumRateLM: return mod_atoms(d, t, kSumRateLM);
    case ObjKind::R1dd: return mod_atoms(d, t, kI_X1_Y) + mod_atoms(d, t, kI_X2_Y_g_X1);
    case ObjKind::R2dd:
      return mod_atoms(d, t, kI_X2_Y) + mod_atoms(d, t, kI_X1_X2) +
             mod_atoms(d, t, kI_X1_YX2);
    case ObjKind::RevR2: return mod_atoms(d, t, kI_X2_Y) + mod_atoms(d, t, kI_X1_Y_g_X2);
    case ObjKind::E2Inner: return mod_atoms(d, t, kI_X2_Y_g_X1);
    case ObjKind::E1SupInner:
      return mod_atoms(d, t, kI_X1_Y) + mod_atoms(d, t, kI_X2_Y_g_X1);
    case ObjKind::E1BinInner: return mod_atoms(d, t, kI_X1_YX2);
    case ObjKind::E0bInner: return mod_atoms(d, t, kI_X2_Y) + mod_atoms(d, t, kI_X1_YX2);
  }
  return 0.0;
}

}  // namespace cogmac
