#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace cogmac {

/// Axis bitmasks over the triple (X1, X2, Y). A subset of variables is a
/// bitwise-or of these, e.g. ax::X1 | ax::Y.
namespace ax {
inline constexpr unsigned X1 = 1u;
inline constexpr unsigned X2 = 2u;
inline constexpr unsigned Y = 4u;
inline constexpr unsigned X1X2 = X1 | X2;
inline constexpr unsigned X1Y = X1 | Y;
inline constexpr unsigned X2Y = X2 | Y;
inline constexpr unsigned ALL = X1 | X2 | Y;
}  // namespace ax

/// Thrown when an enumeration or simulation exceeds its configured budget.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// Sizes of the three finite alphabets. Cells of a joint table are laid out
/// row-major as (x1, x2, y) -> (x1*k2 + x2)*ky + y.
struct AlphabetDims {
  int k1 = 0;
  int k2 = 0;
  int ky = 0;

  static constexpr int kDefaultCellCap = 4096;

  AlphabetDims() = default;
  AlphabetDims(int k1_, int k2_, int ky_, int cell_cap = kDefaultCellCap)
      : k1(k1_), k2(k2_), ky(ky_) {
    if (k1 < 1 || k2 < 1 || ky < 1)
      throw std::invalid_argument("AlphabetDims: all alphabet sizes must be >= 1");
    if (static_cast<long long>(k1) * k2 * ky > cell_cap)
      throw ResourceError("AlphabetDims: dense table of " +
                          std::to_string(static_cast<long long>(k1) * k2 * ky) +
                          " cells exceeds cap " + std::to_string(cell_cap));
  }

  int cells() const { return k1 * k2 * ky; }
  int cell(int x1, int x2, int y) const { return (x1 * k2 + x2) * ky + y; }
  std::array<int, 3> unpack(int c) const {
    return {c / (k2 * ky), (c / ky) % k2, c % ky};
  }

  /// Number of joint cells of the variables selected by `mask`.
  int mask_size(unsigned mask) const {
    int s = 1;
    if (mask & ax::X1) s *= k1;
    if (mask & ax::X2) s *= k2;
    if (mask & ax::Y) s *= ky;
    return s;
  }

  /// Index into the marginal table over `mask` for a full cell index.
  int mask_index(unsigned mask, int c) const {
    auto [x1, x2, y] = unpack(c);
    int idx = 0;
    if (mask & ax::X1) idx = x1;
    if (mask & ax::X2) idx = idx * k2 + x2;
    if (mask & ax::Y) idx = idx * ky + y;
    return idx;
  }

  bool operator==(const AlphabetDims& o) const {
    return k1 == o.k1 && k2 == o.k2 && ky == o.ky;
  }
};

}  // namespace cogmac
