#pragma once

// Shelling numbers of the square lattice and coincidence indices.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pinwheel {

class NonPrimitiveRotation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Number of ideals of norm n in Z[i]; multiplicative, with
/// a(2^l) = 1, a(p^l) = l+1 for p = 1 mod 4, and for p = 3 mod 4
/// a(p^l) = 1 or 0 as l is even or odd.
std::uint64_t ideal_count_a(std::uint64_t n);

/// Lattice points of Z^2 on the circle x^2 + y^2 = r2.
std::uint64_t shelling_count_square(std::uint64_t r2);

struct ShellEntry {
  std::uint64_t r_squared;
  std::uint64_t count;
  friend bool operator==(const ShellEntry&, const ShellEntry&) = default;
};

using ShellTable = std::vector<ShellEntry>;

/// Non-empty shells with 0 <= r^2 <= r2_max, increasing.
ShellTable enumerate_shells(std::uint64_t r2_max);

/// CSV with header `r_squared,count`.
std::string shell_table_csv(const ShellTable& table);

/// Primitive Gaussian integer a+bi of odd norm. It names the coincidence
/// rotation z -> z (a+bi)/(a-bi), i.e. multiplication by (a+bi)^2/(a^2+b^2).
struct GaussianRotation {
  std::int64_t a = 1;
  std::int64_t b = 0;

  std::int64_t norm() const { return a * a + b * b; }
  /// Throws NonPrimitiveRotation unless gcd(a, b) = 1 and the norm is odd.
  void validate() const;
};

/// The rotation as (p, q, n): matrix [p -q; q p] / n.
struct RationalRotation {
  std::int64_t p;
  std::int64_t q;
  std::int64_t n;
};

RationalRotation rational_rotation(const GaussianRotation& rot);

/// Hermite normal form of the integer lattice spanned by the given planar
/// generators: a lower-triangular basis {(g, x), (0, h)} with g, h > 0 and
/// 0 <= x < h. Requires the generators to span a full-rank lattice.
std::array<std::array<std::int64_t, 2>, 2> hermite_basis(
    const std::vector<std::array<std::int64_t, 2>>& generators);

/// Index of Z^2 cap R Z^2 in Z^2, from the Hermite form of the lattice
/// generated by n Z^2 and the columns of n R^{-1}.
std::uint64_t csl_index(const GaussianRotation& rot);

}  // namespace pinwheel
