#include "pinwheel/shelling.hpp"

#include <numeric>
#include <sstream>
#include <utility>

namespace pinwheel {

std::uint64_t ideal_count_a(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("a(n) is defined for n >= 1");
  std::uint64_t result = 1;
  while (n % 2 == 0) n /= 2;
  for (std::uint64_t p = 3; p * p <= n; p += 2) {
    if (n % p != 0) continue;
    std::uint64_t ell = 0;
    while (n % p == 0) {
      n /= p;
      ++ell;
    }
    if (p % 4 == 1) {
      result *= ell + 1;
    } else if (ell % 2 == 1) {
      return 0;
    }
  }
  if (n > 1) {
    if (n % 4 == 3) return 0;
    result *= 2;
  }
  return result;
}

std::uint64_t shelling_count_square(std::uint64_t r2) {
  return r2 == 0 ? 1 : 4 * ideal_count_a(r2);
}

ShellTable enumerate_shells(std::uint64_t r2_max) {
  if (r2_max < 1) throw std::invalid_argument("r2_max must be at least 1");
  std::vector<std::uint64_t> counts(r2_max + 1);
  const auto last = static_cast<std::int64_t>(r2_max);
#pragma omp parallel for schedule(static)
  for (std::int64_t r2 = 0; r2 <= last; ++r2) {
    counts[r2] = shelling_count_square(static_cast<std::uint64_t>(r2));
  }
  ShellTable table;
  for (std::uint64_t r2 = 0; r2 <= r2_max; ++r2) {
    if (counts[r2] > 0) table.push_back({r2, counts[r2]});
  }
  return table;
}

std::string shell_table_csv(const ShellTable& table) {
  std::ostringstream os;
  os << "r_squared,count\n";
  for (const auto& e : table) os << e.r_squared << ',' << e.count << '\n';
  return os.str();
}

void GaussianRotation::validate() const {
  if (a == 0 && b == 0) throw NonPrimitiveRotation("zero Gaussian integer");
  if (std::gcd(a, b) != 1) {
    throw NonPrimitiveRotation("gcd(" + std::to_string(a) + ", " + std::to_string(b) + ") != 1");
  }
  if (norm() % 2 == 0) {
    throw NonPrimitiveRotation("norm " + std::to_string(norm()) + " is even");
  }
}

RationalRotation rational_rotation(const GaussianRotation& rot) {
  rot.validate();
  return {rot.a * rot.a - rot.b * rot.b, 2 * rot.a * rot.b, rot.norm()};
}

std::array<std::array<std::int64_t, 2>, 2> hermite_basis(
    const std::vector<std::array<std::int64_t, 2>>& generators) {
  using i128 = __int128;
  std::vector<std::array<i128, 2>> cols;
  for (const auto& g : generators) cols.push_back({g[0], g[1]});

  // Fold every first coordinate into cols[0] with extended-gcd column moves.
  for (std::size_t j = 1; j < cols.size(); ++j) {
    while (cols[j][0] != 0) {
      const i128 q = cols[0][0] / cols[j][0];
      cols[0][0] -= q * cols[j][0];
      cols[0][1] -= q * cols[j][1];
      std::swap(cols[0], cols[j]);
    }
  }
  if (cols.empty() || cols[0][0] == 0) throw std::invalid_argument("generators are not full rank");
  if (cols[0][0] < 0) cols[0] = {-cols[0][0], -cols[0][1]};

  i128 h = 0;
  for (std::size_t j = 1; j < cols.size(); ++j) {
    i128 x = cols[j][1] < 0 ? -cols[j][1] : cols[j][1];
    while (x != 0) {
      const i128 t = h % x;
      h = x;
      x = t;
    }
  }
  if (h == 0) throw std::invalid_argument("generators are not full rank");
  i128 x = cols[0][1] % h;
  if (x < 0) x += h;
  return {{{static_cast<std::int64_t>(cols[0][0]), static_cast<std::int64_t>(x)},
           {0, static_cast<std::int64_t>(h)}}};
}

std::uint64_t csl_index(const GaussianRotation& rot) {
  const RationalRotation r = rational_rotation(rot);
  // x lies in R Z^2 iff R^{-1} x = [p q; -q p] x / n is integral, so the
  // coincidence lattice is the kernel of x -> A x mod n with A = [p q; -q p].
  // Its index is the size of the image A Z^2 in (Z/n)^2.
  const auto basis = hermite_basis({{r.p, -r.q}, {r.q, r.p}, {r.n, 0}, {0, r.n}});
  const auto lattice_det = static_cast<std::uint64_t>(basis[0][0] * basis[1][1]);
  const auto n = static_cast<std::uint64_t>(r.n);
  return n * n / lattice_det;
}

}  // namespace pinwheel
