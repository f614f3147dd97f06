#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "pinwheel/shelling.hpp"

using namespace pinwheel;

namespace {

// number of (x, y) in Z^2 with x^2 + y^2 = n
std::vector<std::uint64_t> brute_circle_counts(std::int64_t radius) {
  std::vector<std::uint64_t> counts(radius * radius + 1, 0);
  for (std::int64_t x = -radius; x <= radius; ++x) {
    for (std::int64_t y = -radius; y <= radius; ++y) {
      if (x * x + y * y <= radius * radius) ++counts[x * x + y * y];
    }
  }
  return counts;
}

// fraction of a box lying in R Z^2, with R = (p, -q; q, p) / n
double box_density(const RationalRotation& r, std::int64_t x0, std::int64_t y0, std::int64_t side) {
  std::uint64_t hits = 0;
  for (std::int64_t x = x0; x < x0 + side; ++x) {
    for (std::int64_t y = y0; y < y0 + side; ++y) {
      // v in R Z^2  iff  R^T v in Z^2
      if ((r.p * x + r.q * y) % r.n == 0 && (-r.q * x + r.p * y) % r.n == 0) ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(side * side);
}

}  // namespace

TEST_CASE("ideal_count_a examples") {
  CHECK(ideal_count_a(1) == 1);
  CHECK(ideal_count_a(5) == 2);
  CHECK(ideal_count_a(9) == 1);
  CHECK(ideal_count_a(3) == 0);
  CHECK(ideal_count_a(25) == 3);
  CHECK(ideal_count_a(2) == 1);
  CHECK(ideal_count_a(65) == 4);
}

TEST_CASE("shelling_count_square examples") {
  CHECK(shelling_count_square(0) == 1);
  CHECK(shelling_count_square(1) == 4);
  CHECK(shelling_count_square(5) == 8);
  CHECK(shelling_count_square(25) == 12);
  CHECK(shelling_count_square(3) == 0);
}

TEST_CASE("shelling_count_square equals brute force up to 10^4") {
  const auto brute = brute_circle_counts(100);
  for (std::uint64_t n = 0; n <= 10000; ++n) {
    REQUIRE_MESSAGE(shelling_count_square(n) == brute[n], n);
    if (n > 0) REQUIRE(4 * ideal_count_a(n) == brute[n]);
  }
}

TEST_CASE("a is multiplicative on coprime arguments") {
  for (std::uint64_t m = 1; m <= 100; ++m) {
    for (std::uint64_t n = 1; m * n <= 10000; ++n) {
      if (std::gcd(m, n) == 1) REQUIRE(ideal_count_a(m * n) == ideal_count_a(m) * ideal_count_a(n));
    }
  }
}

TEST_CASE("enumerate_shells") {
  CHECK(enumerate_shells(2) == ShellTable{{0, 1}, {1, 4}, {2, 4}});
  CHECK(enumerate_shells(5) == ShellTable{{0, 1}, {1, 4}, {2, 4}, {4, 4}, {5, 8}});
  CHECK(shell_table_csv(enumerate_shells(2)) == "r_squared,count\n0,1\n1,4\n2,4\n");

  // Gauss circle: partial sums equal disk counts for every radius <= 100
  const ShellTable t = enumerate_shells(10000);
  for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i - 1].r_squared < t[i].r_squared);
  for (std::int64_t radius = 1; radius <= 100; ++radius) {
    std::uint64_t disk = 0;
    for (std::int64_t x = -radius; x <= radius; ++x) {
      for (std::int64_t y = -radius; y <= radius; ++y) disk += x * x + y * y <= radius * radius;
    }
    std::uint64_t partial = 0;
    for (const auto& e : t) {
      if (e.r_squared <= static_cast<std::uint64_t>(radius * radius)) partial += e.count;
    }
    REQUIRE_MESSAGE(partial == disk, radius);
  }
}

TEST_CASE("rational rotations") {
  const RationalRotation r = rational_rotation({2, 1});
  CHECK(r.p == 3);
  CHECK(r.q == 4);
  CHECK(r.n == 5);
  CHECK_THROWS_AS(rational_rotation({2, 2}), NonPrimitiveRotation);
  CHECK_THROWS_AS(rational_rotation({1, 1}), NonPrimitiveRotation);  // even norm
  CHECK_THROWS_AS(rational_rotation({0, 0}), NonPrimitiveRotation);
}

TEST_CASE("csl_index examples") {
  CHECK(csl_index({1, 0}) == 1);
  CHECK(csl_index({2, 1}) == 5);
  CHECK(csl_index({4, 1}) == 17);
  CHECK_THROWS_AS(csl_index({3, 3}), NonPrimitiveRotation);
}

TEST_CASE("csl_index equals the inverse density of Z^2 cap R Z^2") {
  const std::vector<GaussianRotation> rotations{{1, 0}, {2, 1}, {1, 2}, {3, 2}, {4, 1}, {5, 2},
                                                {4, 3}, {6, 1}, {5, 4}, {7, 2}, {-3, 2}};
  for (const auto& g : rotations) {
    const RationalRotation r = rational_rotation(g);
    const std::uint64_t index = csl_index(g);
    // the intersection contains n Z^2, so an n x n box is an exact period
    const double exact = box_density(r, 0, 0, r.n);
    CHECK_MESSAGE(index == static_cast<std::uint64_t>(std::llround(1.0 / exact)), g.a, "+", g.b, "i");
    // off-period box: within the boundary error 4n/side
    const std::int64_t side = 301;
    CHECK(std::abs(box_density(r, -17, 5, side) * index - 1.0) <= 4.0 * r.n / side);
  }
}

TEST_CASE("hermite_basis spans the generated lattice") {
  const auto b = hermite_basis({{3, -4}, {4, 3}, {5, 0}, {0, 5}});
  CHECK(std::llabs(b[0][0] * b[1][1] - b[0][1] * b[1][0]) == 5);
}
