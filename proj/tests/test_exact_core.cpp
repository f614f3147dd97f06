#include <random>

#include "doctest.h"
#include "pinwheel/exact_core.hpp"
#include "pinwheel/substitution.hpp"

using namespace pinwheel;

namespace {

ExactPoint pt(const char* x, const char* y) { return {Rational2_5::parse(x), Rational2_5::parse(y)}; }

bool orthogonal_at_scale(const Isometry& g) {
  const Mat2& n = g.linear();
  const Mat2 ntn = n.transposed() * n;
  const mpz_class s = pow5(g.scale_exp());
  return ntn.a == s && ntn.d == s && ntn.b == 0 && ntn.c == 0 &&
         (n.det() == s || n.det() == -s);
}

}  // namespace

TEST_CASE("Rational2_5 keeps lowest terms and rejects foreign primes") {
  const Rational2_5 r(mpz_class(6), mpz_class(10));
  CHECK(r.str() == "3/5");
  CHECK(r.five_adic_denominator() == 1);
  CHECK(r.two_adic_denominator() == 0);
  CHECK(Rational2_5::parse("-3/2").two_adic_denominator() == 1);
  CHECK_THROWS_AS(Rational2_5::parse("1/3"), DenominatorError);
  CHECK_THROWS_AS(Rational2_5(mpz_class(1), mpz_class(14)), DenominatorError);
  CHECK(Rational2_5::parse("7/25").divided_by(5) == Rational2_5::parse("7/125"));
}

TEST_CASE("compose") {
  CHECK(Isometry::identity().compose(Isometry::identity()) == Isometry::identity());

  const Isometry r(Mat2{3, -4, 4, 3}, 2, {});
  const Isometry rr = r.compose(r);
  CHECK(rr.linear() == Mat2{-7, -24, 24, -7});
  CHECK(rr.scale_exp() == 4);

  for (const Isometry& h : pinwheel_dissection().children) {
    CHECK(h.compose(h.inverse()) == Isometry::identity());
    CHECK(h.inverse().compose(h) == Isometry::identity());
  }
}

TEST_CASE("compose cancels common factors of 5") {
  // R * R^{-1} written with unreduced entries
  const Isometry r(Mat2{3, -4, 4, 3}, 2, pt("1/5", "0"));
  const Isometry back = r.compose(r.inverse());
  CHECK(back == Isometry::identity());
  CHECK(back.scale_exp() == 0);
}

TEST_CASE("apply") {
  CHECK(Isometry::identity().apply(pt("2/5", "1/5")) == pt("2/5", "1/5"));
  CHECK(Isometry(Mat2{3, -4, 4, 3}, 2, {}).apply(pt("1", "0")) == pt("3/5", "4/5"));
  // M in the expanded frame acts by its integer matrix
  const Isometry m(Mat2{2, 1, -1, 2}, 1, {}, Frame::expanded);
  CHECK(m.apply(pt("-1/2", "-1/2")) == pt("-3/2", "-1/2"));
  CHECK_THROWS_AS(Isometry(Mat2{2, 1, -1, 2}, 1, {}).apply(pt("1", "0")), OddScaleError);
}

TEST_CASE("constructor rejects non-orthogonal parts and frame mixing") {
  CHECK_THROWS_AS(Isometry(Mat2{2, 1, 1, 2}, 1, {}), GeometryError);
  CHECK_THROWS_AS(Isometry(Mat2{3, 4, 4, 3}, 2, {}), GeometryError);
  CHECK_THROWS_AS(Isometry::identity(Frame::fixed).compose(Isometry::identity(Frame::expanded)),
                  FrameMismatchError);
}

TEST_CASE("compose is associative on dissection-generated isometries") {
  const std::vector<Isometry> pool = fixed_frame_placements(2);
  REQUIRE(pool.size() == 25);
  std::mt19937 rng(20240613);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int trial = 0; trial < 200; ++trial) {
    const Isometry& f = pool[pick(rng)];
    const Isometry& g = pool[pick(rng)];
    const Isometry& h = pool[pick(rng)];
    const Isometry left = f.compose(g).compose(h);
    const Isometry right = f.compose(g.compose(h));
    CHECK(left == right);
    CHECK(orthogonal_at_scale(left));
    const ExactPoint p = pt("3/10", "-7/5");
    CHECK(left.apply(p) == f.apply(g.apply(h.apply(p))));
  }
}

TEST_CASE("squared_distance") {
  CHECK(squared_distance(pt("0", "0"), pt("0", "0")) == RadiusKey::make(0, 0));
  const RadiusKey k = squared_distance(pt("0", "0"), pt("2/5", "1/5"));
  CHECK(k.p2q2() == 1);
  CHECK(k.ell() == 1);
  CHECK(squared_distance(pt("0", "0"), pt("0", "1")) == RadiusKey::make(1, 0));
  CHECK(squared_distance(pt("1/5", "3"), pt("-2", "1/25")) ==
        squared_distance(pt("-2", "1/25"), pt("1/5", "3")));
  // 1/2 offsets give squared distance 1/4, which has no (p^2+q^2)/5^l form
  CHECK_THROWS_AS(squared_distance(pt("0", "0"), pt("1/2", "0")), NonCanonicalDistance);
}

TEST_CASE("RadiusKey canonical form and order") {
  CHECK(RadiusKey::make(25, 2) == RadiusKey::make(1, 0));
  CHECK(RadiusKey::make(10, 1) == RadiusKey::make(2, 0));
  CHECK(RadiusKey::make(5, 3).ell() == 2);
  CHECK_THROWS_AS(RadiusKey::make(3, 0), NonCanonicalDistance);
  CHECK_THROWS_AS(RadiusKey::make(15, 1), NonCanonicalDistance);
  CHECK_THROWS_AS(RadiusKey::parse("1/2"), NonCanonicalDistance);
  CHECK(RadiusKey::parse("8/5").str() == "8/5");
  CHECK(RadiusKey::parse("49/25") == RadiusKey::make(49, 2));

  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coord(-40, 40);
  std::uniform_int_distribution<unsigned> ell(0, 4);
  std::vector<RadiusKey> keys;
  for (int i = 0; i < 300; ++i) {
    const int p = coord(rng), q = coord(rng);
    const RadiusKey k = RadiusKey::make(p * p + q * q, ell(rng));
    CHECK(RadiusKey::make(k.p2q2(), k.ell()) == k);  // idempotent
    CHECK((k.ell() == 0 || mpz_divisible_ui_p(k.p2q2().get_mpz_t(), 5) == 0));
    keys.push_back(k);
  }
  for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
    const auto& a = keys[i];
    const auto& b = keys[i + 1];
    CHECK(((a <=> b) == 0) == (a.value() == b.value()));
    CHECK(((a <=> b) < 0) == (a.value() < b.value()));
  }
}

TEST_CASE("is_sum_of_two_squares matches brute force") {
  for (int n = 0; n <= 2000; ++n) {
    bool brute = false;
    for (int x = 0; x * x <= n && !brute; ++x) {
      for (int y = x; x * x + y * y <= n; ++y) {
        if (x * x + y * y == n) {
          brute = true;
          break;
        }
      }
    }
    CHECK_MESSAGE(is_sum_of_two_squares(n) == brute, n);
  }
}

TEST_CASE("exact_cover_check") {
  const Triangle t = reference_triangle();
  const Triangle big = inflated_triangle();

  // T scaled wrongly: half-size copy covers only a quarter
  Triangle small = t;
  for (auto& v : small.vertices) v = {v.x * Rational2_5::parse("1/2"), v.y * Rational2_5::parse("1/2")};
  CHECK_FALSE(exact_cover_check(t, {small}));

  CHECK(exact_cover_check(big, pinwheel_dissection().child_triangles()));
  CHECK_FALSE(exact_cover_check(big, {t, t, t, t, t}));
  CHECK(exact_cover_check(t, {t}));
}

TEST_CASE("triangle predicates") {
  const Triangle t = reference_triangle();
  CHECK(t.area() == 1);
  CHECK(t.contains(pt("0", "0")));
  CHECK_FALSE(t.contains(pt("1", "1")));
  CHECK(intersection_area(t, t) == 1);
  Triangle shifted = t;
  for (auto& v : shifted.vertices) v = v + pt("10", "0");
  CHECK(intersection_area(t, shifted) == 0);
}
