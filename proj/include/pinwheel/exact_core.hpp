#pragma once

// Exact planar geometry over Z[1/10]: rationals whose denominators only
// carry the primes 2 and 5, points, isometries with sqrt(5)-scale
// bookkeeping, squared-radius keys and polygon predicates.

#include <gmpxx.h>

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pinwheel {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an odd power of sqrt(5) would leak into a coordinate.
class OddScaleError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class FrameMismatchError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// A denominator contains a prime other than 2 or 5.
class DenominatorError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// A squared distance that is not of the form (p^2+q^2)/5^l.
class NonCanonicalDistance : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// Exact rational in lowest terms with denominator 2^a * 5^b.
class Rational2_5 {
 public:
  Rational2_5() = default;
  Rational2_5(long value) : q_(value) {}  // NOLINT(google-explicit-constructor)
  Rational2_5(const mpz_class& num, const mpz_class& den);
  explicit Rational2_5(const mpq_class& q);

  /// Parses "n" or "n/d".
  static Rational2_5 parse(std::string_view text);

  const mpq_class& value() const { return q_; }
  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }
  unsigned two_adic_denominator() const;
  unsigned five_adic_denominator() const;
  bool is_integer() const { return q_.get_den() == 1; }
  bool is_zero() const { return sgn(q_) == 0; }
  double to_double() const { return q_.get_d(); }
  std::string str() const { return q_.get_str(); }

  /// Divides by d, which must itself be of the form 2^a * 5^b.
  Rational2_5 divided_by(const mpz_class& d) const;

  friend Rational2_5 operator+(const Rational2_5& a, const Rational2_5& b) {
    return Rational2_5(mpq_class(a.q_ + b.q_));
  }
  friend Rational2_5 operator-(const Rational2_5& a, const Rational2_5& b) {
    return Rational2_5(mpq_class(a.q_ - b.q_));
  }
  friend Rational2_5 operator*(const Rational2_5& a, const Rational2_5& b) {
    return Rational2_5(mpq_class(a.q_ * b.q_));
  }
  friend Rational2_5 operator*(const mpz_class& k, const Rational2_5& b) {
    return Rational2_5(mpq_class(mpq_class(k) * b.q_));
  }
  Rational2_5 operator-() const { return Rational2_5(mpq_class(-q_)); }

  friend bool operator==(const Rational2_5& a, const Rational2_5& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Rational2_5& a, const Rational2_5& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  void validate() const;
  mpq_class q_;
};

struct ExactPoint {
  Rational2_5 x;
  Rational2_5 y;

  friend ExactPoint operator+(const ExactPoint& a, const ExactPoint& b) {
    return {a.x + b.x, a.y + b.y};
  }
  friend ExactPoint operator-(const ExactPoint& a, const ExactPoint& b) {
    return {a.x - b.x, a.y - b.y};
  }
  friend bool operator==(const ExactPoint&, const ExactPoint&) = default;
  friend auto operator<=>(const ExactPoint&, const ExactPoint&) = default;

  bool is_integral() const { return x.is_integer() && y.is_integer(); }
  std::string str() const { return "(" + x.str() + ", " + y.str() + ")"; }
};

/// Row-major integer 2x2 matrix [a b; c d].
struct Mat2 {
  mpz_class a{1}, b{0}, c{0}, d{1};

  static Mat2 identity() { return {}; }
  mpz_class det() const { return a * d - b * c; }
  Mat2 transposed() const { return {a, c, b, d}; }
  friend Mat2 operator*(const Mat2& l, const Mat2& r) {
    return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d, l.c * r.a + l.d * r.c,
            l.c * r.b + l.d * r.d};
  }
  ExactPoint apply(const ExactPoint& p) const {
    return {a * p.x + b * p.y, c * p.x + d * p.y};
  }
  friend bool operator==(const Mat2& l, const Mat2& r) {
    return l.a == r.a && l.b == r.b && l.c == r.c && l.d == r.d;
  }
  std::string str() const;
};

/// How an Isometry's integer matrix acts on points.
///  fixed:    x -> N x / sqrt(5)^s + t   (a rigid motion)
///  expanded: x -> N x + t               (the same motion inflated by sqrt(5)^s)
enum class Frame : std::uint8_t { fixed, expanded };

/// Planar isometry with integer linear part N, N^T N = 5^s I.
///
/// In the fixed frame the representation is canonical: common factors of 5
/// in N are cancelled against s. The expanded frame never reduces, since
/// there N itself is the map.
class Isometry {
 public:
  Isometry() = default;
  Isometry(Mat2 linear, unsigned scale_exp, ExactPoint translation, Frame frame = Frame::fixed);

  static Isometry identity(Frame frame = Frame::fixed) {
    return Isometry(Mat2::identity(), 0, {}, frame);
  }

  const Mat2& linear() const { return linear_; }
  unsigned scale_exp() const { return scale_exp_; }
  const ExactPoint& translation() const { return translation_; }
  Frame frame() const { return frame_; }
  bool is_reflection() const { return sgn(linear_.det()) < 0; }

  /// Image of p. Throws OddScaleError for fixed-frame maps with odd s.
  ExactPoint apply(const ExactPoint& p) const;
  /// (*this) o h: apply h first.
  Isometry compose(const Isometry& h) const;
  /// Fixed-frame inverse; expanded-frame maps have no integral inverse.
  Isometry inverse() const;

  friend bool operator==(const Isometry&, const Isometry&);
  std::string str() const;

 private:
  void canonicalize();

  Mat2 linear_{};
  unsigned scale_exp_ = 0;
  ExactPoint translation_{};
  Frame frame_ = Frame::fixed;
};

/// Exact squared radius p2q2 / 5^ell in canonical form (5 does not divide
/// p2q2 unless ell == 0).
class RadiusKey {
 public:
  RadiusKey() = default;

  /// Reduces num / 5^ell and validates that it is a sum of two squares
  /// over a power of 5; throws NonCanonicalDistance otherwise.
  static RadiusKey make(mpz_class num, unsigned ell);
  /// From an exact rational squared radius.
  static RadiusKey from_rational(const mpq_class& r2);
  /// Parses "NUM/DEN" (or "NUM").
  static RadiusKey parse(std::string_view text);

  const mpz_class& p2q2() const { return p2q2_; }
  unsigned ell() const { return ell_; }
  mpq_class value() const;
  double squared() const { return value().get_d(); }
  double radius() const;
  std::string str() const;

  friend bool operator==(const RadiusKey& a, const RadiusKey& b) {
    return a.ell_ == b.ell_ && a.p2q2_ == b.p2q2_;
  }
  friend std::strong_ordering operator<=>(const RadiusKey& a, const RadiusKey& b);

 private:
  mpz_class p2q2_{0};
  unsigned ell_ = 0;
};

/// True iff n >= 0 is a sum of two integer squares.
bool is_sum_of_two_squares(const mpz_class& n);

/// Canonical squared distance |a - b|^2.
RadiusKey squared_distance(const ExactPoint& a, const ExactPoint& b);

mpz_class pow5(unsigned k);

/// Twice the signed area of (o, a, b).
mpq_class cross(const ExactPoint& o, const ExactPoint& a, const ExactPoint& b);

struct Triangle {
  std::array<ExactPoint, 3> vertices;

  int orientation() const;
  mpq_class area() const;
  /// Closed containment.
  bool contains(const ExactPoint& p) const;
  Triangle counter_clockwise() const;
};

/// Outcome of exact_cover_check. Converts to bool; diagnostics name the
/// failing containment or overlapping pair.
struct CoverReport {
  bool covered = false;
  std::vector<std::string> diagnostics;
  explicit operator bool() const { return covered; }
};

/// Area of the intersection of two triangles (exact convex clipping).
mpq_class intersection_area(const Triangle& a, const Triangle& b);

/// True iff the children tile the parent: each child lies inside, children
/// have pairwise zero-area intersections, and the areas add up.
CoverReport exact_cover_check(const Triangle& parent, const std::vector<Triangle>& children);

}  // namespace pinwheel
