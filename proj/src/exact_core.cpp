#include "pinwheel/exact_core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <utility>

namespace pinwheel {

namespace {

unsigned strip_factor(mpz_class& n, unsigned long p) {
  unsigned k = 0;
  while (n != 0 && mpz_divisible_ui_p(n.get_mpz_t(), p) != 0) {
    mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
    ++k;
  }
  return k;
}

mpq_class parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); }),
          s.end());
  if (!s.empty() && s.front() == '+') s.erase(s.begin());
  mpq_class q;
  if (s.empty() || q.set_str(s, 10) != 0) {
    throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
  }
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

}  // namespace

mpz_class pow5(unsigned k) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 5, k);
  return r;
}

// ---------------------------------------------------------------------------
// Rational2_5

Rational2_5::Rational2_5(const mpz_class& num, const mpz_class& den) : q_(num, den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  q_.canonicalize();
  validate();
}

Rational2_5::Rational2_5(const mpq_class& q) : q_(q) {
  q_.canonicalize();
  validate();
}

Rational2_5 Rational2_5::parse(std::string_view text) { return Rational2_5(parse_rational(text)); }

void Rational2_5::validate() const {
  mpz_class den = q_.get_den();
  strip_factor(den, 2);
  strip_factor(den, 5);
  if (den != 1) {
    throw DenominatorError("denominator of " + q_.get_str() + " has a prime factor other than 2, 5");
  }
}

unsigned Rational2_5::two_adic_denominator() const {
  mpz_class den = q_.get_den();
  return strip_factor(den, 2);
}

unsigned Rational2_5::five_adic_denominator() const {
  mpz_class den = q_.get_den();
  return strip_factor(den, 5);
}

Rational2_5 Rational2_5::divided_by(const mpz_class& d) const {
  if (d == 0) throw std::invalid_argument("division by zero");
  return Rational2_5(mpq_class(q_ / mpq_class(d)));
}

// ---------------------------------------------------------------------------
// Mat2 / Isometry

std::string Mat2::str() const {
  std::ostringstream os;
  os << "[" << a.get_str() << " " << b.get_str() << "; " << c.get_str() << " " << d.get_str() << "]";
  return os.str();
}

Isometry::Isometry(Mat2 linear, unsigned scale_exp, ExactPoint translation, Frame frame)
    : linear_(std::move(linear)),
      scale_exp_(scale_exp),
      translation_(std::move(translation)),
      frame_(frame) {
  const mpz_class scale = pow5(scale_exp_);
  const Mat2& n = linear_;
  if (n.a * n.a + n.c * n.c != scale || n.b * n.b + n.d * n.d != scale ||
      n.a * n.b + n.c * n.d != 0) {
    throw GeometryError("linear part " + n.str() + " is not orthogonal at scale 5^" +
                        std::to_string(scale_exp_));
  }
  canonicalize();
}

void Isometry::canonicalize() {
  if (frame_ != Frame::fixed) return;
  auto div5 = [](const mpz_class& v) { return mpz_divisible_ui_p(v.get_mpz_t(), 5) != 0; };
  while (scale_exp_ >= 2 && div5(linear_.a) && div5(linear_.b) && div5(linear_.c) &&
         div5(linear_.d)) {
    linear_.a /= 5;
    linear_.b /= 5;
    linear_.c /= 5;
    linear_.d /= 5;
    scale_exp_ -= 2;
  }
}

ExactPoint Isometry::apply(const ExactPoint& p) const {
  const ExactPoint image = linear_.apply(p);
  if (frame_ == Frame::expanded) return image + translation_;
  if (scale_exp_ % 2 != 0) {
    throw OddScaleError("fixed-frame map with odd sqrt(5) exponent " + std::to_string(scale_exp_) +
                        " has irrational images");
  }
  const mpz_class d = pow5(scale_exp_ / 2);
  return ExactPoint{image.x.divided_by(d), image.y.divided_by(d)} + translation_;
}

Isometry Isometry::compose(const Isometry& h) const {
  if (frame_ != h.frame_) throw FrameMismatchError("cannot compose maps from different frames");
  const Mat2 linear = linear_ * h.linear_;
  const unsigned s = scale_exp_ + h.scale_exp_;
  if (frame_ == Frame::expanded) {
    return Isometry(linear, s, linear_.apply(h.translation_) + translation_, Frame::expanded);
  }
  if (h.translation_ == ExactPoint{}) return Isometry(linear, s, translation_, Frame::fixed);
  return Isometry(linear, s, apply(h.translation_), Frame::fixed);
}

Isometry Isometry::inverse() const {
  if (frame_ == Frame::expanded) {
    throw FrameMismatchError("expanded-frame maps have no integral inverse");
  }
  const Mat2 lt = linear_.transposed();
  const Isometry linear_inverse(lt, scale_exp_, {}, Frame::fixed);
  const ExactPoint back = linear_inverse.apply(translation_);
  return Isometry(lt, scale_exp_, ExactPoint{} - back, Frame::fixed);
}

bool operator==(const Isometry& l, const Isometry& r) {
  return l.frame_ == r.frame_ && l.scale_exp_ == r.scale_exp_ && l.linear_ == r.linear_ &&
         l.translation_ == r.translation_;
}

std::string Isometry::str() const {
  return std::string(frame_ == Frame::fixed ? "fixed" : "expanded") + "{" + linear_.str() +
         "/sqrt5^" + std::to_string(scale_exp_) + ", " + translation_.str() + "}";
}

// ---------------------------------------------------------------------------
// RadiusKey

bool is_sum_of_two_squares(const mpz_class& value) {
  if (value < 0) return false;
  if (value == 0) return true;
  mpz_class n = value;
  strip_factor(n, 2);
  for (unsigned long p = 3; mpz_class(p) * p <= n; p += 2) {
    const unsigned k = strip_factor(n, p);
    if (p % 4 == 3 && k % 2 == 1) return false;
  }
  // n is now 1 or a prime.
  return n == 1 || mpz_fdiv_ui(n.get_mpz_t(), 4) != 3;
}

RadiusKey RadiusKey::make(mpz_class num, unsigned ell) {
  if (num < 0) throw NonCanonicalDistance("negative squared radius " + num.get_str());
  while (ell > 0 && mpz_divisible_ui_p(num.get_mpz_t(), 5) != 0) {
    num /= 5;
    --ell;
  }
  if (!is_sum_of_two_squares(num)) {
    throw NonCanonicalDistance("squared radius " + num.get_str() + "/5^" + std::to_string(ell) +
                               " is not (p^2+q^2)/5^l");
  }
  RadiusKey key;
  key.p2q2_ = std::move(num);
  key.ell_ = ell;
  return key;
}

RadiusKey RadiusKey::from_rational(const mpq_class& r2) {
  mpz_class den = r2.get_den();
  const unsigned ell = strip_factor(den, 5);
  if (den != 1) {
    throw NonCanonicalDistance("squared radius " + r2.get_str() +
                               " has a denominator that is not a power of 5");
  }
  return make(r2.get_num(), ell);
}

RadiusKey RadiusKey::parse(std::string_view text) { return from_rational(parse_rational(text)); }

mpq_class RadiusKey::value() const {
  mpq_class v(p2q2_, pow5(ell_));
  v.canonicalize();
  return v;
}

double RadiusKey::radius() const { return std::sqrt(squared()); }

std::string RadiusKey::str() const {
  if (ell_ == 0) return p2q2_.get_str();
  return p2q2_.get_str() + "/" + pow5(ell_).get_str();
}

std::strong_ordering operator<=>(const RadiusKey& a, const RadiusKey& b) {
  const mpz_class lhs = a.p2q2_ * pow5(b.ell_);
  const mpz_class rhs = b.p2q2_ * pow5(a.ell_);
  const int c = cmp(lhs, rhs);
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

RadiusKey squared_distance(const ExactPoint& a, const ExactPoint& b) {
  const ExactPoint d = a - b;
  const mpq_class r2 = d.x.value() * d.x.value() + d.y.value() * d.y.value();
  try {
    return RadiusKey::from_rational(r2);
  } catch (const NonCanonicalDistance& e) {
    throw NonCanonicalDistance(std::string(e.what()) + " [between " + a.str() + " and " + b.str() +
                               "]");
  }
}

// ---------------------------------------------------------------------------
// Polygons

mpq_class cross(const ExactPoint& o, const ExactPoint& a, const ExactPoint& b) {
  return (a.x.value() - o.x.value()) * (b.y.value() - o.y.value()) -
         (a.y.value() - o.y.value()) * (b.x.value() - o.x.value());
}

int Triangle::orientation() const { return sgn(cross(vertices[0], vertices[1], vertices[2])); }

mpq_class Triangle::area() const { return abs(cross(vertices[0], vertices[1], vertices[2])) / 2; }

Triangle Triangle::counter_clockwise() const {
  if (orientation() >= 0) return *this;
  return Triangle{{vertices[0], vertices[2], vertices[1]}};
}

bool Triangle::contains(const ExactPoint& p) const {
  const Triangle t = counter_clockwise();
  for (int i = 0; i < 3; ++i) {
    if (sgn(cross(t.vertices[i], t.vertices[(i + 1) % 3], p)) < 0) return false;
  }
  return true;
}

namespace {

using QPoint = std::pair<mpq_class, mpq_class>;

mpq_class qcross(const QPoint& o, const QPoint& a, const QPoint& b) {
  return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
}

mpq_class polygon_area(const std::vector<QPoint>& poly) {
  mpq_class twice = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const QPoint& p = poly[i];
    const QPoint& q = poly[(i + 1) % poly.size()];
    twice += p.first * q.second - q.first * p.second;
  }
  return abs(twice) / 2;
}

}  // namespace

mpq_class intersection_area(const Triangle& a, const Triangle& b) {
  const Triangle clip = b.counter_clockwise();
  std::vector<QPoint> poly;
  for (const auto& v : a.counter_clockwise().vertices) poly.emplace_back(v.x.value(), v.y.value());

  // Sutherland-Hodgman against each half-plane of the clip triangle.
  for (int e = 0; e < 3 && !poly.empty(); ++e) {
    const QPoint p0{clip.vertices[e].x.value(), clip.vertices[e].y.value()};
    const QPoint p1{clip.vertices[(e + 1) % 3].x.value(), clip.vertices[(e + 1) % 3].y.value()};
    std::vector<QPoint> out;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const QPoint& cur = poly[i];
      const QPoint& nxt = poly[(i + 1) % poly.size()];
      const mpq_class sc = qcross(p0, p1, cur);
      const mpq_class sn = qcross(p0, p1, nxt);
      if (sgn(sc) >= 0) out.push_back(cur);
      if ((sgn(sc) > 0 && sgn(sn) < 0) || (sgn(sc) < 0 && sgn(sn) > 0)) {
        const mpq_class t = sc / (sc - sn);
        out.emplace_back(cur.first + t * (nxt.first - cur.first),
                         cur.second + t * (nxt.second - cur.second));
      }
    }
    poly = std::move(out);
  }
  if (poly.size() < 3) return 0;
  return polygon_area(poly);
}

CoverReport exact_cover_check(const Triangle& parent, const std::vector<Triangle>& children) {
  CoverReport report;
  bool ok = parent.orientation() != 0;
  if (!ok) report.diagnostics.push_back("parent is degenerate");

  mpq_class total = 0;
  for (std::size_t i = 0; i < children.size(); ++i) {
    const Triangle& child = children[i];
    if (child.orientation() == 0) {
      ok = false;
      report.diagnostics.push_back("child " + std::to_string(i) + " is degenerate");
      continue;
    }
    total += child.area();
    for (const auto& v : child.vertices) {
      if (!parent.contains(v)) {
        ok = false;
        report.diagnostics.push_back("child " + std::to_string(i) + " vertex " + v.str() +
                                     " lies outside the parent");
        break;
      }
    }
  }
  for (std::size_t i = 0; i < children.size(); ++i) {
    for (std::size_t j = i + 1; j < children.size(); ++j) {
      const mpq_class overlap = intersection_area(children[i], children[j]);
      if (sgn(overlap) != 0) {
        ok = false;
        report.diagnostics.push_back("children " + std::to_string(i) + " and " + std::to_string(j) +
                                     " overlap in area " + overlap.get_str());
      }
    }
  }
  if (total != parent.area()) {
    ok = false;
    report.diagnostics.push_back("children cover area " + total.get_str() + " of " +
                                 parent.area().get_str());
  }
  report.covered = ok;
  return report;
}

}  // namespace pinwheel
