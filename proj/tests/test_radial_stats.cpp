#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pinwheel/radial_stats.hpp"
#include "pinwheel/shelling.hpp"

using namespace pinwheel;

namespace {

const RadialHistogram& level8() {
  static const RadialHistogram h = radial_autocorrelation(generate_patch(8), 0.8, RadiusKey::make(5, 0));
  return h;
}

}  // namespace

TEST_CASE("single point") {
  const std::vector<LatticePoint> one{{0, 0}};
  const RadialHistogram h = radial_autocorrelation(one, 0, Window{{0, 0}, 1.0}, RadiusKey::make(25, 0));
  REQUIRE(h.entries.size() == 1);
  CHECK(h.pairs(RadiusKey{}) == 1);
  CHECK(h.eta(RadiusKey{}) == doctest::Approx(1.0 / std::numbers::pi));
  CHECK(h.eta(RadiusKey::make(1, 0)) == 0.0);
  CHECK(histogram_csv(h) == "p2q2,ell,pair_count,eta_estimate\n0,0,1,0.31830988618379069\n");
}

TEST_CASE("square lattice through the pipeline approaches the shelling numbers") {
  const double radius = 80.0;
  const auto pts = square_lattice_points(radius);
  const RadialHistogram h = radial_autocorrelation(pts, 0, Window{{0, 0}, radius}, RadiusKey::make(50, 0));
  for (const auto& [key, e] : h.entries) {
    REQUIRE(key.ell() == 0);
    const double exact = static_cast<double>(shelling_count_square(key.p2q2().get_ui()));
    if (key.p2q2() > 0) CHECK(e.pair_count % 2 == 0);
    CHECK_MESSAGE(std::abs(e.eta_estimate - exact) <= exact * (0.02 + 1.5 * key.radius() / radius), key.str());
  }
  CHECK(h.entries.size() == enumerate_shells(50).size());
}

TEST_CASE("window checks") {
  const Patch p = generate_patch(3);
  CHECK_THROWS_AS(radial_autocorrelation(p, 1.5, RadiusKey::make(1, 0)), WindowExceedsPatch);
  CHECK_THROWS_AS(radial_autocorrelation(control_points(p), 3, Window{{0, 0}, 10.0}, RadiusKey::make(1, 0), 5.0),
                  WindowExceedsPatch);
  const PatchFrame f = patch_frame(0);
  CHECK(f.inradius == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0));
  CHECK(f.incenter_fixed.x == doctest::Approx(f.inradius - 0.5));
  CHECK(patch_frame(4).inradius == doctest::Approx(25.0 * f.inradius));
}

TEST_CASE("serial and parallel histograms agree") {
  const Patch p = generate_patch(6);
  const auto a = radial_autocorrelation(p, 0.8, RadiusKey::make(5, 0), Backend::serial);
  const auto b = radial_autocorrelation(p, 0.8, RadiusKey::make(5, 0), Backend::parallel);
  REQUIRE(a.entries.size() == b.entries.size());
  for (const auto& [key, e] : a.entries) CHECK(b.pairs(key) == e.pair_count);
}

TEST_CASE("eta estimates at level 8") {
  const RadialHistogram& h = level8();
  CHECK(h.eta(RadiusKey{}) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(h.eta(RadiusKey::make(1, 1)) == doctest::Approx(5.0 / 11.0).epsilon(0.05));
  for (const auto& [key, e] : h.entries) {
    if (key.p2q2() > 0) CHECK(e.pair_count % 2 == 0);
  }
}

TEST_CASE("eta estimates improve with the level") {
  const RadialHistogram h6 = radial_autocorrelation(generate_patch(6), 0.8, RadiusKey::make(5, 0));
  const RadialHistogram& h8 = level8();
  int improved = 0, exact_entries = 0;
  for (const auto& ref : eta_reference()) {
    if (!ref.exact) continue;
    ++exact_entries;
    const double truth = ref.eta.get_d();
    const double e6 = std::abs(h6.eta(ref.key) - truth);
    const double e8 = std::abs(h8.eta(ref.key) - truth);
    improved += e8 <= 1.1 * e6;
  }
  CHECK(exact_entries == 8);
  CHECK(improved >= 7);
}

TEST_CASE("eta reference table") {
  const auto& t = eta_reference();
  CHECK(t.size() == 13);
  CHECK(t.front().key == RadiusKey{});
  CHECK(t.front().eta == 1);
  for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i - 1].key < t[i].key);
  int starred = 0;
  for (const auto& e : t) starred += !e.exact;
  CHECK(starred == 5);
}

TEST_CASE("distance sets") {
  for (unsigned n = 1; n <= 5; ++n) {
    const auto pts = control_points(generate_patch(n));
    const DistanceAudit audit = audit_distances(pts, n, std::int64_t{1} << 40);
    CHECK(audit.violations.empty());
    CHECK(audit.canonical == audit.distinct);
    CHECK(audit.pairs == pts.size() * pts.size());
  }
  const auto keys = distance_set(level8());
  for (std::size_t i = 1; i < keys.size(); ++i) CHECK(keys[i - 1] < keys[i]);
  CHECK(std::find(keys.begin(), keys.end(), RadiusKey::make(1, 1)) != keys.end());
  for (const auto& k : keys) {
    CHECK(k.value() != 3);
    CHECK((k.ell() == 0 || mpz_divisible_ui_p(k.p2q2().get_mpz_t(), 5) == 0));
  }
  const auto pts = control_points(generate_patch(8));
  const auto all = distance_set(pts, 8, RadiusKey::make(25, 0));
  for (std::uint64_t n = 0; n <= 25; ++n) {
    if (shelling_count_square(n) == 0) continue;
    CHECK_MESSAGE(std::find(all.begin(), all.end(), RadiusKey::make(n, 0)) != all.end(), n);
  }
}

TEST_CASE("frequency_module_check") {
  const std::vector<mpq_class> f{mpq_class(5, 22), mpq_class(439, 165), mpq_class(1, 7), mpq_class(0),
                                 mpq_class(1, 33000)};
  const auto r = frequency_module_check(f);
  REQUIRE(r.size() == 5);
  CHECK(r[0].ell == 0U);
  CHECK(r[1].ell == 1U);
  CHECK_FALSE(r[2].ell.has_value());
  CHECK(r[3].ell == 0U);
  CHECK(r[4].ell == 3U);
  // every exact table entry lies in the module
  std::vector<mpq_class> table;
  for (const auto& e : eta_reference()) table.push_back(e.eta);
  for (const auto& c : frequency_module_check(table)) CHECK(c.ell.has_value());
}

TEST_CASE("nearest_module_element") {
  const ModuleApproximation a = nearest_module_element(0.2 + 1e-6, 3);
  CHECK(a.nearest == mpq_class(1, 5));
  CHECK(a.relative_error < 1e-4);
  const ModuleApproximation b = nearest_module_element(1.0 / 3.0, 0);
  CHECK(b.nearest == mpq_class(1, 3));
}

TEST_CASE("rotated_lattice_exponent") {
  const auto p = [](const char* x, const char* y) { return ExactPoint{Rational2_5::parse(x), Rational2_5::parse(y)}; };
  CHECK(rotated_lattice_exponent(p("1", "0"), 4) == 0);
  CHECK(rotated_lattice_exponent(p("3/5", "4/5"), 4) == 1);
  CHECK(rotated_lattice_exponent(p("3/5", "-4/5"), 4) == -1);
  CHECK(rotated_lattice_exponent(p("-7/25", "24/25"), 4) == 2);
  CHECK_FALSE(rotated_lattice_exponent(p("1/5", "0"), 8).has_value());
  CHECK_FALSE(rotated_lattice_exponent(p("1/2", "0"), 8).has_value());
}

TEST_CASE("rotated-lattice membership of control points") {
  for (const unsigned n : {2U, 4U, 6U}) {
    const auto pts = control_points(generate_patch(n));
    for (const auto& q : pts) {
      const auto m = rotated_lattice_exponent(to_fixed_frame(q, n), static_cast<int>(n));
      REQUIRE(m.has_value());
      CHECK(std::abs(*m) <= static_cast<int>(n));
    }
  }
}

TEST_CASE("cross_correlation_uniformity") {
  const UniformityReport id = cross_correlation_uniformity(0.0, 20.0, 8);
  std::uint64_t nonzero = 0;
  for (const auto c : id.histogram) nonzero += c > 0;
  CHECK(nonzero == 1);
  CHECK(id.warning.has_value());

  const UniformityReport r200 = cross_correlation_uniformity(1.0, 200.0, 8);
  CHECK(r200.max_relative_deviation < 0.02);
  CHECK(r200.pairs == r200.lattice_points * r200.rotated_points);
  CHECK(r200.histogram.size() == 64);
  CHECK_FALSE(r200.warning.has_value());
  const UniformityReport r400 = cross_correlation_uniformity(1.0, 400.0, 8);
  CHECK(r400.max_relative_deviation <= 0.6 * r200.max_relative_deviation);

  // 2 arg(2+i) is the (3+4i)/5 coincidence angle
  CHECK(cross_correlation_uniformity(2.0 * std::atan2(1.0, 2.0), 30.0, 4).warning.has_value());
}
