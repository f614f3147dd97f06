// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <boost/math/special_functions/bessel.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "pinwheel/bessel.hpp"
#include "pinwheel/diffraction.hpp"
#include "pinwheel/radial_stats.hpp"
#include "pinwheel/shelling.hpp"
#include "pinwheel/substitution.hpp"

using namespace pinwheel;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string format(const char* fmt, auto... args) {
  char buf[2048];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && secs >= limit_s) {
    o.pass = false;
    o.detail += format("; runtime %.2f s exceeds %.0f s", secs, limit_s);
  }
  failures += !o.pass;
  std::printf("%s criterion %2d  %-28s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(),
              secs);
  std::fflush(stdout);
}

std::uint64_t pow5u(unsigned n) {
  std::uint64_t p = 1;
  while (n-- > 0) p *= 5;
  return p;
}

const Patch& patch_at(unsigned level) {
  static std::vector<std::unique_ptr<Patch>> cache(11);
  if (!cache[level]) cache[level] = std::make_unique<Patch>(generate_patch(level));
  return *cache[level];
}

// value of a Bessel-sum curve at exactly the given k values
std::vector<double> at(const RadialMeasure& m, std::vector<double> ks) {
  std::vector<double> out;
  for (const auto& s : bessel_sum_curve(m, ks).samples) out.push_back(s.value);
  return out;
}

}  // namespace

int main() {
  criterion(1, "shelling exactness", 5.0, [] {
    const std::int64_t n_max = 10000;
    std::vector<std::uint64_t> brute(n_max + 1, 0);
    for (std::int64_t x = -100; x <= 100; ++x) {
      for (std::int64_t y = -100; y <= 100; ++y) {
        if (x * x + y * y <= n_max) ++brute[x * x + y * y];
      }
    }
    std::uint64_t mismatches = 0;
    for (std::int64_t n = 0; n <= n_max; ++n) mismatches += shelling_count_square(n) != brute[n];
    return Outcome{mismatches == 0, format("%llu mismatches for r^2 <= 10^4",
                                           static_cast<unsigned long long>(mismatches))};
  });

  criterion(2, "radial PSF", 1.0, [] {
    double worst = 0.0;
    std::string parts;
    for (const double t : {1.0 / 3.0, 0.5, 2.0, 3.0}) {
      const PsfReport r = psf_gaussian_check(t);
      worst = std::max(worst, r.defect);
      parts += format("t=%.4g: %.1e (r^2<=%llu) ", t, r.defect, static_cast<unsigned long long>(r.r2_cutoff));
    }
    return Outcome{worst <= 1e-8, parts + format("max defect %.2e <= 1e-8", worst)};
  });

  criterion(3, "dissection certificate", 60.0, [] {
    // derive_dissection throws unless exactly one cover exists
    const Dissection d = derive_dissection();
    const bool identity_first = d.children.size() == 5 && d.children[0] == Isometry::identity();
    const CoverReport cover = exact_cover_check(inflated_triangle(), d.child_triangles());
    return Outcome{identity_first && cover.covered,
                   format("%zu children, child 1 %s, exact cover %s, %zu reflected", d.children.size(),
                          identity_first ? "= identity" : "!= identity", cover.covered ? "passes" : "fails",
                          d.reflected_count())};
  });

  criterion(4, "KD frequencies", 0.0, [] {
    const SubstitutionMatrix m = kd_substitution_matrix();
    const auto rel = m.relative_frequencies();
    const auto abs = m.absolute_frequencies();
    const bool ok = m.perron_eigenvalue() == 25 && rel[0] == mpq_class(5, 11) && rel[1] == mpq_class(6, 11) &&
                    abs[0] == mpq_class(5, 22) && abs[1] == mpq_class(3, 11);
    return Outcome{ok, format("matrix [%llu %llu; %llu %llu], eigenvalue %s, eigenvector (%s, %s), absolute (%s, %s)",
                              static_cast<unsigned long long>(m.counts[0][0]),
                              static_cast<unsigned long long>(m.counts[0][1]),
                              static_cast<unsigned long long>(m.counts[1][0]),
                              static_cast<unsigned long long>(m.counts[1][1]),
                              m.perron_eigenvalue().get_str().c_str(), rel[0].get_str().c_str(),
                              rel[1].get_str().c_str(), abs[0].get_str().c_str(), abs[1].get_str().c_str())};
  });

  criterion(5, "eta table (exact entries)", 120.0, [] {
    const RadiusKey cutoff = RadiusKey::make(5, 0);
    const RadialHistogram h8 = radial_autocorrelation(patch_at(8), 0.8, cutoff);
    const RadialHistogram h6 = radial_autocorrelation(patch_at(6), 0.8, cutoff);
    int within = 0, improved = 0, exact = 0;
    double worst = 0.0;
    std::string starred;
    for (const auto& ref : eta_reference()) {
      const double truth = ref.eta.get_d();
      const double e8 = std::abs(h8.eta(ref.key) - truth) / truth;
      const double e6 = std::abs(h6.eta(ref.key) - truth) / truth;
      if (!ref.exact) {
        starred += format(" %s:%.4f/%.4f", ref.key.str().c_str(), h8.eta(ref.key), truth);
        continue;
      }
      ++exact;
      worst = std::max(worst, e8);
      within += e8 <= 0.05;
      improved += e8 <= e6;
    }
    const bool ok = exact == 8 && within == 8 && improved >= 6;
    return Outcome{ok, format("level 8: %d/8 within 5%% (worst %.2f%%), %d/8 closer than level 6; starred "
                              "(reported only, estimate/conjectured value):%s",
                              within, 100 * worst, improved, starred.c_str())};
  });

  criterion(6, "distance sets", 0.0, [] {
    std::uint64_t distinct = 0, violations = 0;
    for (unsigned n = 0; n <= 8; ++n) {
      const auto pts = control_points(patch_at(n));
      // all pairs up to level 5; pairs with r^2 <= 25 beyond
      const std::int64_t cutoff = n <= 5 ? std::int64_t{1} << 60 : static_cast<std::int64_t>(25 * pow5u(n));
      const DistanceAudit a = audit_distances(pts, n, cutoff);
      distinct += a.distinct;
      violations += a.violations.size() + (a.distinct - a.canonical);
    }
    const auto keys = distance_set(control_points(patch_at(8)), 8, RadiusKey::make(25, 0));
    std::string missing;
    int needed = 0, found = 0;
    for (std::uint64_t r2 = 0; r2 <= 25; ++r2) {
      if (shelling_count_square(r2) == 0) continue;
      ++needed;
      if (std::find(keys.begin(), keys.end(), RadiusKey::make(r2, 0)) != keys.end()) {
        ++found;
      } else {
        missing += " " + std::to_string(r2);
      }
    }
    return Outcome{violations == 0 && found == needed,
                   format("levels 0-8: %llu distinct distances, %llu non-canonical; level 8 realizes %d/%d "
                          "integer sums of two squares <= 25%s",
                          static_cast<unsigned long long>(distinct), static_cast<unsigned long long>(violations),
                          found, needed, missing.empty() ? "" : (", missing" + missing).c_str())};
  });

  criterion(7, "rotated-lattice membership", 0.0, [] {
    const auto pts = control_points(patch_at(8));
    std::uint64_t fail = 0;
    int max_m = 0;
    for (const auto& q : pts) {
      const auto m = rotated_lattice_exponent(to_fixed_frame(q, 8), 8);
      if (!m) {
        ++fail;
      } else {
        max_m = std::max(max_m, std::abs(*m));
      }
    }
    return Outcome{fail == 0, format("%zu control points, %llu outside R^m Z^2 (|m|<=8), max |m| = %d", pts.size(),
                                     static_cast<unsigned long long>(fail), max_m)};
  });

  criterion(8, "vertex stars", 0.0, [] {
    const VertexStarCensus c = vertex_stars(patch_at(6));
    int close = 0;
    double worst = 0.0;
    for (const VertexStar& s : c.classes) {
      const ModuleApproximation a = nearest_module_element(s.frequency.get_d(), 3);
      worst = std::max(worst, a.relative_error);
      close += a.relative_error <= 0.05;
    }
    const int n = static_cast<int>(c.classes.size());
    return Outcome{n == 11 && close == n,
                   format("level 6: %d classes over %llu interior vertices; %d/%d frequencies within 5%% of "
                          "m/(264*5^l), l<=3 (worst %.2f%%)",
                          n, static_cast<unsigned long long>(c.interior_vertices), close, n, 100 * worst)};
  });

  criterion(9, "Bessel kernel", 0.0, [] {
    using Wide = boost::multiprecision::cpp_bin_float_50;
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 500.0);
    double worst = 0.0;
    for (const double nu : {0.0, 0.5, 1.0}) {
      for (int i = 0; i <= 2000; ++i) {
        const double x = i <= 1000 ? 0.5 * i : u(rng);
        const double oracle = boost::math::cyl_bessel_j(Wide(nu), Wide(x)).convert_to<double>();
        worst = std::max(worst, std::abs(bessel_j(nu, x) - oracle));
      }
    }
    double worst_mu = 0.0;
    for (double k = 0.001; k <= 3.0; k += 0.0031) {
      for (const double r : {0.5, 1.0, 5.0, 25.0}) {
        const double x = 2 * std::numbers::pi * k * r;
        worst_mu = std::max(worst_mu, std::abs(radial_transform_mu(3, r, k) - std::sin(x) / x));
      }
    }
    return Outcome{worst <= 1e-9 && worst_mu <= 1e-9,
                   format("J0, J1/2, J1 on [0,500]: max error %.1e; d=3 transform vs sin(x)/x: %.1e", worst,
                          worst_mu)};
  });

  criterion(10, "qualitative figures", 0.0, [] {
    const auto ks = k_grid(3.1, 1241);  // step 0.0025, so k = 3 is interior
    const RadialMeasure square = square_lattice_measure(625);
    const RadialCurve sq = bessel_sum_curve(square, ks);
    const auto maxima = local_maxima(sq);
    std::string located;
    int hit = 0;
    const std::vector<double> targets{1.0, std::sqrt(2.0), 2.0, std::sqrt(5.0), std::sqrt(8.0), 3.0};
    for (const double target : targets) {
      double best = 1e9;
      for (const auto i : maxima) {
        if (std::abs(sq.samples[i].k - target) < std::abs(best - target)) best = sq.samples[i].k;
      }
      hit += std::abs(best - target) <= 0.01;
      located += format(" %.4f", best);
    }

    const RadialMeasure pw = measure_from_histogram(radial_autocorrelation(patch_at(5), 0.8, RadiusKey::make(625, 0)));
    const auto sq_at = at(square, {1.0, std::sqrt(5.0)});
    const auto pw_at = at(pw, {1.0, std::sqrt(5.0)});
    const double scale = sq_at[0] / pw_at[0];
    const bool higher = pw_at[1] * scale > sq_at[1];

    const RadialCurve pc = bessel_sum_curve(pw, ks);
    double shoulder = -1.0;
    for (const auto i : local_maxima(pc)) {
      const auto& s = pc.samples[i];
      if (s.k > 0.85 && s.k < 1.0 && s.value > 0.0) {
        shoulder = s.k;
        break;
      }
    }
    const bool ok = hit == static_cast<int>(targets.size()) && higher && shoulder > 0;
    return Outcome{ok, format("square maxima near D cap (0,3]:%s (%d/6 within 0.01); at sqrt5 pinwheel %.2f vs "
                              "square %.2f (matched at k=1); shoulder %s",
                              located.c_str(), hit, pw_at[1] * scale, sq_at[1],
                              shoulder > 0 ? format("at k=%.4f", shoulder).c_str() : "absent")};
  });

  criterion(11, "cross-correlation uniformity", 0.0, [] {
    const UniformityReport r200 = cross_correlation_uniformity(1.0, 200.0, 8);
    const UniformityReport r400 = cross_correlation_uniformity(1.0, 400.0, 8);
    const double ratio = r400.max_relative_deviation / r200.max_relative_deviation;
    return Outcome{r200.max_relative_deviation < 0.02 && ratio <= 0.6,
                   format("window 200: %.3f%%, window 400: %.3f%%, ratio %.3f (<= 0.6)",
                          100 * r200.max_relative_deviation, 100 * r400.max_relative_deviation, ratio)};
  });

  criterion(12, "coincidence diffraction", 0.0, [] {
    const GaussianRotation g{2, 1};  // (2+i)^2/5 = (3+4i)/5
    const SuperpositionSummary s = superposition_diffraction(2, g);
    const auto& c = *s.coincidence;
    const bool ok = c.rational.p == 3 && c.rational.q == 4 && c.rational.n == 5 && c.theta_index == 5 &&
                    c.theta_index == csl_index(g) && c.weight_on_theta == 1 && c.weight_off_theta == mpq_class(1, 4);
    return Outcome{ok, format("rotation (%lld+%lldi)/%lld: theta index %llu (csl_index %llu), weights %s on theta, %s off",
                              static_cast<long long>(c.rational.p), static_cast<long long>(c.rational.q),
                              static_cast<long long>(c.rational.n), static_cast<unsigned long long>(c.theta_index),
                              static_cast<unsigned long long>(csl_index(g)), c.weight_on_theta.get_str().c_str(),
                              c.weight_off_theta.get_str().c_str())};
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
