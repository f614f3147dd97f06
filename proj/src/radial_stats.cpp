#include "pinwheel/radial_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "pinwheel/kernels.hpp"

namespace pinwheel {

namespace {

const double kRho = (3.0 - std::sqrt(5.0)) / 2.0;  // inradius of T

Vec2 matrix_power_apply(long double a, long double b, long double c, long double d, unsigned n,
                        Vec2 v) {
  long double x = v.x, y = v.y;
  for (unsigned i = 0; i < n; ++i) {
    const long double nx = a * x + b * y;
    const long double ny = c * x + d * y;
    x = nx;
    y = ny;
  }
  return {static_cast<double>(x), static_cast<double>(y)};
}

std::int64_t expanded_cutoff(const RadiusKey& r2_max, unsigned level) {
  mpz_class num = r2_max.p2q2() * pow5(level);
  mpz_class d;
  mpz_fdiv_q(d.get_mpz_t(), num.get_mpz_t(), pow5(r2_max.ell()).get_mpz_t());
  if (!d.fits_slong_p()) throw std::invalid_argument("r2_max too large for this level");
  return d.get_si();
}

RadialHistogram histogram_from(const kernels::DistanceCounts& counts, unsigned level,
                               double fixed_radius) {
  RadialHistogram h;
  h.level = level;
  h.window_radius = fixed_radius;
  const double area = std::numbers::pi * fixed_radius * fixed_radius;
  for (const auto& [d2, c] : counts) {
    const RadiusKey key = RadiusKey::make(mpz_class(static_cast<long>(d2)), level);
    h.entries[key] = {c, static_cast<double>(c) / area};
  }
  return h;
}

double sqrt5_pow(unsigned n) { return std::pow(std::sqrt(5.0), static_cast<double>(n)); }

}  // namespace

double RadialHistogram::eta(const RadiusKey& key) const {
  const auto it = entries.find(key);
  return it == entries.end() ? 0.0 : it->second.eta_estimate;
}

std::uint64_t RadialHistogram::pairs(const RadiusKey& key) const {
  const auto it = entries.find(key);
  return it == entries.end() ? 0 : it->second.pair_count;
}

Vec2 to_expanded(const Vec2& fixed, unsigned level) {
  return matrix_power_apply(2, -1, 1, 2, level, fixed);
}

PatchFrame patch_frame(unsigned level) {
  PatchFrame f;
  const double scale = std::pow(5.0, static_cast<double>(level));
  f.incenter_expanded = {scale * (kRho - 0.5), scale * (kRho - 0.5)};
  // (M^T)^{-n} = M^n / 5^n
  const Vec2 m = matrix_power_apply(2, 1, -1, 2, level, {kRho - 0.5, kRho - 0.5});
  f.incenter_fixed = m;
  f.inradius = sqrt5_pow(level) * kRho;
  return f;
}

RadialHistogram radial_autocorrelation(std::span<const LatticePoint> points, unsigned level,
                                       const Window& window, const RadiusKey& r2_max,
                                       double max_radius, Backend backend) {
  if (!(window.radius > 0.0)) throw std::invalid_argument("window radius must be positive");
  if (window.radius > max_radius * (1.0 + 1e-12)) {
    throw WindowExceedsPatch("window radius " + std::to_string(window.radius) +
                             " exceeds the patch inradius " + std::to_string(max_radius));
  }
  const kernels::PairWindow w{to_expanded(window.center, level), window.radius * sqrt5_pow(level)};
  const auto counts = kernels::pair_histogram(backend, points, w, expanded_cutoff(r2_max, level));
  return histogram_from(counts, level, window.radius);
}

RadialHistogram radial_autocorrelation(const Patch& patch, double window_fraction,
                                       const RadiusKey& r2_max, Backend backend) {
  if (!(window_fraction > 0.0)) throw std::invalid_argument("window fraction must be positive");
  if (window_fraction > 1.0) {
    throw WindowExceedsPatch("window fraction " + std::to_string(window_fraction) + " > 1");
  }
  const PatchFrame frame = patch_frame(patch.level);
  const double fixed_radius = window_fraction * frame.inradius;
  const kernels::PairWindow w{frame.incenter_expanded, fixed_radius * sqrt5_pow(patch.level)};
  const auto pts = control_points(patch);
  const auto counts =
      kernels::pair_histogram(backend, pts, w, expanded_cutoff(r2_max, patch.level));
  return histogram_from(counts, patch.level, fixed_radius);
}

std::string histogram_csv(const RadialHistogram& h) {
  std::ostringstream os;
  os.precision(17);
  os << "p2q2,ell,pair_count,eta_estimate\n";
  for (const auto& [key, e] : h.entries) {
    os << key.p2q2().get_str() << ',' << key.ell() << ',' << e.pair_count << ',' << e.eta_estimate
       << '\n';
  }
  return os.str();
}

std::vector<RadiusKey> distance_set(const RadialHistogram& h) {
  std::vector<RadiusKey> keys;
  for (const auto& [key, e] : h.entries) {
    if (e.pair_count > 0) keys.push_back(key);
  }
  return keys;
}

std::vector<RadiusKey> distance_set(std::span<const LatticePoint> points, unsigned level,
                                    const RadiusKey& r2_max) {
  const auto counts = kernels::pair_histogram(Backend::parallel, points, {},
                                              expanded_cutoff(r2_max, level));
  std::vector<RadiusKey> keys;
  for (const auto& [d2, c] : counts) keys.push_back(RadiusKey::make(mpz_class(static_cast<long>(d2)), level));
  std::sort(keys.begin(), keys.end());
  return keys;
}

DistanceAudit audit_distances(std::span<const LatticePoint> points, unsigned level,
                              std::int64_t max_expanded_d2) {
  DistanceAudit audit;
  const auto counts = kernels::pair_histogram(Backend::parallel, points, {}, max_expanded_d2);
  for (const auto& [d2, c] : counts) {
    ++audit.distinct;
    audit.pairs += c;
    try {
      (void)RadiusKey::make(mpz_class(static_cast<long>(d2)), level);
      ++audit.canonical;
    } catch (const NonCanonicalDistance&) {
      audit.violations.push_back(d2);
    }
  }
  return audit;
}

const std::vector<EtaReferenceEntry>& eta_reference() {
  static const std::vector<EtaReferenceEntry> table = [] {
    const std::vector<std::tuple<const char*, const char*, bool>> raw{
        {"0", "1", true},          {"1/5", "5/11", true},     {"1", "439/165", true},
        {"8/5", "1/2", true},      {"9/5", "67/165", true},   {"49/25", "4/165", true},
        {"2", "7/2", false},       {"13/5", "142/165", true}, {"81/25", "4/165", true},
        {"17/5", "10/11", false},  {"4", "3", false},         {"113/25", "8/165", false},
        {"5", "73/15", false}};
    std::vector<EtaReferenceEntry> t;
    for (const auto& [r2, eta, exact] : raw) {
      mpq_class q(eta);
      q.canonicalize();
      t.push_back({RadiusKey::parse(r2), q, exact});
    }
    return t;
  }();
  return table;
}

std::vector<ModuleCheck> frequency_module_check(std::span<const mpq_class> freqs,
                                                unsigned max_ell) {
  std::vector<ModuleCheck> out;
  for (const auto& f : freqs) {
    mpq_class q = f;
    q.canonicalize();
    mpz_class den = q.get_den();
    unsigned fives = 0;
    while (mpz_divisible_ui_p(den.get_mpz_t(), 5) != 0) {
      den /= 5;
      ++fives;
    }
    ModuleCheck c{q, std::nullopt};
    if (mpz_divisible_p(mpz_class(264).get_mpz_t(), den.get_mpz_t()) != 0 && fives <= max_ell) {
      c.ell = fives;
    }
    out.push_back(c);
  }
  return out;
}

ModuleApproximation nearest_module_element(double value, unsigned max_ell) {
  const mpz_class scale = 264 * pow5(max_ell);
  const double m = std::round(value * scale.get_d());
  ModuleApproximation a;
  a.value = value;
  a.nearest = mpq_class(mpz_class(m), scale);
  a.nearest.canonicalize();
  const double e = a.nearest.get_d();
  a.relative_error = e != 0.0 ? std::fabs(value - e) / std::fabs(e) : std::fabs(value);
  return a;
}

std::optional<int> rotated_lattice_exponent(const ExactPoint& z, int max_power) {
  if (z.x.two_adic_denominator() != 0 || z.y.two_adic_denominator() != 0) return std::nullopt;
  // z = (x + i y) / d with d a power of 5.
  mpz_class d = lcm(z.x.denominator(), z.y.denominator());
  const mpz_class x0 = z.x.numerator() * (d / z.x.denominator());
  const mpz_class y0 = z.y.numerator() * (d / z.y.denominator());
  auto integral = [](const mpz_class& x, const mpz_class& y, const mpz_class& den) {
    return mpz_divisible_p(x.get_mpz_t(), den.get_mpz_t()) != 0 &&
           mpz_divisible_p(y.get_mpz_t(), den.get_mpz_t()) != 0;
  };
  if (integral(x0, y0, d)) return 0;
  // back: R^{-k} z, multiply by (3 - 4i)/5; fwd: R^{k} z, multiply by (3 + 4i)/5.
  mpz_class bx = x0, by = y0, fx = x0, fy = y0, den = d;
  for (int k = 1; k <= max_power; ++k) {
    den *= 5;
    const mpz_class nbx = 3 * bx + 4 * by, nby = 3 * by - 4 * bx;
    const mpz_class nfx = 3 * fx - 4 * fy, nfy = 3 * fy + 4 * fx;
    bx = nbx;
    by = nby;
    fx = nfx;
    fy = nfy;
    if (integral(fx, fy, den)) return -k;  // R^{-m} z with m = -k
    if (integral(bx, by, den)) return k;
  }
  return std::nullopt;
}

std::vector<LatticePoint> square_lattice_points(double radius) {
  if (!(radius >= 0.0)) throw std::invalid_argument("radius must be non-negative");
  const auto r = static_cast<std::int64_t>(std::floor(radius));
  const long double r2 = static_cast<long double>(radius) * radius;
  std::vector<LatticePoint> pts;
  for (std::int64_t x = -r; x <= r; ++x) {
    for (std::int64_t y = -r; y <= r; ++y) {
      if (static_cast<long double>(x * x + y * y) <= r2) pts.push_back({x, y});
    }
  }
  return pts;
}

UniformityReport cross_correlation_uniformity(double angle, double window_radius, int bins) {
  if (bins < 1) throw std::invalid_argument("bins must be positive");
  if (!(window_radius > 0.0)) throw std::invalid_argument("window radius must be positive");
  UniformityReport rep;
  rep.angle = angle;
  rep.window_radius = window_radius;
  rep.bins = bins;

  // Coincidence rotations are the angles 2 arg(a+bi), taken mod pi/2.
  const double quarter = std::numbers::pi / 2.0;
  auto mod_quarter = [&](double t) {
    double r = std::fmod(t, quarter);
    if (r < 0) r += quarter;
    return std::min(r, quarter - r);
  };
  for (std::int64_t a = 1; a <= 31 && !rep.warning; ++a) {
    for (std::int64_t b = 0; b <= 31 && !rep.warning; ++b) {
      if (std::gcd(a, b) != 1 || (a * a + b * b) % 2 == 0 || a * a + b * b > 1000) continue;
      const double theta = 2.0 * std::atan2(static_cast<double>(b), static_cast<double>(a));
      if (mod_quarter(angle - theta) < 1e-6) {
        rep.warning = b == 0 ? std::string("angle is a symmetry of Z^2; all mass falls in one bin")
                             : "angle is within 1e-6 of the coincidence rotation (" +
                                   std::to_string(a) + "+" + std::to_string(b) + "i)^2/" +
                                   std::to_string(a * a + b * b);
      }
    }
  }

  const auto lattice = square_lattice_points(window_radius);
  rep.lattice_points = lattice.size();
  rep.rotated_points = lattice.size();  // R is an isometry fixing the origin
  rep.pairs = rep.lattice_points * rep.rotated_points;

  // x is integral, so (x - y) mod 1 = (-y) mod 1 and the histogram factorizes.
  const double c = std::cos(angle), s = std::sin(angle);
  std::vector<std::uint64_t> hy(static_cast<std::size_t>(bins) * bins, 0);
  for (const auto& m : lattice) {
    const double yx = c * static_cast<double>(m.x) - s * static_cast<double>(m.y);
    const double yy = s * static_cast<double>(m.x) + c * static_cast<double>(m.y);
    auto bin = [bins](double v) {
      double f = -v - std::floor(-v);
      auto b = static_cast<int>(f * bins);
      return std::clamp(b, 0, bins - 1);
    };
    ++hy[static_cast<std::size_t>(bin(yy)) * bins + bin(yx)];
  }
  rep.histogram.resize(hy.size());
  const double expected = static_cast<double>(rep.pairs) / (static_cast<double>(bins) * bins);
  for (std::size_t i = 0; i < hy.size(); ++i) {
    rep.histogram[i] = hy[i] * rep.lattice_points;
    rep.max_relative_deviation =
        std::max(rep.max_relative_deviation, std::fabs(static_cast<double>(rep.histogram[i]) / expected - 1.0));
  }
  return rep;
}

}  // namespace pinwheel
