#include "pinwheel/diffraction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pinwheel/kernels.hpp"

namespace pinwheel {

double radial_transform_mu(int d, double r, double k) {
  if (d < 1 || d > 5) throw std::invalid_argument("dimension must be in 1..5");
  if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
  if (!(k >= 0.0)) throw std::invalid_argument("k must be non-negative");
  if (k == 0.0) return 1.0;
  const double nu = d / 2.0 - 1.0;
  return bessel_j_normalized(nu, 2.0 * std::numbers::pi * k * r);
}

std::vector<double> k_grid(double k_max, std::size_t samples) {
  if (!(k_max > 0.0)) throw std::invalid_argument("k_max must be positive");
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  std::vector<double> ks(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    ks[i] = k_max * static_cast<double>(i) / static_cast<double>(samples - 1);
  }
  return ks;
}

RadialCurve powder_curve_exact(std::uint64_t r2_max) {
  RadialCurve c;
  c.source = "square_powder_exact";
  c.r_cutoff = std::sqrt(static_cast<double>(r2_max));
  for (const auto& e : enumerate_shells(r2_max)) {
    if (e.r_squared == 0) continue;
    const double r = std::sqrt(static_cast<double>(e.r_squared));
    c.samples.push_back({r, static_cast<double>(e.count) / (2.0 * std::numbers::pi * r)});
  }
  return c;
}

RadialMeasure square_lattice_measure(std::uint64_t r2_max) {
  RadialMeasure m;
  for (const auto& e : enumerate_shells(r2_max)) {
    m[RadiusKey::make(mpz_class(static_cast<unsigned long>(e.r_squared)), 0)] =
        static_cast<double>(e.count);
  }
  return m;
}

RadialMeasure measure_from_histogram(const RadialHistogram& h) {
  RadialMeasure m;
  for (const auto& [key, e] : h.entries) m[key] = e.eta_estimate;
  return m;
}

RadialCurve bessel_sum_curve(const RadialMeasure& weights, std::span<const double> ks,
                             const BesselSumOptions& options) {
  for (std::size_t i = 1; i < ks.size(); ++i) {
    if (!(ks[i] > ks[i - 1])) throw std::invalid_argument("k grid must be strictly increasing");
  }
  if (!ks.empty() && ks.front() < 0.0) throw std::invalid_argument("k must be non-negative");
  std::vector<double> radii, w;
  double r_max = 0.0;
  for (const auto& [key, value] : weights) {
    const double r = key.radius();
    r_max = std::max(r_max, r);
    if (options.drop_central && r == 0.0) continue;
    radii.push_back(r);
    w.push_back(value);
  }
  const double k_max = ks.empty() ? 0.0 : ks.back();
  if (2.0 * std::numbers::pi * k_max * r_max > kBesselMaxArgument) {
    throw OutOfRange("2 pi k r exceeds the Bessel kernel range");
  }
  std::vector<double> values = kernels::bessel_j0_sum(options.backend, radii, w, ks);

  RadialCurve c;
  c.r_cutoff = r_max;
  if (options.drop_central) {
    const double rc = options.central_radius.value_or(r_max);
    const double area = std::numbers::pi * rc * rc;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const double x = 2.0 * std::numbers::pi * ks[i] * rc;
      if (x > kBesselMaxArgument) throw OutOfRange("central disc transform out of range");
      // 2 J1(x) / x = Gamma(2) J1(x) / (x/2)
      values[i] -= area * bessel_j_normalized(1.0, x);
    }
  }
  for (std::size_t i = 0; i < ks.size(); ++i) c.samples.push_back({ks[i], values[i]});
  return c;
}

std::vector<std::size_t> local_maxima(const RadialCurve& curve) {
  std::vector<std::size_t> out;
  const auto& s = curve.samples;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i].value > s[i - 1].value && s[i].value > s[i + 1].value) out.push_back(i);
  }
  return out;
}

double psf_tail_bound(double t, std::uint64_t r2_cutoff) {
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  // At most 4 sqrt(n) + 4 lattice points lie on the circle x^2 + y^2 = n.
  long double sum = 0.0L;
  const long double s1 = std::numbers::pi_v<long double> * t;
  const long double s2 = std::numbers::pi_v<long double> / t;
  for (std::uint64_t n = r2_cutoff + 1;; ++n) {
    const long double ln = static_cast<long double>(n);
    const long double term =
        (4.0L * std::sqrt(ln) + 4.0L) * (std::exp(-s1 * ln) + std::exp(-s2 * ln) / t);
    sum += term;
    if (term < 1e-40L || (term < 1e-30L * sum)) break;
  }
  return static_cast<double>(sum);
}

std::uint64_t psf_cutoff(double t, double tolerance) {
  std::uint64_t n = 1;
  while (psf_tail_bound(t, n) > tolerance) n *= 2;
  std::uint64_t lo = n / 2, hi = n;
  while (lo + 1 < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (psf_tail_bound(t, mid) > tolerance ? lo : hi) = mid;
  }
  return hi;
}

PsfReport psf_gaussian_check(double t, std::optional<std::uint64_t> r2_max) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("t must be positive and finite");
  PsfReport rep;
  rep.t = t;
  rep.r2_cutoff = r2_max ? *r2_max : psf_cutoff(t);
  rep.tail_bound = psf_tail_bound(t, rep.r2_cutoff);
  if (rep.tail_bound > 1e-12) {
    throw TailTooLarge("r2 cutoff " + std::to_string(rep.r2_cutoff) + " leaves a Gaussian tail of " +
                       std::to_string(rep.tail_bound));
  }
  long double lhs = 0.0L, rhs = 0.0L;
  const long double pi = std::numbers::pi_v<long double>;
  for (const auto& e : enumerate_shells(std::max<std::uint64_t>(rep.r2_cutoff, 1))) {
    if (e.r_squared > rep.r2_cutoff) break;
    const long double n = static_cast<long double>(e.r_squared);
    lhs += static_cast<long double>(e.count) * std::exp(-pi * t * n);
    rhs += static_cast<long double>(e.count) * std::exp(-pi * n / t);
  }
  rhs /= t;
  rep.lhs = static_cast<double>(lhs);
  rep.rhs = static_cast<double>(rhs);
  rep.defect = static_cast<double>(std::fabs(lhs - rhs));
  return rep;
}

SuperpositionSummary superposition_diffraction(unsigned n_lattices,
                                               std::optional<GaussianRotation> coincidence) {
  if (n_lattices < 2) throw std::invalid_argument("need at least two lattices");
  if (coincidence && n_lattices != 2) {
    throw std::invalid_argument("coincidence weights are defined for two lattices");
  }
  const mpz_class n = n_lattices;
  // Intensity of a point lying in c of the N lattices.
  auto intensity = [&](unsigned c) {
    mpq_class a(c, n_lattices);
    a.canonicalize();
    return mpq_class(a * a);
  };
  SuperpositionSummary s;
  s.n_lattices = n_lattices;
  s.central_weight = intensity(n_lattices);
  s.per_bragg_weight = intensity(1);
  s.bragg_central = mpq_class(n_lattices * s.per_bragg_weight);
  s.diffuse_central = s.central_weight - s.bragg_central;
  s.ring_weight_per_lattice_point = s.bragg_central;
  if (coincidence) {
    CoincidenceSummary c;
    c.rotation = *coincidence;
    c.rational = rational_rotation(*coincidence);
    c.theta_index = csl_index(*coincidence);
    c.weight_on_theta = intensity(2);
    c.weight_off_theta = intensity(1);
    s.coincidence = c;
  }
  return s;
}

}  // namespace pinwheel
