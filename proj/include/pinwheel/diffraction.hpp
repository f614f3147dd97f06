#pragma once

// Radial Fourier transforms of sphere measures, Bessel-sum diffraction
// curves, the radial Poisson summation check on Gaussians and the
// intensity bookkeeping for superposed square lattices.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pinwheel/bessel.hpp"
#include "pinwheel/exact_core.hpp"
#include "pinwheel/radial_stats.hpp"
#include "pinwheel/shelling.hpp"
#include "pinwheel/types.hpp"

namespace pinwheel {

class TailTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fourier transform of the uniform probability measure on the sphere of
/// radius r in R^d (d = 1..5) at |k|:
///   Gamma(d/2) J_{d/2-1}(2 pi k r) / (pi k r)^{d/2-1}, equal to 1 at k = 0.
double radial_transform_mu(int d, double r, double k);

struct CurveSample {
  double k = 0.0;
  double value = 0.0;
};

struct RadialCurve {
  std::vector<CurveSample> samples;
  std::string source;
  double r_cutoff = 0.0;
  int level = -1;  // -1 when not derived from a patch
};

/// Exact squared radius -> weight.
using RadialMeasure = std::map<RadiusKey, double>;

/// `samples` equally spaced points on [0, k_max], both ends included.
std::vector<double> k_grid(double k_max = 3.0, std::size_t samples = 1200);

/// (r, eta(r) / (2 pi r)) for r in D, 0 < r^2 <= r2_max.
RadialCurve powder_curve_exact(std::uint64_t r2_max);

/// eta(r) for Z^2, 0 <= r^2 <= r2_max.
RadialMeasure square_lattice_measure(std::uint64_t r2_max);

/// Estimated eta(r) of a radial histogram.
RadialMeasure measure_from_histogram(const RadialHistogram& h);

struct BesselSumOptions {
  /// Skip r = 0 and subtract the transform of the uniform disc of density 1
  /// and radius central_radius (the density-squared continuous part).
  bool drop_central = false;
  /// Radius of that disc; defaults to the largest radius in the support.
  std::optional<double> central_radius;
  Backend backend = Backend::parallel;
};

/// I(k) = sum_r w(r) J0(2 pi k r) on the given grid.
RadialCurve bessel_sum_curve(const RadialMeasure& weights, std::span<const double> ks,
                             const BesselSumOptions& options = {});

/// Indices of strict interior local maxima.
std::vector<std::size_t> local_maxima(const RadialCurve& curve);

struct PsfReport {
  double t = 0.0;
  std::uint64_t r2_cutoff = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double defect = 0.0;
  double tail_bound = 0.0;
};

/// Bound on the omitted part of both sides when summing r^2 <= r2_cutoff.
double psf_tail_bound(double t, std::uint64_t r2_cutoff);
/// Least cutoff with psf_tail_bound <= tolerance.
std::uint64_t psf_cutoff(double t, double tolerance = 1e-12);

/// sum eta(r) exp(-pi t r^2) against (1/t) sum eta(r) exp(-pi r^2 / t).
/// Throws TailTooLarge if an explicit cutoff leaves a tail above 1e-12.
PsfReport psf_gaussian_check(double t, std::optional<std::uint64_t> r2_max = std::nullopt);

struct CoincidenceSummary {
  GaussianRotation rotation;
  RationalRotation rational;
  std::uint64_t theta_index = 0;
  mpq_class weight_on_theta;   // non-zero points of Z^2 cap R Z^2
  mpq_class weight_off_theta;  // points of exactly one of the lattices
};

struct SuperpositionSummary {
  unsigned n_lattices = 0;
  mpq_class central_weight;
  /// central_weight = diffuse_central + bragg_central
  mpq_class diffuse_central;
  mpq_class bragg_central;
  /// Weight of a Bragg point lying in exactly one lattice.
  mpq_class per_bragg_weight;
  /// N * per_bragg_weight; times N it gives eta(r) per ring.
  mpq_class ring_weight_per_lattice_point;
  std::optional<CoincidenceSummary> coincidence;
};

/// Point intensities of omega = (1/N) sum_j delta_{R_j Z^2}: the intensity
/// at x is (number of lattices containing x / N)^2. With a coincidence
/// rotation R (N = 2 only) the lattices are Z^2 and R Z^2.
SuperpositionSummary superposition_diffraction(unsigned n_lattices,
                                               std::optional<GaussianRotation> coincidence = {});

}  // namespace pinwheel
