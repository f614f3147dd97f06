#pragma once

// Radial autocorrelation of point sets, distance-set audits, the
// frequency module, rotated-lattice membership and the cross-correlation
// uniformity test for two superposed square lattices.

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pinwheel/exact_core.hpp"
#include "pinwheel/substitution.hpp"
#include "pinwheel/types.hpp"

namespace pinwheel {

class WindowExceedsPatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RadialEntry {
  std::uint64_t pair_count = 0;
  double eta_estimate = 0.0;
};

struct RadialHistogram {
  unsigned level = 0;
  /// Fixed-frame units.
  double window_radius = 0.0;
  std::map<RadiusKey, RadialEntry> entries;

  /// 0 when the key was not observed.
  double eta(const RadiusKey& key) const;
  std::uint64_t pairs(const RadiusKey& key) const;
};

/// Ball in fixed-frame units.
struct Window {
  Vec2 center{};
  double radius = 1.0;
};

/// Centre and size of the level-n supertile, whose incircle is the largest
/// window a patch supports.
struct PatchFrame {
  Vec2 incenter_fixed{};
  Vec2 incenter_expanded{};
  /// Fixed-frame units.
  double inradius = 0.0;
};

PatchFrame patch_frame(unsigned level);

/// Fixed-frame point -> expanded frame of the given level, (M^T)^n x.
Vec2 to_expanded(const Vec2& fixed, unsigned level);

/// Ordered pairs (x, y), both in the window, |x-y|^2 <= r2_max, bucketed by
/// exact squared distance; eta = pair count / (pi R^2). Points are in the
/// expanded frame of `level`. Throws WindowExceedsPatch if the radius is
/// larger than max_radius.
RadialHistogram radial_autocorrelation(std::span<const LatticePoint> points, unsigned level,
                                       const Window& window, const RadiusKey& r2_max,
                                       double max_radius = std::numeric_limits<double>::infinity(),
                                       Backend backend = Backend::parallel);

/// Control points of a patch, window centred at the supertile incenter with
/// radius window_fraction * inradius.
RadialHistogram radial_autocorrelation(const Patch& patch, double window_fraction,
                                       const RadiusKey& r2_max,
                                       Backend backend = Backend::parallel);

/// CSV `p2q2,ell,pair_count,eta_estimate`, sorted by r^2.
std::string histogram_csv(const RadialHistogram& h);

/// Observed squared distances, increasing.
std::vector<RadiusKey> distance_set(const RadialHistogram& h);
/// All squared distances <= r2_max between the points (no window).
std::vector<RadiusKey> distance_set(std::span<const LatticePoint> points, unsigned level,
                                    const RadiusKey& r2_max);

/// Every squared pair distance d / 5^level checked for the form (p^2+q^2)/5^l.
struct DistanceAudit {
  std::uint64_t distinct = 0;
  std::uint64_t canonical = 0;
  std::uint64_t pairs = 0;
  std::vector<std::int64_t> violations;  // raw expanded-frame squared distances
};

DistanceAudit audit_distances(std::span<const LatticePoint> points, unsigned level,
                              std::int64_t max_expanded_d2);

struct EtaReferenceEntry {
  RadiusKey key;
  mpq_class eta;
  bool exact = true;
};

/// eta(r) for r^2 <= 5; entries with exact == false are conjectural.
const std::vector<EtaReferenceEntry>& eta_reference();

/// For each frequency, the least l with f * 264 * 5^l integral, or nothing
/// if no l <= max_ell works.
struct ModuleCheck {
  mpq_class frequency;
  std::optional<unsigned> ell;
};

std::vector<ModuleCheck> frequency_module_check(std::span<const mpq_class> freqs,
                                                unsigned max_ell = 64);

/// Nearest element m / (264 * 5^max_ell) of the module to a float.
struct ModuleApproximation {
  double value = 0.0;
  mpq_class nearest;
  double relative_error = 0.0;
};

ModuleApproximation nearest_module_element(double value, unsigned max_ell);

/// Least |m| (ties towards negative m) with R^{-m} z in Z^2 for R the
/// rotation by (3+4i)/5, searching |m| <= max_power.
std::optional<int> rotated_lattice_exponent(const ExactPoint& z, int max_power);

/// Points of Z^2 in the closed disc of the given radius about the origin.
std::vector<LatticePoint> square_lattice_points(double radius);

struct UniformityReport {
  double angle = 0.0;
  double window_radius = 0.0;
  int bins = 0;
  std::uint64_t lattice_points = 0;  // |Z^2 cap B|
  std::uint64_t rotated_points = 0;  // |R Z^2 cap B|
  std::uint64_t pairs = 0;
  std::vector<std::uint64_t> histogram;  // bins x bins, row-major in y
  double max_relative_deviation = 0.0;
  std::optional<std::string> warning;
};

/// Histogram of (x - y) mod 1 for x in Z^2, y in R Z^2, both in the ball of
/// the given radius about the origin.
UniformityReport cross_correlation_uniformity(double angle, double window_radius, int bins);

}  // namespace pinwheel
