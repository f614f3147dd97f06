#pragma once

// Data-parallel inner loops. Each kernel has a serial reference version and
// an OpenMP version with identical results; tests compare the two and
// bench/ times them.

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "pinwheel/types.hpp"

namespace pinwheel::kernels {

/// 0 selects the OpenMP default.
void set_thread_count(int threads);
int thread_count();

/// Disc restricting pair endpoints, in expanded-frame units.
struct PairWindow {
  Vec2 center{};
  double radius = std::numeric_limits<double>::infinity();
};

/// (squared distance, ordered pair count), sorted by squared distance.
/// Squared distance 0 counts each point once (x == y).
using DistanceCounts = std::vector<std::pair<std::int64_t, std::uint64_t>>;

namespace serial {

/// Children of every tile, in tile-major order (5 per tile for the pinwheel).
std::vector<PlacedTile> expand_tiles(std::span<const PlacedTile> tiles,
                                     std::span<const ChildMap> children,
                                     std::int64_t translation_scale);

/// Ordered pairs (x, y), both inside the window, with |x-y|^2 <= max_d2.
DistanceCounts pair_histogram(std::span<const LatticePoint> points, const PairWindow& window,
                              std::int64_t max_d2);

/// I(k) = sum_j w_j J0(2 pi k r_j) at every k.
std::vector<double> bessel_j0_sum(std::span<const double> radii, std::span<const double> weights,
                                  std::span<const double> ks);

}  // namespace serial

namespace omp {

std::vector<PlacedTile> expand_tiles(std::span<const PlacedTile> tiles,
                                     std::span<const ChildMap> children,
                                     std::int64_t translation_scale);

DistanceCounts pair_histogram(std::span<const LatticePoint> points, const PairWindow& window,
                              std::int64_t max_d2);

std::vector<double> bessel_j0_sum(std::span<const double> radii, std::span<const double> weights,
                                  std::span<const double> ks);

}  // namespace omp

inline std::vector<PlacedTile> expand_tiles(Backend b, std::span<const PlacedTile> tiles,
                                            std::span<const ChildMap> children,
                                            std::int64_t translation_scale) {
  return b == Backend::serial ? serial::expand_tiles(tiles, children, translation_scale)
                              : omp::expand_tiles(tiles, children, translation_scale);
}

inline DistanceCounts pair_histogram(Backend b, std::span<const LatticePoint> points,
                                     const PairWindow& window, std::int64_t max_d2) {
  return b == Backend::serial ? serial::pair_histogram(points, window, max_d2)
                              : omp::pair_histogram(points, window, max_d2);
}

inline std::vector<double> bessel_j0_sum(Backend b, std::span<const double> radii,
                                         std::span<const double> weights,
                                         std::span<const double> ks) {
  return b == Backend::serial ? serial::bessel_j0_sum(radii, weights, ks)
                              : omp::bessel_j0_sum(radii, weights, ks);
}

}  // namespace pinwheel::kernels
