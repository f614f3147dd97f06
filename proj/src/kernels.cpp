#include "pinwheel/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include "pinwheel/bessel.hpp"

namespace pinwheel::kernels {

namespace {

int g_threads = 0;

int active_threads() { return g_threads > 0 ? g_threads : omp_get_max_threads(); }

bool checked_child(const PlacedTile& tile, const ChildMap& child, std::int64_t scale,
                   PlacedTile& out) {
  const auto& e = tile.linear;
  const auto& l = child.linear;
  bool overflow = false;
  auto mul_add = [&](std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    std::int64_t p, q, r;
    overflow |= __builtin_mul_overflow(a, b, &p);
    overflow |= __builtin_mul_overflow(c, d, &q);
    overflow |= __builtin_add_overflow(p, q, &r);
    return r;
  };
  out.linear = {mul_add(e[0], l[0], e[1], l[2]), mul_add(e[0], l[1], e[1], l[3]),
                mul_add(e[2], l[0], e[3], l[2]), mul_add(e[2], l[1], e[3], l[3])};
  for (int i = 0; i < 2; ++i) {
    const std::int64_t moved = mul_add(e[2 * i], child.translation[0], e[2 * i + 1],
                                       child.translation[1]);
    std::int64_t shifted, total;
    overflow |= __builtin_mul_overflow(scale, tile.translation[i], &shifted);
    overflow |= __builtin_add_overflow(moved, shifted, &total);
    out.translation[i] = total;
  }
  return !overflow;
}

[[noreturn]] void throw_overflow() {
  throw std::overflow_error("tile coordinates exceed 64-bit range; level too large");
}

struct CellKey {
  std::int64_t x, y;
  bool operator==(const CellKey&) const = default;
};

struct CellHash {
  std::size_t operator()(const CellKey& c) const noexcept {
    return LatticePointHash{}(LatticePoint{c.x, c.y});
  }
};

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::vector<LatticePoint> inside_window(std::span<const LatticePoint> points,
                                        const PairWindow& window) {
  std::vector<LatticePoint> kept;
  kept.reserve(points.size());
  const long double r2 = static_cast<long double>(window.radius) * window.radius;
  for (const auto& p : points) {
    const long double dx = static_cast<long double>(p.x) - window.center.x;
    const long double dy = static_cast<long double>(p.y) - window.center.y;
    if (std::isinf(window.radius) || dx * dx + dy * dy <= r2) kept.push_back(p);
  }
  return kept;
}

std::int64_t cell_size(std::int64_t max_d2) {
  if (max_d2 < 0) throw std::invalid_argument("negative squared-distance cutoff");
  auto c = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(max_d2)));
  while (c * c < max_d2) ++c;
  return std::max<std::int64_t>(c, 1);
}

// Squared distance if it does not exceed max_d2, else -1. Coordinates may
// be as large as 2^62, so the arithmetic is done in 128 bits.
inline std::int64_t bounded_d2(const LatticePoint& a, const LatticePoint& b,
                               std::int64_t max_d2) {
  const __int128 dx = static_cast<__int128>(a.x) - b.x;
  const __int128 dy = static_cast<__int128>(a.y) - b.y;
  const __int128 d2 = dx * dx + dy * dy;
  return d2 <= max_d2 ? static_cast<std::int64_t>(d2) : -1;
}

using Buckets = std::unordered_map<CellKey, std::vector<std::uint32_t>, CellHash>;

Buckets bucket(const std::vector<LatticePoint>& pts, std::int64_t cell) {
  Buckets cells;
  for (std::uint32_t i = 0; i < pts.size(); ++i) {
    cells[{floor_div(pts[i].x, cell), floor_div(pts[i].y, cell)}].push_back(i);
  }
  return cells;
}

void count_neighbours(const std::vector<LatticePoint>& pts, const Buckets& cells,
                      std::int64_t cell, std::int64_t max_d2, std::size_t i,
                      std::unordered_map<std::int64_t, std::uint64_t>& acc) {
  const auto& p = pts[i];
  const std::int64_t cx = floor_div(p.x, cell);
  const std::int64_t cy = floor_div(p.y, cell);
  for (std::int64_t dx = -1; dx <= 1; ++dx) {
    for (std::int64_t dy = -1; dy <= 1; ++dy) {
      const auto it = cells.find({cx + dx, cy + dy});
      if (it == cells.end()) continue;
      for (const std::uint32_t j : it->second) {
        const std::int64_t d2 = bounded_d2(p, pts[j], max_d2);
        if (d2 >= 0) ++acc[d2];
      }
    }
  }
}

DistanceCounts sorted(const std::unordered_map<std::int64_t, std::uint64_t>& acc) {
  DistanceCounts out(acc.begin(), acc.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

void set_thread_count(int threads) {
  if (threads < 0) throw std::invalid_argument("thread count must be >= 0");
  g_threads = threads;
}

int thread_count() { return active_threads(); }

namespace serial {

std::vector<PlacedTile> expand_tiles(std::span<const PlacedTile> tiles,
                                     std::span<const ChildMap> children,
                                     std::int64_t translation_scale) {
  std::vector<PlacedTile> out(tiles.size() * children.size());
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    for (std::size_t j = 0; j < children.size(); ++j) {
      if (!checked_child(tiles[i], children[j], translation_scale,
                         out[i * children.size() + j])) {
        throw_overflow();
      }
    }
  }
  return out;
}

DistanceCounts pair_histogram(std::span<const LatticePoint> points, const PairWindow& window,
                              std::int64_t max_d2) {
  const auto pts = inside_window(points, window);
  const std::int64_t cell = cell_size(max_d2);
  const Buckets cells = bucket(pts, cell);
  std::unordered_map<std::int64_t, std::uint64_t> acc;
  for (std::size_t i = 0; i < pts.size(); ++i) count_neighbours(pts, cells, cell, max_d2, i, acc);
  return sorted(acc);
}

std::vector<double> bessel_j0_sum(std::span<const double> radii, std::span<const double> weights,
                                  std::span<const double> ks) {
  if (radii.size() != weights.size()) throw std::invalid_argument("radii/weights size mismatch");
  std::vector<double> out(ks.size(), 0.0);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < radii.size(); ++j) {
      sum += weights[j] * bessel_j(0.0, 2.0 * std::numbers::pi * ks[i] * radii[j]);
    }
    out[i] = sum;
  }
  return out;
}

}  // namespace serial

namespace omp {

std::vector<PlacedTile> expand_tiles(std::span<const PlacedTile> tiles,
                                     std::span<const ChildMap> children,
                                     std::int64_t translation_scale) {
  std::vector<PlacedTile> out(tiles.size() * children.size());
  std::atomic<bool> overflow{false};
  const auto n = static_cast<std::int64_t>(tiles.size());
#pragma omp parallel for schedule(static) num_threads(active_threads())
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < children.size(); ++j) {
      if (!checked_child(tiles[i], children[j], translation_scale,
                         out[i * children.size() + j])) {
        overflow.store(true, std::memory_order_relaxed);
      }
    }
  }
  if (overflow.load()) throw_overflow();
  return out;
}

DistanceCounts pair_histogram(std::span<const LatticePoint> points, const PairWindow& window,
                              std::int64_t max_d2) {
  const auto pts = inside_window(points, window);
  const std::int64_t cell = cell_size(max_d2);
  const Buckets cells = bucket(pts, cell);
  std::unordered_map<std::int64_t, std::uint64_t> total;
  const auto n = static_cast<std::int64_t>(pts.size());
#pragma omp parallel num_threads(active_threads())
  {
    std::unordered_map<std::int64_t, std::uint64_t> acc;
#pragma omp for schedule(dynamic, 1024) nowait
    for (std::int64_t i = 0; i < n; ++i) {
      count_neighbours(pts, cells, cell, max_d2, static_cast<std::size_t>(i), acc);
    }
#pragma omp critical
    for (const auto& [d2, c] : acc) total[d2] += c;
  }
  return sorted(total);
}

std::vector<double> bessel_j0_sum(std::span<const double> radii, std::span<const double> weights,
                                  std::span<const double> ks) {
  if (radii.size() != weights.size()) throw std::invalid_argument("radii/weights size mismatch");
  std::vector<double> out(ks.size(), 0.0);
  const auto n = static_cast<std::int64_t>(ks.size());
#pragma omp parallel for schedule(dynamic, 8) num_threads(active_threads())
  for (std::int64_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < radii.size(); ++j) {
      sum += weights[j] * bessel_j(0.0, 2.0 * std::numbers::pi * ks[i] * radii[j]);
    }
    out[i] = sum;
  }
  return out;
}

}  // namespace omp

}  // namespace pinwheel::kernels
