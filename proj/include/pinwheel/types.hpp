#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>

namespace pinwheel {

/// Integer point in the expanded frame of some level.
struct LatticePoint {
  std::int64_t x = 0;
  std::int64_t y = 0;

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

struct LatticePointHash {
  std::size_t operator()(const LatticePoint& p) const noexcept {
    const auto h = static_cast<std::uint64_t>(p.x) * 0x9E3779B97F4A7C15ULL ^
                   (static_cast<std::uint64_t>(p.y) + 0x632BE59BD9B4E019ULL + (p.x << 6));
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// A unit pinwheel triangle placed in the expanded frame of a patch of
/// level n: x -> N x + t with integer N, N^T N = 5^n I, integer t.
/// The tile is the image of the reference triangle; its control point is t.
struct PlacedTile {
  std::array<std::int64_t, 4> linear{1, 0, 0, 1};
  std::array<std::int64_t, 2> translation{0, 0};

  std::int64_t det() const { return linear[0] * linear[3] - linear[1] * linear[2]; }
  bool reflected() const { return det() < 0; }
  LatticePoint control_point() const { return {translation[0], translation[1]}; }
  /// Twice the image of a point given in doubled coordinates.
  LatticePoint map_doubled(LatticePoint twice) const {
    return {linear[0] * twice.x + linear[1] * twice.y + 2 * translation[0],
            linear[2] * twice.x + linear[3] * twice.y + 2 * translation[1]};
  }

  friend bool operator==(const PlacedTile&, const PlacedTile&) = default;
  friend auto operator<=>(const PlacedTile&, const PlacedTile&) = default;
};

/// One child of the substitution in expanded-frame form: a tile E + t
/// spawns (E L, E u + s t) where (L, u) is the child map and s the
/// translation scale.
struct ChildMap {
  std::array<std::int64_t, 4> linear;
  std::array<std::int64_t, 2> translation;
};

enum class Backend : std::uint8_t { serial, parallel };

}  // namespace pinwheel
