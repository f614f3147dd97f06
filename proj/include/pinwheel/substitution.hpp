#pragma once

// The pinwheel substitution and everything derived from it: the dissection
// of the inflated triangle, patch generation in the expanded frame, control
// points, the merge into kites and dominoes, the kite-domino substitution
// matrix and the census of vertex stars.
//
// Expanded frame of level n: coordinates multiplied by (M^T)^n, where
// M = [2 1; -1 2] is the inflation. In this frame every tile of sigma^n(T)
// is x -> E x + t with integer E (E^T E = 5^n I) and integer t, its vertices
// lie in (Z + 1/2)^2 and the supertile is 5^n T.

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pinwheel/exact_core.hpp"
#include "pinwheel/types.hpp"

namespace pinwheel {

/// Base for failures that can only mean an implementation bug.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class NoDissectionFound : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

class MultipleDissectionsFound : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

class AmbiguousPairing : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

class InternalPairingIncomplete : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

enum class Prototile : std::uint8_t { t_plus, t_minus, kite, domino };

std::string_view prototile_name(Prototile id);
/// Inverse of prototile_name; throws std::invalid_argument.
Prototile parse_prototile(std::string_view name);

/// Reference triangle T, vertices in the order right angle, arctan 2 corner,
/// arctan(1/2) corner: (-1/2,-1/2), (1/2,-1/2), (-1/2,3/2).
Triangle reference_triangle();
/// The same vertices doubled, as integers.
std::array<LatticePoint, 3> reference_vertices_doubled();
/// Reference polygon of a prototile (T_minus is T reflected in the x-axis).
std::vector<ExactPoint> prototile_polygon(Prototile id);
/// Control points: (0,0) for triangles, (0,0),(2/5,1/5) for the kite,
/// (0,0),(0,1) for the domino.
std::vector<ExactPoint> prototile_control_points(Prototile id);

/// Inflation M = [2 1; -1 2] (sqrt 5 times a rotation).
Mat2 inflation_matrix();
/// M T as an exact triangle.
Triangle inflated_triangle();

struct Dissection {
  /// Fixed-frame placements h_i of T inside M T; children[0] is the identity.
  std::vector<Isometry> children;
  /// Exact certificate that the children tile M T.
  CoverReport certificate;

  std::vector<Triangle> child_triangles() const;
  std::size_t reflected_count() const;
};

/// Exhaustive search over placements of T and its mirror image with
/// vertices on the (1/4)Z^2 grid inside M T, anchored by the identity child.
/// Throws NoDissectionFound / MultipleDissectionsFound.
Dissection derive_dissection();

/// The search result, locked in as constants; the certificate is recomputed
/// on first use.
const Dissection& pinwheel_dissection();

/// Child maps for the expanded-frame recursion: (M^T L_i, M^T u_i).
std::vector<ChildMap> expanded_child_maps(const Dissection& d);

struct Patch {
  unsigned level = 0;
  Prototile seed = Prototile::t_plus;
  std::vector<PlacedTile> tiles;

  std::size_t size() const { return tiles.size(); }
};

Prototile tile_id(const PlacedTile& tile);

/// Level-0 patch holding one triangle: T for t_plus, its mirror for t_minus.
Patch seed_patch(Prototile seed = Prototile::t_plus);

/// One substitution step: tile (E, t) becomes (E M^T L_i, E M^T u_i + 5 t).
Patch substitute(const Patch& patch, Backend backend = Backend::parallel);

/// sigma^level applied to the seed.
Patch generate_patch(unsigned level, Prototile seed = Prototile::t_plus,
                     Backend backend = Backend::parallel);

/// Conjugate by the inflation: x -> M g(M^{-1} x), a fixed-frame isometry
/// with translation M t.
Isometry inflate_conjugate(const Isometry& g);

/// Fixed-frame placements of sigma^level(T) by exact composition of
/// isometries: D_0 = {id}, D_n = { inflate_conjugate(g) o h_j : g in D_{n-1} }.
/// Independent of the integer expanded-frame recursion.
std::vector<Isometry> fixed_frame_placements(unsigned level);

/// Visits every tile of sigma^level(seed) depth first without storing the
/// patch; usable for levels whose tile list would not fit in memory.
void for_each_tile(unsigned level, Prototile seed,
                   const std::function<void(const PlacedTile&)>& visit);

/// Exact expanded-frame isometry of a tile (scale exponent = level).
Isometry to_isometry(const PlacedTile& tile, unsigned level);
/// Compact form of an expanded-frame isometry; throws GeometryError if the
/// map does not fit the integer representation.
PlacedTile from_isometry(const Isometry& g);
/// The same tile in the fixed frame (unit tiles), x -> M^n E x / 5^n + M^n t / 5^n.
Isometry fixed_frame_isometry(const PlacedTile& tile, unsigned level);
/// Fixed-frame coordinates of an expanded-frame point of level n.
ExactPoint to_fixed_frame(const LatticePoint& p, unsigned level);
/// Expanded-frame coordinates (doubled, to stay integral) of a tile's vertices.
std::array<LatticePoint, 3> doubled_vertices(const PlacedTile& tile);
/// Exact vertices of a tile in the expanded frame.
Triangle expanded_triangle(const PlacedTile& tile);

/// Control points (expanded frame) sorted and deduplicated.
std::vector<LatticePoint> control_points(const Patch& patch);

struct KdTile {
  Prototile id = Prototile::kite;
  /// Indices into the triangle patch; triangles[0] is the lower index.
  std::array<std::uint32_t, 2> triangles{};
};

struct KiteDominoPatch {
  unsigned level = 0;
  std::vector<KdTile> tiles;
  /// Triangles whose hypotenuse partner lies outside the patch.
  std::vector<std::uint32_t> remainder;

  std::size_t count(Prototile id) const;
};

/// Pairs triangles across shared hypotenuses and classifies each pair.
/// Throws AmbiguousPairing if three triangles share a hypotenuse.
KiteDominoPatch merge_to_kite_domino(const Patch& patch);

struct SubstitutionMatrix {
  /// counts[i][j]: children of type i in the image of type j, with index 0
  /// for kites and 1 for dominoes.
  std::array<std::array<std::uint64_t, 2>, 2> counts{};

  /// Exact Perron eigenvalue (must be 25).
  mpq_class perron_eigenvalue() const;
  /// Normalized Perron eigenvector (kite, domino).
  std::array<mpq_class, 2> relative_frequencies() const;
  /// Frequencies per unit area: relative frequency / mean tile area.
  std::array<mpq_class, 2> absolute_frequencies() const;
};

/// Applies sigma^2 inside one kite and one domino taken from a generated
/// patch, merges, and counts. Throws InternalPairingIncomplete if either
/// supertile leaves unpaired triangles.
SubstitutionMatrix kd_substitution_matrix();

/// One wedge around a vertex, in counter-clockwise order.
///  kind 'R', 'A', 'B': a tile corner (right angle, arctan(1/2), arctan 2);
///    edge is the tile edge met first counter-clockwise: 'S' short leg,
///    'L' long leg, 'H' hypotenuse.
///  kind 'E': the vertex lies inside edge `edge` of a tile (a straight
///    angle); position is the distance from the vertex to the first
///    endpoint counter-clockwise, as a fraction of the edge length.
struct Wedge {
  char kind = 'R';
  char edge = 'S';
  std::int64_t position_num = 0;
  std::int64_t position_den = 1;

  Wedge mirrored() const;
  std::string code() const;

  friend bool operator==(const Wedge&, const Wedge&) = default;
  friend std::strong_ordering operator<=>(const Wedge& a, const Wedge& b);
};

struct VertexStar {
  /// Canonical wedge cycle: lexicographically least over rotations and
  /// mirror images.
  std::vector<Wedge> wedges;
  std::uint64_t count = 0;
  /// count / fixed-frame patch area.
  mpq_class frequency;
  /// A vertex of this class (doubled expanded-frame coordinates) and the
  /// indices of the tiles around it.
  LatticePoint representative{};
  std::vector<std::uint32_t> representative_tiles;

  std::string code() const;
};

struct VertexStarCensus {
  unsigned level = 0;
  std::uint64_t interior_vertices = 0;
  std::uint64_t boundary_vertices = 0;
  /// Sorted by decreasing count, then code.
  std::vector<VertexStar> classes;
};

/// Congruence classes of vertex stars at interior vertices (wedge angles
/// summing to a full turn).
VertexStarCensus vertex_stars(const Patch& patch);

/// Canonical form of a cyclic wedge sequence.
std::vector<Wedge> canonical_star(std::vector<Wedge> cycle);

}  // namespace pinwheel
