#include "pinwheel/substitution.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>
#include <unordered_map>

#include "pinwheel/kernels.hpp"

namespace pinwheel {

namespace {

using i128 = __int128;

constexpr std::array<LatticePoint, 3> kDoubledT{{{-1, -1}, {1, -1}, {-1, 3}}};

mpz_class big(std::int64_t v) { return mpz_class(static_cast<long>(v)); }

std::int64_t small(const mpz_class& v) {
  if (!v.fits_slong_p()) throw GeometryError("integer " + v.get_str() + " exceeds 64 bits");
  return v.get_si();
}

Mat2 to_mat(const std::array<std::int64_t, 4>& m) {
  return {big(m[0]), big(m[1]), big(m[2]), big(m[3])};
}

i128 cross2(const LatticePoint& o, const LatticePoint& a, const LatticePoint& b) {
  return static_cast<i128>(a.x - o.x) * (b.y - o.y) - static_cast<i128>(a.y - o.y) * (b.x - o.x);
}

i128 dot2(const LatticePoint& o, const LatticePoint& a, const LatticePoint& b) {
  return static_cast<i128>(a.x - o.x) * (b.x - o.x) + static_cast<i128>(a.y - o.y) * (b.y - o.y);
}

// ---------------------------------------------------------------------------
// Dissection search, in coordinates multiplied by 4.

struct Placement {
  std::array<std::int64_t, 4> linear;
  LatticePoint t4;
  std::array<LatticePoint, 3> v;  // counter-clockwise
};

std::array<LatticePoint, 3> place4(const std::array<std::int64_t, 4>& p, LatticePoint t4) {
  std::array<LatticePoint, 3> out;
  for (int i = 0; i < 3; ++i) {
    const LatticePoint q{2 * kDoubledT[i].x, 2 * kDoubledT[i].y};
    out[i] = {p[0] * q.x + p[1] * q.y + t4.x, p[2] * q.x + p[3] * q.y + t4.y};
  }
  if (cross2(out[0], out[1], out[2]) < 0) std::swap(out[1], out[2]);
  return out;
}

bool inside_closed(const std::array<LatticePoint, 3>& tri, const LatticePoint& p) {
  for (int i = 0; i < 3; ++i) {
    if (cross2(tri[i], tri[(i + 1) % 3], p) < 0) return false;
  }
  return true;
}

// Separating axis test: convex interiors are disjoint iff some edge line has
// the other triangle in its closed outer half-plane.
bool interiors_disjoint(const std::array<LatticePoint, 3>& a, const std::array<LatticePoint, 3>& b) {
  auto separated_by = [](const std::array<LatticePoint, 3>& s, const std::array<LatticePoint, 3>& o) {
    for (int i = 0; i < 3; ++i) {
      bool all_out = true;
      for (const auto& p : o) {
        if (cross2(s[i], s[(i + 1) % 3], p) > 0) {
          all_out = false;
          break;
        }
      }
      if (all_out) return true;
    }
    return false;
  };
  return separated_by(a, b) || separated_by(b, a);
}

Isometry placement_isometry(const std::array<std::int64_t, 4>& linear, LatticePoint t4) {
  return Isometry(to_mat(linear), 0, {Rational2_5(big(t4.x), 4), Rational2_5(big(t4.y), 4)});
}

bool child_order(const Isometry& a, const Isometry& b) {
  auto key = [](const Isometry& g) {
    const auto& m = g.linear();
    return std::make_tuple(m.a.get_si(), m.b.get_si(), m.c.get_si(), m.d.get_si(),
                           g.translation().x, g.translation().y);
  };
  return key(a) < key(b);
}

Dissection certify(std::vector<Isometry> children) {
  Dissection d;
  d.children = std::move(children);
  d.certificate = exact_cover_check(inflated_triangle(), d.child_triangles());
  if (!d.certificate) throw NoDissectionFound("locked dissection fails its cover certificate");
  return d;
}

// ---------------------------------------------------------------------------
// Hypotenuse keys for the kite-domino merge.

struct EdgeKey {
  LatticePoint a, b;
  bool operator==(const EdgeKey&) const = default;
};

struct EdgeKeyHash {
  std::size_t operator()(const EdgeKey& k) const noexcept {
    const LatticePointHash h;
    return h(k.a) * 31 + h(k.b);
  }
};

EdgeKey hypotenuse_key(const std::array<LatticePoint, 3>& v) {
  return v[1] < v[2] ? EdgeKey{v[1], v[2]} : EdgeKey{v[2], v[1]};
}

Prototile classify_pair(const std::array<LatticePoint, 3>& t, const std::array<LatticePoint, 3>& u) {
  const LatticePoint& r = t[0];
  const LatticePoint& b = t[1];
  const LatticePoint& a = t[2];
  const LatticePoint& s = u[0];
  if (s == LatticePoint{a.x + b.x - r.x, a.y + b.y - r.y}) return Prototile::domino;
  const LatticePoint sum{r.x + s.x, r.y + s.y};
  const LatticePoint twice_b{2 * b.x, 2 * b.y};
  const bool perpendicular =
      static_cast<i128>(s.x - r.x) * (a.x - b.x) + static_cast<i128>(s.y - r.y) * (a.y - b.y) == 0;
  const bool midpoint_on_line =
      static_cast<i128>(a.x - b.x) * (sum.y - twice_b.y) -
          static_cast<i128>(a.y - b.y) * (sum.x - twice_b.x) ==
      0;
  if (s != r && perpendicular && midpoint_on_line) return Prototile::kite;
  throw GeometryError("triangles sharing a hypotenuse form neither a kite nor a domino");
}

// ---------------------------------------------------------------------------
// Vertex stars.

char edge_label(int i, int j) {
  const int lo = std::min(i, j);
  const int hi = std::max(i, j);
  if (lo == 0 && hi == 1) return 'S';
  if (lo == 0 && hi == 2) return 'L';
  return 'H';
}

constexpr std::array<char, 3> kCornerKind{'R', 'B', 'A'};

struct Corner {
  LatticePoint direction;  // first edge counter-clockwise
  Wedge wedge;
  std::uint32_t tile;
};

int half_plane(const LatticePoint& d) { return (d.y < 0 || (d.y == 0 && d.x < 0)) ? 1 : 0; }

bool angle_less(const LatticePoint& a, const LatticePoint& b) {
  const int ha = half_plane(a);
  const int hb = half_plane(b);
  if (ha != hb) return ha < hb;
  return static_cast<i128>(a.x) * b.y - static_cast<i128>(a.y) * b.x > 0;
}

std::string star_code(const std::vector<Wedge>& wedges) {
  std::string out;
  for (std::size_t i = 0; i < wedges.size(); ++i) {
    if (i > 0) out += '.';
    out += wedges[i].code();
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Prototiles

std::string_view prototile_name(Prototile id) {
  switch (id) {
    case Prototile::t_plus: return "T_plus";
    case Prototile::t_minus: return "T_minus";
    case Prototile::kite: return "Kite";
    case Prototile::domino: return "Domino";
  }
  return "?";
}

Prototile parse_prototile(std::string_view name) {
  for (const Prototile p : {Prototile::t_plus, Prototile::t_minus, Prototile::kite, Prototile::domino}) {
    if (prototile_name(p) == name) return p;
  }
  throw std::invalid_argument("unknown prototile '" + std::string(name) + "'");
}

Triangle reference_triangle() {
  Triangle t;
  for (int i = 0; i < 3; ++i) {
    t.vertices[i] = {Rational2_5(big(kDoubledT[i].x), 2), Rational2_5(big(kDoubledT[i].y), 2)};
  }
  return t;
}

std::array<LatticePoint, 3> reference_vertices_doubled() { return kDoubledT; }

std::vector<ExactPoint> prototile_polygon(Prototile id) {
  const Triangle t = reference_triangle();
  const auto& v = t.vertices;
  switch (id) {
    case Prototile::t_plus: return {v[0], v[1], v[2]};
    case Prototile::t_minus: return {{v[0].x, -v[0].y}, {v[1].x, -v[1].y}, {v[2].x, -v[2].y}};
    case Prototile::kite: {
      // T and its mirror image across the hypotenuse.
      const ExactPoint far{Rational2_5(mpz_class(11), 10), Rational2_5(mpz_class(3), 10)};
      return {v[0], v[1], far, v[2]};
    }
    case Prototile::domino:
      // T and its point reflection through the hypotenuse midpoint.
      return {v[0], v[1], {v[1].x, Rational2_5(mpz_class(3), 2)}, v[2]};
  }
  return {};
}

std::vector<ExactPoint> prototile_control_points(Prototile id) {
  switch (id) {
    case Prototile::t_plus:
    case Prototile::t_minus: return {{}};
    case Prototile::kite: return {{}, {Rational2_5(mpz_class(2), 5), Rational2_5(mpz_class(1), 5)}};
    case Prototile::domino: return {{}, {0, 1}};
  }
  return {};
}

Mat2 inflation_matrix() { return {2, 1, -1, 2}; }

Triangle inflated_triangle() {
  const Mat2 m = inflation_matrix();
  Triangle t = reference_triangle();
  for (auto& v : t.vertices) v = m.apply(v);
  return t;
}

// ---------------------------------------------------------------------------
// Dissection

std::vector<Triangle> Dissection::child_triangles() const {
  const Triangle t = reference_triangle();
  std::vector<Triangle> out;
  for (const auto& h : children) {
    Triangle c;
    for (int i = 0; i < 3; ++i) c.vertices[i] = h.apply(t.vertices[i]);
    out.push_back(c);
  }
  return out;
}

std::size_t Dissection::reflected_count() const {
  return static_cast<std::size_t>(
      std::count_if(children.begin(), children.end(), [](const Isometry& h) { return h.is_reflection(); }));
}

Dissection derive_dissection() {
  static constexpr std::array<std::array<std::int64_t, 4>, 8> kD4{{{1, 0, 0, 1},
                                                                   {0, -1, 1, 0},
                                                                   {-1, 0, 0, -1},
                                                                   {0, 1, -1, 0},
                                                                   {1, 0, 0, -1},
                                                                   {-1, 0, 0, 1},
                                                                   {0, 1, 1, 0},
                                                                   {0, -1, -1, 0}}};
  const std::array<std::int64_t, 4> m{2, 1, -1, 2};
  const auto parent = place4(m, {0, 0});
  std::int64_t lo_x = parent[0].x, hi_x = lo_x, lo_y = parent[0].y, hi_y = lo_y;
  for (const auto& p : parent) {
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  }

  const Placement anchor{{1, 0, 0, 1}, {0, 0}, place4({1, 0, 0, 1}, {0, 0})};
  std::vector<Placement> candidates;
  const std::int64_t reach = 8;  // quarter units; T fits in a 2 x 4 box
  for (const auto& p : kD4) {
    for (std::int64_t tx = lo_x - reach; tx <= hi_x + reach; ++tx) {
      for (std::int64_t ty = lo_y - reach; ty <= hi_y + reach; ++ty) {
        Placement c{p, {tx, ty}, place4(p, {tx, ty})};
        if (!std::all_of(c.v.begin(), c.v.end(), [&](const LatticePoint& q) { return inside_closed(parent, q); })) {
          continue;
        }
        if (!interiors_disjoint(c.v, anchor.v)) continue;
        candidates.push_back(c);
      }
    }
  }

  const std::size_t n = candidates.size();
  std::vector<std::vector<bool>> ok(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      ok[i][j] = ok[j][i] = interiors_disjoint(candidates[i].v, candidates[j].v);
    }
  }
  // Four pairwise disjoint unit triangles plus the anchor inside an area-5
  // triangle necessarily cover it.
  std::vector<std::array<std::size_t, 4>> covers;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!ok[a][b]) continue;
      for (std::size_t c = b + 1; c < n; ++c) {
        if (!ok[a][c] || !ok[b][c]) continue;
        for (std::size_t d = c + 1; d < n; ++d) {
          if (ok[a][d] && ok[b][d] && ok[c][d]) covers.push_back({a, b, c, d});
        }
      }
    }
  }
  if (covers.empty()) throw NoDissectionFound("no exact cover of M T by five unit triangles");
  if (covers.size() > 1) {
    throw MultipleDissectionsFound(std::to_string(covers.size()) + " distinct covers of M T");
  }

  std::vector<Isometry> rest;
  for (const std::size_t i : covers.front()) {
    rest.push_back(placement_isometry(candidates[i].linear, candidates[i].t4));
  }
  std::sort(rest.begin(), rest.end(), child_order);
  std::vector<Isometry> children{Isometry::identity()};
  children.insert(children.end(), rest.begin(), rest.end());
  Dissection d;
  d.children = std::move(children);
  d.certificate = exact_cover_check(inflated_triangle(), d.child_triangles());
  if (!d.certificate) throw NoDissectionFound("search result fails the exact cover check");
  return d;
}

const Dissection& pinwheel_dissection() {
  static const Dissection locked = certify({
      Isometry::identity(),
      Isometry(Mat2{-1, 0, 0, -1}, 0, {0, 1}),
      Isometry(Mat2{-1, 0, 0, 1}, 0, {-1, 0}),
      Isometry(Mat2{-1, 0, 0, 1}, 0, {0, 2}),
      Isometry(Mat2{0, -1, -1, 0}, 0, {0, -1}),
  });
  return locked;
}

std::vector<ChildMap> expanded_child_maps(const Dissection& d) {
  const Mat2 mt = inflation_matrix().transposed();
  std::vector<ChildMap> maps;
  for (const auto& h : d.children) {
    if (h.scale_exp() != 0 || !h.translation().is_integral()) {
      throw GeometryError("child placement " + h.str() + " is not an integral motion");
    }
    const Mat2 l = mt * h.linear();
    const ExactPoint u = mt.apply(h.translation());
    maps.push_back({{small(l.a), small(l.b), small(l.c), small(l.d)},
                    {small(u.x.numerator()), small(u.y.numerator())}});
  }
  return maps;
}

// ---------------------------------------------------------------------------
// Patches

Prototile tile_id(const PlacedTile& tile) {
  return tile.reflected() ? Prototile::t_minus : Prototile::t_plus;
}

Patch seed_patch(Prototile seed) {
  Patch p;
  p.seed = seed;
  switch (seed) {
    case Prototile::t_plus: p.tiles.push_back(PlacedTile{}); break;
    case Prototile::t_minus: p.tiles.push_back(PlacedTile{{1, 0, 0, -1}, {0, 0}}); break;
    default: throw std::invalid_argument("patches are seeded with a triangle");
  }
  return p;
}

Patch substitute(const Patch& patch, Backend backend) {
  static const std::vector<ChildMap> maps = expanded_child_maps(pinwheel_dissection());
  Patch out;
  out.level = patch.level + 1;
  out.seed = patch.seed;
  out.tiles = kernels::expand_tiles(backend, patch.tiles, maps, 5);
  return out;
}

Patch generate_patch(unsigned level, Prototile seed, Backend backend) {
  Patch p = seed_patch(seed);
  for (unsigned i = 0; i < level; ++i) p = substitute(p, backend);
  return p;
}

Isometry inflate_conjugate(const Isometry& g) {
  if (g.frame() != Frame::fixed) throw FrameMismatchError("conjugation acts on fixed-frame maps");
  const Mat2 m = inflation_matrix();
  return Isometry(m * g.linear() * m.transposed(), g.scale_exp() + 2, m.apply(g.translation()));
}

std::vector<Isometry> fixed_frame_placements(unsigned level) {
  const auto& children = pinwheel_dissection().children;
  std::vector<Isometry> words{Isometry::identity()};
  for (unsigned n = 0; n < level; ++n) {
    std::vector<Isometry> next;
    next.reserve(words.size() * children.size());
    for (const auto& g : words) {
      const Isometry lifted = inflate_conjugate(g);
      for (const auto& h : children) next.push_back(lifted.compose(h));
    }
    words = std::move(next);
  }
  return words;
}

void for_each_tile(unsigned level, Prototile seed,
                   const std::function<void(const PlacedTile&)>& visit) {
  const std::vector<ChildMap> maps = expanded_child_maps(pinwheel_dissection());
  std::vector<std::pair<PlacedTile, unsigned>> stack;
  stack.emplace_back(seed_patch(seed).tiles.front(), 0U);
  while (!stack.empty()) {
    const auto [tile, depth] = stack.back();
    stack.pop_back();
    if (depth == level) {
      visit(tile);
      continue;
    }
    const auto children = kernels::serial::expand_tiles({&tile, 1}, maps, 5);
    for (auto it = children.rbegin(); it != children.rend(); ++it) stack.emplace_back(*it, depth + 1);
  }
}

Isometry to_isometry(const PlacedTile& tile, unsigned level) {
  return Isometry(to_mat(tile.linear), level,
                  {Rational2_5(big(tile.translation[0]), 1), Rational2_5(big(tile.translation[1]), 1)},
                  Frame::expanded);
}

PlacedTile from_isometry(const Isometry& g) {
  if (g.frame() != Frame::expanded) throw FrameMismatchError("expected an expanded-frame isometry");
  if (!g.translation().is_integral()) throw GeometryError("tile translation is not integral");
  const auto& m = g.linear();
  return {{small(m.a), small(m.b), small(m.c), small(m.d)},
          {small(g.translation().x.numerator()), small(g.translation().y.numerator())}};
}

Isometry fixed_frame_isometry(const PlacedTile& tile, unsigned level) {
  Mat2 mn = Mat2::identity();
  for (unsigned i = 0; i < level; ++i) mn = mn * inflation_matrix();
  const mpz_class scale = pow5(level);
  const ExactPoint t = mn.apply({Rational2_5(big(tile.translation[0]), 1),
                                 Rational2_5(big(tile.translation[1]), 1)});
  return Isometry(mn * to_mat(tile.linear), 2 * level,
                  {t.x.divided_by(scale), t.y.divided_by(scale)});
}

ExactPoint to_fixed_frame(const LatticePoint& p, unsigned level) {
  Mat2 mn = Mat2::identity();
  for (unsigned i = 0; i < level; ++i) mn = mn * inflation_matrix();
  const mpz_class scale = pow5(level);
  const ExactPoint q = mn.apply({Rational2_5(big(p.x), 1), Rational2_5(big(p.y), 1)});
  return {q.x.divided_by(scale), q.y.divided_by(scale)};
}

std::array<LatticePoint, 3> doubled_vertices(const PlacedTile& tile) {
  return {tile.map_doubled(kDoubledT[0]), tile.map_doubled(kDoubledT[1]),
          tile.map_doubled(kDoubledT[2])};
}

Triangle expanded_triangle(const PlacedTile& tile) {
  Triangle t;
  const auto v = doubled_vertices(tile);
  for (int i = 0; i < 3; ++i) t.vertices[i] = {Rational2_5(big(v[i].x), 2), Rational2_5(big(v[i].y), 2)};
  return t;
}

std::vector<LatticePoint> control_points(const Patch& patch) {
  std::vector<LatticePoint> pts;
  pts.reserve(patch.tiles.size());
  for (const auto& t : patch.tiles) pts.push_back(t.control_point());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// ---------------------------------------------------------------------------
// Kites and dominoes

std::size_t KiteDominoPatch::count(Prototile id) const {
  return static_cast<std::size_t>(
      std::count_if(tiles.begin(), tiles.end(), [id](const KdTile& t) { return t.id == id; }));
}

KiteDominoPatch merge_to_kite_domino(const Patch& patch) {
  KiteDominoPatch out;
  out.level = patch.level;
  std::unordered_map<EdgeKey, std::vector<std::uint32_t>, EdgeKeyHash> by_edge;
  std::vector<std::array<LatticePoint, 3>> verts(patch.tiles.size());
  for (std::uint32_t i = 0; i < patch.tiles.size(); ++i) {
    verts[i] = doubled_vertices(patch.tiles[i]);
    by_edge[hypotenuse_key(verts[i])].push_back(i);
  }
  for (const auto& [key, members] : by_edge) {
    if (members.size() > 2) {
      throw AmbiguousPairing(std::to_string(members.size()) + " triangles share one hypotenuse");
    }
    if (members.size() == 1) {
      out.remainder.push_back(members[0]);
      continue;
    }
    const std::uint32_t i = std::min(members[0], members[1]);
    const std::uint32_t j = std::max(members[0], members[1]);
    out.tiles.push_back({classify_pair(verts[i], verts[j]), {i, j}});
  }
  std::sort(out.tiles.begin(), out.tiles.end(),
            [](const KdTile& a, const KdTile& b) { return a.triangles < b.triangles; });
  std::sort(out.remainder.begin(), out.remainder.end());
  return out;
}

mpq_class SubstitutionMatrix::perron_eigenvalue() const {
  const mpz_class a = counts[0][0], b = counts[0][1], c = counts[1][0], d = counts[1][1];
  const mpz_class trace = a + d;
  const mpz_class disc = trace * trace - 4 * (a * d - b * c);
  const mpz_class root = sqrt(disc);
  if (root * root != disc) throw InvariantViolation("Perron eigenvalue is irrational");
  mpq_class lambda(trace + root, 2);
  lambda.canonicalize();
  return lambda;
}

std::array<mpq_class, 2> SubstitutionMatrix::relative_frequencies() const {
  const mpq_class lambda = perron_eigenvalue();
  mpq_class x, y;
  if (counts[0][1] != 0) {
    x = counts[0][1];
    y = lambda - counts[0][0];
  } else {
    x = lambda - counts[1][1];
    y = counts[1][0];
  }
  const mpq_class s = x + y;
  if (sgn(s) == 0) throw InvariantViolation("degenerate Perron eigenvector");
  return {mpq_class(x / s), mpq_class(y / s)};
}

std::array<mpq_class, 2> SubstitutionMatrix::absolute_frequencies() const {
  // Kites and dominoes both consist of two unit triangles.
  const auto rel = relative_frequencies();
  const mpq_class mean_area = rel[0] * 2 + rel[1] * 2;
  return {mpq_class(rel[0] / mean_area), mpq_class(rel[1] / mean_area)};
}

SubstitutionMatrix kd_substitution_matrix() {
  const Patch host = generate_patch(3);
  const KiteDominoPatch merged = merge_to_kite_domino(host);
  SubstitutionMatrix m;
  for (const Prototile id : {Prototile::kite, Prototile::domino}) {
    const auto it = std::find_if(merged.tiles.begin(), merged.tiles.end(),
                                 [id](const KdTile& t) { return t.id == id; });
    if (it == merged.tiles.end()) {
      throw InternalPairingIncomplete(std::string(prototile_name(id)) + " missing from host patch");
    }
    Patch super;
    super.level = host.level;
    super.tiles = {host.tiles[it->triangles[0]], host.tiles[it->triangles[1]]};
    super = substitute(substitute(super));
    const KiteDominoPatch image = merge_to_kite_domino(super);
    if (!image.remainder.empty() || image.tiles.size() != 25) {
      throw InternalPairingIncomplete(std::string(prototile_name(id)) + " supertile leaves " +
                                      std::to_string(image.remainder.size()) + " unpaired triangles");
    }
    const std::size_t col = id == Prototile::kite ? 0 : 1;
    m.counts[0][col] = image.count(Prototile::kite);
    m.counts[1][col] = image.count(Prototile::domino);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Vertex stars

Wedge Wedge::mirrored() const {
  Wedge w = *this;
  if (kind == 'E') {
    w.position_num = position_den - position_num;
    return w;
  }
  auto other = [](char a, char b, char e) { return e == a ? b : a; };
  switch (kind) {
    case 'R': w.edge = other('S', 'L', edge); break;
    case 'B': w.edge = other('S', 'H', edge); break;
    default: w.edge = other('L', 'H', edge); break;
  }
  return w;
}

std::string Wedge::code() const {
  std::string s{kind, edge};
  if (kind == 'E') s += std::to_string(position_num) + "/" + std::to_string(position_den);
  return s;
}

std::strong_ordering operator<=>(const Wedge& a, const Wedge& b) {
  return std::tie(a.kind, a.edge, a.position_num, a.position_den) <=>
         std::tie(b.kind, b.edge, b.position_num, b.position_den);
}

std::string VertexStar::code() const { return star_code(wedges); }

std::vector<Wedge> canonical_star(std::vector<Wedge> cycle) {
  if (cycle.empty()) return cycle;
  std::vector<Wedge> mirror(cycle.rbegin(), cycle.rend());
  for (auto& w : mirror) w = w.mirrored();
  std::vector<Wedge> best = cycle;
  for (auto* seq : {&cycle, &mirror}) {
    for (std::size_t r = 0; r < seq->size(); ++r) {
      std::rotate(seq->begin(), seq->begin() + 1, seq->end());
      if (*seq < best) best = *seq;
    }
  }
  return best;
}

VertexStarCensus vertex_stars(const Patch& patch) {
  VertexStarCensus census;
  census.level = patch.level;

  std::unordered_map<LatticePoint, std::vector<Corner>, LatticePointHash> corners;
  std::vector<std::array<LatticePoint, 3>> verts(patch.tiles.size());
  for (std::uint32_t t = 0; t < patch.tiles.size(); ++t) {
    verts[t] = doubled_vertices(patch.tiles[t]);
    const auto& v = verts[t];
    const bool ccw = cross2(v[0], v[1], v[2]) > 0;
    for (int i = 0; i < 3; ++i) {
      const int next = ccw ? (i + 1) % 3 : (i + 2) % 3;
      const LatticePoint dir{v[next].x - v[i].x, v[next].y - v[i].y};
      corners[v[i]].push_back({dir, Wedge{kCornerKind[i], edge_label(i, next), 0, 1}, t});
    }
  }

  // Grid of tiles for locating vertices that sit inside another tile's edge.
  const double side = 4.0 * std::pow(std::sqrt(5.0), patch.level);
  const auto cell = static_cast<std::int64_t>(std::ceil(side)) + 1;
  auto floor_div = [](std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
  };
  std::unordered_map<LatticePoint, std::vector<std::uint32_t>, LatticePointHash> grid;
  for (std::uint32_t t = 0; t < verts.size(); ++t) {
    std::int64_t x0 = verts[t][0].x, x1 = x0, y0 = verts[t][0].y, y1 = y0;
    for (const auto& p : verts[t]) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
    for (std::int64_t cx = floor_div(x0, cell); cx <= floor_div(x1, cell); ++cx) {
      for (std::int64_t cy = floor_div(y0, cell); cy <= floor_div(y1, cell); ++cy) {
        grid[{cx, cy}].push_back(t);
      }
    }
  }
  auto edge_wedge = [&](const LatticePoint& p) -> std::optional<Corner> {
    const auto it = grid.find({floor_div(p.x, cell), floor_div(p.y, cell)});
    if (it == grid.end()) return std::nullopt;
    std::optional<Corner> found;
    for (const std::uint32_t t : it->second) {
      const auto& v = verts[t];
      for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3;
        const int w = (i + 2) % 3;
        if (cross2(v[i], v[j], p) != 0 || dot2(p, v[i], v[j]) >= 0) continue;
        if (found) throw GeometryError("vertex lies inside two tile edges");
        const bool start_i = cross2(p, v[i], v[w]) > 0;
        const LatticePoint& s = start_i ? v[i] : v[j];
        const LatticePoint& e = start_i ? v[j] : v[i];
        const i128 num = dot2(s, p, e);
        const i128 den = dot2(s, e, e);
        const auto g = std::gcd(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
        found = Corner{{s.x - p.x, s.y - p.y},
                       Wedge{'E', edge_label(i, j), static_cast<std::int64_t>(num) / g,
                             static_cast<std::int64_t>(den) / g},
                       t};
      }
    }
    return found;
  };

  std::vector<LatticePoint> keys;
  keys.reserve(corners.size());
  for (const auto& kv : corners) keys.push_back(kv.first);
  std::sort(keys.begin(), keys.end());

  std::map<std::vector<Wedge>, std::size_t> index;
  for (const auto& key : keys) {
    auto wedges = corners[key];
    int r = 0, a = 0, b = 0;
    for (const auto& c : wedges) {
      r += c.wedge.kind == 'R';
      a += c.wedge.kind == 'A';
      b += c.wedge.kind == 'B';
    }
    // Angles are pi/2, alpha and pi/2 - alpha with alpha/pi irrational.
    bool interior = a == b && r + b == 4;
    if (!interior && a == b && r + b == 2) {
      if (auto e = edge_wedge(key)) {
        wedges.push_back(*e);
        interior = true;
      }
    }
    if (!interior) {
      ++census.boundary_vertices;
      continue;
    }
    ++census.interior_vertices;
    std::sort(wedges.begin(), wedges.end(),
              [](const Corner& x, const Corner& y) { return angle_less(x.direction, y.direction); });
    std::vector<Wedge> cycle;
    for (const auto& c : wedges) cycle.push_back(c.wedge);
    auto canon = canonical_star(cycle);
    auto [it, fresh] = index.try_emplace(canon, census.classes.size());
    if (fresh) {
      VertexStar star;
      star.wedges = canon;
      star.representative = key;
      for (const auto& c : wedges) star.representative_tiles.push_back(c.tile);
      census.classes.push_back(std::move(star));
    }
    ++census.classes[it->second].count;
  }

  const mpz_class area = pow5(patch.level);
  for (auto& s : census.classes) s.frequency = mpq_class(mpz_class(static_cast<unsigned long>(s.count)), area);
  for (auto& s : census.classes) s.frequency.canonicalize();
  std::sort(census.classes.begin(), census.classes.end(), [](const VertexStar& x, const VertexStar& y) {
    if (x.count != y.count) return x.count > y.count;
    return x.code() < y.code();
  });
  return census;
}

}  // namespace pinwheel
