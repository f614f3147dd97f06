#include "pinwheel/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace pinwheel::io {

namespace {

constexpr double kWidth = 960.0;
constexpr double kHeight = 540.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string svg_open() {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 960 540\" width=\"960\" "
         "height=\"540\">\n<rect x=\"0\" y=\"0\" width=\"960\" height=\"540\" fill=\"white\"/>\n";
}

const char* fill_for(Prototile id) {
  switch (id) {
    case Prototile::t_plus: return "#8fb3d9";
    case Prototile::t_minus: return "#e8a87c";
    case Prototile::kite: return "#9ccc65";
    case Prototile::domino: return "#ffd54f";
  }
  return "#cccccc";
}

struct Viewport {
  double x0 = 0, y0 = 0, scale = 1, ox = 0, oy = 0;

  static Viewport fit(double minx, double miny, double maxx, double maxy, double left, double top,
                      double width, double height) {
    Viewport v;
    const double w = std::max(maxx - minx, 1e-12);
    const double h = std::max(maxy - miny, 1e-12);
    v.scale = std::min(width / w, height / h);
    v.x0 = minx;
    v.y0 = miny;
    v.ox = left + (width - w * v.scale) / 2.0;
    v.oy = top + height - (height - h * v.scale) / 2.0;
    return v;
  }
  double x(double px) const { return ox + (px - x0) * scale; }
  double y(double py) const { return oy - (py - y0) * scale; }
};

std::string polygon(const std::vector<LatticePoint>& pts, const Viewport& v, const char* fill,
                    double stroke) {
  std::string s = "<polygon points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i > 0) s += ' ';
    s += num(v.x(static_cast<double>(pts[i].x))) + "," + num(v.y(static_cast<double>(pts[i].y)));
  }
  s += "\" fill=\"";
  s += fill;
  s += "\" stroke=\"#333333\" stroke-width=\"" + num(stroke) + "\"/>\n";
  return s;
}

std::string q_str(const mpq_class& q) { return q.get_str(); }

}  // namespace

json patch_to_json(const Patch& patch) {
  json tiles = json::array();
  for (const auto& t : patch.tiles) {
    tiles.push_back({{"id", std::string(prototile_name(tile_id(t)))},
                     {"linear", {t.linear[0], t.linear[1], t.linear[2], t.linear[3]}},
                     {"scale_exp", patch.level},
                     {"tx", {t.translation[0], 1}},
                     {"ty", {t.translation[1], 1}}});
  }
  return {{"level", patch.level}, {"seed", std::string(prototile_name(patch.seed))}, {"tiles", tiles}};
}

Patch patch_from_json(const json& j) {
  try {
    Patch p;
    p.level = j.at("level").get<unsigned>();
    p.seed = parse_prototile(j.at("seed").get<std::string>());
    for (const auto& t : j.at("tiles")) {
      const auto lin = t.at("linear").get<std::vector<std::int64_t>>();
      const auto tx = t.at("tx").get<std::vector<std::int64_t>>();
      const auto ty = t.at("ty").get<std::vector<std::int64_t>>();
      if (lin.size() != 4 || tx.size() != 2 || ty.size() != 2) {
        throw std::invalid_argument("tile arrays have the wrong length");
      }
      if (t.at("scale_exp").get<unsigned>() != p.level) {
        throw std::invalid_argument("tile scale_exp differs from the patch level");
      }
      const Isometry g(Mat2{lin[0], lin[1], lin[2], lin[3]}, p.level,
                       {Rational2_5(tx[0], tx[1]), Rational2_5(ty[0], ty[1])}, Frame::expanded);
      PlacedTile tile = from_isometry(g);
      if (std::string(prototile_name(tile_id(tile))) != t.at("id").get<std::string>()) {
        throw std::invalid_argument("tile id does not match the sign of its determinant");
      }
      p.tiles.push_back(tile);
    }
    return p;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed patch JSON: ") + e.what());
  } catch (const GeometryError& e) {
    throw std::invalid_argument(std::string("invalid tile: ") + e.what());
  }
}

std::string curve_csv(const RadialCurve& curve) {
  std::ostringstream os;
  os.precision(17);
  os << "k,intensity\n";
  for (const auto& s : curve.samples) os << s.k << ',' << s.value << '\n';
  return os.str();
}

json curve_to_json(const RadialCurve& curve) {
  json samples = json::array();
  for (const auto& s : curve.samples) samples.push_back({s.k, s.value});
  return {{"source", curve.source}, {"r_cutoff", curve.r_cutoff}, {"level", curve.level},
          {"samples", samples}};
}

json histogram_to_json(const RadialHistogram& h) {
  json entries = json::array();
  for (const auto& [key, e] : h.entries) {
    entries.push_back({{"p2q2", key.p2q2().get_str()},
                       {"ell", key.ell()},
                       {"r_squared", key.str()},
                       {"pair_count", e.pair_count},
                       {"eta_estimate", e.eta_estimate}});
  }
  return {{"level", h.level}, {"window_radius", h.window_radius}, {"entries", entries}};
}

json psf_to_json(const PsfReport& r) {
  return {{"t", r.t},         {"r2_cutoff", r.r2_cutoff}, {"lhs", r.lhs},
          {"rhs", r.rhs},     {"defect", r.defect},       {"tail_bound", r.tail_bound}};
}

json uniformity_to_json(const UniformityReport& r) {
  json j{{"angle", r.angle},
         {"window_radius", r.window_radius},
         {"bins", r.bins},
         {"lattice_points", r.lattice_points},
         {"rotated_points", r.rotated_points},
         {"pairs", r.pairs},
         {"max_relative_deviation", r.max_relative_deviation},
         {"histogram", r.histogram}};
  j["warning"] = r.warning ? json(*r.warning) : json(nullptr);
  return j;
}

json superposition_to_json(const SuperpositionSummary& s) {
  json j{{"n_lattices", s.n_lattices},
         {"central_weight", q_str(s.central_weight)},
         {"diffuse_central", q_str(s.diffuse_central)},
         {"bragg_central", q_str(s.bragg_central)},
         {"per_bragg_weight", q_str(s.per_bragg_weight)},
         {"ring_weight_per_lattice_point", q_str(s.ring_weight_per_lattice_point)}};
  if (s.coincidence) {
    const auto& c = *s.coincidence;
    j["coincidence"] = {{"a", c.rotation.a},
                        {"b", c.rotation.b},
                        {"rotation", {c.rational.p, c.rational.q, c.rational.n}},
                        {"theta_index", c.theta_index},
                        {"weight_on_theta", q_str(c.weight_on_theta)},
                        {"weight_off_theta", q_str(c.weight_off_theta)}};
  } else {
    j["coincidence"] = nullptr;
  }
  return j;
}

json vertex_stars_to_json(const VertexStarCensus& c) {
  json classes = json::array();
  for (const auto& s : c.classes) {
    json wedges = json::array();
    for (const auto& w : s.wedges) wedges.push_back(w.code());
    classes.push_back({{"code", s.code()},
                       {"wedges", wedges},
                       {"count", s.count},
                       {"frequency", q_str(s.frequency)},
                       {"frequency_value", s.frequency.get_d()}});
  }
  return {{"level", c.level},
          {"interior_vertices", c.interior_vertices},
          {"boundary_vertices", c.boundary_vertices},
          {"classes", classes}};
}

json shell_table_to_json(const ShellTable& t) {
  json rows = json::array();
  for (const auto& e : t) rows.push_back({{"r_squared", e.r_squared}, {"count", e.count}});
  return rows;
}

std::string vertex_stars_csv(const VertexStarCensus& c) {
  std::ostringstream os;
  os << "code,count,frequency\n";
  for (const auto& s : c.classes) os << s.code() << ',' << s.count << ',' << q_str(s.frequency) << '\n';
  return os.str();
}

std::string patch_svg(const Patch& patch, const KiteDominoPatch* merged) {
  std::vector<std::array<LatticePoint, 3>> verts;
  verts.reserve(patch.tiles.size());
  double minx = std::numeric_limits<double>::infinity(), miny = minx, maxx = -minx, maxy = -minx;
  for (const auto& t : patch.tiles) {
    verts.push_back(doubled_vertices(t));
    for (const auto& p : verts.back()) {
      minx = std::min(minx, static_cast<double>(p.x));
      maxx = std::max(maxx, static_cast<double>(p.x));
      miny = std::min(miny, static_cast<double>(p.y));
      maxy = std::max(maxy, static_cast<double>(p.y));
    }
  }
  std::string s = svg_open();
  if (verts.empty()) return s + "</svg>\n";
  const Viewport v = Viewport::fit(minx, miny, maxx, maxy, 20, 20, kWidth - 40, kHeight - 40);
  const double stroke = std::clamp(0.02 * v.scale, 0.05, 1.0);
  if (merged == nullptr) {
    for (std::size_t i = 0; i < verts.size(); ++i) {
      s += polygon({verts[i].begin(), verts[i].end()}, v, fill_for(tile_id(patch.tiles[i])), stroke);
    }
  } else {
    for (const auto& kd : merged->tiles) {
      const auto& a = verts[kd.triangles[0]];
      const auto& b = verts[kd.triangles[1]];
      s += polygon({a[0], a[1], b[0], a[2]}, v, fill_for(kd.id), stroke);
    }
    for (const auto i : merged->remainder) {
      s += polygon({verts[i].begin(), verts[i].end()}, v, fill_for(tile_id(patch.tiles[i])), stroke);
    }
  }
  return s + "</svg>\n";
}

std::string vertex_stars_svg(const Patch& patch, const VertexStarCensus& census) {
  std::string s = svg_open();
  const int cols = 4;
  const double pw = kWidth / cols;
  const int rows = std::max<int>(1, static_cast<int>((census.classes.size() + cols - 1) / cols));
  const double ph = kHeight / rows;
  for (std::size_t c = 0; c < census.classes.size(); ++c) {
    const auto& star = census.classes[c];
    const double left = static_cast<double>(c % cols) * pw;
    const double top = static_cast<double>(c / cols) * ph;
    const auto& o = star.representative;
    double reach = 1.0;
    std::vector<std::array<LatticePoint, 3>> tiles;
    for (const auto t : star.representative_tiles) {
      tiles.push_back(doubled_vertices(patch.tiles[t]));
      for (auto& p : tiles.back()) {
        p = {p.x - o.x, p.y - o.y};
        reach = std::max({reach, std::fabs(static_cast<double>(p.x)), std::fabs(static_cast<double>(p.y))});
      }
    }
    const Viewport v = Viewport::fit(-reach, -reach, reach, reach, left + 10, top + 8, pw - 20, ph - 34);
    for (std::size_t i = 0; i < tiles.size(); ++i) {
      const PlacedTile& t = patch.tiles[star.representative_tiles[i]];
      s += polygon({tiles[i].begin(), tiles[i].end()}, v, fill_for(tile_id(t)), 0.8);
    }
    s += "<circle cx=\"" + num(v.x(0)) + "\" cy=\"" + num(v.y(0)) + "\" r=\"2.5\" fill=\"black\"/>\n";
    s += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(top + ph - 10) +
         "\" font-family=\"monospace\" font-size=\"10\" text-anchor=\"middle\">" +
         xml_escape(std::to_string(c + 1) + ": " + q_str(star.frequency)) + "</text>\n";
  }
  return s + "</svg>\n";
}

std::string curves_svg(const std::vector<RadialCurve>& curves, const PlotOptions& options) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  const double left = 80, right = 20, top = 40, bottom = 55;
  double kmin = std::numeric_limits<double>::infinity(), kmax = -kmin, vmin = 0.0, vmax = 0.0;
  for (const auto& c : curves) {
    for (const auto& p : c.samples) {
      kmin = std::min(kmin, p.k);
      kmax = std::max(kmax, p.k);
      vmin = std::min(vmin, p.value);
      vmax = std::max(vmax, p.value);
    }
  }
  if (!std::isfinite(kmin)) {
    kmin = 0;
    kmax = 1;
  }
  if (vmax <= vmin) vmax = vmin + 1.0;
  const double pw = kWidth - left - right, ph = kHeight - top - bottom;
  auto X = [&](double k) { return left + (k - kmin) / std::max(kmax - kmin, 1e-12) * pw; };
  auto Y = [&](double val) { return top + ph - (val - vmin) / (vmax - vmin) * ph; };

  std::string s = svg_open();
  s += "<text x=\"480\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">" +
       xml_escape(options.title) + "</text>\n";
  s += "<line x1=\"" + num(left) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(left + pw) + "\" y2=\"" +
       num(top + ph) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" +
       num(top + ph) + "\" stroke=\"black\"/>\n";
  if (vmin < 0.0) {
    s += "<line x1=\"" + num(left) + "\" y1=\"" + num(Y(0)) + "\" x2=\"" + num(left + pw) + "\" y2=\"" +
         num(Y(0)) + "\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double k = kmin + (kmax - kmin) * i / 5.0;
    const double val = vmin + (vmax - vmin) * i / 5.0;
    s += "<line x1=\"" + num(X(k)) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(X(k)) + "\" y2=\"" +
         num(top + ph + 5) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + num(X(k)) + "\" y=\"" + num(top + ph + 18) +
         "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" + tick_label(k) + "</text>\n";
    s += "<line x1=\"" + num(left - 5) + "\" y1=\"" + num(Y(val)) + "\" x2=\"" + num(left) + "\" y2=\"" +
         num(Y(val)) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + num(left - 8) + "\" y=\"" + num(Y(val) + 4) +
         "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" + tick_label(val) + "</text>\n";
  }
  s += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(kHeight - 12) +
       "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">" + xml_escape(options.x_label) +
       "</text>\n";
  s += "<text x=\"18\" y=\"" + num(top + ph / 2) + "\" font-family=\"sans-serif\" font-size=\"13\" " +
       "text-anchor=\"middle\" transform=\"rotate(-90 18 " + num(top + ph / 2) + ")\">" +
       xml_escape(options.y_label) + "</text>\n";

  for (std::size_t c = 0; c < curves.size(); ++c) {
    const char* color = palette[c % 5];
    const auto& smp = curves[c].samples;
    if (options.stems) {
      for (const auto& p : smp) {
        s += "<line x1=\"" + num(X(p.k)) + "\" y1=\"" + num(Y(0)) + "\" x2=\"" + num(X(p.k)) + "\" y2=\"" +
             num(Y(p.value)) + "\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
      }
    } else {
      s += "<polyline fill=\"none\" stroke=\"";
      s += color;
      s += "\" stroke-width=\"1\" points=\"";
      for (std::size_t i = 0; i < smp.size(); ++i) {
        if (i > 0) s += ' ';
        s += num(X(smp[i].k)) + "," + num(Y(smp[i].value));
      }
      s += "\"/>\n";
    }
    if (!curves[c].source.empty()) {
      const double ly = top + 16 + 16 * static_cast<double>(c);
      s += "<line x1=\"" + num(left + pw - 170) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" + num(left + pw - 150) +
           "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
      s += "<text x=\"" + num(left + pw - 145) + "\" y=\"" + num(ly) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + xml_escape(curves[c].source) + "</text>\n";
    }
  }
  return s + "</svg>\n";
}

}  // namespace pinwheel::io
