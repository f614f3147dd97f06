#pragma once

// Serialization: patch JSON, CSV tables, JSON reports and self-contained SVG
// figures with a fixed 960x540 viewBox.

#include <string>
#include <vector>

#include "json.hpp"
#include "pinwheel/diffraction.hpp"
#include "pinwheel/radial_stats.hpp"
#include "pinwheel/substitution.hpp"

namespace pinwheel::io {

using nlohmann::json;

/// {level, seed, tiles:[{id, linear:[a,b,c,d], scale_exp, tx:[num,den], ty:[num,den]}]}
/// with tiles in the expanded frame (scale_exp = level, integral translation).
json patch_to_json(const Patch& patch);
/// Validates every tile (orthogonality at scale, integral translation) and
/// throws std::invalid_argument on malformed input.
Patch patch_from_json(const json& j);

/// CSV `k,intensity`.
std::string curve_csv(const RadialCurve& curve);

json curve_to_json(const RadialCurve& curve);
json histogram_to_json(const RadialHistogram& h);
json psf_to_json(const PsfReport& r);
json uniformity_to_json(const UniformityReport& r);
json superposition_to_json(const SuperpositionSummary& s);
json vertex_stars_to_json(const VertexStarCensus& c);
json shell_table_to_json(const ShellTable& t);

/// CSV `code,count,frequency`.
std::string vertex_stars_csv(const VertexStarCensus& c);

/// One polygon per tile, filled by prototile id. With a merge result, kites
/// and dominoes are drawn as quadrilaterals and unpaired triangles as such.
std::string patch_svg(const Patch& patch, const KiteDominoPatch* merged = nullptr);

/// Small multiples: the tiles around one representative vertex per class.
std::string vertex_stars_svg(const Patch& patch, const VertexStarCensus& census);

struct PlotOptions {
  std::string title;
  std::string x_label = "k";
  std::string y_label = "intensity";
  /// Draw vertical stems instead of a polyline (for discrete ring data).
  bool stems = false;
};

/// Line plot of one or more curves with labelled axes.
std::string curves_svg(const std::vector<RadialCurve>& curves, const PlotOptions& options);

}  // namespace pinwheel::io
