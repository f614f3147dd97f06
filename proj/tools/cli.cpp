#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pinwheel/diffraction.hpp"
#include "pinwheel/io.hpp"
#include "pinwheel/kernels.hpp"
#include "pinwheel/radial_stats.hpp"
#include "pinwheel/shelling.hpp"
#include "pinwheel/substitution.hpp"

namespace pinwheel::cli {

namespace {

using io::json;

struct Common {
  std::string output;
  std::string format;
  int threads = 0;
};

struct Result {
  std::string data;
  std::string summary;
};

double parse_real(const std::string& text) {
  if (text.find('/') != std::string::npos) {
    mpq_class q;
    if (q.set_str(text, 10) != 0 || q.get_den() == 0) {
      throw std::invalid_argument("not a rational number: '" + text + "'");
    }
    q.canonicalize();
    return q.get_d();
  }
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("not a number: '" + text + "'");
  return v;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

void add_common(CLI::App* sub, Common& c, std::vector<std::string> formats) {
  c.format = formats.front();
  sub->add_option("-o,--output", c.output, "Write data to this file instead of standard output");
  sub->add_option("-f,--format", c.format, "Output format")
      ->check(CLI::IsMember(formats))
      ->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker threads (0 = OpenMP default)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact pinwheel and square-lattice powder diffraction engine", "pinwheel"};
  app.require_subcommand(1);
  std::map<CLI::App*, std::function<Result()>> handlers;
  std::map<CLI::App*, Common*> commons;
  std::vector<std::unique_ptr<Common>> common_store;
  auto common_for = [&](CLI::App* sub, std::vector<std::string> formats) -> Common& {
    common_store.push_back(std::make_unique<Common>());
    add_common(sub, *common_store.back(), std::move(formats));
    commons[sub] = common_store.back().get();
    return *common_store.back();
  };

  // shell -------------------------------------------------------------------
  std::uint64_t shell_r2 = 0;
  {
    auto* sub = app.add_subcommand(
        "shell", "Shelling numbers of the square lattice: the number of points of Z^2 on each "
                 "circle x^2+y^2 = r^2, via the Gaussian ideal count a(n)");
    sub->add_option("--r2-max", shell_r2, "Largest squared radius (integer >= 1)")
        ->required()
        ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));
    Common& c = common_for(sub, {"csv", "json"});
    handlers[sub] = [&, &c = c] {
      const ShellTable t = enumerate_shells(shell_r2);
      std::uint64_t total = 0;
      for (const auto& e : t) total += e.count;
      return Result{c.format == "csv" ? shell_table_csv(t) : dump(io::shell_table_to_json(t)),
                    std::to_string(t.size()) + " shells, " + std::to_string(total) +
                        " lattice points with r^2 <= " + std::to_string(shell_r2)};
    };
  }

  // csl ---------------------------------------------------------------------
  std::int64_t csl_a = 0, csl_b = 0;
  {
    auto* sub = app.add_subcommand(
        "csl", "Coincidence site lattice index [Z^2 : Z^2 cap R Z^2] for the rotation "
               "R = (a+bi)^2/(a^2+b^2), by Hermite normal form");
    sub->add_option("--a", csl_a, "Real part of the primitive Gaussian integer")->required();
    sub->add_option("--b", csl_b, "Imaginary part of the primitive Gaussian integer")->required();
    Common& c = common_for(sub, {"json"});
    (void)c;
    handlers[sub] = [&] {
      const GaussianRotation rot{csl_a, csl_b};
      const RationalRotation r = rational_rotation(rot);
      const std::uint64_t index = csl_index(rot);
      const json j{{"a", csl_a}, {"b", csl_b}, {"norm", rot.norm()},
                   {"rotation", {r.p, r.q, r.n}}, {"index", index}};
      return Result{dump(j), "coincidence index " + std::to_string(index)};
    };
  }

  // generate ----------------------------------------------------------------
  unsigned gen_level = 0;
  std::string gen_seed = "T_plus";
  bool gen_merge = false;
  {
    auto* sub = app.add_subcommand(
        "generate", "Pinwheel patch sigma^n(T) from the exact five-triangle dissection of the "
                    "inflated triangle (expanded-frame integer coordinates)");
    sub->add_option("--level", gen_level, "Substitution level n")->required()->check(CLI::Range(0U, 10U));
    sub->add_option("--seed", gen_seed, "Seed prototile")
        ->check(CLI::IsMember({"T_plus", "T_minus"}))
        ->capture_default_str();
    sub->add_flag("--merge", gen_merge, "SVG only: draw the kite-domino tiling (hypotenuses removed)");
    Common& c = common_for(sub, {"json", "svg"});
    handlers[sub] = [&, &c = c] {
      const Patch p = generate_patch(gen_level, parse_prototile(gen_seed));
      std::string data;
      std::string extra;
      if (c.format == "json") {
        data = dump(io::patch_to_json(p));
      } else if (gen_merge) {
        const KiteDominoPatch kd = merge_to_kite_domino(p);
        data = io::patch_svg(p, &kd);
        extra = ", " + std::to_string(kd.count(Prototile::kite)) + " kites, " +
                std::to_string(kd.count(Prototile::domino)) + " dominoes, " +
                std::to_string(kd.remainder.size()) + " unpaired";
      } else {
        data = io::patch_svg(p);
      }
      return Result{data, std::to_string(p.size()) + " tiles at level " + std::to_string(p.level) + extra};
    };
  }

  // points ------------------------------------------------------------------
  unsigned pts_level = 0;
  std::string pts_frame = "expanded";
  {
    auto* sub = app.add_subcommand(
        "points", "Control points of the pinwheel patch sigma^n(T) (the Delone set Lambda), "
                  "exact coordinates");
    sub->add_option("--level", pts_level, "Substitution level n")->required()->check(CLI::Range(0U, 10U));
    sub->add_option("--frame", pts_frame, "expanded: integers scaled by (M^T)^n; fixed: unit tiles")
        ->check(CLI::IsMember({"expanded", "fixed"}))
        ->capture_default_str();
    Common& c = common_for(sub, {"csv", "json"});
    handlers[sub] = [&, &c = c] {
      const Patch p = generate_patch(pts_level);
      const auto cps = control_points(p);
      std::vector<std::pair<std::string, std::string>> rows;
      rows.reserve(cps.size());
      for (const auto& q : cps) {
        if (pts_frame == "expanded") {
          rows.emplace_back(std::to_string(q.x), std::to_string(q.y));
        } else {
          const ExactPoint f = to_fixed_frame(q, pts_level);
          rows.emplace_back(f.x.str(), f.y.str());
        }
      }
      std::string data;
      if (c.format == "csv") {
        data = "x,y\n";
        for (const auto& [x, y] : rows) data += x + "," + y + "\n";
      } else {
        json arr = json::array();
        for (const auto& [x, y] : rows) arr.push_back({x, y});
        data = dump({{"level", pts_level}, {"frame", pts_frame}, {"points", arr}});
      }
      return Result{data, std::to_string(cps.size()) + " control points (" + pts_frame + " frame)"};
    };
  }

  // autocorr ----------------------------------------------------------------
  unsigned ac_level = 8;
  double ac_fraction = 0.8;
  std::string ac_r2 = "5";
  {
    auto* sub = app.add_subcommand(
        "autocorr", "Radial autocorrelation eta(r) of the pinwheel control points: ordered pairs "
                    "in a centred ball per unit area, keyed by exact r^2 = (p^2+q^2)/5^l");
    sub->add_option("--level", ac_level, "Substitution level n")->capture_default_str()->check(CLI::Range(0U, 10U));
    sub->add_option("--window-fraction", ac_fraction, "Window radius as a fraction of the patch inradius")
        ->capture_default_str()
        ->check(CLI::Range(1e-9, 1.0));
    sub->add_option("--r2-max", ac_r2, "Largest squared distance, NUM/DEN")->capture_default_str();
    Common& c = common_for(sub, {"csv", "json"});
    handlers[sub] = [&, &c = c] {
      const RadiusKey cutoff = RadiusKey::from_rational(Rational2_5::parse(ac_r2).value());
      const RadialHistogram h = radial_autocorrelation(generate_patch(ac_level), ac_fraction, cutoff);
      const double eta0 = h.eta(RadiusKey{});
      return Result{c.format == "csv" ? histogram_csv(h) : dump(io::histogram_to_json(h)),
                    std::to_string(h.entries.size()) + " distances, window " +
                        fmt("%.4g", h.window_radius) + ", eta(0) = " + fmt("%.6f", eta0)};
    };
  }

  // diffract ----------------------------------------------------------------
  std::string df_source = "pinwheel";
  unsigned df_level = 5;
  double df_fraction = 0.8;
  std::string df_r2 = "625";
  double df_kmax = 3.0;
  std::size_t df_samples = 1200;
  bool df_drop = false;
  {
    auto* sub = app.add_subcommand(
        "diffract", "Radial diffraction intensity as a Bessel sum I(k) = sum_r eta(r) J0(2 pi k r), "
                    "for the pinwheel (estimated eta) or the square lattice (exact shelling numbers)");
    sub->add_option("--source", df_source, "pinwheel or square")
        ->check(CLI::IsMember({"pinwheel", "square"}))
        ->capture_default_str();
    sub->add_option("--level", df_level, "Pinwheel patch level")->capture_default_str()->check(CLI::Range(0U, 8U));
    sub->add_option("--window-fraction", df_fraction, "Pinwheel window / inradius")
        ->capture_default_str()
        ->check(CLI::Range(1e-9, 1.0));
    sub->add_option("--r2-max", df_r2, "Radial cutoff r^2, NUM/DEN")->capture_default_str();
    sub->add_option("--k-max", df_kmax, "Largest k")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--samples", df_samples, "Number of k samples")->capture_default_str()->check(CLI::Range(2, 1000000));
    sub->add_flag("--drop-central", df_drop,
                  "Omit r = 0 and subtract the density-squared disc term (central intensity)");
    Common& c = common_for(sub, {"csv", "json", "svg"});
    handlers[sub] = [&, &c = c] {
      const RadiusKey cutoff = RadiusKey::from_rational(Rational2_5::parse(df_r2).value());
      RadialMeasure m;
      int level = -1;
      if (df_source == "square") {
        if (cutoff.ell() != 0) throw std::invalid_argument("square cutoff must be an integer r^2");
        m = square_lattice_measure(cutoff.p2q2().get_ui());
      } else {
        level = static_cast<int>(df_level);
        m = measure_from_histogram(radial_autocorrelation(generate_patch(df_level), df_fraction, cutoff));
      }
      BesselSumOptions opt;
      opt.drop_central = df_drop;
      const auto ks = k_grid(df_kmax, df_samples);
      RadialCurve curve = bessel_sum_curve(m, ks, opt);
      curve.source = df_source == "square" ? "square lattice" : "pinwheel level " + std::to_string(df_level);
      curve.level = level;
      std::string data;
      if (c.format == "csv") {
        data = io::curve_csv(curve);
      } else if (c.format == "json") {
        data = dump(io::curve_to_json(curve));
      } else {
        data = io::curves_svg({curve}, {"Radial diffraction (Bessel sum, r^2 <= " + df_r2 + ")", "k",
                                        "intensity", false});
      }
      return Result{data, std::to_string(m.size()) + " radii, " + std::to_string(ks.size()) + " k samples"};
    };
  }

  // powder ------------------------------------------------------------------
  std::uint64_t pw_r2 = 625;
  {
    auto* sub = app.add_subcommand(
        "powder", "Idealized powder ring intensities of the square lattice: eta(r)/(2 pi r) at "
                  "each ring radius r");
    sub->add_option("--r2-max", pw_r2, "Largest squared radius (integer)")
        ->capture_default_str()
        ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 32));
    Common& c = common_for(sub, {"csv", "json", "svg"});
    handlers[sub] = [&, &c = c] {
      RadialCurve curve = powder_curve_exact(pw_r2);
      std::string data;
      if (c.format == "csv") {
        data = io::curve_csv(curve);
      } else if (c.format == "json") {
        data = dump(io::curve_to_json(curve));
      } else {
        data = io::curves_svg({curve}, {"Square-lattice powder ring intensities", "r", "eta(r)/(2 pi r)", true});
      }
      return Result{data, std::to_string(curve.samples.size()) + " rings"};
    };
  }

  // psf-check ---------------------------------------------------------------
  std::string psf_t;
  std::optional<std::uint64_t> psf_r2;
  {
    auto* sub = app.add_subcommand(
        "psf-check", "Radial Poisson summation on a Gaussian: sum eta(r) e^{-pi t r^2} against "
                     "(1/t) sum eta(r) e^{-pi r^2/t} over the shells of Z^2");
    sub->add_option("--t", psf_t, "Gaussian parameter t > 0 (decimal or NUM/DEN)")->required();
    sub->add_option("--r2-max", psf_r2, "Explicit r^2 cutoff (default: from the tail bound)");
    Common& c = common_for(sub, {"json"});
    (void)c;
    handlers[sub] = [&] {
      const PsfReport r = psf_gaussian_check(parse_real(psf_t), psf_r2);
      return Result{dump(io::psf_to_json(r)),
                    "defect " + fmt("%.3e", r.defect) + " with r^2 <= " + std::to_string(r.r2_cutoff)};
    };
  }

  // radial-transform --------------------------------------------------------
  int rt_d = 2;
  double rt_r = 1.0;
  double rt_kmax = 3.0;
  std::size_t rt_samples = 1200;
  {
    auto* sub = app.add_subcommand(
        "radial-transform", "Fourier transform of the uniform measure on the sphere of radius r in "
                            "R^d: Gamma(d/2) J_{d/2-1}(2 pi k r)/(pi k r)^{d/2-1}");
    sub->add_option("--d", rt_d, "Dimension 1..5")->capture_default_str()->check(CLI::Range(1, 5));
    sub->add_option("--r", rt_r, "Sphere radius")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--k-max", rt_kmax, "Largest k")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--samples", rt_samples, "Number of k samples")->capture_default_str()->check(CLI::Range(2, 1000000));
    Common& c = common_for(sub, {"csv", "json", "svg"});
    handlers[sub] = [&, &c = c] {
      RadialCurve curve;
      curve.source = "mu_r, d = " + std::to_string(rt_d);
      curve.r_cutoff = rt_r;
      for (const double k : k_grid(rt_kmax, rt_samples)) curve.samples.push_back({k, radial_transform_mu(rt_d, rt_r, k)});
      std::string data;
      if (c.format == "csv") {
        data = io::curve_csv(curve);
      } else if (c.format == "json") {
        data = dump(io::curve_to_json(curve));
      } else {
        data = io::curves_svg({curve}, {"Radial transform of the sphere measure", "k", "mu_r(k)", false});
      }
      return Result{data, std::to_string(curve.samples.size()) + " samples"};
    };
  }

  // vertex-stars ------------------------------------------------------------
  unsigned vs_level = 6;
  {
    auto* sub = app.add_subcommand(
        "vertex-stars", "Congruence classes of vertex stars of the pinwheel tiling with their "
                        "absolute frequencies (interior vertices of sigma^n(T))");
    sub->add_option("--level", vs_level, "Substitution level n")->capture_default_str()->check(CLI::Range(1U, 9U));
    Common& c = common_for(sub, {"json", "csv", "svg"});
    handlers[sub] = [&, &c = c] {
      const Patch p = generate_patch(vs_level);
      const VertexStarCensus census = vertex_stars(p);
      std::string data;
      if (c.format == "json") {
        data = dump(io::vertex_stars_to_json(census));
      } else if (c.format == "csv") {
        data = io::vertex_stars_csv(census);
      } else {
        data = io::vertex_stars_svg(p, census);
      }
      return Result{data, std::to_string(census.classes.size()) + " classes over " +
                              std::to_string(census.interior_vertices) + " interior vertices"};
    };
  }

  // uniformity --------------------------------------------------------------
  double un_angle = 1.0;
  double un_window = 200.0;
  int un_bins = 8;
  {
    auto* sub = app.add_subcommand(
        "uniformity", "Equidistribution of x - y mod 1 for x in Z^2, y in R Z^2 inside a ball: the "
                      "Lebesgue term of the two-lattice cross-correlation");
    sub->add_option("--angle", un_angle, "Rotation angle in radians")->capture_default_str();
    sub->add_option("--window", un_window, "Ball radius")->capture_default_str()->check(CLI::Range(1e-9, 1e5));
    sub->add_option("--bins", un_bins, "Bins per axis")->capture_default_str()->check(CLI::Range(1, 1024));
    Common& c = common_for(sub, {"json"});
    (void)c;
    handlers[sub] = [&] {
      const UniformityReport r = cross_correlation_uniformity(un_angle, un_window, un_bins);
      return Result{dump(io::uniformity_to_json(r)),
                    "max relative deviation " + fmt("%.4g", r.max_relative_deviation) +
                        (r.warning ? " (warning: " + *r.warning + ")" : std::string())};
    };
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help on a subcommand
      for (auto* sub : app.get_subcommands()) out << sub->help();
      if (app.get_subcommands().empty()) out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitBadArguments;
  }

  CLI::App* sub = app.get_subcommands().front();
  const Common& common = *commons.at(sub);
  try {
    kernels::set_thread_count(common.threads);
    const auto t0 = std::chrono::steady_clock::now();
    const Result r = handlers.at(sub)();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (common.output.empty()) {
      out << r.data;
    } else {
      std::ofstream f(common.output, std::ios::binary);
      if (!f) throw std::invalid_argument("cannot open output file '" + common.output + "'");
      f << r.data;
      if (!f) throw std::runtime_error("write to '" + common.output + "' failed");
    }
    err << sub->get_name() << ": " << r.summary << " (" << fmt("%.3f", secs) << " s)\n";
    return kExitOk;
  } catch (const InvariantViolation& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const DenominatorError& e) {
    // only reachable from user-supplied rationals
    err << "error: " << e.what() << "\n";
    return kExitBadArguments;
  } catch (const NonCanonicalDistance& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadArguments;
  } catch (const GeometryError& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadArguments;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadArguments;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace pinwheel::cli
