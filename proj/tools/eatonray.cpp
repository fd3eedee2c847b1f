// eatonray: simulate vertical light rays in periodic retroreflector-lens
// arrays (round lenses or their flat-slit counterparts), predict the
// direction of the confining bands for periodic torus data, and verify band
// confinement numerically.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include "eaton/analysis.hpp"
#include "eaton/json_io.hpp"
#include "eaton/predictor.hpp"
#include "eaton/random.hpp"
#include "eaton/raytrace.hpp"
#include "eaton/sl2.hpp"
#include "eaton/verify.hpp"
#include "svg.hpp"

namespace fs = std::filesystem;
using namespace eaton;

namespace {

// Problems with the invocation itself (not the mathematics): exit code 2.
struct UsageError : Error {
  using Error::Error;
};

struct GlobalOpts {
  std::string config_path;
  std::uint64_t seed = 271828;
  std::string out_dir = ".";
  double tol_singular = 1e-10;
  std::string format = "json,csv";
  json config;  // validated --config contents
};

// Keys accepted in a --config file; anything else is rejected up front.
const std::set<std::string> kConfigKeys = {
    "lattice", "R",      "model", "tol_singular", "t_max",      "sample_dt",
    "seed",    "orbits", "start", "dir",          "u",          "word",
    "matrix",  "direction",       "functional",   "out",        "format",
    "suite"};

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  json j = json::parse(in, nullptr, true, true);
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (!kConfigKeys.count(k))
      throw UsageError("config: unknown key \"" + k + "\"");
  }
  return j;
}

template <typename T, typename F>
T cfg_or(const json& cfg, const std::string& key, const T& fallback, F&& conv) {
  if (cfg.contains(key)) return conv(cfg.at(key));
  return fallback;
}

Lattice2 resolve_lattice(const std::string& spec) {
  if (spec.empty()) throw Error("no lattice given (use --lattice)");
  if (spec.front() == '{') return lattice_from_json(json::parse(spec));
  if (fs::exists(spec) && spec.find('.') != std::string::npos) {
    std::ifstream in(spec);
    return lattice_from_json(json::parse(in));
  }
  return named_lattice(spec);
}

Lattice2 lattice_from_config_value(const json& v) {
  if (v.is_string()) return resolve_lattice(v.get<std::string>());
  return lattice_from_json(v);
}

Vec2 parse_vec_arg(const std::string& text, const char* what) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw UsageError(std::string(what) + ": expected \"x,y\"");
  try {
    return {parse_real(text.substr(0, comma)),
            parse_real(text.substr(comma + 1))};
  } catch (const Error& e) {
    throw UsageError(std::string(what) + ": " + e.what());
  }
}

TorusPoint parse_torus_arg(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError("--u: expected \"p/q,r/s\"");
  try {
    return {parse_rational(text.substr(0, comma)),
            parse_rational(text.substr(comma + 1))};
  } catch (const ExcludedPoint&) {
    throw;  // a well-formed but excluded point is a domain error
  } catch (const Error& e) {
    throw UsageError(std::string("--u: ") + e.what());
  }
}

double parse_radius(const std::string& text) {
  double R = 0.0;
  try {
    R = parse_real(text);
  } catch (const Error& e) {
    throw UsageError(std::string("--R: ") + e.what());
  }
  if (!(R > 0.0)) throw UsageError("--R must be positive");
  return R;
}

Model parse_model(const std::string& m) {
  if (m == "flat") return Model::Flat;
  if (m == "eaton") return Model::Eaton;
  throw UsageError("model must be \"flat\" or \"eaton\"");
}

bool format_has(const std::string& fmt, const std::string& what) {
  return fmt.find(what) != std::string::npos;
}

SL2Z matrix_from_args(const std::string& word, const std::string& matrix) {
  if (!word.empty() && !matrix.empty())
    throw UsageError("give either --word or --matrix, not both");
  try {
    if (!word.empty()) return word_to_matrix(parse_word(word));
    if (!matrix.empty()) return sl2_from_json(json::parse(matrix));
  } catch (const Overflow&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(std::string("bad matrix/word: ") + e.what());
  }
  throw UsageError("a matrix is required (--word or --matrix)");
}

void write_file(const fs::path& p, const std::string& contents) {
  std::ofstream out(p);
  if (!out) throw Error("cannot write " + p.string());
  out << contents;
}

// ------------------------------------------------------------ subcommands

int cmd_admissible(const GlobalOpts& g, const std::string& lattice_arg,
                   const std::string& r_arg) {
  const Lattice2 L = lattice_arg.empty() && g.config.contains("lattice")
                         ? lattice_from_config_value(g.config["lattice"])
                         : resolve_lattice(lattice_arg);
  const double R = r_arg.empty()
                       ? cfg_or(g.config, "R", 0.0,
                                [](const json& v) { return v.get<double>(); })
                       : parse_radius(r_arg);
  if (!(R > 0.0)) throw UsageError("R must be positive");
  const bool adm = is_admissible(L, R);
  json out{{"lattice", lattice_to_json(L)},
           {"R", R},
           {"admissible", adm},
           {"shortest_vector", shortest_vector_length(L)},
           {"slits_disjoint", slits_disjoint(L, R)},
           {"seed", g.seed}};
  std::cout << out.dump(2) << "\n";
  return adm ? 0 : 1;
}

int cmd_reduce_basis(const GlobalOpts& g, const std::string& lattice_arg,
                     const std::string& r_arg) {
  const Lattice2 L = resolve_lattice(lattice_arg);
  const Lattice2 red = gauss_reduce(L);
  json out{{"lattice", lattice_to_json(L)},
           {"reduced", lattice_to_json(red)},
           {"shortest_vector", red.b1.norm()},
           {"seed", g.seed}};
  if (!r_arg.empty()) {
    const double R = parse_radius(r_arg);
    const PositiveBasis B = positive_basis(L, R);
    out["positive_basis"] =
        json{{"gamma_plus", json::array({B.gamma_plus.x, B.gamma_plus.y})},
             {"gamma_minus", json::array({B.gamma_minus.x, B.gamma_minus.y})},
             {"R", R}};
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_predict(const GlobalOpts& g, const std::string& u_arg,
                const std::string& word, const std::string& matrix,
                const std::string& r_arg) {
  const TorusPoint u = parse_torus_arg(u_arg);
  const SL2Z h = matrix_from_args(word, matrix);
  const double R = parse_radius(r_arg);
  const BandPrediction p = predict_band_periodic(u, h, R);
  json out = prediction_to_json(p);
  out["u"] = json::array({u.x().str(), u.y().str()});
  out["h"] = sl2_to_json(h);
  if (!word.empty()) out["word"] = format_word(parse_word(word));
  out["R"] = R;
  out["seed"] = g.seed;
  // the reported lattice rendered through its canonical positive basis too
  if (p.lattice) {
    const PositiveBasis B = positive_basis(*p.lattice, R);
    out["positive_basis"] =
        json{{"gamma_plus", json::array({B.gamma_plus.x, B.gamma_plus.y})},
             {"gamma_minus", json::array({B.gamma_minus.x, B.gamma_minus.y})}};
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct TraceArgs {
  std::string lattice, r, model = "flat", start, dir = "up", tmax, sample_dt;
  std::string u, word, matrix;  // optional band overlay for the SVG
};

int cmd_trace(const GlobalOpts& g, const TraceArgs& a) {
  const Lattice2 L = a.lattice.empty() && g.config.contains("lattice")
                         ? lattice_from_config_value(g.config["lattice"])
                         : resolve_lattice(a.lattice);
  const double R =
      a.r.empty()
          ? cfg_or(g.config, "R", 0.0,
                   [](const json& v) { return v.get<double>(); })
          : parse_radius(a.r);
  if (!(R > 0.0)) throw UsageError("R must be positive");
  const Model model = parse_model(
      a.model.empty()
          ? cfg_or(g.config, "model", std::string("flat"),
                   [](const json& v) { return v.get<std::string>(); })
          : a.model);
  const SceneConfig cfg = SceneConfig::make(L, R, model, g.tol_singular);
  std::string start_text = a.start;
  if (start_text.empty() && g.config.contains("start")) {
    const json& s = g.config["start"];
    start_text = std::to_string(s[0].get<double>()) + "," +
                 std::to_string(s[1].get<double>());
  }
  const Vec2 start = parse_vec_arg(start_text, "--start");
  const int dir = a.dir == "down" ? -1 : +1;
  const double t_max =
      a.tmax.empty()
          ? cfg_or(g.config, "t_max", 1e4,
                   [](const json& v) { return v.get<double>(); })
          : parse_real(a.tmax);
  const double sample_dt =
      a.sample_dt.empty()
          ? cfg_or(g.config, "sample_dt", std::max(t_max / 20000.0, 1e-3),
                   [](const json& v) { return v.get<double>(); })
          : parse_real(a.sample_dt);

  const Trajectory t = trace(cfg, start, dir, t_max, sample_dt);

  fs::create_directories(g.out_dir);
  json summary{{"seed", g.seed},
               {"model", model_name(model)},
               {"events", t.events.size()},
               {"samples", t.samples.size()},
               {"singular_count", t.singular_count},
               {"files", json::array()}};

  if (format_has(g.format, "json")) {
    const fs::path p = fs::path(g.out_dir) / "trajectory.json";
    write_file(p, trajectory_to_json(t).dump(2) + "\n");
    summary["files"].push_back(p.string());
  }
  if (format_has(g.format, "csv")) {
    const fs::path p = fs::path(g.out_dir) / "trajectory.csv";
    std::ofstream os(p);
    trajectory_to_csv(t, os);
    summary["files"].push_back(p.string());
  }
  if (format_has(g.format, "svg")) {
    std::optional<BandOverlay> overlay;
    if (!a.u.empty()) {
      const BandPrediction pred = predict_band_periodic(
          parse_torus_arg(a.u), matrix_from_args(a.word, a.matrix), R);
      const BandReport rep = band_report(t, pred.direction);
      overlay =
          BandOverlay{pred.direction, std::max(rep.transverse_width, 1e-6)};
      summary["band_direction"] =
          json::array({pred.direction.x, pred.direction.y});
      summary["band_width"] = rep.transverse_width;
    }
    const fs::path p = fs::path(g.out_dir) / "trajectory.svg";
    std::ofstream os(p);
    render_scene_svg(os, t, overlay);
    summary["files"].push_back(p.string());
  }
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_band_report(const GlobalOpts& g, const TraceArgs& a,
                    const std::string& direction_arg,
                    const std::string& functional_arg) {
  const Lattice2 L = resolve_lattice(a.lattice);
  const double R = parse_radius(a.r);
  const SceneConfig cfg =
      SceneConfig::make(L, R, parse_model(a.model), g.tol_singular);
  const Vec2 start = parse_vec_arg(a.start, "--start");
  const double t_max = a.tmax.empty() ? 1e4 : parse_real(a.tmax);
  const double sample_dt = a.sample_dt.empty()
                               ? std::max(t_max / 20000.0, 1e-3)
                               : parse_real(a.sample_dt);

  Vec2 direction{0.0, 1.0};
  std::optional<Vec2> functional;
  json provenance;
  if (!direction_arg.empty()) {
    direction = parse_vec_arg(direction_arg, "--direction");
    provenance = "explicit";
  } else if (!a.u.empty()) {
    const BandPrediction p = predict_band_periodic(
        parse_torus_arg(a.u), matrix_from_args(a.word, a.matrix), R);
    direction = p.direction;
    functional = p.bounded_functional;
    provenance = "periodic-theorem";
  } else {
    throw Error("band-report needs --direction or --u with --word/--matrix");
  }
  if (!functional_arg.empty())
    functional = parse_vec_arg(functional_arg, "--functional");

  const Trajectory t =
      trace(cfg, start, a.dir == "down" ? -1 : +1, t_max, sample_dt, false);
  const BandReport rep = band_report(t, direction, functional);

  json out = band_report_to_json(rep);
  out["provenance"] = provenance;
  out["seed"] = g.seed;
  out["t_max"] = t_max;
  if (format_has(g.format, "csv")) {
    fs::create_directories(g.out_dir);
    const fs::path p = fs::path(g.out_dir) / "along_displacement.csv";
    std::ofstream os(p);
    series_to_csv(rep.along_displacement, os, "along");
    out["files"] = json::array({p.string()});
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_deviation(const GlobalOpts& g, const std::string& lattice_arg,
                  const std::string& r_arg, int orbits,
                  const std::string& tmax_arg) {
  const Lattice2 L = resolve_lattice(lattice_arg);
  const double R = parse_radius(r_arg);
  const SceneConfig cfg = SceneConfig::make(L, R, Model::Flat, g.tol_singular);
  const double t_max = tmax_arg.empty() ? 1e6 : parse_real(tmax_arg);

  Rng rng(g.seed);
  std::vector<double> slopes;
  json per_orbit = json::array();
  for (int i = 0; i < orbits; ++i) {
    const Vec2 start = random_start_in_domain(rng, cfg);
    const Trajectory t = trace(cfg, start, +1, t_max, 10.0, false);
    try {
      const DeviationFit fit = deviation_exponent(t);
      slopes.push_back(fit.slope);
      per_orbit.push_back(
          json{{"slope", fit.slope}, {"r_squared", fit.r_squared}});
    } catch (const InsufficientData& e) {
      per_orbit.push_back(json{{"error", e.what()}});
    }
  }
  std::sort(slopes.begin(), slopes.end());
  json out{{"seed", g.seed},
           {"orbits", orbits},
           {"t_max", t_max},
           {"fits", per_orbit}};
  if (!slopes.empty()) {
    const std::size_t n = slopes.size();
    out["median_slope"] =
        n % 2 ? slopes[n / 2] : 0.5 * (slopes[n / 2 - 1] + slopes[n / 2]);
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_compare(const GlobalOpts& g, const std::string& lattice_arg,
                const std::string& r_arg, const std::string& start_arg,
                const std::string& tmax_arg) {
  const Lattice2 L = resolve_lattice(lattice_arg);
  const double R = parse_radius(r_arg);
  const SceneConfig cf = SceneConfig::make(L, R, Model::Flat, g.tol_singular);
  const SceneConfig ce = SceneConfig::make(L, R, Model::Eaton, g.tol_singular);
  const Vec2 start = parse_vec_arg(start_arg, "--start");
  const double t_max = tmax_arg.empty() ? 1e4 : parse_real(tmax_arg);
  const double sup = compare_models(cf, ce, start, t_max);
  json out{{"sup_distance", sup},
           {"bound_2R", 2.0 * R},
           {"within_bound", sup <= 2.0 * R + 1e-12},
           {"t_max", t_max},
           {"seed", g.seed}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_verify(const GlobalOpts& g, const std::string& suite) {
  VerifyOptions opt;
  opt.seed = g.seed;
  std::cout << "suite=" << suite << " seed=" << g.seed << "\n";
  const auto results = run_suite(suite, opt);
  for (const CriterionResult& r : results) {
    const char* tag = r.soft ? (r.passed ? "SOFT-PASS" : "SOFT-FAIL")
                             : (r.passed ? "PASS" : "FAIL");
    std::printf("%-3s %-9s %s — %s\n", r.id.c_str(), tag, r.description.c_str(),
                r.details.c_str());
  }
  return all_hard_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "eatonray: vertical rays in periodic retroreflector arrays — band "
      "direction prediction and confinement checks.\n"
      "Word letters: L = [[1,1],[0,1]] (upper), R = [[1,0],[1,1]] (lower); "
      "exponents via ^, e.g. \"R^3 L\"."};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--config", g.config_path, "JSON config file (defaults)");
  app.add_option("--seed", g.seed, "RNG seed (echoed in outputs)");
  app.add_option("--out", g.out_dir, "output directory");
  app.add_option("--tol-singular", g.tol_singular, "singularity tolerance");
  app.add_option("--format", g.format, "output formats: json,csv,svg");

  std::string lattice_arg, r_arg, u_arg, word_arg, matrix_arg, start_arg;
  std::string direction_arg, functional_arg, tmax_arg, suite_arg = "all";
  int orbits = 20;
  TraceArgs targs;

  auto* adm = app.add_subcommand("admissible", "admissibility and slit checks");
  adm->add_option("--lattice", lattice_arg,
                  "square|hexagonal|example54|JSON|file");
  adm->add_option("--R", r_arg, "lens radius");

  auto* red =
      app.add_subcommand("reduce-basis", "Lagrange-reduced and positive bases");
  red->add_option("--lattice", lattice_arg)->required();
  red->add_option("--R", r_arg, "also compute the positive basis for this radius");

  auto* prd = app.add_subcommand("predict", "periodic band-direction prediction");
  prd->add_option("--u", u_arg, "rational marked point, e.g. 1/3,0")->required();
  prd->add_option("--word", word_arg, "generator word, e.g. \"R^3 L\"");
  prd->add_option("--matrix", matrix_arg, "integer matrix [[a,b],[c,d]]");
  prd->add_option("--R", r_arg, "lens radius")->required();

  auto* trc = app.add_subcommand("trace", "trace one ray and export it");
  trc->add_option("--lattice", targs.lattice);
  trc->add_option("--R", targs.r);
  trc->add_option("--model", targs.model, "flat|eaton");
  trc->add_option("--start", targs.start, "x,y");
  trc->add_option("--dir", targs.dir, "up|down");
  trc->add_option("--tmax", targs.tmax);
  trc->add_option("--sample-dt", targs.sample_dt);
  trc->add_option("--u", targs.u, "overlay: rational marked point");
  trc->add_option("--word", targs.word, "overlay: generator word");
  trc->add_option("--matrix", targs.matrix, "overlay: integer matrix");

  auto* bnd = app.add_subcommand("band-report", "confinement report for one ray");
  bnd->add_option("--lattice", targs.lattice)->required();
  bnd->add_option("--R", targs.r)->required();
  bnd->add_option("--model", targs.model, "flat|eaton");
  bnd->add_option("--start", targs.start)->required();
  bnd->add_option("--dir", targs.dir, "up|down");
  bnd->add_option("--tmax", targs.tmax);
  bnd->add_option("--sample-dt", targs.sample_dt);
  bnd->add_option("--direction", direction_arg, "band direction dx,dy");
  bnd->add_option("--u", targs.u, "predict the direction from this point");
  bnd->add_option("--word", targs.word);
  bnd->add_option("--matrix", targs.matrix);
  bnd->add_option("--functional", functional_arg, "override (a,b)");

  auto* dev = app.add_subcommand("deviation", "deviation-exponent fits");
  dev->add_option("--lattice", lattice_arg)->required();
  dev->add_option("--R", r_arg)->required();
  dev->add_option("--orbits", orbits);
  dev->add_option("--tmax", tmax_arg);

  auto* cmp = app.add_subcommand("compare", "flat vs round orbit distance");
  cmp->add_option("--lattice", lattice_arg)->required();
  cmp->add_option("--R", r_arg)->required();
  cmp->add_option("--start", start_arg)->required();
  cmp->add_option("--tmax", tmax_arg);

  auto* ver = app.add_subcommand("verify", "run the verification suites");
  ver->add_option("--suite", suite_arg,
                  "example54|correspondence|algebraic|deviation|"
                  "admissibility|hand-orbit|all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (!g.config_path.empty()) g.config = load_config(g.config_path);
    if (g.config.contains("seed") && !app.count("--seed"))
      g.seed = g.config["seed"].get<std::uint64_t>();
    if (g.config.contains("out") && !app.count("--out"))
      g.out_dir = g.config["out"].get<std::string>();
    if (g.config.contains("format") && !app.count("--format"))
      g.format = g.config["format"].get<std::string>();
    if (g.config.contains("tol_singular") && !app.count("--tol-singular"))
      g.tol_singular = g.config["tol_singular"].get<double>();

    if (adm->parsed()) return cmd_admissible(g, lattice_arg, r_arg);
    if (red->parsed()) return cmd_reduce_basis(g, lattice_arg, r_arg);
    if (prd->parsed()) return cmd_predict(g, u_arg, word_arg, matrix_arg, r_arg);
    if (trc->parsed()) return cmd_trace(g, targs);
    if (bnd->parsed())
      return cmd_band_report(g, targs, direction_arg, functional_arg);
    if (dev->parsed())
      return cmd_deviation(g, lattice_arg, r_arg, orbits, tmax_arg);
    if (cmp->parsed())
      return cmd_compare(g, lattice_arg, r_arg, start_arg, tmax_arg);
    if (ver->parsed()) return cmd_verify(g, suite_arg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
