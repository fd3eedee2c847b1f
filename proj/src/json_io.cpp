#include "eaton/json_io.hpp"

#include <cmath>
#include <ostream>

namespace eaton {

namespace {

json vec_to_json(Vec2 v) { return json::array({v.x, v.y}); }

Vec2 vec_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw Error("expected a [x, y] array");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

json lattice_to_json(const Lattice2& L) {
  return json{{"basis", json::array({vec_to_json(L.b1), vec_to_json(L.b2)})}};
}

Lattice2 lattice_from_json(const json& j) {
  if (!j.contains("basis")) throw Error("lattice JSON: missing \"basis\"");
  const json& b = j["basis"];
  if (!b.is_array() || b.size() != 2)
    throw Error("lattice JSON: \"basis\" must hold two vectors");
  return {vec_from_json(b[0]), vec_from_json(b[1])};
}

Lattice2 named_lattice(const std::string& name) {
  if (name == "square") return {{1.0, 0.0}, {0.0, 1.0}};
  if (name == "hexagonal") {
    // Equal-length basis at 60 degrees, rescaled to determinant 1.
    const double c = std::sqrt(2.0 / std::sqrt(3.0));
    return {{c, 0.0}, {c / 2.0, c * std::sqrt(3.0) / 2.0}};
  }
  if (name == "example54") {
    const double g = (3.0 + std::sqrt(21.0)) / 6.0;
    return {{1.0, 0.0}, {g, 1.0}};
  }
  throw Error("unknown lattice shorthand \"" + name + "\"");
}

json sl2_to_json(const SL2Z& g) {
  return json::array({json::array({g.a, g.b}), json::array({g.c, g.d})});
}

SL2Z sl2_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 ||
      !j[1].is_array() || j[1].size() != 2)
    throw Error("matrix JSON: expected [[a,b],[c,d]]");
  return {j[0][0].get<std::int64_t>(), j[0][1].get<std::int64_t>(),
          j[1][0].get<std::int64_t>(), j[1][1].get<std::int64_t>()};
}

json prediction_to_json(const BandPrediction& p) {
  json j{{"direction", vec_to_json(p.direction)},
         {"xi", vec_to_json(p.xi_coeffs)},
         {"functional", vec_to_json(p.bounded_functional)},
         {"method", p.method == PredictionMethod::PeriodicTheorem
                        ? "periodic-theorem"
                        : "empirical"}};
  if (p.slope)
    j["slope"] = *p.slope;
  else
    j["slope"] = "vertical";
  if (p.lattice) j["lattice"] = lattice_to_json(*p.lattice);
  if (p.eta)
    j["eta"] = json::array({json::array({p.eta->a, p.eta->b}),
                            json::array({p.eta->c, p.eta->d})});
  if (p.vartheta) j["vartheta"] = vec_to_json(*p.vartheta);
  if (p.induced_eigenvector)
    j["induced_eigenvector"] = vec_to_json(*p.induced_eigenvector);
  if (p.induced_class) j["induced_class"] = sl2_to_json(p.induced_class->rep());
  return j;
}

BandPrediction prediction_from_json(const json& j) {
  BandPrediction p;
  p.direction = vec_from_json(j.at("direction"));
  if (j.at("slope").is_string())
    p.slope = std::nullopt;
  else
    p.slope = j.at("slope").get<double>();
  p.xi_coeffs = vec_from_json(j.at("xi"));
  p.bounded_functional = vec_from_json(j.at("functional"));
  p.method = j.at("method").get<std::string>() == "periodic-theorem"
                 ? PredictionMethod::PeriodicTheorem
                 : PredictionMethod::Empirical;
  if (j.contains("lattice")) p.lattice = lattice_from_json(j["lattice"]);
  if (j.contains("eta")) {
    const json& e = j["eta"];
    p.eta = Mat2{e[0][0].get<double>(), e[0][1].get<double>(),
                 e[1][0].get<double>(), e[1][1].get<double>()};
  }
  if (j.contains("vartheta")) p.vartheta = vec_from_json(j["vartheta"]);
  if (j.contains("induced_eigenvector"))
    p.induced_eigenvector = vec_from_json(j["induced_eigenvector"]);
  if (j.contains("induced_class"))
    p.induced_class = PSL2Z(sl2_from_json(j["induced_class"]));
  return p;
}

json band_report_to_json(const BandReport& r) {
  json series = json::array();
  for (const auto& [t, v] : r.along_displacement)
    series.push_back(json::array({t, v}));
  return json{{"direction_used", vec_to_json(r.direction_used)},
              {"functional", vec_to_json(r.functional)},
              {"max_functional_dev", r.max_functional_dev},
              {"transverse_width", r.transverse_width},
              {"along_displacement", series},
              {"singular_flags", r.singular_flags}};
}

BandReport band_report_from_json(const json& j) {
  BandReport r;
  r.direction_used = vec_from_json(j.at("direction_used"));
  r.functional = vec_from_json(j.at("functional"));
  r.max_functional_dev = j.at("max_functional_dev").get<double>();
  r.transverse_width = j.at("transverse_width").get<double>();
  for (const auto& e : j.at("along_displacement"))
    r.along_displacement.emplace_back(e[0].get<double>(), e[1].get<double>());
  r.singular_flags = j.at("singular_flags").get<int>();
  return r;
}

json deviation_to_json(const DeviationFit& f) {
  return json{{"times", f.times},
              {"displacements", f.displacements},
              {"slope", f.slope},
              {"r_squared", f.r_squared}};
}

DeviationFit deviation_from_json(const json& j) {
  DeviationFit f;
  f.times = j.at("times").get<std::vector<double>>();
  f.displacements = j.at("displacements").get<std::vector<double>>();
  f.slope = j.at("slope").get<double>();
  f.r_squared = j.at("r_squared").get<double>();
  return f;
}

const char* model_name(Model m) { return m == Model::Flat ? "flat" : "eaton"; }

const char* event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::SlitHit: return "slit-hit";
    case EventKind::LensEntry: return "lens-entry";
    case EventKind::LensExit: return "lens-exit";
    case EventKind::CenterTurnback: return "center-turnback";
    case EventKind::SingularEndpoint: return "singular-endpoint";
  }
  return "unknown";
}

json trajectory_to_json(const Trajectory& t) {
  json events = json::array();
  for (const Event& e : t.events)
    events.push_back(json{{"kind", event_kind_name(e.kind)},
                          {"position", vec_to_json(e.position)},
                          {"lattice_point",
                           json::array({e.lattice_point.m1, e.lattice_point.m2})},
                          {"time", e.time}});
  json samples = json::array();
  for (const Sample& s : t.samples)
    samples.push_back(json::array(
        {s.time, s.position.x, s.position.y, s.tile.m1, s.tile.m2, s.sheet}));
  return json{
      {"config",
       {{"lattice", lattice_to_json(t.config.lattice)},
        {"R", t.config.radius},
        {"model", model_name(t.config.model)},
        {"tol_singular", t.config.tol_singular}}},
      {"start",
       {{"position", vec_to_json(t.start.pos)},
        {"dir", t.start.dir},
        {"tile", json::array({t.start.tile.m1, t.start.tile.m2})},
        {"sheet", t.start.sheet}}},
      {"events", events},
      {"samples", samples},
      {"singular_count", t.singular_count}};
}

void trajectory_to_csv(const Trajectory& t, std::ostream& os) {
  os << "time,x,y,tile1,tile2,sheet\n";
  char buf[160];
  for (const Sample& s : t.samples) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%lld,%lld,%d\n", s.time,
                  s.position.x, s.position.y,
                  static_cast<long long>(s.tile.m1),
                  static_cast<long long>(s.tile.m2), s.sheet);
    os << buf;
  }
}

void series_to_csv(const std::vector<std::pair<double, double>>& series,
                   std::ostream& os, const std::string& value_name) {
  os << "time," << value_name << "\n";
  char buf[80];
  for (const auto& [t, v] : series) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", t, v);
    os << buf;
  }
}

Rat parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rat(std::stoll(text));
    return Rat(std::stoll(text.substr(0, slash)),
               std::stoll(text.substr(slash + 1)));
  } catch (const std::logic_error&) {
    throw Error("cannot parse rational \"" + text + "\"");
  }
}

double parse_real(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size()) throw Error("trailing characters");
      return v;
    }
    return static_cast<double>(std::stoll(text.substr(0, slash))) /
           static_cast<double>(std::stoll(text.substr(slash + 1)));
  } catch (const std::logic_error&) {
    throw Error("cannot parse real \"" + text + "\"");
  }
}

}  // namespace eaton
