// JSON schemas for the external interfaces, CSV export and the small string
// parsers shared with the CLI.
#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "eaton/analysis.hpp"
#include "eaton/predictor.hpp"
#include "eaton/raytrace.hpp"
#include "eaton/sl2.hpp"

namespace eaton {

using json = nlohmann::json;

// {"basis": [[b1x,b1y],[b2x,b2y]]}
json lattice_to_json(const Lattice2& L);
Lattice2 lattice_from_json(const json& j);

// Shorthands accepted by the CLI: "square", "hexagonal", "example54".
Lattice2 named_lattice(const std::string& name);

// [[a,b],[c,d]] with integer entries.
json sl2_to_json(const SL2Z& g);
SL2Z sl2_from_json(const json& j);

json prediction_to_json(const BandPrediction& p);
BandPrediction prediction_from_json(const json& j);

json band_report_to_json(const BandReport& r);
BandReport band_report_from_json(const json& j);

json deviation_to_json(const DeviationFit& f);
DeviationFit deviation_from_json(const json& j);

json trajectory_to_json(const Trajectory& t);

// time,x,y,tile1,tile2,sheet
void trajectory_to_csv(const Trajectory& t, std::ostream& os);

void series_to_csv(const std::vector<std::pair<double, double>>& series,
                   std::ostream& os, const std::string& value_name);

// Exact rational "p/q" or integer "p".
Rat parse_rational(const std::string& text);
// Decimal or "p/q" real.
double parse_real(const std::string& text);

const char* model_name(Model m);
const char* event_kind_name(EventKind k);

}  // namespace eaton
