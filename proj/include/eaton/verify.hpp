// Desk-scale verification batteries: the symbolic example, dynamic band
// confinement, the flat/round correspondence, algebraic property suites and
// the deviation diagnostic. Shared by the acceptance runner and the CLI.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eaton/lattice.hpp"
#include "eaton/random.hpp"
#include "eaton/raytrace.hpp"

namespace eaton {

struct CriterionResult {
  std::string id;
  std::string description;
  bool passed = false;
  bool soft = false;  // soft results are reported but never fail a run
  std::string details;
};

struct VerifyOptions {
  std::uint64_t seed = 271828;
  unsigned threads = 0;  // 0 = hardware concurrency
};

// Suites: "example54" (A1-A3), "correspondence" (A4), "algebraic" (A5),
// "deviation" (A6), "admissibility" (A7), "hand-orbit" (A8), "all".
std::vector<std::string> suite_names();

std::vector<CriterionResult> run_suite(const std::string& name,
                                       const VerifyOptions& opt);

bool all_hard_passed(const std::vector<CriterionResult>& results);

// Samplers used by the batteries; seeded and reproducible.
Lattice2 random_unimodular_lattice(Rng& rng);
Lattice2 random_admissible_lattice(Rng& rng, double R);
Vec2 random_start_in_domain(Rng& rng, const SceneConfig& cfg);

}  // namespace eaton
