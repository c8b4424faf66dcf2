#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mlines/invariants.hpp"

namespace mlines {

// One verified statement inside a scenario; detail carries the exact
// integers that were compared.
struct CheckLine {
  std::string label;
  bool pass = false;
  std::string detail;
};

struct ScenarioReport {
  std::string name;
  uint64_t seed = 0;
  uint32_t field_char = 0;
  std::vector<CheckLine> checks;
  std::vector<std::string> notes;
  bool pass = false; // conjunction of all checks
};

// Registered verification scenarios, in execution order.
std::vector<std::string> scenario_names();

// Runs one scenario; throws std::invalid_argument for unknown names and
// std::runtime_error when a gated construction fails all reseed attempts.
ScenarioReport run_scenario(const std::string& name, const Ring& R,
                            uint64_t seed);

struct ExperimentReport {
  std::string family;
  uint64_t seed = 0;
  uint32_t field_char = 0;
  int trials = 0;
  int successes = 0;
  // -1 when the family has no fixed expectation and only reports frequency
  int expected = -1;
  std::vector<std::string> notes;
  bool pass = false;
};

std::vector<std::string> experiment_families();

// Repeats a randomized construction + check `trials` times with seeds
// forked from `seed`; reports the empirical success count at this
// characteristic.
ExperimentReport random_experiment(const std::string& family, int trials,
                                   const Ring& R, uint64_t seed);

// Deterministic renderings: identical (name, seed, field_char) give
// byte-identical output.
std::string render_text(const ScenarioReport& rep);
std::string render_json(const ScenarioReport& rep);
std::string render_text(const ExperimentReport& rep);
std::string render_json(const ExperimentReport& rep);

// Curve recipes: line, neighborhood(d), double(a), triple(a,b),
// quadruple(a,b), quintuple(a), union(R1,R2).  Leaf constructors draw
// random parameter forms from the seed; quintuple(a) builds the primitive
// tower by two successive extensions.
MultiLineCurve build_recipe(const Ring& R, const std::string& recipe,
                            uint64_t seed);

// Wraps a saturated ideal as a curve: certifies degree and genus by a
// Hilbert-polynomial fit, and extracts the quasiprimitive type when the
// curve lives on one coordinate line.
MultiLineCurve curve_from_ideal(GradedIdeal I, int window, std::string recipe,
                                uint64_t seed,
                                std::vector<std::string>* warnings = nullptr);

// JSON ideal files: field characteristic, variable names, generators as
// (exponent 4-tuple, coefficient) pairs.
std::string ideal_file_text(const MultiLineCurve& C);
void export_ideal(const MultiLineCurve& C, const std::string& path);
MultiLineCurve import_ideal(const Ring& R, const std::string& path,
                            int window, uint64_t seed,
                            std::vector<std::string>* warnings = nullptr);

// Shared regression corpus: every constructor family, degrees up to 5,
// levels up to 3, with the level at which extremality is expected or
// refuted.  Composite members expect genus extremal_genus(d, 0) and
// minimal surface degree d instead.
struct CorpusEntry {
  MultiLineCurve curve;
  int level = 0;
  bool expect_extremal = false;
};
std::vector<CorpusEntry> regression_corpus(const Ring& R, uint64_t seed);

} // namespace mlines
