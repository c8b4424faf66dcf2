#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mlines/scenario.hpp"

using nlohmann::ordered_json;
using namespace mlines;

namespace {

uint32_t checked_char(uint32_t p) {
  if (!Fp::is_prime(p))
    throw CLI::ValidationError("--char", std::to_string(p) + " is not prime");
  return p;
}

void write_or_print(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string support_str(const MultiLineCurve& C) {
  if (C.composite) return "not a single coordinate line";
  return C.support == Support::xy ? "x = y = 0" : "z = w = 0";
}

// field characteristic recorded in an ideal file, for ring construction
uint32_t file_char(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  ordered_json j;
  try {
    j = ordered_json::parse(in);
    return j.at("field_char").get<uint32_t>();
  } catch (const std::exception& ex) {
    throw std::invalid_argument("malformed ideal file " + path + ": " +
                                ex.what());
  }
}

ordered_json curve_json(const MultiLineCurve& C, int s,
                        const std::vector<std::string>& warnings) {
  ordered_json j;
  j["recipe"] = C.recipe;
  j["field_char"] = C.ideal.ring().field().p();
  j["seed"] = C.seed;
  j["window"] = C.window;
  j["degree"] = C.degree;
  j["genus"] = C.genus;
  j["min_surface_degree"] = s;
  j["support"] = support_str(C);
  if (C.type) j["type"] = C.type->str();
  j["warnings"] = warnings;
  return j;
}

int cmd_construct(const std::string& recipe, uint32_t p, uint64_t seed,
                  const std::string& json_path) {
  Ring R(p);
  MultiLineCurve C = build_recipe(R, recipe, seed);
  std::cerr << "recipe: " << C.recipe << "\n"
            << "char: " << p << "\nseed: " << seed << "\n"
            << "degree: " << C.degree << "\ngenus: " << C.genus << "\n";
  if (C.type) std::cerr << "type: " << C.type->str() << "\n";
  write_or_print(ideal_file_text(C), json_path);
  return 0;
}

int cmd_invariants(const std::string& in, uint32_t p, uint64_t seed,
                   int window, const std::string& json_path) {
  uint32_t fc = file_char(in);
  if (p != 0 && p != fc)
    throw std::invalid_argument("--char " + std::to_string(p) +
                                " disagrees with the file (" +
                                std::to_string(fc) + ")");
  Ring R(checked_char(fc));
  std::vector<std::string> warnings;
  MultiLineCurve C = import_ideal(R, in, window, seed, &warnings);
  int s = min_surface_degree(C);

  std::cout << "file: " << in << "\nchar: " << fc << "\n"
            << "degree: " << C.degree << "\ngenus: " << C.genus << "\n"
            << "min surface degree: " << s << "\n"
            << "support: " << support_str(C) << "\n";
  if (C.type) std::cout << "type: " << C.type->str() << "\n";
  for (const std::string& w : warnings) std::cout << "warning: " << w << "\n";
  if (!json_path.empty())
    write_or_print(curve_json(C, s, warnings).dump(2) + "\n", json_path);
  return 0;
}

int cmd_check(const std::string& in, int level, uint32_t p, uint64_t seed,
              int window, const std::string& json_path) {
  uint32_t fc = file_char(in);
  if (p != 0 && p != fc)
    throw std::invalid_argument("--char " + std::to_string(p) +
                                " disagrees with the file (" +
                                std::to_string(fc) + ")");
  Ring R(checked_char(fc));
  std::vector<std::string> warnings;
  MultiLineCurve C = import_ideal(R, in, window, seed, &warnings);

  bool post = postulation_condition(C, level);
  ExtremalityReport er = extremality_report(C, level, seed);
  bool agree = er.crit_sections == er.crit_vanishing &&
               er.crit_sections == er.crit_splitting;

  std::cout << "file: " << in << "\nlevel: " << level << "\n"
            << "degree: " << er.degree << "\ngenus: " << er.genus
            << " (extremal " << extremal_genus(er.degree, level) << ")\n"
            << "postulation matches the neighborhood: "
            << (post ? "yes" : "no") << "\n"
            << "sections criterion: " << (er.crit_sections ? "yes" : "no")
            << " (h0 " << er.h0_curve << " vs " << er.h0_power << ")\n"
            << "vanishing criterion: " << (er.crit_vanishing ? "yes" : "no")
            << " (h1 " << er.h1_curve << ")\n"
            << "splitting criterion: " << (er.crit_splitting ? "yes" : "no")
            << " (twists";
  for (int t : er.splitting.twists) std::cout << " " << t;
  std::cout << ")\nextremal: " << (er.is_extremal ? "yes" : "no") << "\n";
  if (!agree) std::cout << "warning: the three criteria disagree\n";
  for (const std::string& w : warnings) std::cout << "warning: " << w << "\n";

  if (!json_path.empty()) {
    ordered_json j;
    j["file"] = in;
    j["field_char"] = fc;
    j["seed"] = seed;
    j["level"] = level;
    j["degree"] = er.degree;
    j["genus"] = er.genus;
    j["extremal_genus"] = extremal_genus(er.degree, level);
    j["postulation"] = post;
    j["criteria"] = {{"sections", er.crit_sections},
                     {"vanishing", er.crit_vanishing},
                     {"splitting", er.crit_splitting}};
    j["h0_curve"] = er.h0_curve;
    j["h0_power"] = er.h0_power;
    j["h1_curve"] = er.h1_curve;
    j["twists"] = er.splitting.twists;
    j["extremal"] = er.is_extremal;
    j["agree"] = agree;
    j["warnings"] = warnings;
    write_or_print(j.dump(2) + "\n", json_path);
  }
  return agree ? 0 : 1;
}

int cmd_verify(const std::string& only, uint32_t p, uint64_t seed,
               const std::string& json_path) {
  Ring R(p);
  std::vector<std::string> names = scenario_names();
  if (!only.empty()) names = {only};
  ordered_json all = ordered_json::array();
  bool pass = true;
  for (const std::string& name : names) {
    ScenarioReport rep = run_scenario(name, R, seed);
    std::cout << render_text(rep) << "\n";
    all.push_back(ordered_json::parse(render_json(rep)));
    pass = pass && rep.pass;
  }
  std::cout << "overall: " << (pass ? "PASS" : "FAIL") << "\n";
  if (!json_path.empty()) write_or_print(all.dump(2) + "\n", json_path);
  return pass ? 0 : 1;
}

int cmd_experiment(const std::string& family, int trials, uint32_t p,
                   uint64_t seed, const std::string& json_path) {
  Ring R(p);
  ExperimentReport rep = random_experiment(family, trials, R, seed);
  std::cout << render_text(rep);
  if (!json_path.empty()) write_or_print(render_json(rep), json_path);
  return rep.pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "exact invariants of multiplicity structures on lines in projective "
      "3-space"};
  app.require_subcommand(1);

  uint32_t p = 32003;
  uint64_t seed = 1;
  int window = 0, level = 0, trials = 100;
  std::string recipe, in_path, json_path, only, family;

  CLI::App* construct =
      app.add_subcommand("construct", "build a curve and emit its ideal file");
  construct->add_option("--recipe", recipe,
                        "line, neighborhood(d), double(a), triple(a,b), "
                        "quadruple(a,b), quintuple(a), union(r1,r2)")
      ->required();
  construct->add_option("--char", p, "field characteristic (prime)");
  construct->add_option("--seed", seed, "random seed");
  construct->add_option("--json", json_path, "write the ideal file here");

  CLI::App* invariants =
      app.add_subcommand("invariants", "report invariants of an ideal file");
  invariants->add_option("--in", in_path, "ideal file")->required();
  invariants->add_option("--char", p, "expected field characteristic")
      ->default_val(0);
  invariants->add_option("--seed", seed, "random seed");
  invariants->add_option("--window", window, "verification window override");
  invariants->add_option("--json", json_path, "write a JSON report here");

  CLI::App* check = app.add_subcommand(
      "check", "postulation and extremality of an ideal file at a level");
  check->add_option("--in", in_path, "ideal file")->required();
  check->add_option("--level", level, "postulation level l >= 0")->required();
  check->add_option("--char", p, "expected field characteristic")
      ->default_val(0);
  check->add_option("--seed", seed, "random seed");
  check->add_option("--window", window, "verification window override");
  check->add_option("--json", json_path, "write a JSON report here");

  CLI::App* verify =
      app.add_subcommand("verify", "run the registered verification scenarios");
  verify->add_option("--only", only, "run a single scenario by name");
  verify->add_option("--char", p, "field characteristic (prime)");
  verify->add_option("--seed", seed, "random seed");
  verify->add_option("--json", json_path, "write combined JSON reports here");

  CLI::App* experiment =
      app.add_subcommand("experiment", "randomized genericity sweeps");
  experiment
      ->add_option("--family", family,
                   "triple-l1, quadruple-l22, quadruple-over-l1, "
                   "quintuple-primitive-a1")
      ->required();
  experiment->add_option("--trials", trials, "number of trials");
  experiment->add_option("--char", p, "field characteristic (prime)");
  experiment->add_option("--seed", seed, "random seed");
  experiment->add_option("--json", json_path, "write a JSON report here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (construct->parsed())
      return cmd_construct(recipe, checked_char(p), seed, json_path);
    if (invariants->parsed())
      return cmd_invariants(in_path, p, seed, window, json_path);
    if (check->parsed())
      return cmd_check(in_path, level, p, seed, window, json_path);
    if (verify->parsed())
      return cmd_verify(only, checked_char(p), seed, json_path);
    if (experiment->parsed())
      return cmd_experiment(family, trials, checked_char(p), seed, json_path);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 0;
}
