#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "varfield/catalog.hpp"
#include "varfield/report.hpp"
#include "varfield/suites.hpp"

namespace {

std::vector<std::string> split_csv(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (const auto& a : args) {
    std::stringstream ss(a);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"varfield: transform, excess and field-theory verification suites"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List the built-in problem catalog");

  auto* run = app.add_subcommand("run", "Run verification suites against a problem");
  std::string problem;
  std::vector<std::string> suites;
  std::uint64_t seed = 1;
  double tol_scale = 1.0;
  std::string out_path;
  run->add_option("--problem", problem, "Catalog name or path to a problem JSON file")
      ->required();
  run->add_option("--suite", suites,
                  "Suites to run (comma separated or repeated); default: all")
      ->take_all();
  run->add_option("--seed", seed, "Seed for every randomized check");
  run->add_option("--tol-scale", tol_scale, "Multiplier applied to all tolerances");
  run->add_option("--out", out_path, "Write the JSON report to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (list->parsed()) {
      std::cout << "built-in problems:\n";
      for (const auto& name : varfield::catalog_names()) {
        const auto p = varfield::load_catalog_problem(name);
        std::cout << "  " << name << "  (n=" << p.n << ", nu=" << p.nu << ", k=" << p.k
                  << (p.variant.empty() ? "" : ", " + p.variant) << ")\n";
      }
      std::cout << "\nUser problems: pass a JSON file path to --problem. See README.md for\n"
                   "the schema (polynomial integrands, slope fields, linear actions).\n";
      return 0;
    }

    auto selected = split_csv(suites);
    if (selected.empty()) selected = varfield::suite_names();

    const varfield::ProblemSpec spec = varfield::resolve_problem(problem);
    const varfield::Report report = varfield::run_suite(spec, selected, seed, tol_scale);

    const std::string body = report.to_json().dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << body;
    } else {
      std::ofstream out(out_path);
      if (!out) {
        std::cerr << "error: cannot write " << out_path << '\n';
        return 2;
      }
      out << body;
    }
    std::cerr << report.human_summary();
    return report.overall_pass() ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
