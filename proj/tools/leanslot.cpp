#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "leanslot/scenario.hpp"
#include "leanslot/sweep.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw leanslot::ScenarioError("cannot open config file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

leanslot::Scenario load(const std::string& path) {
  std::vector<std::string> warnings;
  leanslot::Scenario sc = leanslot::parse_scenario(read_file(path), &warnings);
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
  return sc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimum-energy time-slot activation and power allocation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  double rate = 0.0;

  CLI::App* sweep = app.add_subcommand("sweep", "run the scenario's sweep and emit CSV");
  sweep->add_option("config", config_path, "scenario config file")->required();
  sweep->add_option("--out", out_path, "write the CSV here instead of stdout");

  CLI::App* point = app.add_subcommand("point", "evaluate all enabled solvers at one rate");
  point->add_option("config", config_path, "scenario config file")->required();
  point->add_option("--rate", rate, "average rate in bits per channel use")->required();

  CLI::App* verify =
      app.add_subcommand("verify", "compare the iterative solver against the oracle");
  verify->add_option("config", config_path, "scenario config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (sweep->parsed()) {
      leanslot::Scenario sc = load(config_path);
      leanslot::SweepOutput out = leanslot::run_sweep(sc);
      if (out_path.empty()) {
        std::cout << out.csv;
        std::cerr << out.summary;
      } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw leanslot::ScenarioError("cannot write '" + out_path + "'");
        f << out.csv;
        std::cout << out.summary;
      }
    } else if (point->parsed()) {
      leanslot::Scenario sc = load(config_path);
      std::cout << leanslot::run_point(sc, rate);
    } else if (verify->parsed()) {
      leanslot::Scenario sc = load(config_path);
      std::cout << leanslot::run_verify(sc).report;
    }
  } catch (const leanslot::ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
