#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lifemax/errors.hpp"
#include "lifemax/io/runner.hpp"

namespace {

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < list.size()) {
    std::size_t comma = list.find(',', pos);
    if (comma == std::string::npos) comma = list.size();
    const std::string item = list.substr(pos, comma - pos);
    if (!item.empty()) {
      try {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
        out.push_back(v);
      } catch (const std::exception&) {
        throw lifemax::ConfigError("sweep: cannot parse value \"" + item + "\"");
      }
    }
    pos = comma + 1;
  }
  return out;
}

int finish(const lifemax::io::RunOutcome& out) {
  if (out.exit_code == lifemax::io::kExitOk)
    std::cout << out.message << "\n";
  else
    std::cerr << "error: " << out.message << "\n";
  return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lifemax: maximum-lifetime transmission schedules for sensor networks"};
  app.require_subcommand(1);
  bool rational = false;
  app.add_flag("--rational", rational,
               "solve in exact rational arithmetic (integer geometry and exponents)");

  std::string run_path, sweep_path, validate_path, param, values;
  CLI::App* run = app.add_subcommand("run", "solve one config and write its report");
  run->add_option("config", run_path, "config file (JSON, // comments allowed)")->required();
  run->fallthrough();
  CLI::App* sweep = app.add_subcommand("sweep", "solve a config once per parameter value");
  sweep->add_option("config", sweep_path, "config file")->required();
  sweep->add_option("--param", param, "N, a, lambda_scale, P0_over_N0 or k")->required();
  sweep->add_option("--values", values, "comma-separated values, may be empty")->required();
  sweep->fallthrough();
  CLI::App* validate = app.add_subcommand("validate", "check a config without solving");
  validate->add_option("config", validate_path, "config file")->required();
  validate->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // bad usage is a config error by the exit contract; --help stays 0
    const int code = app.exit(e);
    return code == 0 ? 0 : lifemax::io::kExitConfig;
  }

  using namespace lifemax::io;
  try {
    if (run->parsed()) return finish(run_config(load_config(run_path), rational));
    if (sweep->parsed()) {
      SweepSpec spec{param, parse_values(values)};
      return finish(run_sweep(load_config(sweep_path), spec, rational));
    }
    return finish(validate_only(load_config(validate_path)));
  } catch (const lifemax::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}
