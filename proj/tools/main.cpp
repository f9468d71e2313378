#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "memwave/runner.hpp"

namespace {

std::vector<double> parse_eta_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    const double v = std::stod(item, &pos);
    if (pos != item.size())
      throw CLI::ValidationError("--eta", "cannot parse '" + item + "'");
    values.push_back(v);
  }
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "memwave: spectral simulation of second-order evolution equations "
      "with exponential-sum memory kernels, with energy-decay verification"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string method;
  std::string eta_list;
  long long stride = 0;

  auto add_common = [&](CLI::App* cmd, bool with_method) {
    cmd->add_option("--config", config_path, "scenario config file (JSON)")
        ->required();
    cmd->add_option("--out", out_dir, "output directory (overrides config)");
    cmd->add_option("--stride", stride,
                    "write every n-th time step (overrides config)")
        ->check(CLI::PositiveNumber);
    if (with_method)
      cmd->add_option("--method", method, "fast | direct | both")
          ->check(CLI::IsMember({"fast", "direct", "both"}));
  };

  CLI::App* validate = app.add_subcommand(
      "validate-kernel", "check the kernel admissibility assumptions");
  validate->add_option("--config", config_path, "scenario config file (JSON)")
      ->required();

  CLI::App* simulate =
      app.add_subcommand("simulate", "integrate the scenario and write CSVs");
  add_common(simulate, true);

  CLI::App* verify = app.add_subcommand(
      "verify", "run the scenario and check every decay estimate");
  add_common(verify, true);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "rerun the scenario over a list of kernel decay rates");
  add_common(sweep, false);
  sweep->add_option("--eta", eta_list, "comma-separated eta values")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : memwave::kExitUsage;
  }

  memwave::CliOverrides overrides;
  if (!out_dir.empty()) overrides.out_dir = out_dir;
  if (stride > 0) overrides.stride = static_cast<memwave::Index>(stride);
  if (!method.empty()) overrides.method = memwave::run_method_from_string(method);

  if (validate->parsed())
    return memwave::run_validate_kernel(config_path, std::cout, std::cerr);
  if (simulate->parsed())
    return memwave::run_simulate(config_path, overrides, std::cout, std::cerr);
  if (verify->parsed())
    return memwave::run_verify(config_path, overrides, std::cout, std::cerr);
  if (sweep->parsed()) {
    std::vector<double> etas;
    try {
      etas = parse_eta_list(eta_list);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return memwave::kExitUsage;
    }
    return memwave::run_sweep(config_path, etas, overrides, std::cout,
                              std::cerr);
  }
  return memwave::kExitUsage;
}
