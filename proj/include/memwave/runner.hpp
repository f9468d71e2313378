#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "memwave/csv.hpp"
#include "memwave/scenario.hpp"

namespace memwave {

// Exit codes shared by all subcommands.
constexpr int kExitAllPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

// Command-line values that override the scenario config.
struct CliOverrides {
  std::optional<std::string> out_dir;
  std::optional<Index> stride;
  std::optional<RunMethod> method;
};

// max |u_fast - u_direct| over the grid, normalized by max |u_fast|, and the
// same for the energy totals normalized by E_fast(0).
struct GapSummary {
  double u_gap = 0;
  double energy_gap = 0;
};

GapSummary fast_direct_gap(const Trajectory& fast, const Trajectory& direct,
                           const EnergySeries& energy_fast_series,
                           const EnergySeries& energy_direct_series);

// Runs the scenario and evaluates every applicable check at the scenario's
// tolerances. The direct-path comparison runs unless the method is fast.
VerifyReport build_verify_report(const Scenario& scenario);

int run_validate_kernel(const std::string& config_path, std::ostream& out,
                        std::ostream& err);
int run_simulate(const std::string& config_path, const CliOverrides& cli,
                 std::ostream& out, std::ostream& err);
int run_verify(const std::string& config_path, const CliOverrides& cli,
               std::ostream& out, std::ostream& err);
int run_sweep(const std::string& config_path,
              const std::vector<double>& eta_values, const CliOverrides& cli,
              std::ostream& out, std::ostream& err);

}  // namespace memwave
