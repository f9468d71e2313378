#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "memwave/check_settings.hpp"
#include "memwave/prony_kernel.hpp"
#include "memwave/simulate.hpp"
#include "memwave/spectral_operator.hpp"

namespace memwave {

enum class RunMethod { Fast, Direct, Both };

std::string to_string(RunMethod m);
RunMethod run_method_from_string(const std::string& name);

// Carries every human-readable problem found while parsing or resolving a
// scenario; a config either yields a fully validated run or this.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

struct KernelConfig {
  std::vector<std::pair<double, double>> terms;
  Strictness strictness = Strictness::Glassy;
  bool normalize = false;
  std::optional<double> eta_override;
};

struct OperatorConfig {
  enum class Type { Dirichlet1d, Diagonal };
  Type type = Type::Diagonal;
  double length = 0;   // dirichlet_1d
  Index modes = 0;     // dirichlet_1d
  Vec eigenvalues;     // diagonal
};

struct InitialConfig {
  std::optional<std::string> preset;  // "first_mode" or "equipartition_<k>"
  Vec u0;
  Vec v0;
};

struct OutputConfig {
  std::string dir = ".";
  Index stride = 1;
  bool energy = true;
};

struct ScenarioConfig {
  std::string name = "scenario";
  KernelConfig kernel;
  OperatorConfig op;
  InitialConfig initial;
  double T = 0;
  double dt = 0;
  RunMethod method = RunMethod::Both;
  CheckSettings checks;
  OutputConfig output;
};

// Parsed, structurally valid config from a JSON file or string. Unknown keys
// anywhere are errors; numbers are read as decimal doubles at full precision.
ScenarioConfig parse_scenario_file(const std::string& path);
ScenarioConfig parse_scenario_json(const std::string& text,
                                   const std::string& origin = "<string>");

// A config resolved into ready-to-run pieces. Building throws ConfigError
// when the kernel fails validation, the initial data does not fit the
// operator, or the time grid is unusable.
struct Scenario {
  std::string name;
  PronyKernel kernel;
  KernelReport kernel_report;
  SpectralOperator op;
  InitialData init;
  double T = 0;
  double dt = 0;
  RunMethod method = RunMethod::Both;
  CheckSettings checks;
  OutputConfig output;

  // eta used by the decay constant: the user override if given, else min r_i
  double effective_eta = 0;
  // theoretical alpha, the override when set; empty for k == 0 runs with no
  // override (the formula needs eta)
  std::optional<double> alpha;
  bool theorem_scope = false;  // glassy mass within tolerance
  std::string scope_note;
};

Scenario resolve_scenario(const ScenarioConfig& config);

// Bundled presets, also shipped as JSON files under scenarios/.
ScenarioConfig maxwell_glassy_config();
ScenarioConfig burger2_config();
ScenarioConfig wave_1d_multimode_config();
ScenarioConfig conservative_config();

}  // namespace memwave
