#include "memwave/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "memwave/decay.hpp"

namespace memwave {

using nlohmann::json;

std::string to_string(RunMethod m) {
  switch (m) {
    case RunMethod::Fast:
      return "fast";
    case RunMethod::Direct:
      return "direct";
    case RunMethod::Both:
      return "both";
  }
  return "unknown";
}

RunMethod run_method_from_string(const std::string& name) {
  if (name == "fast") return RunMethod::Fast;
  if (name == "direct") return RunMethod::Direct;
  if (name == "both") return RunMethod::Both;
  throw std::invalid_argument("unknown method '" + name +
                              "' (expected fast, direct or both)");
}

namespace {

std::string join_errors(const std::vector<std::string>& errors) {
  std::ostringstream os;
  os << "invalid scenario config:";
  for (const auto& e : errors) os << "\n  " << e;
  return os.str();
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& origin) : origin_(origin) {}

  std::vector<std::string> errors;

  void fail(const std::string& path, const std::string& message) {
    errors.push_back(origin_ + ": " + path + ": " + message);
  }

  void check_keys(const json& obj, const std::string& path,
                  std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
      bool known = false;
      for (const char* key : allowed)
        if (item.key() == key) {
          known = true;
          break;
        }
      if (!known) fail(path, "unknown key '" + item.key() + "'");
    }
  }

  bool require_object(const json& j, const std::string& path) {
    if (j.is_object()) return true;
    fail(path, "expected an object");
    return false;
  }

  std::optional<double> number(const json& obj, const std::string& path,
                               const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_number()) {
      fail(path + "." + key, "expected a number");
      return std::nullopt;
    }
    return v.get<double>();
  }

  std::optional<bool> boolean(const json& obj, const std::string& path,
                              const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_boolean()) {
      fail(path + "." + key, "expected true or false");
      return std::nullopt;
    }
    return v.get<bool>();
  }

  std::optional<std::string> string(const json& obj, const std::string& path,
                                    const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_string()) {
      fail(path + "." + key, "expected a string");
      return std::nullopt;
    }
    return v.get<std::string>();
  }

  std::optional<Vec> number_array(const json& obj, const std::string& path,
                                  const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_array()) {
      fail(path + "." + key, "expected an array of numbers");
      return std::nullopt;
    }
    Vec out(static_cast<Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) {
        fail(path + "." + key, "expected an array of numbers");
        return std::nullopt;
      }
      out[static_cast<Index>(i)] = v[i].get<double>();
    }
    return out;
  }

 private:
  std::string origin_;
};

void parse_kernel(Parser& p, const json& j, KernelConfig& out) {
  if (!p.require_object(j, "kernel")) return;
  p.check_keys(j, "kernel", {"terms", "strictness", "normalize", "eta"});
  if (!j.contains("terms") || !j.at("terms").is_array()) {
    p.fail("kernel.terms", "expected an array of {b, r} objects");
  } else {
    std::size_t i = 0;
    for (const auto& term : j.at("terms")) {
      const std::string path = "kernel.terms[" + std::to_string(i) + "]";
      if (!term.is_object() || !term.contains("b") || !term.contains("r") ||
          !term.at("b").is_number() || !term.at("r").is_number()) {
        p.fail(path, "expected an object {b: number, r: number}");
      } else {
        p.check_keys(term, path, {"b", "r"});
        out.terms.emplace_back(term.at("b").get<double>(),
                               term.at("r").get<double>());
      }
      ++i;
    }
  }
  if (auto s = p.string(j, "kernel", "strictness")) {
    try {
      out.strictness = strictness_from_string(*s);
    } catch (const std::invalid_argument& e) {
      p.fail("kernel.strictness", e.what());
    }
  }
  if (auto b = p.boolean(j, "kernel", "normalize")) out.normalize = *b;
  if (auto e = p.number(j, "kernel", "eta")) out.eta_override = *e;
}

void parse_operator(Parser& p, const json& j, OperatorConfig& out) {
  if (!p.require_object(j, "operator")) return;
  const auto type = p.string(j, "operator", "type");
  if (!type) {
    p.fail("operator.type", "required ('dirichlet_1d' or 'diagonal')");
    return;
  }
  if (*type == "dirichlet_1d") {
    out.type = OperatorConfig::Type::Dirichlet1d;
    p.check_keys(j, "operator", {"type", "length", "modes"});
    if (auto l = p.number(j, "operator", "length"))
      out.length = *l;
    else
      p.fail("operator.length", "required for dirichlet_1d");
    if (auto m = p.number(j, "operator", "modes")) {
      if (*m < 1 || *m != std::floor(*m))
        p.fail("operator.modes", "expected a positive integer");
      else
        out.modes = static_cast<Index>(*m);
    } else {
      p.fail("operator.modes", "required for dirichlet_1d");
    }
  } else if (*type == "diagonal") {
    out.type = OperatorConfig::Type::Diagonal;
    p.check_keys(j, "operator", {"type", "eigenvalues"});
    if (auto ev = p.number_array(j, "operator", "eigenvalues"))
      out.eigenvalues = *ev;
    else
      p.fail("operator.eigenvalues", "required for diagonal");
  } else {
    p.fail("operator.type", "expected 'dirichlet_1d' or 'diagonal'");
  }
}

void parse_initial(Parser& p, const json& j, InitialConfig& out) {
  if (!p.require_object(j, "initial")) return;
  p.check_keys(j, "initial", {"preset", "u0", "v0"});
  out.preset = p.string(j, "initial", "preset");
  if (auto u0 = p.number_array(j, "initial", "u0")) out.u0 = *u0;
  if (auto v0 = p.number_array(j, "initial", "v0")) out.v0 = *v0;
  if (out.preset && out.u0.size() > 0)
    p.fail("initial", "give either a preset or explicit coefficients");
  if (!out.preset && out.u0.size() == 0)
    p.fail("initial", "needs a preset or a u0 coefficient list");
}

void parse_checks(Parser& p, const json& j, CheckSettings& out) {
  if (!p.require_object(j, "checks")) return;
  p.check_keys(j, "checks",
               {"mass_tolerance", "monotonicity_tolerance",
                "rate_sign_tolerance", "rate_fd_safety",
                "nonnegativity_tolerance", "bound_tolerance",
                "komornik_tolerance", "truncation_cap", "lemma_tolerance",
                "lemma_grid_count", "gap_tolerance", "fit_slack",
                "conservation_tolerance", "s_grid_step", "alpha_override",
                "fit_window"});
  auto grab = [&](const char* key, double& field) {
    if (auto v = p.number(j, "checks", key)) field = *v;
  };
  grab("mass_tolerance", out.mass_tolerance);
  grab("monotonicity_tolerance", out.monotonicity_tolerance);
  grab("rate_sign_tolerance", out.rate_sign_tolerance);
  grab("rate_fd_safety", out.rate_fd_safety);
  grab("nonnegativity_tolerance", out.nonnegativity_tolerance);
  grab("bound_tolerance", out.bound_tolerance);
  grab("komornik_tolerance", out.komornik_tolerance);
  grab("truncation_cap", out.truncation_cap);
  grab("lemma_tolerance", out.lemma_tolerance);
  grab("gap_tolerance", out.gap_tolerance);
  grab("fit_slack", out.fit_slack);
  grab("conservation_tolerance", out.conservation_tolerance);
  grab("s_grid_step", out.s_grid_step);
  if (auto v = p.number(j, "checks", "lemma_grid_count")) {
    if (*v < 2 || *v != std::floor(*v))
      p.fail("checks.lemma_grid_count", "expected an integer >= 2");
    else
      out.lemma_grid_count = static_cast<int>(*v);
  }
  if (auto v = p.number(j, "checks", "alpha_override")) out.alpha_override = *v;
  if (auto w = p.number_array(j, "checks", "fit_window")) {
    if (w->size() != 2)
      p.fail("checks.fit_window", "expected [start, end]");
    else
      out.fit_window = std::make_pair((*w)[0], (*w)[1]);
  }
}

void parse_output(Parser& p, const json& j, OutputConfig& out) {
  if (!p.require_object(j, "output")) return;
  p.check_keys(j, "output", {"dir", "stride", "energy"});
  if (auto d = p.string(j, "output", "dir")) out.dir = *d;
  if (auto s = p.number(j, "output", "stride")) {
    if (*s < 1 || *s != std::floor(*s))
      p.fail("output.stride", "expected a positive integer");
    else
      out.stride = static_cast<Index>(*s);
  }
  if (auto e = p.boolean(j, "output", "energy")) out.energy = *e;
}

}  // namespace

ScenarioConfig parse_scenario_json(const std::string& text,
                                   const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({origin + ": " + e.what()});
  }
  Parser p(origin);
  ScenarioConfig config;
  if (!root.is_object()) {
    p.fail("<root>", "expected a JSON object");
    throw ConfigError(std::move(p.errors));
  }
  p.check_keys(root, "<root>",
               {"name", "kernel", "operator", "initial", "time", "method",
                "checks", "output"});
  if (auto n = p.string(root, "<root>", "name")) config.name = *n;

  if (root.contains("kernel"))
    parse_kernel(p, root.at("kernel"), config.kernel);
  else
    p.fail("kernel", "section required");
  if (root.contains("operator"))
    parse_operator(p, root.at("operator"), config.op);
  else
    p.fail("operator", "section required");
  if (root.contains("initial"))
    parse_initial(p, root.at("initial"), config.initial);
  else
    p.fail("initial", "section required");

  if (root.contains("time")) {
    const json& t = root.at("time");
    if (p.require_object(t, "time")) {
      p.check_keys(t, "time", {"T", "dt"});
      if (auto T = p.number(t, "time", "T"))
        config.T = *T;
      else
        p.fail("time.T", "required");
      if (auto dt = p.number(t, "time", "dt"))
        config.dt = *dt;
      else
        p.fail("time.dt", "required");
    }
  } else {
    p.fail("time", "section required");
  }

  if (auto m = p.string(root, "<root>", "method")) {
    try {
      config.method = run_method_from_string(*m);
    } catch (const std::invalid_argument& e) {
      p.fail("method", e.what());
    }
  }
  if (root.contains("checks")) parse_checks(p, root.at("checks"), config.checks);
  if (root.contains("output")) parse_output(p, root.at("output"), config.output);

  if (!p.errors.empty()) throw ConfigError(std::move(p.errors));
  return config;
}

ScenarioConfig parse_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({"cannot read config file '" + path + "'"});
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_json(buffer.str(), path);
}

Scenario resolve_scenario(const ScenarioConfig& config) {
  std::vector<std::string> errors;

  // kernel, with optional rescaling of the weights to unit mass
  std::vector<std::pair<double, double>> terms = config.kernel.terms;
  if (config.kernel.normalize) {
    double mass = 0;
    bool usable = !terms.empty();
    for (const auto& [b, r] : terms) {
      if (r == 0) usable = false;
      if (usable) mass += b / r;
    }
    if (!usable || !(mass > 0)) {
      errors.push_back("kernel: cannot normalize, mass is not positive");
    } else {
      for (auto& [b, r] : terms) b /= mass;
    }
  }
  PronyKernel kernel(terms, config.kernel.strictness);
  const KernelReport report =
      validate_kernel(kernel, config.checks.mass_tolerance);
  for (const auto& v : report.violations) errors.push_back("kernel: " + v);

  double effective_eta = report.eta;
  if (config.kernel.eta_override) {
    const double eta = *config.kernel.eta_override;
    if (!(eta > 0))
      errors.push_back("kernel.eta: must be > 0");
    else if (!kernel.empty() && eta > kernel.rates().minCoeff() * (1 + 1e-12))
      errors.push_back(
          "kernel.eta: a user-supplied eta must not exceed the smallest rate");
    else
      effective_eta = eta;
  }

  // operator
  std::optional<SpectralOperator> op;
  try {
    if (config.op.type == OperatorConfig::Type::Dirichlet1d)
      op = dirichlet_laplacian_1d(config.op.length, config.op.modes);
    else
      op = diagonal_operator(config.op.eigenvalues);
  } catch (const std::exception& e) {
    errors.push_back(std::string("operator: ") + e.what());
  }

  // initial data
  InitialData init;
  if (op) {
    if (config.initial.preset) {
      const std::string& preset = *config.initial.preset;
      try {
        if (preset == "first_mode") {
          init = first_mode_data(*op);
        } else if (preset.rfind("equipartition_", 0) == 0) {
          const Index k = std::stol(preset.substr(14));
          init = equipartition_data(*op, k);
        } else {
          errors.push_back("initial.preset: unknown preset '" + preset +
                           "' (expected first_mode or equipartition_<k>)");
        }
      } catch (const std::exception& e) {
        errors.push_back(std::string("initial.preset: ") + e.what());
      }
    } else {
      init.u0 = config.initial.u0;
      init.v0 = config.initial.v0.size() > 0
                    ? config.initial.v0
                    : Vec::Zero(config.initial.u0.size());
      if (init.u0.size() != op->mode_count())
        errors.push_back("initial.u0: length " +
                         std::to_string(init.u0.size()) +
                         " does not match the mode count " +
                         std::to_string(op->mode_count()));
      if (init.v0.size() != init.u0.size())
        errors.push_back("initial.v0: length does not match u0");
    }
  }

  // time grid
  if (!(config.dt > 0)) errors.push_back("time.dt: must be > 0");
  if (!(config.T >= config.dt)) errors.push_back("time.T: must be >= dt");

  if (config.output.stride < 1) errors.push_back("output.stride: must be >= 1");
  if (!(config.checks.s_grid_step > 0))
    errors.push_back("checks.s_grid_step: must be > 0");
  if (config.checks.alpha_override && !(*config.checks.alpha_override > 0))
    errors.push_back("checks.alpha_override: must be > 0");
  if (config.checks.fit_window) {
    const auto& [a, b] = *config.checks.fit_window;
    if (!(a >= 0) || !(b > a))
      errors.push_back("checks.fit_window: needs 0 <= start < end");
  }

  if (!errors.empty()) throw ConfigError(std::move(errors));

  Scenario scenario{config.name,
                    kernel,
                    report,
                    std::move(*op),
                    std::move(init),
                    config.T,
                    config.dt,
                    config.method,
                    config.checks,
                    config.output,
                    effective_eta,
                    std::nullopt,
                    false,
                    ""};

  if (config.checks.alpha_override) {
    scenario.alpha = *config.checks.alpha_override;
  } else if (!kernel.empty()) {
    scenario.alpha = theoretical_alpha(report.k0, scenario.op.coercivity(),
                                       effective_eta);
  }
  scenario.theorem_scope = report.is_glassy;
  if (report.is_glassy)
    scenario.scope_note = "within theorem scope (glassy kernel)";
  else if (kernel.strictness() == Strictness::Subcritical)
    scenario.scope_note = "outside theorem scope (subcritical kernel)";
  else
    scenario.scope_note = "outside theorem scope (raw kernel)";
  return scenario;
}

ScenarioConfig maxwell_glassy_config() {
  ScenarioConfig config;
  config.name = "maxwell_glassy";
  config.kernel.terms = {{2.0, 2.0}};
  config.kernel.strictness = Strictness::Glassy;
  config.op.type = OperatorConfig::Type::Diagonal;
  config.op.eigenvalues = Vec::Ones(1);
  config.initial.u0 = Vec::Ones(1);
  config.initial.v0 = Vec::Zero(1);
  config.T = 40.0;
  config.dt = 1e-3;
  config.method = RunMethod::Both;
  return config;
}

ScenarioConfig burger2_config() {
  ScenarioConfig config;
  config.name = "burger2";
  config.kernel.terms = {{0.5, 1.0}, {1.5, 3.0}};
  config.kernel.strictness = Strictness::Glassy;
  config.op.type = OperatorConfig::Type::Diagonal;
  config.op.eigenvalues = Vec::Ones(1);
  config.initial.u0 = Vec::Ones(1);
  config.initial.v0 = Vec::Zero(1);
  config.T = 40.0;
  config.dt = 1e-3;
  config.method = RunMethod::Both;
  return config;
}

ScenarioConfig wave_1d_multimode_config() {
  ScenarioConfig config;
  config.name = "wave_1d_multimode";
  config.kernel.terms = {{2.0, 2.0}};
  config.kernel.strictness = Strictness::Glassy;
  config.op.type = OperatorConfig::Type::Dirichlet1d;
  config.op.length = std::numbers::pi;
  config.op.modes = 32;
  const SpectralOperator op =
      dirichlet_laplacian_1d(config.op.length, config.op.modes);
  const InitialData data = seeded_data(op, 20250801);
  config.initial.u0 = data.u0;
  config.initial.v0 = data.v0;
  config.T = 12.0;
  config.dt = 1e-3;
  config.method = RunMethod::Fast;
  return config;
}

ScenarioConfig conservative_config() {
  ScenarioConfig config;
  config.name = "conservative";
  config.kernel.terms = {};
  config.kernel.strictness = Strictness::Raw;
  config.op.type = OperatorConfig::Type::Dirichlet1d;
  config.op.length = std::numbers::pi;
  config.op.modes = 4;
  config.initial.u0 = Vec(4);
  config.initial.u0 << 1.0, 0.5, 0.25, 0.125;
  config.initial.v0 = Vec::Zero(4);
  config.T = 100.0;
  config.dt = 1e-3;
  config.method = RunMethod::Fast;
  config.checks.alpha_override = 1.0 / 13.0;
  return config;
}

}  // namespace memwave
