#include "memwave/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "memwave/decay.hpp"
#include "memwave/energy.hpp"

namespace memwave {

namespace {

namespace fs = std::filesystem;

std::vector<double> komornik_s_values(double T, double step) {
  std::vector<double> values;
  for (double s = 0; s <= 0.5 * T + 1e-9; s += step) values.push_back(s);
  return values;
}

std::vector<Index> lemma_indices(Index n_steps, int count) {
  std::vector<Index> idx;
  for (int i = 0; i < count; ++i) {
    const Index j = static_cast<Index>(std::llround(
        static_cast<double>(i) * static_cast<double>(n_steps - 1) /
        static_cast<double>(count - 1)));
    if (idx.empty() || idx.back() != j) idx.push_back(j);
  }
  return idx;
}

std::string describe_kernel(const Scenario& scenario) {
  const PronyKernel& k = scenario.kernel;
  std::ostringstream os;
  os << to_string(k.strictness());
  if (k.empty()) {
    os << ", empty (k == 0)";
    return os.str();
  }
  os << ", " << k.size() << " term(s), k0 = " << g17(k.k0())
     << ", mass = " << g17(k.mass()) << ", eta = " << g17(k.eta());
  if (scenario.effective_eta != scenario.kernel_report.eta)
    os << ", eta_used = " << g17(scenario.effective_eta);
  return os.str();
}

std::string describe_operator(const SpectralOperator& op) {
  std::ostringstream os;
  os << op.label() << ", " << op.mode_count()
     << " mode(s), C = " << g17(op.coercivity())
     << ", lambda_max = " << g17(op.eigenvalues()[op.mode_count() - 1]);
  return os.str();
}

void warn_stability(const Scenario& scenario, std::ostream& err) {
  const double wave_number =
      scenario.dt * std::sqrt(scenario.op.eigenvalues().maxCoeff());
  const double rate_number =
      scenario.kernel.empty()
          ? 0.0
          : scenario.dt * scenario.kernel.rates().maxCoeff();
  if (wave_number > kRk4StabilityLimit || rate_number > kRk4StabilityLimit)
    err << "warning: dt is outside the RK4 stability region (dt sqrt(lambda) "
           "= "
        << g17(wave_number) << ", dt r_max = " << g17(rate_number)
        << ", limit " << g17(kRk4StabilityLimit) << ")\n";
}

struct VerifyArtifacts {
  std::optional<Trajectory> fast;
  std::optional<Trajectory> direct;
  std::optional<EnergySeries> series_fast;
  std::optional<EnergySeries> series_direct;
};

VerifyReport build_report(const Scenario& scenario,
                          VerifyArtifacts* artifacts) {
  const CheckSettings& cfg = scenario.checks;
  VerifyReport report;
  report.scenario_name = scenario.name;
  report.scope_note = scenario.scope_note;
  report.kernel_line = describe_kernel(scenario);
  report.operator_line = describe_operator(scenario.op);

  Trajectory fast = simulate(scenario.op, scenario.kernel, scenario.init,
                             scenario.T, scenario.dt);
  EnergySeries series = compute_energy_series(fast, true);
  const Index n = series.size();
  const double e0 = series.total[0];
  const double k0 = scenario.kernel.k0();
  const double dt = fast.dt();

  // monotonicity: largest energy increment between neighbouring steps
  double max_increment = 0;
  for (Index j = 0; j + 1 < n; ++j)
    max_increment = std::max(max_increment,
                             series.total[j + 1] - series.total[j]);
  report.checks.push_back({"monotonicity", max_increment,
                           cfg.monotonicity_tolerance * e0,
                           max_increment <= cfg.monotonicity_tolerance * e0});

  // sign of the closed-form derivative
  const double max_rate = n > 0 ? series.rate.maxCoeff() : 0.0;
  const double rate_tol = cfg.rate_sign_tolerance * e0 * k0;
  report.checks.push_back(
      {"rate_sign", max_rate, rate_tol, max_rate <= rate_tol});

  // closed-form derivative against centered differences of the totals
  double scale = std::max(
      1.0, std::sqrt(scenario.op.eigenvalues().maxCoeff()));
  if (!scenario.kernel.empty())
    scale = std::max(scale, scenario.kernel.rates().maxCoeff());
  const double fd_tol = cfg.rate_fd_safety * dt * dt * e0 * scale * scale *
                        scale;
  double max_fd_gap = 0;
  for (Index j = 1; j + 1 < n; ++j) {
    const double centered =
        (series.total[j + 1] - series.total[j - 1]) / (2.0 * dt);
    max_fd_gap = std::max(max_fd_gap, std::abs(series.rate[j] - centered));
  }
  report.checks.push_back(
      {"rate_consistency", max_fd_gap, fd_tol, max_fd_gap <= fd_tol});

  // every component of every breakdown stays above -tol E(0)
  double min_component = 0;
  for (Index j = 0; j < n; ++j)
    min_component = std::min({min_component, series.kinetic[j],
                              series.elastic[j], series.history[j]});
  const double neg_excess = std::max(0.0, -min_component);
  report.checks.push_back({"nonnegativity", neg_excess,
                           cfg.nonnegativity_tolerance * e0,
                           neg_excess <= cfg.nonnegativity_tolerance * e0});

  if (scenario.kernel.empty()) {
    double max_drift = 0;
    for (Index j = 0; j < n; ++j)
      max_drift = std::max(max_drift, std::abs(series.total[j] - e0));
    report.checks.push_back({"conservation", max_drift,
                             cfg.conservation_tolerance * e0,
                             max_drift <= cfg.conservation_tolerance * e0});
  }

  if (scenario.alpha) {
    const double alpha = *scenario.alpha;
    report.has_alpha = true;
    report.alpha = alpha;

    const BoundCheck bound = check_bound(series, alpha, cfg.bound_tolerance);
    report.checks.push_back({"bound_margin", bound.margin,
                             1.0 + cfg.bound_tolerance, bound.pass});

    const std::vector<double> s_values =
        komornik_s_values(scenario.T, cfg.s_grid_step);
    const KomornikCheck komornik = check_komornik(
        series, alpha, s_values, cfg.komornik_tolerance, cfg.truncation_cap);
    report.komornik_entries = komornik.entries;
    bool margins_ok = true;
    for (const auto& e : komornik.entries)
      if (e.resolved && e.margin > 1.0 + cfg.komornik_tolerance)
        margins_ok = false;
    report.checks.push_back({"komornik_margin", komornik.max_margin,
                             1.0 + cfg.komornik_tolerance, margins_ok});
    report.checks.push_back({"komornik_truncation", komornik.truncation_ratio,
                             cfg.truncation_cap,
                             komornik.truncation_ratio <= cfg.truncation_cap});

    if (e0 > 0) {
      double window_start = 0.25 * scenario.T;
      double window_end = 0.75 * scenario.T;
      if (cfg.fit_window) {
        window_start = cfg.fit_window->first;
        window_end = cfg.fit_window->second;
      }
      double fit_gap = std::numeric_limits<double>::infinity();
      try {
        const RateFit fit = fit_decay_rate(series, window_start, window_end);
        report.fit_available = true;
        report.alpha_fitted = fit.rate;
        fit_gap = std::max(0.0, alpha - fit.rate);
      } catch (const std::exception&) {
        report.fit_available = false;
      }
      report.checks.push_back({"fitted_rate_gap", fit_gap, cfg.fit_slack,
                               fit_gap <= cfg.fit_slack});
    }
  }

  // identity residual over all pairs of a coarse sub-grid
  const std::vector<Index> idx = lemma_indices(n, cfg.lemma_grid_count);
  double max_residual = 0;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      const LemmaIdentity id = lemma1_residual(fast, fast.times[idx[a]],
                                               fast.times[idx[b]]);
      max_residual = std::max(max_residual, id.residual);
    }
  report.checks.push_back({"lemma1_residual", max_residual,
                           cfg.lemma_tolerance,
                           max_residual <= cfg.lemma_tolerance});

  std::optional<Trajectory> direct;
  std::optional<EnergySeries> series_direct;
  if (scenario.method != RunMethod::Fast) {
    direct = simulate_direct(scenario.op, scenario.kernel, scenario.init,
                             scenario.T, scenario.dt);
    // the quadrature rate column is only needed when the series gets written
    series_direct = compute_energy_series(*direct, artifacts != nullptr);
    const GapSummary gap =
        fast_direct_gap(fast, *direct, series, *series_direct);
    report.checks.push_back({"fast_vs_direct_u", gap.u_gap, cfg.gap_tolerance,
                             gap.u_gap <= cfg.gap_tolerance});
    report.checks.push_back({"fast_vs_direct_E", gap.energy_gap,
                             cfg.gap_tolerance,
                             gap.energy_gap <= cfg.gap_tolerance});
  }

  if (artifacts) {
    artifacts->fast = std::move(fast);
    artifacts->series_fast = std::move(series);
    artifacts->direct = std::move(direct);
    artifacts->series_direct = std::move(series_direct);
  }
  return report;
}

}  // namespace

GapSummary fast_direct_gap(const Trajectory& fast, const Trajectory& direct,
                           const EnergySeries& energy_fast_series,
                           const EnergySeries& energy_direct_series) {
  if (fast.steps() != direct.steps() || fast.modes() != direct.modes())
    throw std::invalid_argument("trajectories live on different grids");
  const double u_scale =
      std::max(fast.u.cwiseAbs().maxCoeff(), 1e-300);
  const double u_diff = (fast.u - direct.u).cwiseAbs().maxCoeff();
  const double e_scale = std::max(energy_fast_series.total[0], 1e-300);
  const double e_diff = (energy_fast_series.total - energy_direct_series.total)
                            .cwiseAbs()
                            .maxCoeff();
  return {u_diff / u_scale, e_diff / e_scale};
}

VerifyReport build_verify_report(const Scenario& scenario) {
  return build_report(scenario, nullptr);
}

namespace {

Scenario load_scenario(const std::string& config_path,
                       const CliOverrides& cli) {
  ScenarioConfig config = parse_scenario_file(config_path);
  if (cli.out_dir) config.output.dir = *cli.out_dir;
  if (cli.stride) config.output.stride = *cli.stride;
  if (cli.method) config.method = *cli.method;
  return resolve_scenario(config);
}

std::string prepare_output_dir(const Scenario& scenario) {
  fs::create_directories(scenario.output.dir);
  return scenario.output.dir;
}

}  // namespace

int run_validate_kernel(const std::string& config_path, std::ostream& out,
                        std::ostream& err) {
  try {
    const ScenarioConfig config = parse_scenario_file(config_path);
    std::vector<std::pair<double, double>> terms = config.kernel.terms;
    if (config.kernel.normalize) {
      double mass = 0;
      for (const auto& [b, r] : terms) mass += r != 0 ? b / r : 0;
      if (!(mass > 0)) {
        err << "error: cannot normalize, kernel mass is not positive\n";
        return kExitUsage;
      }
      for (auto& [b, r] : terms) b /= mass;
    }
    const PronyKernel kernel(terms, config.kernel.strictness);
    const KernelReport report =
        validate_kernel(kernel, config.checks.mass_tolerance);

    out << "kernel report for '" << config.name << "'\n";
    out << "  strictness: " << to_string(kernel.strictness()) << "\n";
    out << "  terms: " << kernel.size() << "\n";
    out << "  k(0) = " << g17(report.k0) << "\n";
    out << "  mass = " << g17(report.mass) << "\n";
    out << "  eta = " << g17(report.eta) << "\n";
    out << "  glassy: " << (report.is_glassy ? "yes" : "no") << "\n";
    if (report.violations.empty()) {
      out << "  violations: none\n";
    } else {
      out << "  violations:\n";
      for (const auto& v : report.violations) out << "    - " << v << "\n";
    }
    out << "\n";
    out << "k0=" << g17(report.k0) << "\n";
    out << "mass=" << g17(report.mass) << "\n";
    out << "eta=" << g17(report.eta) << "\n";
    out << "is_glassy=" << (report.is_glassy ? 1 : 0) << "\n";
    out << "violations=" << report.violations.size() << "\n";
    return report.valid() ? kExitAllPass : kExitCheckFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int run_simulate(const std::string& config_path, const CliOverrides& cli,
                 std::ostream& out, std::ostream& err) {
  try {
    const Scenario scenario = load_scenario(config_path, cli);
    warn_stability(scenario, err);
    const std::string dir = prepare_output_dir(scenario);
    const bool want_fast = scenario.method != RunMethod::Direct;
    const bool want_direct = scenario.method != RunMethod::Fast;

    std::optional<Trajectory> fast;
    std::optional<EnergySeries> fast_series;
    if (want_fast) {
      fast = simulate(scenario.op, scenario.kernel, scenario.init, scenario.T,
                      scenario.dt);
      fast_series = compute_energy_series(*fast, true);
      const std::string path = dir + "/trajectory_fast.csv";
      write_trajectory_csv(path, *fast,
                           scenario.output.energy ? &*fast_series : nullptr,
                           scenario.output.stride);
      out << "wrote " << path << "\n";
    }
    std::optional<Trajectory> direct;
    std::optional<EnergySeries> direct_series;
    if (want_direct) {
      direct = simulate_direct(scenario.op, scenario.kernel, scenario.init,
                               scenario.T, scenario.dt);
      direct_series = compute_energy_series(*direct, scenario.output.energy);
      const std::string path = dir + "/trajectory_direct.csv";
      write_trajectory_csv(path, *direct,
                           scenario.output.energy ? &*direct_series : nullptr,
                           scenario.output.stride);
      out << "wrote " << path << "\n";
    }
    if (want_fast && want_direct) {
      const GapSummary gap =
          fast_direct_gap(*fast, *direct, *fast_series, *direct_series);
      out << "fast_vs_direct: u_gap=" << g17(gap.u_gap)
          << " E_gap=" << g17(gap.energy_gap) << "\n";
    }
    return kExitAllPass;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int run_verify(const std::string& config_path, const CliOverrides& cli,
               std::ostream& out, std::ostream& err) {
  try {
    const Scenario scenario = load_scenario(config_path, cli);
    warn_stability(scenario, err);
    const std::string dir = prepare_output_dir(scenario);

    VerifyArtifacts artifacts;
    const VerifyReport report = build_report(scenario, &artifacts);

    write_trajectory_csv(
        dir + "/trajectory_fast.csv", *artifacts.fast,
        scenario.output.energy ? &*artifacts.series_fast : nullptr,
        scenario.output.stride);
    if (artifacts.direct)
      write_trajectory_csv(
          dir + "/trajectory_direct.csv", *artifacts.direct,
          scenario.output.energy ? &*artifacts.series_direct : nullptr,
          scenario.output.stride);

    write_verify_csv(dir + "/report.csv", report);
    std::ofstream text(dir + "/report.txt", std::ios::binary);
    if (!text) throw std::runtime_error("cannot write report.txt");
    write_verify_text(text, report);
    write_verify_text(out, report);
    return report.all_pass() ? kExitAllPass : kExitCheckFailed;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int run_sweep(const std::string& config_path,
              const std::vector<double>& eta_values, const CliOverrides& cli,
              std::ostream& out, std::ostream& err) {
  try {
    if (eta_values.empty()) {
      err << "error: no sweep points\n";
      return kExitUsage;
    }
    const Scenario scenario = load_scenario(config_path, cli);
    const std::string dir = prepare_output_dir(scenario);

    std::vector<std::pair<double, double>> base_shape;
    for (Index i = 0; i < scenario.kernel.size(); ++i)
      base_shape.emplace_back(scenario.kernel.weights()[i],
                              scenario.kernel.rates()[i]);
    const std::vector<SweepRow> rows =
        sweep_eta(base_shape, eta_values, scenario.op, scenario.init,
                  scenario.T, scenario.dt);
    const std::string path = dir + "/sweep.csv";
    write_sweep_csv(path, rows);
    out << "wrote " << path << "\n";
    for (const auto& row : rows) {
      if (row.skipped)
        out << "eta=" << g17(row.eta) << " skipped: " << row.skip_reason
            << "\n";
      else
        out << "eta=" << g17(row.eta)
            << " alpha_theory=" << g17(row.alpha_theory)
            << " alpha_fitted=" << g17(row.alpha_fitted)
            << " bound_margin=" << g17(row.bound_margin)
            << " komornik_max=" << g17(row.komornik_max) << "\n";
    }
    return kExitAllPass;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace memwave
