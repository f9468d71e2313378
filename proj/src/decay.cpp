#include "memwave/decay.hpp"

#include <algorithm>
#include <limits>

#include "memwave/prony_kernel.hpp"
#include "memwave/simulate.hpp"

namespace memwave {

namespace {

constexpr double kResolutionFloor = 1e-13;     // of E(0)
constexpr double kMinFittedRateForTail = 1e-10;

Index series_grid_index(const EnergySeries& series, double t) {
  const double dt =
      series.times.size() > 1 ? series.times[1] - series.times[0] : 0.0;
  if (dt <= 0) throw std::logic_error("degenerate energy series grid");
  const auto j = static_cast<Index>(std::llround(t / dt));
  if (j < 0 || j >= series.times.size() ||
      std::abs(series.times[j] - t) > 1e-9 * std::max(1.0, std::abs(t)))
    throw std::invalid_argument("time " + std::to_string(t) +
                                " is not on the energy grid");
  return j;
}

}  // namespace

BoundCheck check_bound(const EnergySeries& energies, double alpha,
                       double bound_tolerance) {
  if (energies.size() == 0)
    throw std::invalid_argument("empty energy series");
  const double e0 = energies.total[0];
  if (e0 <= 0) return {0.0, true};
  double margin = 0;
  for (Index j = 0; j < energies.size(); ++j) {
    const double bound = e0 * std::exp(1.0 - alpha * energies.times[j]);
    margin = std::max(margin, energies.total[j] / bound);
  }
  return {margin, margin <= 1.0 + bound_tolerance};
}

KomornikCheck check_komornik(const EnergySeries& energies, double alpha,
                             const std::vector<double>& s_values,
                             double komornik_tolerance,
                             double truncation_cap) {
  if (energies.size() == 0)
    throw std::invalid_argument("empty energy series");
  KomornikCheck out;
  const Index n = energies.size();
  const double e0 = energies.total[0];
  if (e0 <= 0) {
    for (double s : s_values) out.entries.push_back({s, 0.0, true});
    out.pass = true;
    return out;
  }

  // trapezoid of E from each grid point to the end
  Vec tail_integral = Vec::Zero(n);
  for (Index j = n - 2; j >= 0; --j) {
    const double h = energies.times[j + 1] - energies.times[j];
    tail_integral[j] = tail_integral[j + 1] +
                       0.5 * h * (energies.total[j] + energies.total[j + 1]);
  }

  // conservative correction for the cut-off upper limit
  try {
    const double T = energies.times[n - 1];
    const RateFit fit = fit_decay_rate(energies, 0.25 * T, 0.75 * T);
    out.fitted_rate = fit.rate;
  } catch (const std::exception&) {
    out.fitted_rate = 0;
  }
  const double e_end = energies.total[n - 1];
  out.tail_correction =
      out.fitted_rate > kMinFittedRateForTail ? e_end / out.fitted_rate : 0.0;

  const double floor = kResolutionFloor * e0;
  double min_resolved = std::numeric_limits<double>::infinity();
  bool margins_ok = true;
  for (double s : s_values) {
    const Index j = series_grid_index(energies, s);
    const double es = energies.total[j];
    KomornikEntry entry{s, 0.0, false};
    if (es >= floor) {
      entry.resolved = true;
      entry.margin = alpha * (tail_integral[j] + out.tail_correction) / es;
      out.max_margin = std::max(out.max_margin, entry.margin);
      min_resolved = std::min(min_resolved, es);
      if (entry.margin > 1.0 + komornik_tolerance) margins_ok = false;
    }
    out.entries.push_back(entry);
  }
  out.truncation_ratio = std::isfinite(min_resolved) && min_resolved > 0
                             ? e_end / min_resolved
                             : std::numeric_limits<double>::infinity();
  out.pass = margins_ok && out.truncation_ratio <= truncation_cap;
  return out;
}

RateFit fit_decay_rate(const EnergySeries& energies, double window_start,
                       double window_end) {
  const double slack = 1e-12 * std::max(1.0, std::abs(window_end));
  std::vector<double> ts, logs;
  for (Index j = 0; j < energies.size(); ++j) {
    const double t = energies.times[j];
    if (t < window_start - slack || t > window_end + slack) continue;
    const double e = energies.total[j];
    if (!(e > 0))
      throw std::runtime_error("energy underflow, shrink window");
    ts.push_back(t);
    logs.push_back(std::log(e));
  }
  if (ts.size() < 10)
    throw std::invalid_argument("fit window must contain at least 10 grid "
                                "points");
  const auto n = static_cast<double>(ts.size());
  double st = 0, sy = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    st += ts[i];
    sy += logs[i];
  }
  const double tbar = st / n, ybar = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    sxx += (ts[i] - tbar) * (ts[i] - tbar);
    sxy += (ts[i] - tbar) * (logs[i] - ybar);
  }
  const double slope = sxy / sxx;
  RateFit fit;
  fit.rate = -slope;
  fit.intercept = ybar - slope * tbar;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double pred = fit.intercept + slope * ts[i];
    ss_res += (logs[i] - pred) * (logs[i] - pred);
    ss_tot += (logs[i] - ybar) * (logs[i] - ybar);
  }
  // constant-to-roundoff data is a perfect fit by convention
  const double tot_floor = 1e-28 * n * (1.0 + ybar * ybar);
  fit.r_squared = ss_tot > tot_floor ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

DecayReport analyze_decay(const EnergySeries& energies, double alpha_theory,
                          const std::vector<double>& s_values,
                          double bound_tolerance, double komornik_tolerance,
                          double truncation_cap, double fit_window_start,
                          double fit_window_end) {
  DecayReport report;
  report.alpha_theory = alpha_theory;
  report.bound = check_bound(energies, alpha_theory, bound_tolerance);
  report.komornik = check_komornik(energies, alpha_theory, s_values,
                                   komornik_tolerance, truncation_cap);
  try {
    const RateFit fit =
        fit_decay_rate(energies, fit_window_start, fit_window_end);
    report.alpha_fitted = fit.rate;
    report.fit_available = true;
  } catch (const std::exception&) {
    report.alpha_fitted = std::numeric_limits<double>::quiet_NaN();
    report.fit_available = false;
  }
  return report;
}

std::vector<SweepRow> sweep_eta(
    const std::vector<std::pair<double, double>>& base_shape,
    const std::vector<double>& eta_values, const SpectralOperator& op,
    const InitialData& init, double T, double dt) {
  if (base_shape.empty())
    throw std::invalid_argument("sweep needs a nonempty base kernel shape");
  double base_mass = 0;
  double base_min_rate = std::numeric_limits<double>::infinity();
  for (const auto& [b, r] : base_shape) {
    if (!(b > 0) || !(r > 0))
      throw std::invalid_argument("sweep base shape needs positive terms");
    base_mass += b / r;
    base_min_rate = std::min(base_min_rate, r);
  }

  std::vector<SweepRow> rows;
  for (double eta : eta_values) {
    SweepRow row;
    row.eta = eta;
    const double factor = eta / base_min_rate;
    std::vector<std::pair<double, double>> terms;
    for (const auto& [b, r] : base_shape)
      terms.emplace_back(factor * b / base_mass, factor * r);
    const PronyKernel kernel(terms, Strictness::Glassy);
    const KernelReport report = validate_kernel(kernel);
    if (!report.valid()) {
      row.skipped = true;
      row.skip_reason = report.violations.front();
      rows.push_back(row);
      continue;
    }
    row.k0 = kernel.k0();
    row.alpha_theory =
        theoretical_alpha(kernel.k0(), op.coercivity(), kernel.eta());

    const Trajectory traj = simulate(op, kernel, init, T, dt);
    const EnergySeries series = compute_energy_series(traj, false);
    std::vector<double> s_values;
    for (double s = 0; s <= 0.5 * T + 1e-9; s += 1.0) s_values.push_back(s);
    const DecayReport decay =
        analyze_decay(series, row.alpha_theory, s_values, 1e-8, 1e-6, 1e-4,
                      0.25 * T, 0.75 * T);
    row.alpha_fitted = decay.alpha_fitted;
    row.bound_margin = decay.bound.margin;
    row.komornik_max = decay.komornik.max_margin;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace memwave
