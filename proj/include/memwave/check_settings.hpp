#pragma once

#include <optional>
#include <utility>

namespace memwave {

// Tolerances and grids for the verification checks. The defaults are the
// contract: every verdict in reports and tests is taken against these values
// unless a scenario overrides them explicitly.
struct CheckSettings {
  double mass_tolerance = 1e-9;

  // E(t_{j+1}) <= E(t_j) + tol * E(0)
  double monotonicity_tolerance = 1e-10;
  // E'(t_j) <= tol * E(0) * k(0)
  double rate_sign_tolerance = 1e-12;
  // |E'(t_j) - centered difference| <= safety * dt^2 * E(0) * s^3 with
  // s = max(1, max_i r_i, sqrt(lambda_max))
  double rate_fd_safety = 10.0;
  // every energy component >= -tol * E(0)
  double nonnegativity_tolerance = 1e-12;

  // bound margin <= 1 + tol
  double bound_tolerance = 1e-8;
  // every Komornik margin <= 1 + tol
  double komornik_tolerance = 1e-6;
  // E(T) / min resolved E(S) <= cap
  double truncation_cap = 1e-4;

  // max identity residual over the coarse S < T sub-grid
  double lemma_tolerance = 1e-5;
  int lemma_grid_count = 11;

  // fast-vs-direct trajectory and energy gaps
  double gap_tolerance = 1e-5;

  // fitted rate >= alpha - fit_slack
  double fit_slack = 1e-3;

  // |E(t) - E(0)| <= tol * E(0) for k == 0 runs
  double conservation_tolerance = 1e-8;

  // Komornik starting points 0, step, 2 step, ... up to T/2
  double s_grid_step = 1.0;

  // decay constant used instead of the formula; required for bound/Komornik
  // checks on the empty kernel, where eta does not exist
  std::optional<double> alpha_override;

  // absolute fit window [a, b]; defaults to [T/4, 3T/4]
  std::optional<std::pair<double, double>> fit_window;
};

}  // namespace memwave
