#include <doctest.h>

#include <cmath>

#include "memwave/energy.hpp"
#include "memwave/scenario.hpp"
#include "oracles.hpp"

using namespace memwave;

namespace {

PronyKernel maxwell() { return PronyKernel({{2.0, 2.0}}, Strictness::Glassy); }
SpectralOperator unit_op() { return diagonal_operator(Vec::Ones(1)); }
InitialData unit_init() { return {Vec::Ones(1), Vec::Zero(1)}; }

Trajectory reference_run(double T = 10.0, double dt = 1e-3) {
  return simulate(unit_op(), maxwell(), unit_init(), T, dt);
}

}  // namespace

TEST_SUITE_BEGIN("energy");

TEST_CASE("initial energy is kinetic plus full elastic, no history") {
  Vec ev(2);
  ev << 1.0, 4.0;
  const SpectralOperator op = diagonal_operator(ev);
  std::vector<ModalState> states{{0.5, 1.0, Vec::Zero(1), Vec::Zero(1)},
                                 {-0.25, 2.0, Vec::Zero(1), Vec::Zero(1)}};
  const EnergyBreakdown e = energy_fast(op, maxwell(), states, 0.0);
  CHECK(e.history == 0.0);
  CHECK(e.kinetic == 0.5 * (1.0 + 4.0));
  CHECK(e.elastic == 0.5 * (1.0 * 0.25 + 4.0 * 0.0625));
  CHECK(e.total == e.kinetic + e.elastic + e.history);
}

TEST_CASE("zero state has zero energy") {
  std::vector<ModalState> states{{0.0, 0.0, Vec::Zero(1), Vec::Zero(1)}};
  const EnergyBreakdown e = energy_fast(unit_op(), maxwell(), states, 3.0);
  CHECK(e.kinetic == 0.0);
  CHECK(e.elastic == 0.0);
  CHECK(e.history == 0.0);
}

TEST_CASE("fast energy matches the closed form along the reference run") {
  const Trajectory traj = reference_run();
  CHECK(energy_fast(traj, 0).total == 0.5);
  for (double t : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    const Index j = traj.grid_index(t);
    const double expected = oracles::ref_energy(t);
    CHECK(energy_fast(traj, j).total ==
          doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("direct energy equals fast energy exactly at t = 0") {
  const Trajectory traj = reference_run(1.0);
  const EnergyBreakdown f = energy_fast(traj, 0);
  const EnergyBreakdown d = energy_direct(unit_op(), maxwell(), traj, 0.0);
  CHECK(f.kinetic == d.kinetic);
  CHECK(f.elastic == d.elastic);
  CHECK(f.history == d.history);
}

TEST_CASE("direct energy matches the closed form to quadrature accuracy") {
  const Trajectory traj = reference_run();
  const EnergyBreakdown d = energy_direct(unit_op(), maxwell(), traj, 1.0);
  CHECK(d.total ==
        doctest::Approx(oracles::ref_energy(1.0)).epsilon(1e-6));
  CHECK_THROWS_AS(energy_direct(unit_op(), maxwell(), traj, 0.4321),
                  std::invalid_argument);
}

TEST_CASE("fast and direct energy series agree to quadrature accuracy") {
  const Trajectory fast = reference_run();
  const Trajectory direct =
      simulate_direct(unit_op(), maxwell(), unit_init(), 10.0, 1e-3);
  const EnergySeries sf = compute_energy_series(fast, false);
  const EnergySeries sd = compute_energy_series(direct, false);
  CHECK((sf.total - sd.total).cwiseAbs().maxCoeff() / sf.total[0] <= 1e-5);
}

TEST_CASE("multi-mode runs keep the two energy paths in agreement") {
  Vec ev(4);
  ev << 1.0, 4.0, 9.0, 16.0;
  const SpectralOperator op = diagonal_operator(ev);
  Vec u0(4), v0(4);
  u0 << 1.0, -0.5, 0.25, -0.125;
  v0 << 0.2, 0.4, -0.3, 0.1;
  const PronyKernel k = maxwell();
  const Trajectory fast = simulate(op, k, {u0, v0}, 5.0, 1e-3);
  const Trajectory direct = simulate_direct(op, k, {u0, v0}, 5.0, 1e-3);
  const EnergySeries sf = compute_energy_series(fast, false);
  const EnergySeries sd = compute_energy_series(direct, false);
  CHECK((sf.total - sd.total).cwiseAbs().maxCoeff() / sf.total[0] <= 1e-5);
}

TEST_CASE("energy_fast refuses direct-path inputs") {
  const Trajectory direct =
      simulate_direct(unit_op(), maxwell(), unit_init(), 1.0, 1e-2);
  CHECK_THROWS_WITH_AS(energy_fast(direct, 0),
                       doctest::Contains("energy_direct"),
                       std::invalid_argument);
  // two-term kernel, single summed auxiliary: shape mismatch at state level
  const PronyKernel burger({{0.5, 1.0}, {1.5, 3.0}}, Strictness::Glassy);
  std::vector<ModalState> states{{1.0, 0.0, Vec::Zero(1), Vec::Zero(1)}};
  CHECK_THROWS_WITH_AS(energy_fast(unit_op(), burger, states, 0.0),
                       doctest::Contains("energy_direct"),
                       std::invalid_argument);
}

TEST_CASE("initial rate is -k(0)/2 times the H1 seminorm") {
  std::vector<ModalState> states{{0.7, 0.3, Vec::Zero(1), Vec::Zero(1)}};
  const double rate = energy_rate(unit_op(), maxwell(), states, 0.0);
  CHECK(rate == -0.5 * 2.0 * (0.7 * 0.7));

  std::vector<ModalState> zero{{0.0, 0.0, Vec::Zero(1), Vec::Zero(1)}};
  CHECK(energy_rate(unit_op(), maxwell(), zero, 5.0) == 0.0);
}

TEST_CASE("closed-form rate matches finite differences of the closed form") {
  const Trajectory traj = reference_run();
  const double h = 1e-5;
  for (double t : {0.5, 1.0, 3.0}) {
    const Index j = traj.grid_index(t);
    const double fd =
        (oracles::ref_energy(t + h) - oracles::ref_energy(t - h)) / (2 * h);
    CHECK(energy_rate(traj, j) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("rate consistency error shrinks at second order") {
  double gaps[2];
  int i = 0;
  for (double dt : {2e-3, 1e-3}) {
    const Trajectory traj = reference_run(10.0, dt);
    const EnergySeries s = compute_energy_series(traj, true);
    double gap = 0;
    for (Index j = 1; j + 1 < s.size(); ++j) {
      const double cd = (s.total[j + 1] - s.total[j - 1]) / (2.0 * dt);
      gap = std::max(gap, std::abs(s.rate[j] - cd));
    }
    gaps[i++] = gap;
  }
  CHECK(gaps[0] / gaps[1] == doctest::Approx(4.0).epsilon(0.3));
}

TEST_CASE("energy decreases monotonically on admissible runs") {
  ScenarioConfig subcritical = maxwell_glassy_config();
  subcritical.name = "subcritical";
  subcritical.kernel.terms = {{1.0, 2.0}};
  subcritical.kernel.strictness = Strictness::Subcritical;
  for (const ScenarioConfig& config :
       {maxwell_glassy_config(), burger2_config(), subcritical}) {
    CAPTURE(config.name);
    const Scenario s = resolve_scenario(config);
    const Trajectory traj = simulate(s.op, s.kernel, s.init, 10.0, 1e-3);
    const EnergySeries series = compute_energy_series(traj, true);
    const double e0 = series.total[0];
    for (Index j = 0; j + 1 < series.size(); ++j)
      CHECK(series.total[j + 1] <= series.total[j] + 1e-10 * e0);
    CHECK(series.rate.maxCoeff() <= 1e-12 * e0 * s.kernel.k0());
    CHECK(series.kinetic.minCoeff() >= -1e-12 * e0);
    CHECK(series.elastic.minCoeff() >= -1e-12 * e0);
    CHECK(series.history.minCoeff() >= -1e-12 * e0);
  }
}

TEST_CASE("the empty kernel conserves energy") {
  Vec u0(4), v0(4);
  u0 << 1.0, 0.5, 0.25, 0.125;
  v0.setZero();
  Vec ev(4);
  ev << 1.0, 4.0, 9.0, 16.0;
  const Trajectory traj = simulate(diagonal_operator(ev), PronyKernel{},
                                   {u0, v0}, 20.0, 1e-3);
  const EnergySeries series = compute_energy_series(traj, true);
  const double e0 = series.total[0];
  CHECK((series.total.array() - e0).abs().maxCoeff() <= 1e-8 * e0);
  CHECK(series.rate.isZero(0.0));
}

TEST_CASE("identity residual is zero on degenerate inputs") {
  const Trajectory traj = reference_run(1.0);
  const LemmaIdentity same = lemma1_residual(traj, 0.5, 0.5);
  CHECK(same.lhs == 0.0);
  CHECK(same.rhs == 0.0);
  CHECK(same.residual == 0.0);

  const Trajectory zero = simulate(unit_op(), maxwell(),
                                   {Vec::Zero(1), Vec::Zero(1)}, 1.0, 1e-2);
  const LemmaIdentity z = lemma1_residual(zero, 0.0, 1.0);
  CHECK(z.lhs == 0.0);
  CHECK(z.rhs == 0.0);
  CHECK(z.residual == 0.0);
}

TEST_CASE("identity residual stays at quadrature level on the reference") {
  const Trajectory traj = reference_run();
  const LemmaIdentity id = lemma1_residual(traj, 0.0, 10.0);
  CHECK(id.residual <= 1e-5);
  CHECK(id.lhs == doctest::Approx(0.25).epsilon(1e-4));

  double worst = 0;
  for (double S = 0.0; S <= 10.0; S += 1.0)
    for (double T = S + 1.0; T <= 10.0; T += 1.0)
      worst = std::max(worst, lemma1_residual(traj, S, T).residual);
  CHECK(worst <= 1e-5);

  CHECK_THROWS_AS(lemma1_residual(traj, 0.1234567, 5.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(lemma1_residual(traj, 5.0, 1.0), std::invalid_argument);
  const Trajectory direct =
      simulate_direct(unit_op(), maxwell(), unit_init(), 1.0, 1e-2);
  CHECK_THROWS_AS(lemma1_residual(direct, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("tabulated runs use the grid mass for the elastic weight") {
  const Trajectory prony =
      simulate_direct(unit_op(), maxwell(), unit_init(), 5.0, 1e-3);
  const TabulatedKernel tab = sample_kernel(maxwell(), prony.steps(), 1e-3);
  const Trajectory tabbed =
      simulate_direct(unit_op(), tab, unit_init(), 5.0, 1e-3);
  const EnergySeries sp = compute_energy_series(prony, false);
  const EnergySeries st = compute_energy_series(tabbed, false);
  // same displacements, elastic weight via trapezoid instead of closed form
  CHECK((sp.total - st.total).cwiseAbs().maxCoeff() / sp.total[0] <= 1e-5);
  const EnergyBreakdown point =
      energy_direct(unit_op(), PronyKernel{}, tabbed, 2.0);
  const Index j = tabbed.grid_index(2.0);
  CHECK(point.total == doctest::Approx(st.total[j]).epsilon(1e-12));
}

TEST_CASE("direct series carries quadrature rates") {
  const Trajectory direct =
      simulate_direct(unit_op(), maxwell(), unit_init(), 2.0, 1e-3);
  const EnergySeries s = compute_energy_series(direct, true);
  CHECK(s.rate[0] == doctest::Approx(-0.5 * 2.0).epsilon(1e-9));
  double gap = 0;
  for (Index j = 1; j + 1 < s.size(); ++j) {
    const double cd = (s.total[j + 1] - s.total[j - 1]) / (2e-3);
    gap = std::max(gap, std::abs(s.rate[j] - cd));
  }
  CHECK(gap <= 1e-4);
}

TEST_SUITE_END();
