#include <doctest.h>

#include <cmath>

#include "memwave/decay.hpp"
#include "memwave/scenario.hpp"
#include "oracles.hpp"

using namespace memwave;

namespace {

EnergySeries synthetic_series(double T, double dt,
                              const std::function<double(double)>& f) {
  const auto n = static_cast<Index>(std::llround(T / dt)) + 1;
  EnergySeries s;
  s.times.resize(n);
  s.total.resize(n);
  s.kinetic = Vec::Zero(n);
  s.elastic = Vec::Zero(n);
  s.history = Vec::Zero(n);
  s.rate = Vec::Zero(n);
  for (Index j = 0; j < n; ++j) {
    s.times[j] = static_cast<double>(j) * dt;
    s.total[j] = f(s.times[j]);
  }
  return s;
}

EnergySeries reference_series(double T = 40.0, double dt = 1e-3) {
  const Scenario s = resolve_scenario(maxwell_glassy_config());
  return compute_energy_series(
      simulate(s.op, s.kernel, s.init, T, dt), false);
}

}  // namespace

TEST_SUITE_BEGIN("decay");

TEST_CASE("alpha formula on the reference parameters") {
  CHECK(theoretical_alpha(2.0, 1.0, 2.0) == 1.0 / 13.0);
  CHECK(theoretical_alpha(1.0, 1.0, 1.0) == 1.0 / 14.0);
  const double near_sup = theoretical_alpha(1.0, 1e15, 1e15);
  CHECK(near_sup < 0.5);
  CHECK(near_sup > 0.5 - 1e-9);
  CHECK_THROWS_AS(theoretical_alpha(0.0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(theoretical_alpha(1.0, -1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(theoretical_alpha(1.0, 1.0, 0.0), std::domain_error);
}

TEST_CASE("alpha is monotone and bounded on random triples") {
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    const Vec d = seeded_coefficients(3, seed).cwiseAbs();
    const double k0 = 1e-3 + 10.0 * d[0];
    const double C = 1e-3 + 10.0 * d[1];
    const double eta = 1e-3 + 10.0 * d[2];
    const double alpha = theoretical_alpha(k0, C, eta);
    CHECK(alpha > 0.0);
    CHECK(alpha < 0.5);
    CHECK(theoretical_alpha(k0, C * 1.01, eta) > alpha);
    CHECK(theoretical_alpha(k0, C, eta * 1.01) > alpha);
    CHECK(theoretical_alpha(k0 * 1.01, C, eta) < alpha);
  }
}

TEST_CASE("bound margin at t = 0 is 1/e") {
  // decays faster than alpha, so the pointwise ratio peaks at t = 0
  const EnergySeries fast_decay = synthetic_series(
      2.0, 1e-3, [](double t) { return 2.0 * std::exp(-10.0 * t); });
  const BoundCheck check = check_bound(fast_decay, 0.5, 1e-8);
  CHECK(check.margin == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(check.pass);
}

TEST_CASE("bound check passes the reference run with margin below one") {
  const EnergySeries s = reference_series();
  const BoundCheck check = check_bound(s, 1.0 / 13.0, 1e-8);
  CHECK(check.pass);
  CHECK(check.margin < 1.0);
  CHECK(check.margin == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
}

TEST_CASE("bound check short-circuits on zero energy and fails on growth") {
  const EnergySeries zero =
      synthetic_series(1.0, 0.1, [](double) { return 0.0; });
  const BoundCheck z = check_bound(zero, 1.0, 1e-8);
  CHECK(z.pass);
  CHECK(z.margin == 0.0);

  const EnergySeries flat =
      synthetic_series(5.0, 0.1, [](double) { return 1.0; });
  const BoundCheck f = check_bound(flat, 1.0, 1e-8);
  CHECK(!f.pass);
  CHECK(f.margin == doctest::Approx(std::exp(4.0)).epsilon(1e-10));
}

TEST_CASE("komornik margins on a constant series grow like alpha (T - S)") {
  const double alpha = 1.0 / 13.0;
  const EnergySeries flat =
      synthetic_series(182.0, 1e-2, [](double) { return 3.0; });
  const KomornikCheck check =
      check_komornik(flat, alpha, {0.0, 91.0, 182.0}, 1e-6, 1e-4);
  CHECK(!check.pass);
  // constant energy: no usable fitted rate, so no tail correction
  CHECK(check.tail_correction == 0.0);
  CHECK(check.entries[0].margin == doctest::Approx(alpha * 182.0).epsilon(1e-12));
  CHECK(check.entries[1].margin == doctest::Approx(alpha * 91.0).epsilon(1e-12));
  CHECK(check.entries[2].margin == 0.0);
  CHECK(check.truncation_ratio == doctest::Approx(1.0));
}

TEST_CASE("komornik passes the reference run at every resolved S") {
  const EnergySeries s = reference_series();
  std::vector<double> sv;
  for (double x = 0.0; x <= 20.0; x += 1.0) sv.push_back(x);
  const KomornikCheck check =
      check_komornik(s, 1.0 / 13.0, sv, 1e-6, 1e-4);
  CHECK(check.pass);
  CHECK(check.max_margin <= 1.0);
  CHECK(check.truncation_ratio <= 1e-4);

  // high-precision cross-check of one margin from the closed-form energy
  const double S = 5.0;
  const double integral = oracles::integrate(oracles::ref_energy, S, 40.0);
  const double expected =
      (integral + check.tail_correction) / oracles::ref_energy(S) / 13.0;
  bool found = false;
  for (const auto& e : check.entries)
    if (e.S == S) {
      CHECK(e.resolved);
      CHECK(e.margin == doctest::Approx(expected).epsilon(1e-4));
      found = true;
    }
  CHECK(found);
}

TEST_CASE("komornik flags starting points below the resolution floor") {
  // E = e^{-40 t}: E(1) ~ 4e-18 is unresolvable against E(0) = 1
  const EnergySeries steep =
      synthetic_series(1.0, 1e-3, [](double t) { return std::exp(-40.0 * t); });
  const KomornikCheck check =
      check_komornik(steep, 0.5, {0.0, 1.0}, 1e-6, 1e-4);
  CHECK(check.entries[0].resolved);
  CHECK(!check.entries[1].resolved);
  CHECK_THROWS_AS(check_komornik(steep, 0.5, {0.37777}, 1e-6, 1e-4),
                  std::invalid_argument);
}

TEST_CASE("rate fit recovers exact log-linear data") {
  const EnergySeries s = synthetic_series(
      20.0, 1e-2, [](double t) { return 3.0 * std::exp(-0.5 * t); });
  const RateFit fit = fit_decay_rate(s, 0.0, 20.0);
  CHECK(fit.rate == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rate fit on constant data returns rate zero") {
  const EnergySeries s =
      synthetic_series(5.0, 0.1, [](double) { return 2.5; });
  const RateFit fit = fit_decay_rate(s, 0.0, 5.0);
  CHECK(std::abs(fit.rate) <= 1e-12);
  CHECK(fit.r_squared == 1.0);
}

TEST_CASE("rate fit rejects short windows and nonpositive energies") {
  const EnergySeries s = synthetic_series(
      10.0, 0.1, [](double t) { return std::exp(-t); });
  CHECK_THROWS_AS(fit_decay_rate(s, 0.0, 0.5), std::invalid_argument);
  const EnergySeries hole = synthetic_series(
      10.0, 0.1, [](double t) { return t < 5.0 ? std::exp(-t) : 0.0; });
  CHECK_THROWS_WITH_AS(fit_decay_rate(hole, 0.0, 10.0),
                       doctest::Contains("energy underflow"),
                       std::runtime_error);
}

TEST_CASE("fitted reference rate clears the theoretical constant") {
  const EnergySeries s = reference_series();
  const RateFit fit = fit_decay_rate(s, 10.0, 30.0);
  CHECK(fit.rate >= 1.0 / 13.0 - 1e-3);
  CHECK(fit.rate > 1.5);  // actual decay is about e^{-2t} with a polynomial
}

TEST_CASE("eta sweep matches hand-computed alphas") {
  const Scenario s = resolve_scenario(maxwell_glassy_config());
  const auto rows =
      sweep_eta({{1.0, 1.0}}, {1.0, 2.0, 4.0}, s.op, s.init, 20.0, 1e-3);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].alpha_theory == 1.0 / 14.0);
  CHECK(rows[1].alpha_theory == 1.0 / 13.0);
  CHECK(rows[2].alpha_theory == 1.0 / 15.5);
  for (const auto& row : rows) {
    CHECK(!row.skipped);
    CHECK(row.k0 == row.eta);  // single-term rescale puts b = r = eta
    CHECK(row.bound_margin <= 1.0);
    CHECK(row.komornik_max <= 1.0);
    CHECK(row.alpha_fitted >= row.alpha_theory - 1e-3);
  }
}

TEST_CASE("eta sweep skips invalid rows and keeps going") {
  const Scenario s = resolve_scenario(maxwell_glassy_config());
  const auto rows =
      sweep_eta({{1.0, 1.0}}, {-1.0, 2.0}, s.op, s.init, 10.0, 1e-3);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].skipped);
  CHECK(!rows[0].skip_reason.empty());
  CHECK(!rows[1].skipped);

  CHECK(sweep_eta({{1.0, 1.0}}, {}, s.op, s.init, 10.0, 1e-3).empty());
}

TEST_CASE("multi-term sweep shapes rescale to unit mass") {
  const Scenario s = resolve_scenario(maxwell_glassy_config());
  // burger shape, min rate 1: eta = 2 doubles the rates and weights
  const auto rows = sweep_eta({{0.5, 1.0}, {1.5, 3.0}}, {2.0}, s.op, s.init,
                              20.0, 1e-3);
  REQUIRE(rows.size() == 1);
  CHECK(!rows[0].skipped);
  CHECK(rows[0].k0 == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(rows[0].alpha_theory ==
        doctest::Approx(theoretical_alpha(4.0, 1.0, 2.0)).epsilon(1e-12));
  CHECK(rows[0].bound_margin <= 1.0);
}

TEST_CASE("komornik margins below one imply the pointwise bound") {
  // joint assertion of the two estimates with the same alpha
  for (const ScenarioConfig& config :
       {maxwell_glassy_config(), burger2_config(),
        wave_1d_multimode_config()}) {
    const Scenario s = resolve_scenario(config);
    const EnergySeries series = compute_energy_series(
        simulate(s.op, s.kernel, s.init, s.T, s.dt), false);
    std::vector<double> sv;
    for (double x = 0.0; x <= 0.5 * s.T + 1e-9; x += 1.0) sv.push_back(x);
    const KomornikCheck komornik =
        check_komornik(series, *s.alpha, sv, 1e-6, 1e-4);
    const BoundCheck bound = check_bound(series, *s.alpha, 1e-8);
    CHECK(komornik.max_margin <= 1.0);
    CHECK(bound.pass);  // margins <= 1 must come with the bound holding
  }
}

TEST_CASE("analyze_decay bundles the checks") {
  const EnergySeries s = reference_series();
  std::vector<double> sv{0.0, 5.0, 10.0};
  const DecayReport report = analyze_decay(s, 1.0 / 13.0, sv, 1e-8, 1e-6,
                                           1e-4, 10.0, 30.0);
  CHECK(report.bound.pass);
  CHECK(report.komornik.pass);
  CHECK(report.fit_available);
  CHECK(report.alpha_fitted >= report.alpha_theory);
}

TEST_SUITE_END();
