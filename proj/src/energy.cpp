#include "memwave/energy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace memwave {

namespace {

void check_fast_states(const PronyKernel& kernel,
                       const std::vector<ModalState>& states) {
  for (const auto& s : states)
    if (s.z.size() != kernel.size() || s.w.size() != kernel.size())
      throw std::invalid_argument(
          "state auxiliaries do not match the kernel terms (direct-path "
          "states carry only the summed quadrature; use energy_direct)");
}

void require_fast(const Trajectory& traj) {
  if (traj.method != Method::Fast)
    throw std::invalid_argument(
        "direct-path trajectories carry no per-term auxiliaries; use "
        "energy_direct");
}

}  // namespace

EnergyBreakdown energy_fast(const SpectralOperator& op,
                            const PronyKernel& kernel,
                            const std::vector<ModalState>& states, double t) {
  if (static_cast<Index>(states.size()) != op.mode_count())
    throw std::invalid_argument("state count does not match the mode count");
  check_fast_states(kernel, states);

  const Array<double> windows = kernel.term_windows(t);
  const double ecoeff = kernel.elastic_coefficient(t);
  EnergyBreakdown out;
  double h1 = 0, hist = 0, kin = 0;
  for (Index m = 0; m < op.mode_count(); ++m) {
    const ModalState& s = states[static_cast<std::size_t>(m)];
    const double lambda = op.eigenvalue(m);
    kin += s.v * s.v;
    h1 += lambda * s.u * s.u;
    double combo = 0;
    for (Index i = 0; i < kernel.size(); ++i)
      combo += s.w[i] - 2.0 * s.u * s.z[i] + s.u * s.u * windows[i];
    hist += lambda * combo;
  }
  out.kinetic = 0.5 * kin;
  out.elastic = 0.5 * ecoeff * h1;
  out.history = 0.5 * hist;
  out.total = out.kinetic + out.elastic + out.history;
  return out;
}

EnergyBreakdown energy_fast(const Trajectory& traj, Index step) {
  require_fast(traj);
  const SpectralOperator& op = traj.op;
  const PronyKernel& kernel = traj.kernel;
  const double t = traj.times[step];
  const Array<double> windows = kernel.term_windows(t);
  const double ecoeff = kernel.elastic_coefficient(t);
  EnergyBreakdown out;
  double h1 = 0, hist = 0, kin = 0;
  for (Index m = 0; m < op.mode_count(); ++m) {
    const double u = traj.u(step, m);
    const double v = traj.v(step, m);
    const double lambda = op.eigenvalue(m);
    kin += v * v;
    h1 += lambda * u * u;
    double combo = 0;
    for (Index i = 0; i < kernel.size(); ++i)
      combo += traj.w[static_cast<std::size_t>(i)](step, m) -
               2.0 * u * traj.z[static_cast<std::size_t>(i)](step, m) +
               u * u * windows[i];
    hist += lambda * combo;
  }
  out.kinetic = 0.5 * kin;
  out.elastic = 0.5 * ecoeff * h1;
  out.history = 0.5 * hist;
  out.total = out.kinetic + out.elastic + out.history;
  return out;
}

namespace {

// trapezoid values of k*u, k*u^2 and int_0^t k at grid index j, from the
// stored displacement history of one mode
struct HistoryQuadrature {
  double conv = 0;
  double convsq = 0;
  double kcum = 0;
};

HistoryQuadrature history_quadrature(const Vec& samples, const Mat& u,
                                     Index j, Index mode, double dt) {
  HistoryQuadrature q;
  if (j == 0) return q;
  double conv = 0.5 * samples[j] * u(0, mode);
  double convsq = 0.5 * samples[j] * u(0, mode) * u(0, mode);
  double kcum = 0.5 * samples[j] + 0.5 * samples[0];
  for (Index l = 1; l < j; ++l) {
    const double kv = samples[j - l];
    conv += kv * u(l, mode);
    convsq += kv * u(l, mode) * u(l, mode);
    kcum += samples[l];
  }
  conv += 0.5 * samples[0] * u(j, mode);
  convsq += 0.5 * samples[0] * u(j, mode) * u(j, mode);
  q.conv = dt * conv;
  q.convsq = dt * convsq;
  q.kcum = dt * kcum;
  return q;
}

}  // namespace

EnergyBreakdown energy_direct(const SpectralOperator& op,
                              const PronyKernel& kernel,
                              const Trajectory& traj, double t) {
  const Index j = traj.grid_index(t);
  const double dt = traj.dt();
  const Vec samples =
      traj.tabulated ? traj.kernel_samples
                     : sample_kernel(kernel, j + 1, dt).values;
  // tabulated runs have no closed-form mass; use the grid quadrature of k
  double ecoeff = kernel.elastic_coefficient(t);
  if (traj.tabulated) {
    double kcum = 0;
    for (Index l = 0; l < j; ++l)
      kcum += 0.5 * dt * (samples[l] + samples[l + 1]);
    ecoeff = 1.0 - kcum;
  }

  EnergyBreakdown out;
  double h1 = 0, hist = 0, kin = 0;
  for (Index m = 0; m < op.mode_count(); ++m) {
    const double u = traj.u(j, m);
    const double v = traj.v(j, m);
    const double lambda = op.eigenvalue(m);
    kin += v * v;
    h1 += lambda * u * u;
    const HistoryQuadrature q = history_quadrature(samples, traj.u, j, m, dt);
    hist += lambda * (q.convsq - 2.0 * u * q.conv + u * u * q.kcum);
  }
  out.kinetic = 0.5 * kin;
  out.elastic = 0.5 * ecoeff * h1;
  out.history = 0.5 * hist;
  out.total = out.kinetic + out.elastic + out.history;
  return out;
}

double energy_rate(const SpectralOperator& op, const PronyKernel& kernel,
                   const std::vector<ModalState>& states, double t) {
  if (static_cast<Index>(states.size()) != op.mode_count())
    throw std::invalid_argument("state count does not match the mode count");
  check_fast_states(kernel, states);

  const Array<double> windows = kernel.term_windows(t);
  const double kt = kernel.eval(t);
  double weighted = 0, h1 = 0;
  for (Index m = 0; m < op.mode_count(); ++m) {
    const ModalState& s = states[static_cast<std::size_t>(m)];
    const double lambda = op.eigenvalue(m);
    h1 += lambda * s.u * s.u;
    double combo = 0;
    for (Index i = 0; i < kernel.size(); ++i)
      combo += -kernel.rates()[i] *
               (s.w[i] - 2.0 * s.u * s.z[i] + s.u * s.u * windows[i]);
    weighted += lambda * combo;
  }
  return 0.5 * weighted - 0.5 * kt * h1;
}

double energy_rate(const Trajectory& traj, Index step) {
  require_fast(traj);
  const SpectralOperator& op = traj.op;
  const PronyKernel& kernel = traj.kernel;
  const double t = traj.times[step];
  const Array<double> windows = kernel.term_windows(t);
  const double kt = kernel.eval(t);
  double weighted = 0, h1 = 0;
  for (Index m = 0; m < op.mode_count(); ++m) {
    const double u = traj.u(step, m);
    const double lambda = op.eigenvalue(m);
    h1 += lambda * u * u;
    double combo = 0;
    for (Index i = 0; i < kernel.size(); ++i)
      combo += -kernel.rates()[i] *
               (traj.w[static_cast<std::size_t>(i)](step, m) -
                2.0 * u * traj.z[static_cast<std::size_t>(i)](step, m) +
                u * u * windows[i]);
    weighted += lambda * combo;
  }
  return 0.5 * weighted - 0.5 * kt * h1;
}

EnergySeries compute_energy_series(const Trajectory& traj, bool with_rate) {
  const Index n = traj.steps();
  EnergySeries series;
  series.times = traj.times;
  series.kinetic.resize(n);
  series.elastic.resize(n);
  series.history.resize(n);
  series.total.resize(n);
  series.rate.resize(n);

  if (traj.method == Method::Fast) {
    for (Index j = 0; j < n; ++j) {
      const EnergyBreakdown e = energy_fast(traj, j);
      series.kinetic[j] = e.kinetic;
      series.elastic[j] = e.elastic;
      series.history[j] = e.history;
      series.total[j] = e.total;
      series.rate[j] = with_rate ? energy_rate(traj, j) : 0.0;
    }
    return series;
  }

  // Direct path: reuse the stored trapezoid quadratures of k*u and k*u^2.
  const SpectralOperator& op = traj.op;
  const double dt = traj.dt();
  const Vec samples = traj.tabulated
                          ? traj.kernel_samples
                          : sample_kernel(traj.kernel, n, dt).values;
  Vec deriv_samples(n);
  if (!traj.tabulated)
    for (Index j = 0; j < n; ++j)
      deriv_samples[j] = traj.kernel.derivative(traj.times[j]);

  double kcum = 0;
  for (Index j = 0; j < n; ++j) {
    if (j > 0) kcum += 0.5 * dt * (samples[j - 1] + samples[j]);
    const double ecoeff = traj.tabulated
                              ? 1.0 - kcum
                              : traj.kernel.elastic_coefficient(traj.times[j]);
    double h1 = 0, hist = 0, kin = 0, rate_hist = 0;
    for (Index m = 0; m < op.mode_count(); ++m) {
      const double u = traj.u(j, m);
      const double v = traj.v(j, m);
      const double lambda = op.eigenvalue(m);
      kin += v * v;
      h1 += lambda * u * u;
      hist += lambda * (traj.w[0](j, m) - 2.0 * u * traj.z[0](j, m) +
                        u * u * kcum);
      if (with_rate && !traj.tabulated) {
        const HistoryQuadrature q =
            history_quadrature(deriv_samples, traj.u, j, m, dt);
        rate_hist += lambda * (q.convsq - 2.0 * u * q.conv + u * u * q.kcum);
      }
    }
    series.kinetic[j] = 0.5 * kin;
    series.elastic[j] = 0.5 * ecoeff * h1;
    series.history[j] = 0.5 * hist;
    series.total[j] =
        series.kinetic[j] + series.elastic[j] + series.history[j];
    if (!with_rate)
      series.rate[j] = 0.0;
    else if (traj.tabulated)
      series.rate[j] = std::numeric_limits<double>::quiet_NaN();
    else
      series.rate[j] = 0.5 * rate_hist - 0.5 * samples[j] * h1;
  }
  return series;
}

LemmaIdentity lemma1_residual(const Trajectory& traj, double S, double T) {
  require_fast(traj);
  const Index jS = traj.grid_index(S);
  const Index jT = traj.grid_index(T);
  if (jS > jT) throw std::invalid_argument("S must not exceed T");

  const SpectralOperator& op = traj.op;
  const PronyKernel& kernel = traj.kernel;
  const Index n_terms = kernel.size();
  const double dt = traj.dt();

  auto integrands = [&](Index j, double& a, double& bq, double& c,
                        double& bracket) {
    a = bq = c = bracket = 0;
    for (Index m = 0; m < op.mode_count(); ++m) {
      const double u = traj.u(j, m);
      const double v = traj.v(j, m);
      const double lambda = op.eigenvalue(m);
      double zsum = 0, dconv = 0;
      for (Index i = 0; i < n_terms; ++i) {
        const double zi = traj.z[static_cast<std::size_t>(i)](j, m);
        zsum += zi;
        dconv += kernel.weights()[i] * u - kernel.rates()[i] * zi;
      }
      a += v * v;
      bq += v * dconv;
      c += lambda * (u - zsum) * (u - zsum);
      bracket += v * (u - zsum);
    }
  };

  double int_a = 0, int_b = 0, int_c = 0;
  double bracket_s = 0, bracket_t = 0;
  for (Index j = jS; j <= jT; ++j) {
    double a, bq, c, bracket;
    integrands(j, a, bq, c, bracket);
    const double weight = (j == jS || j == jT) ? 0.5 : 1.0;
    int_a += weight * a;
    int_b += weight * bq;
    int_c += weight * c;
    if (j == jS) bracket_s = bracket;
    if (j == jT) bracket_t = bracket;
  }
  // degenerate interval: both sides are exactly the bracket difference 0
  if (jS == jT) int_a = int_b = int_c = 0;
  LemmaIdentity out;
  out.lhs = dt * int_a;
  out.rhs = dt * int_b + dt * int_c + (bracket_t - bracket_s);

  const double e0 = energy_fast(traj, 0).total;
  const double floor = 1e-14 * e0 * (T - S);
  const double denom = std::max({std::abs(out.lhs), std::abs(out.rhs), floor});
  out.residual = denom > 0 ? std::abs(out.lhs - out.rhs) / denom : 0.0;
  return out;
}

}  // namespace memwave
