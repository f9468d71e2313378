#pragma once

#include <vector>

#include "memwave/prony_kernel.hpp"
#include "memwave/simulate.hpp"
#include "memwave/spectral_operator.hpp"

namespace memwave {

// E(t) split into its three parts:
//   kinetic = 1/2 ||u'||^2
//   elastic = 1/2 (1 - int_0^t k) ||A^{1/2} u||^2
//   history = 1/2 int_0^t k(t-s) ||A^{1/2}u(s) - A^{1/2}u(t)||^2 ds
// For unit-mass kernels the elastic weight equals the tail mass int_t^inf k.
struct EnergyBreakdown {
  double kinetic = 0;
  double elastic = 0;
  double history = 0;
  double total = 0;
};

struct EnergySeries {
  Vec times;
  Vec kinetic;
  Vec elastic;
  Vec history;
  Vec total;
  Vec rate;  // E'(t); NaN for tabulated direct runs

  Index size() const { return times.size(); }
  EnergyBreakdown breakdown(Index j) const {
    return {kinetic[j], elastic[j], history[j], total[j]};
  }
};

// Closed-form energy from the augmented state: the history term expands under
// the exponential weight as sum_i (w_i - 2 u z_i + u^2 I_i(t)) per mode, with
// I_i the closed-form window int_0^t b_i exp(-r_i (t-s)) ds.
EnergyBreakdown energy_fast(const SpectralOperator& op,
                            const PronyKernel& kernel,
                            const std::vector<ModalState>& states, double t);

// Same at a grid point of a fast-path trajectory.
EnergyBreakdown energy_fast(const Trajectory& traj, Index step);

// Quadrature oracle: the history term by composite trapezoid over the stored
// displacement history. Works on fast- and direct-path trajectories; t must
// be a grid point (no interpolation).
EnergyBreakdown energy_direct(const SpectralOperator& op,
                              const PronyKernel& kernel,
                              const Trajectory& traj, double t);

// E'(t) = 1/2 int_0^t k'(t-s) ||A^{1/2}u(s) - A^{1/2}u(t)||^2 ds
//         - 1/2 k(t) ||A^{1/2}u(t)||^2,
// in closed form: the k' weight of term i is -r_i times its k weight.
double energy_rate(const SpectralOperator& op, const PronyKernel& kernel,
                   const std::vector<ModalState>& states, double t);

double energy_rate(const Trajectory& traj, Index step);

// Energy and rate along the whole trajectory. Fast trajectories use the
// closed forms; direct trajectories reuse their stored quadratures, with the
// rate from a k'-weighted quadrature pass (skipped when with_rate is false).
EnergySeries compute_energy_series(const Trajectory& traj,
                                   bool with_rate = true);

// Both sides of the identity obtained by pairing the equation with u - k*u
// and integrating over [S, T]:
//   int_S^T ||u'||^2
//     = int_S^T <u', (k*u)'> + int_S^T ||A^{1/2}u - k*A^{1/2}u||^2
//       + [<u', u - k*u>]_S^T.
// All integrals by trapezoid on the grid; (k*u)' = sum_i (b_i u - r_i z_i).
struct LemmaIdentity {
  double lhs = 0;
  double rhs = 0;
  double residual = 0;  // |lhs - rhs| / max(|lhs|, |rhs|, floor)
};

LemmaIdentity lemma1_residual(const Trajectory& traj, double S, double T);

}  // namespace memwave
