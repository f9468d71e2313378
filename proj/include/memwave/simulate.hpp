#pragma once

#include <vector>

#include "memwave/prony_kernel.hpp"
#include "memwave/spectral_operator.hpp"
#include "memwave/types.hpp"

namespace memwave {

enum class Method { Fast, Direct };

std::string to_string(Method m);
Method method_from_string(const std::string& name);

// Augmented state of one eigenmode. The memory auxiliaries absorb the
// convolution, z_i(t) = int_0^t b_i exp(-r_i (t-s)) u(s) ds, so that
// sum_i z_i = (k*u)(t) exactly; the energy auxiliaries carry the same
// integral of u^2 for the history term of the energy.
struct ModalState {
  double u = 0;
  double v = 0;
  Vec z;
  Vec w;
};

// Right-hand side of the augmented modal system
//   u' = v
//   v' = -lambda (u - sum_i z_i)
//   z_i' = -r_i z_i + b_i u
//   w_i' = -r_i w_i + b_i u^2
// which reproduces u'' + lambda u - lambda (k*u) = 0 per mode.
ModalState modal_rhs(double lambda, const PronyKernel& kernel,
                     const ModalState& state);

// Time history of all modes on a uniform grid. Matrices are (step, mode);
// z and w hold one matrix per Prony term on the fast path and a single
// matrix on the direct path (the quadrature values of k*u and k*u^2).
struct Trajectory {
  Vec times;
  Mat u;
  Mat v;
  std::vector<Mat> z;
  std::vector<Mat> w;
  SpectralOperator op;
  PronyKernel kernel;
  Method method = Method::Fast;
  bool tabulated = false;
  Vec kernel_samples;  // only set for tabulated direct runs

  Index steps() const { return times.size(); }
  Index modes() const { return u.cols(); }
  double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
  double final_time() const { return times[times.size() - 1]; }

  ModalState state_at(Index step, Index mode) const;
  // (k*u)(t_j) for one mode: sum of the z auxiliaries on the fast path,
  // the stored quadrature on the direct path.
  double convolution_at(Index step, Index mode) const;

  // Grid index of time t; throws if t is not a grid point.
  Index grid_index(double t) const;
};

// dt sqrt(lambda_max) and dt r_max must stay below this for the classical
// RK4 step to be stable (imaginary-axis stability limit 2 sqrt 2).
constexpr double kRk4StabilityLimit = 2.8;

// Integrates every mode of u'' + A u - k*Au = 0 with classical RK4 at fixed
// step dt, carrying the memory and energy auxiliaries in the state. The grid
// has floor(T/dt)+1 points; identical inputs give bitwise-identical output.
Trajectory simulate(const SpectralOperator& op, const PronyKernel& kernel,
                    const InitialData& init, double T, double dt);

// Oracle path: same equation, but the convolution is evaluated by composite
// trapezoid quadrature over the stored history inside an implicit trapezoid
// (Crank-Nicolson) step, solved in closed form per step. O(n^2) total,
// second order in dt.
Trajectory simulate_direct(const SpectralOperator& op,
                           const PronyKernel& kernel, const InitialData& init,
                           double T, double dt);

// Direct path for a kernel known only through samples on the simulation
// grid. Second-class input: admissibility is checked numerically.
Trajectory simulate_direct(const SpectralOperator& op,
                           const TabulatedKernel& kernel,
                           const InitialData& init, double T, double dt);

// Exact solution of one mode with a single-term kernel, via the roots of
//   s^3 + r s^2 + lambda s + lambda (r - b) = 0.
// Distinct roots give a plain exponential basis; clustered roots switch to
// the confluent basis t^p exp(s t). b = 0 is allowed and reproduces the
// conservative oscillator.
struct ModalPoint {
  double u = 0;
  double v = 0;
  double z = 0;
};

ModalPoint exact_modal_solution(double lambda, double b, double r, double u0,
                                double v0, double t);
ModalPoint exact_modal_solution(double lambda, const PronyKernel& kernel,
                                double u0, double v0, double t);

}  // namespace memwave
