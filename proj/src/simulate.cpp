#include "memwave/simulate.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

namespace memwave {

std::string to_string(Method m) {
  return m == Method::Fast ? "fast" : "direct";
}

Method method_from_string(const std::string& name) {
  if (name == "fast") return Method::Fast;
  if (name == "direct") return Method::Direct;
  throw std::invalid_argument("unknown method '" + name +
                              "' (expected fast or direct)");
}

namespace {

// Shared grid construction: floor(T/dt)+1 points, t_j = j dt. The small
// relative slack keeps T/dt values like 10/1e-3 from losing their last step.
Vec make_grid(double T, double dt) {
  if (!(dt > 0)) throw std::invalid_argument("dt must be > 0");
  if (!(T >= dt)) throw std::invalid_argument("final time T must be >= dt");
  const auto n = static_cast<Index>(std::floor(T / dt * (1.0 + 1e-12))) + 1;
  Vec times(n);
  for (Index j = 0; j < n; ++j) times[j] = static_cast<double>(j) * dt;
  return times;
}

void check_inputs(const SpectralOperator& op, const PronyKernel& kernel,
                  const InitialData& init) {
  const KernelReport report = validate_kernel(kernel);
  if (!report.valid()) {
    std::ostringstream os;
    os << "kernel failed validation:";
    for (const auto& v : report.violations) os << "\n  " << v;
    throw std::invalid_argument(os.str());
  }
  if (init.u0.size() != op.mode_count() || init.v0.size() != op.mode_count())
    throw std::invalid_argument(
        "initial data length does not match the operator mode count");
}

// u' = v, v' = -lambda (u - sum z), z_i' = -r_i z_i + b_i u,
// w_i' = -r_i w_i + b_i u^2, on the flat layout [u, v, z..., w...].
void rhs_flat(double lambda, const Array<double>& b, const Array<double>& r,
              const double* y, double* dy) {
  const Index n = b.size();
  const double u = y[0];
  double zsum = 0;
  for (Index i = 0; i < n; ++i) zsum += y[2 + i];
  dy[0] = y[1];
  dy[1] = -lambda * (u - zsum);
  const double usq = u * u;
  for (Index i = 0; i < n; ++i) {
    dy[2 + i] = -r[i] * y[2 + i] + b[i] * u;
    dy[2 + n + i] = -r[i] * y[2 + n + i] + b[i] * usq;
  }
}

}  // namespace

ModalState modal_rhs(double lambda, const PronyKernel& kernel,
                     const ModalState& state) {
  const Index n = kernel.size();
  if (state.z.size() != n || state.w.size() != n)
    throw std::invalid_argument(
        "state auxiliary count does not match the kernel term count");
  Vec y(2 + 2 * n), dy(2 + 2 * n);
  y[0] = state.u;
  y[1] = state.v;
  y.segment(2, n) = state.z;
  y.segment(2 + n, n) = state.w;
  rhs_flat(lambda, kernel.weights(), kernel.rates(), y.data(), dy.data());
  ModalState d;
  d.u = dy[0];
  d.v = dy[1];
  d.z = dy.segment(2, n);
  d.w = dy.segment(2 + n, n);
  return d;
}

ModalState Trajectory::state_at(Index step, Index mode) const {
  ModalState s;
  s.u = u(step, mode);
  s.v = v(step, mode);
  s.z.resize(static_cast<Index>(z.size()));
  s.w.resize(static_cast<Index>(w.size()));
  for (std::size_t i = 0; i < z.size(); ++i) {
    s.z[static_cast<Index>(i)] = z[i](step, mode);
    s.w[static_cast<Index>(i)] = w[i](step, mode);
  }
  return s;
}

double Trajectory::convolution_at(Index step, Index mode) const {
  double acc = 0;
  for (const auto& zi : z) acc += zi(step, mode);
  return acc;
}

Index Trajectory::grid_index(double t) const {
  const double step = dt();
  if (step <= 0) throw std::logic_error("degenerate trajectory grid");
  const auto j = static_cast<Index>(std::llround(t / step));
  if (j < 0 || j >= steps() || std::abs(times[j] - t) > 1e-9 * std::max(1.0, std::abs(t)))
    throw std::invalid_argument("time " + std::to_string(t) +
                                " is not on the trajectory grid");
  return j;
}

Trajectory simulate(const SpectralOperator& op, const PronyKernel& kernel,
                    const InitialData& init, double T, double dt) {
  check_inputs(op, kernel, init);
  Vec times = make_grid(T, dt);
  const Index n_steps = times.size();
  const Index modes = op.mode_count();
  const Index n_terms = kernel.size();

  Trajectory traj{std::move(times),
                  Mat(n_steps, modes),
                  Mat(n_steps, modes),
                  std::vector<Mat>(n_terms, Mat(n_steps, modes)),
                  std::vector<Mat>(n_terms, Mat(n_steps, modes)),
                  op,
                  kernel,
                  Method::Fast,
                  false,
                  Vec()};

  const Array<double>& b = kernel.weights();
  const Array<double>& r = kernel.rates();
  const Index dim = 2 + 2 * n_terms;
  Vec y(dim), k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);

  for (Index m = 0; m < modes; ++m) {
    const double lambda = op.eigenvalue(m);
    y.setZero();
    y[0] = init.u0[m];
    y[1] = init.v0[m];
    for (Index j = 0;; ++j) {
      traj.u(j, m) = y[0];
      traj.v(j, m) = y[1];
      for (Index i = 0; i < n_terms; ++i) {
        traj.z[i](j, m) = y[2 + i];
        traj.w[i](j, m) = y[2 + n_terms + i];
      }
      if (j + 1 == n_steps) break;
      rhs_flat(lambda, b, r, y.data(), k1.data());
      tmp = y + 0.5 * dt * k1;
      rhs_flat(lambda, b, r, tmp.data(), k2.data());
      tmp = y + 0.5 * dt * k2;
      rhs_flat(lambda, b, r, tmp.data(), k3.data());
      tmp = y + dt * k3;
      rhs_flat(lambda, b, r, tmp.data(), k4.data());
      y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  return traj;
}

namespace {

Trajectory direct_core(const SpectralOperator& op, const PronyKernel& kernel,
                       const Vec& samples, bool tabulated,
                       const InitialData& init, double T, double dt) {
  Vec times = make_grid(T, dt);
  const Index n_steps = times.size();
  const Index modes = op.mode_count();

  Trajectory traj{std::move(times),
                  Mat(n_steps, modes),
                  Mat(n_steps, modes),
                  std::vector<Mat>(1, Mat::Zero(n_steps, modes)),
                  std::vector<Mat>(1, Mat::Zero(n_steps, modes)),
                  op,
                  kernel,
                  Method::Direct,
                  tabulated,
                  tabulated ? samples : Vec()};

  const double k0 = samples[0];
  for (Index m = 0; m < modes; ++m) {
    const double lambda = op.eigenvalue(m);
    const double mu = lambda * (1.0 - 0.5 * dt * k0);
    const double det = 1.0 + 0.25 * dt * dt * mu;
    auto u = traj.u.col(m);
    auto v = traj.v.col(m);
    auto conv = traj.z[0].col(m);
    auto convsq = traj.w[0].col(m);
    u[0] = init.u0[m];
    v[0] = init.v0[m];
    double accel = -lambda * u[0];
    for (Index j = 0; j + 1 < n_steps; ++j) {
      // trapezoid weights for the new history integral at t_{j+1}, with the
      // still-unknown endpoint u_{j+1} split off
      double known = 0.5 * samples[j + 1] * u[0];
      double known_sq = 0.5 * samples[j + 1] * u[0] * u[0];
      for (Index l = 1; l <= j; ++l) {
        const double kv = samples[j + 1 - l];
        known += kv * u[l];
        known_sq += kv * u[l] * u[l];
      }
      known *= dt;
      known_sq *= dt;
      const double p = u[j] + 0.5 * dt * v[j];
      const double q = v[j] + 0.5 * dt * accel + 0.5 * dt * lambda * known;
      u[j + 1] = (p + 0.5 * dt * q) / det;
      v[j + 1] = (q - 0.5 * dt * mu * p) / det;
      conv[j + 1] = known + 0.5 * dt * k0 * u[j + 1];
      convsq[j + 1] = known_sq + 0.5 * dt * k0 * u[j + 1] * u[j + 1];
      accel = -lambda * (u[j + 1] - conv[j + 1]);
    }
  }
  return traj;
}

}  // namespace

Trajectory simulate_direct(const SpectralOperator& op,
                           const PronyKernel& kernel, const InitialData& init,
                           double T, double dt) {
  check_inputs(op, kernel, init);
  const Vec times = make_grid(T, dt);
  const TabulatedKernel tab = sample_kernel(kernel, times.size(), dt);
  return direct_core(op, kernel, tab.values, false, init, T, dt);
}

Trajectory simulate_direct(const SpectralOperator& op,
                           const TabulatedKernel& kernel,
                           const InitialData& init, double T, double dt) {
  const auto violations = kernel.validate_numeric();
  if (!violations.empty()) {
    std::ostringstream os;
    os << "tabulated kernel failed numeric validation:";
    for (const auto& v : violations) os << "\n  " << v;
    throw std::invalid_argument(os.str());
  }
  if (init.u0.size() != op.mode_count() || init.v0.size() != op.mode_count())
    throw std::invalid_argument(
        "initial data length does not match the operator mode count");
  const Vec times = make_grid(T, dt);
  if (kernel.values.size() < times.size())
    throw std::invalid_argument("tabulated kernel has fewer samples than "
                                "grid points");
  if (std::abs(kernel.dt - dt) > 1e-12 * std::max(1.0, dt))
    throw std::invalid_argument("tabulated kernel dt does not match the "
                                "simulation step");
  return direct_core(op, PronyKernel{}, kernel.values, true, init, T, dt);
}

namespace {

// Extended precision for the confluent solve: near-degenerate root
// configurations condition the initial-value system like 1/separation.
using Complex = std::complex<long double>;

struct BasisFunction {
  Complex s;  // root
  int p;      // power of t
};

// f = t^p e^{st} and its first two derivatives at time t.
void basis_eval(const BasisFunction& f, long double t, Complex& f0,
                Complex& f1, Complex& f2) {
  const Complex e = std::exp(f.s * t);
  const long double tp = f.p == 0 ? 1.0L : std::pow(t, (long double)f.p);
  const long double tp1 =
      f.p >= 1 ? (f.p == 1 ? 1.0L : std::pow(t, (long double)(f.p - 1))) : 0.0L;
  const long double tp2 =
      f.p >= 2 ? (f.p == 2 ? 1.0L : std::pow(t, (long double)(f.p - 2))) : 0.0L;
  const long double p = f.p;
  f0 = e * tp;
  f1 = e * (p * tp1 + f.s * tp);
  f2 = e * (p * (p - 1) * tp2 + 2.0L * p * f.s * tp1 + f.s * f.s * tp);
}

// 3x3 complex Gaussian elimination with partial pivoting.
std::array<Complex, 3> solve3(std::array<std::array<Complex, 3>, 3> a,
                              std::array<Complex, 3> rhs) {
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 3; ++row)
      if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
    std::swap(a[col], a[pivot]);
    std::swap(rhs[col], rhs[pivot]);
    for (int row = col + 1; row < 3; ++row) {
      const Complex factor = a[row][col] / a[col][col];
      for (int k = col; k < 3; ++k) a[row][k] -= factor * a[col][k];
      rhs[row] -= factor * rhs[col];
    }
  }
  std::array<Complex, 3> x;
  for (int row = 2; row >= 0; --row) {
    Complex acc = rhs[row];
    for (int k = row + 1; k < 3; ++k) acc -= a[row][k] * x[k];
    x[row] = acc / a[row][row];
  }
  return x;
}

}  // namespace

ModalPoint exact_modal_solution(double lambda, double b, double r, double u0,
                                double v0, double t) {
  if (!(lambda > 0)) throw std::domain_error("lambda must be > 0");
  if (!(r > 0)) throw std::domain_error("rate must be > 0");
  if (b < 0) throw std::domain_error("weight must be >= 0");

  // companion matrix of s^3 + c2 s^2 + c1 s + c0
  const long double c2 = r;
  const long double c1 = lambda;
  const long double c0 = (long double)lambda * ((long double)r - b);
  Eigen::Matrix3d companion;
  companion << 0, 0, -(double)c0,  //
      1, 0, -(double)c1,           //
      0, 1, -(double)c2;
  const Eigen::EigenSolver<Eigen::Matrix3d> solver(companion);
  std::array<Complex, 3> roots;
  long double scale = 1.0L;
  for (int i = 0; i < 3; ++i) {
    roots[i] = Complex(solver.eigenvalues()[i].real(),
                       solver.eigenvalues()[i].imag());
    scale = std::max(scale, std::abs(roots[i]));
  }

  // Cluster numerically coincident roots; each cluster of size m contributes
  // the confluent basis t^p e^{st}, p = 0..m-1, at the cluster mean. The
  // mean of a clustered pair cancels the eigensolver's O(sqrt(eps)) split.
  const long double tol = 3e-5L * scale;
  const auto poly = [&](Complex s) { return ((s + c2) * s + c1) * s + c0; };
  const auto dpoly = [&](Complex s) { return (3.0L * s + 2.0L * c2) * s + c1; };

  std::array<bool, 3> used{false, false, false};
  std::vector<BasisFunction> basis;
  for (int i = 0; i < 3; ++i) {
    if (used[i]) continue;
    Complex sum = roots[i];
    int count = 1;
    used[i] = true;
    for (int j = i + 1; j < 3; ++j) {
      if (!used[j] &&
          std::abs(roots[j] - sum / (long double)count) <= tol) {
        sum += roots[j];
        ++count;
        used[j] = true;
      }
    }
    Complex root = sum / (long double)count;
    if (count == 1) {
      // simple root: Newton in extended precision tightens the eigensolver
      // estimate without touching the well-conditioned clustered means
      for (int it = 0; it < 3; ++it) {
        const Complex dp = dpoly(root);
        if (std::abs(dp) <= 1e-30L) break;
        root -= poly(root) / dp;
      }
    }
    for (int p = 0; p < count; ++p) basis.push_back({root, p});
  }

  // initial conditions: u(0) = u0, u'(0) = v0, u''(0) = -lambda u0
  std::array<std::array<Complex, 3>, 3> ic;
  for (int col = 0; col < 3; ++col) {
    Complex f0, f1, f2;
    basis_eval(basis[col], 0.0L, f0, f1, f2);
    ic[0][col] = f0;
    ic[1][col] = f1;
    ic[2][col] = f2;
  }
  const std::array<Complex, 3> coeff = solve3(
      ic, {Complex(u0), Complex(v0), Complex(-(long double)lambda * u0)});

  Complex u = 0, v = 0, a = 0;
  for (int i = 0; i < 3; ++i) {
    Complex f0, f1, f2;
    basis_eval(basis[i], t, f0, f1, f2);
    u += coeff[i] * f0;
    v += coeff[i] * f1;
    a += coeff[i] * f2;
  }
  ModalPoint out;
  out.u = (double)u.real();
  out.v = (double)v.real();
  out.z = (double)((a.real() + (long double)lambda * u.real()) / lambda);
  return out;
}

ModalPoint exact_modal_solution(double lambda, const PronyKernel& kernel,
                                double u0, double v0, double t) {
  if (kernel.size() != 1)
    throw std::invalid_argument(
        "exact_modal_solution supports single-term kernels only; use the "
        "direct simulator as the multi-term oracle");
  return exact_modal_solution(lambda, kernel.weights()[0], kernel.rates()[0],
                              u0, v0, t);
}

}  // namespace memwave
