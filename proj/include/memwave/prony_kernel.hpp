#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "memwave/types.hpp"

namespace memwave {

// Mass regime the kernel claims for itself. Glassy kernels carry unit mass
// (sum b_i/r_i = 1), subcritical ones stay strictly below it, raw kernels make
// no claim at all and may even be the empty sum k == 0.
enum class Strictness { Glassy, Subcritical, Raw };

std::string to_string(Strictness s);
Strictness strictness_from_string(const std::string& name);

// Exponential-sum relaxation kernel  k(t) = sum_i b_i exp(-r_i t).
//
// Terms are kept in input order; terms with exactly equal rates are merged at
// construction (b_i + b_j). Weights and rates are stored as given, including
// nonpositive values, so that validate_kernel can report them as violations.
template <typename Scalar = double>
class PronyKernelT {
 public:
  PronyKernelT() : strictness_(Strictness::Raw) {}

  PronyKernelT(const std::vector<std::pair<Scalar, Scalar>>& terms,
               Strictness strictness)
      : strictness_(strictness) {
    std::vector<Scalar> b, r;
    for (const auto& [bi, ri] : terms) {
      bool merged = false;
      for (std::size_t j = 0; j < r.size(); ++j) {
        if (r[j] == ri) {
          b[j] += bi;
          merged = true;
          break;
        }
      }
      if (!merged) {
        b.push_back(bi);
        r.push_back(ri);
      }
    }
    weights_ = Eigen::Map<const Array<Scalar>>(b.data(), b.size());
    rates_ = Eigen::Map<const Array<Scalar>>(r.data(), r.size());
  }

  Index size() const { return weights_.size(); }
  bool empty() const { return weights_.size() == 0; }
  Strictness strictness() const { return strictness_; }
  const Array<Scalar>& weights() const { return weights_; }
  const Array<Scalar>& rates() const { return rates_; }

  // k(t) = sum b_i exp(-r_i t)
  Scalar eval(Scalar t) const {
    require_nonnegative(t);
    if (empty()) return Scalar(0);
    return (weights_ * (-rates_ * t).exp()).sum();
  }

  // k'(t) = -sum b_i r_i exp(-r_i t)
  Scalar derivative(Scalar t) const {
    require_nonnegative(t);
    if (empty()) return Scalar(0);
    return -(weights_ * rates_ * (-rates_ * t).exp()).sum();
  }

  // int_0^inf k = sum b_i / r_i, in closed form; 0 for the empty sum.
  Scalar mass() const {
    if (empty()) return Scalar(0);
    return (weights_ / rates_).sum();
  }

  // int_t^inf k = sum (b_i / r_i) exp(-r_i t)
  Scalar tail_mass(Scalar t) const {
    require_nonnegative(t);
    if (empty()) return Scalar(0);
    return (weights_ / rates_ * (-rates_ * t).exp()).sum();
  }

  // k(0) = sum b_i
  Scalar k0() const { return empty() ? Scalar(0) : weights_.sum(); }

  // Largest eta with k' <= -eta k for all t, namely min_i r_i:
  // k' + eta k = sum b_i (eta - r_i) exp(-r_i t) <= 0 iff eta <= min r_i.
  Scalar eta() const {
    if (empty())
      throw std::domain_error("eta is undefined for the empty kernel");
    return rates_.minCoeff();
  }

  // 1 - int_0^t k. Equals tail_mass(t) when the mass is exactly 1, stays
  // correct for subcritical and raw kernels, and is exactly 1 at t = 0.
  Scalar elastic_coefficient(Scalar t) const {
    return Scalar(1) - (mass() - tail_mass(t));
  }

  // Per-term weighted window  I_i(t) = (b_i / r_i) (1 - exp(-r_i t)),
  // i.e. int_0^t b_i exp(-r_i (t-s)) ds in closed form.
  Array<Scalar> term_windows(Scalar t) const {
    require_nonnegative(t);
    return weights_ / rates_ * (Scalar(1) - (-rates_ * t).exp());
  }

 private:
  static void require_nonnegative(Scalar t) {
    if (t < Scalar(0))
      throw std::domain_error("kernel evaluation requires t >= 0");
  }

  Array<Scalar> weights_;
  Array<Scalar> rates_;
  Strictness strictness_;
};

using PronyKernel = PronyKernelT<double>;

struct KernelReport {
  double mass = 0;
  double k0 = 0;
  double eta = 0;  // min rate; 0 for the empty kernel
  bool is_glassy = false;
  std::vector<std::string> violations;

  bool valid() const { return violations.empty(); }
};

constexpr double kDefaultMassTolerance = 1e-9;

// Checks the admissibility assumptions and the declared strictness.
// Violations are reported as data; nothing here throws on bad kernels.
KernelReport validate_kernel(const PronyKernel& kernel,
                             double mass_tolerance = kDefaultMassTolerance);

// Kernel given only by samples on a uniform time grid, k(j dt) = values[j].
// Second-class input for the direct-quadrature simulator; the admissibility
// assumptions are checked numerically on the grid points.
struct TabulatedKernel {
  Vec values;
  double dt = 0;

  std::vector<std::string> validate_numeric(
      double mass_tolerance = kDefaultMassTolerance) const;
};

// Samples a Prony kernel on the grid {0, dt, ..., n_points-1 dt}.
TabulatedKernel sample_kernel(const PronyKernel& kernel, Index n_points,
                              double dt);

}  // namespace memwave
