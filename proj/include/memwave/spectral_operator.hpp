#pragma once

#include <optional>
#include <string>

#include "memwave/types.hpp"

namespace memwave {

// Self-adjoint coercive operator in diagonal form: everything the estimates
// use is expressed through the eigenvalues, so the operator is just its
// spectrum plus a label. Eigenvalues are stored ascending; the coercivity
// constant is the smallest one.
class SpectralOperator {
 public:
  SpectralOperator(Vec eigenvalues, std::string label,
                   std::optional<double> domain_length = std::nullopt);

  Index mode_count() const { return eigenvalues_.size(); }
  const Vec& eigenvalues() const { return eigenvalues_; }
  double eigenvalue(Index m) const { return eigenvalues_[m]; }
  double coercivity() const { return eigenvalues_[0]; }
  const std::string& label() const { return label_; }

  // Set for operators built by dirichlet_laplacian_1d; required by
  // project_function_1d.
  std::optional<double> domain_length() const { return domain_length_; }

 private:
  Vec eigenvalues_;
  std::string label_;
  std::optional<double> domain_length_;
};

// Dirichlet Laplacian on (0, L): eigenvalues (m pi / L)^2 with orthonormal
// eigenfunctions sqrt(2/L) sin(m pi x / L), m = 1..mode_count.
SpectralOperator dirichlet_laplacian_1d(double length, Index mode_count);

// User-supplied spectrum. Entries are sorted ascending; any entry <= 0 is
// rejected.
SpectralOperator diagonal_operator(Vec eigenvalues,
                                   std::string label = "diagonal");

// Projects samples of f onto the Dirichlet eigenfunctions by the composite
// trapezoid rule. The samples live on the uniform interior grid
// x_j = j L / (n+1), j = 1..n; the boundary values are zero by the boundary
// condition, so the end panels contribute nothing.
Vec project_function_1d(const SpectralOperator& op, const Vec& samples);

// ||A^{1/2} u||^2 = sum_m lambda_m c_m^2 for eigenbasis coefficients c.
double h1_seminorm_sq(const SpectralOperator& op, const Vec& coeffs);

// Per-mode displacement and velocity coefficients at t = 0.
struct InitialData {
  Vec u0;
  Vec v0;
};

// u0 = e_1 / sqrt(lambda_1), v0 = 0: unit H^1 seminorm in the first mode.
InitialData first_mode_data(const SpectralOperator& op);

// First k modes with equal H^1 share and unit total seminorm, v0 = 0.
InitialData equipartition_data(const SpectralOperator& op, Index k);

// Seed-fixed irregular data with spectral decay: u0_m ~ m^{-2}, v0_m ~ m^{-1}
// times splitmix64 draws in [-1, 1).
InitialData seeded_data(const SpectralOperator& op, std::uint64_t seed);

}  // namespace memwave
