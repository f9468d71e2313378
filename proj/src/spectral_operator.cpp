#include "memwave/spectral_operator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace memwave {

SpectralOperator::SpectralOperator(Vec eigenvalues, std::string label,
                                   std::optional<double> domain_length)
    : eigenvalues_(std::move(eigenvalues)),
      label_(std::move(label)),
      domain_length_(domain_length) {
  if (eigenvalues_.size() == 0)
    throw std::invalid_argument("operator needs at least one eigenvalue");
  for (Index m = 0; m < eigenvalues_.size(); ++m)
    if (!(eigenvalues_[m] > 0))
      throw std::invalid_argument("eigenvalues must be > 0");
  std::sort(eigenvalues_.begin(), eigenvalues_.end());
}

SpectralOperator dirichlet_laplacian_1d(double length, Index mode_count) {
  if (!(length > 0)) throw std::domain_error("domain length must be > 0");
  if (mode_count < 1) throw std::domain_error("mode_count must be >= 1");
  Vec lambda(mode_count);
  for (Index m = 0; m < mode_count; ++m) {
    const double w = static_cast<double>(m + 1) * std::numbers::pi / length;
    lambda[m] = w * w;
  }
  return SpectralOperator(std::move(lambda), "dirichlet_1d", length);
}

SpectralOperator diagonal_operator(Vec eigenvalues, std::string label) {
  return SpectralOperator(std::move(eigenvalues), std::move(label));
}

Vec project_function_1d(const SpectralOperator& op, const Vec& samples) {
  if (!op.domain_length())
    throw std::invalid_argument(
        "project_function_1d needs an operator built by "
        "dirichlet_laplacian_1d");
  const Index modes = op.mode_count();
  const Index n = samples.size();
  if (n < 2 * modes + 1)
    throw std::invalid_argument("insufficient resolution: need at least " +
                                std::to_string(2 * modes + 1) +
                                " interior samples");
  const double length = *op.domain_length();
  const double h = length / static_cast<double>(n + 1);
  const double amp = std::sqrt(2.0 / length);
  Vec coeffs(modes);
  for (Index m = 0; m < modes; ++m) {
    const double w = static_cast<double>(m + 1) * std::numbers::pi / length;
    double acc = 0;
    for (Index j = 0; j < n; ++j)
      acc += samples[j] * std::sin(w * static_cast<double>(j + 1) * h);
    coeffs[m] = amp * h * acc;
  }
  return coeffs;
}

double h1_seminorm_sq(const SpectralOperator& op, const Vec& coeffs) {
  if (coeffs.size() != op.mode_count())
    throw std::invalid_argument("coefficient count does not match the mode "
                                "count");
  return op.eigenvalues().cwiseProduct(coeffs.cwiseAbs2()).sum();
}

InitialData first_mode_data(const SpectralOperator& op) {
  InitialData data;
  data.u0 = Vec::Zero(op.mode_count());
  data.v0 = Vec::Zero(op.mode_count());
  data.u0[0] = 1.0 / std::sqrt(op.coercivity());
  return data;
}

InitialData equipartition_data(const SpectralOperator& op, Index k) {
  if (k < 1 || k > op.mode_count())
    throw std::invalid_argument("equipartition mode count out of range");
  InitialData data;
  data.u0 = Vec::Zero(op.mode_count());
  data.v0 = Vec::Zero(op.mode_count());
  for (Index m = 0; m < k; ++m)
    data.u0[m] = 1.0 / std::sqrt(static_cast<double>(k) * op.eigenvalue(m));
  return data;
}

InitialData seeded_data(const SpectralOperator& op, std::uint64_t seed) {
  const Index modes = op.mode_count();
  const Vec draws = seeded_coefficients(2 * modes, seed);
  InitialData data;
  data.u0.resize(modes);
  data.v0.resize(modes);
  for (Index m = 0; m < modes; ++m) {
    const double mm = static_cast<double>(m + 1);
    data.u0[m] = draws[2 * m] / (mm * mm);
    data.v0[m] = draws[2 * m + 1] / mm;
  }
  return data;
}

}  // namespace memwave
