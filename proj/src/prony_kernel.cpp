#include "memwave/prony_kernel.hpp"

#include <cmath>
#include <sstream>

namespace memwave {

std::string to_string(Strictness s) {
  switch (s) {
    case Strictness::Glassy:
      return "glassy";
    case Strictness::Subcritical:
      return "subcritical";
    case Strictness::Raw:
      return "raw";
  }
  return "unknown";
}

Strictness strictness_from_string(const std::string& name) {
  if (name == "glassy") return Strictness::Glassy;
  if (name == "subcritical") return Strictness::Subcritical;
  if (name == "raw") return Strictness::Raw;
  throw std::invalid_argument("unknown strictness '" + name +
                              "' (expected glassy, subcritical or raw)");
}

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

KernelReport validate_kernel(const PronyKernel& kernel,
                             double mass_tolerance) {
  if (!(mass_tolerance > 0))
    throw std::invalid_argument("mass_tolerance must be > 0");

  KernelReport report;
  report.mass = kernel.mass();
  report.k0 = kernel.k0();
  report.eta = kernel.empty() ? 0.0 : kernel.eta();
  report.is_glassy = std::abs(report.mass - 1.0) <= mass_tolerance;

  for (Index i = 0; i < kernel.size(); ++i) {
    if (!(kernel.weights()[i] > 0))
      report.violations.push_back("term " + std::to_string(i) + ": weight " +
                                  fmt(kernel.weights()[i]) + " must be > 0");
    if (!(kernel.rates()[i] > 0))
      report.violations.push_back("term " + std::to_string(i) + ": rate " +
                                  fmt(kernel.rates()[i]) + " must be > 0");
  }
  if (kernel.empty() && kernel.strictness() != Strictness::Raw)
    report.violations.push_back(
        "kernel is empty: k(0) > 0 fails; only raw kernels may be the empty "
        "sum");
  if (kernel.strictness() == Strictness::Glassy &&
      std::abs(report.mass - 1.0) > mass_tolerance)
    report.violations.push_back("mass " + fmt(report.mass) +
                                " != 1 (declared glassy)");
  if (kernel.strictness() == Strictness::Subcritical && report.mass >= 1.0)
    report.violations.push_back("mass " + fmt(report.mass) +
                                " >= 1 (declared subcritical)");
  if (report.mass > 1.0 + mass_tolerance)
    report.violations.push_back(
        "mass " + fmt(report.mass) +
        " > 1: the elastic coefficient 1 - int_0^t k would go negative");
  return report;
}

std::vector<std::string> TabulatedKernel::validate_numeric(
    double mass_tolerance) const {
  std::vector<std::string> violations;
  if (!(dt > 0)) {
    violations.push_back("dt must be > 0");
    return violations;
  }
  if (values.size() == 0) {
    violations.push_back("no samples");
    return violations;
  }
  const double k0 = values[0];
  if (values.maxCoeff() > 0 && !(k0 > 0))
    violations.push_back("k(0) = " + std::to_string(k0) + " must be > 0");
  double mass = 0;
  for (Index j = 0; j + 1 < values.size(); ++j)
    mass += 0.5 * dt * (values[j] + values[j + 1]);
  const double slack = 1e-12 * std::max(1.0, k0);
  for (Index j = 0; j < values.size(); ++j) {
    if (values[j] < -slack) {
      violations.push_back("sample " + std::to_string(j) + " is negative");
      break;
    }
  }
  for (Index j = 0; j + 1 < values.size(); ++j) {
    if (values[j + 1] > values[j] + slack) {
      violations.push_back("samples increase at index " + std::to_string(j));
      break;
    }
  }
  if (mass > 1.0 + mass_tolerance)
    violations.push_back("grid mass " + std::to_string(mass) + " > 1");
  return violations;
}

TabulatedKernel sample_kernel(const PronyKernel& kernel, Index n_points,
                              double dt) {
  if (n_points < 1) throw std::invalid_argument("need at least one sample");
  if (!(dt > 0)) throw std::invalid_argument("dt must be > 0");
  TabulatedKernel tab;
  tab.dt = dt;
  tab.values.resize(n_points);
  for (Index j = 0; j < n_points; ++j)
    tab.values[j] = kernel.eval(static_cast<double>(j) * dt);
  return tab;
}

}  // namespace memwave
