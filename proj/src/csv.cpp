#include "memwave/csv.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace memwave {

std::string g17(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // LF only, no locale
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

}  // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const EnergySeries* energies, Index stride) {
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  std::ofstream out = open_output(path);

  const bool fast = traj.method == Method::Fast;
  const Index n_terms = fast ? traj.kernel.size() : 0;
  out << "t, mode, u, v, conv";
  for (Index i = 0; i < n_terms; ++i) out << ", z_" << (i + 1);
  for (Index i = 0; i < n_terms; ++i) out << ", w_" << (i + 1);
  if (energies) out << ", E, E_kin, E_ela, E_his, dE";
  out << "\n";

  for (Index j = 0; j < traj.steps(); j += stride) {
    for (Index m = 0; m < traj.modes(); ++m) {
      out << g17(traj.times[j]) << ", " << (m + 1) << ", "
          << g17(traj.u(j, m)) << ", " << g17(traj.v(j, m)) << ", "
          << g17(traj.convolution_at(j, m));
      for (Index i = 0; i < n_terms; ++i)
        out << ", " << g17(traj.z[static_cast<std::size_t>(i)](j, m));
      for (Index i = 0; i < n_terms; ++i)
        out << ", " << g17(traj.w[static_cast<std::size_t>(i)](j, m));
      if (energies)
        out << ", " << g17(energies->total[j]) << ", "
            << g17(energies->kinetic[j]) << ", " << g17(energies->elastic[j])
            << ", " << g17(energies->history[j]) << ", "
            << g17(energies->rate[j]);
      out << "\n";
    }
  }
}

void write_verify_text(std::ostream& os, const VerifyReport& report) {
  os << "scenario: " << report.scenario_name << "\n";
  os << "scope: " << report.scope_note << "\n";
  os << "kernel: " << report.kernel_line << "\n";
  os << "operator: " << report.operator_line << "\n";
  if (report.has_alpha) os << "alpha: " << g17(report.alpha) << "\n";
  if (report.fit_available)
    os << "alpha_fitted: " << g17(report.alpha_fitted) << "\n";
  os << "\n";
  for (const auto& c : report.checks)
    os << (c.pass ? "PASS " : "FAIL ") << c.name << " value=" << g17(c.value)
       << " tolerance=" << g17(c.tolerance) << "\n";
  if (!report.komornik_entries.empty()) {
    os << "\nkomornik margins:\n";
    for (const auto& e : report.komornik_entries) {
      os << "  S=" << g17(e.S);
      if (e.resolved)
        os << " margin=" << g17(e.margin) << "\n";
      else
        os << " unresolved (energy below resolution floor)\n";
    }
  }
  os << "\noverall: " << (report.all_pass() ? "PASS" : "FAIL") << "\n";
}

void write_verify_csv(const std::string& path, const VerifyReport& report) {
  std::ofstream out = open_output(path);
  out << "check, value, tolerance, verdict\n";
  for (const auto& c : report.checks)
    out << c.name << ", " << g17(c.value) << ", " << g17(c.tolerance) << ", "
        << (c.pass ? "PASS" : "FAIL") << "\n";
}

void write_sweep_csv(const std::string& path,
                     const std::vector<SweepRow>& rows) {
  std::ofstream out = open_output(path);
  out << "eta, k0, alpha_theory, alpha_fitted, bound_margin, komornik_max\n";
  for (const auto& row : rows) {
    if (row.skipped) {
      out << "# skipped eta=" << g17(row.eta) << ": " << row.skip_reason
          << "\n";
      continue;
    }
    out << g17(row.eta) << ", " << g17(row.k0) << ", "
        << g17(row.alpha_theory) << ", " << g17(row.alpha_fitted) << ", "
        << g17(row.bound_margin) << ", " << g17(row.komornik_max) << "\n";
  }
}

}  // namespace memwave
