#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "memwave/decay.hpp"
#include "memwave/energy.hpp"
#include "memwave/simulate.hpp"

namespace memwave {

// 17 significant digits, C locale, round-trip exact.
std::string g17(double x);

// One row per (time, mode) pair, separator ", ", LF line endings.
// Header: t, mode, u, v, conv [, z_i..., w_i... on the fast path]
// [, E, E_kin, E_ela, E_his, dE when energies are given].
// Energy columns are trajectory-level and repeat across the mode rows of a
// time step. stride thins the written steps only.
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const EnergySeries* energies, Index stride);

struct VerifyCheck {
  std::string name;
  double value = 0;
  double tolerance = 0;
  bool pass = false;
};

struct VerifyReport {
  std::string scenario_name;
  std::string scope_note;
  std::string kernel_line;
  std::string operator_line;
  bool has_alpha = false;
  double alpha = 0;
  bool fit_available = false;
  double alpha_fitted = 0;
  std::vector<VerifyCheck> checks;
  std::vector<KomornikEntry> komornik_entries;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

void write_verify_text(std::ostream& os, const VerifyReport& report);
void write_verify_csv(const std::string& path, const VerifyReport& report);

// Header: eta, k0, alpha_theory, alpha_fitted, bound_margin, komornik_max.
// Skipped rows become '# skipped eta=...' comment lines.
void write_sweep_csv(const std::string& path,
                     const std::vector<SweepRow>& rows);

}  // namespace memwave
