#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "hessianlab/verify.hpp"

namespace hessianlab {

// Run metadata echoed into the machine-readable reports.
struct ReportMeta {
  std::string command;
  std::string potential;
  int n = 0;
  VecX lo, hi;
  std::vector<int> grid_count;
  int jet_order = kDefaultJetOrder;
  std::optional<long> seed;
  Tolerances tol;
};

// 17 significant digits; reports are byte-stable across runs.
std::string fmt_real(double v);

// Fixed column order:
//   x1..xn, rho, Phi, J, S, K_maxabs, R_maxabs, ein_a, ein_res,
//   res_eq4, res_prop1, res_prop2, res_eq3, res_eq12, res_ricci_bound, status
// Skipped or unrequested checks serialize as empty fields; the status column
// carries skip reasons and pipeline errors.
std::string to_csv(const SweepReport& rep);

std::string to_json(const SweepReport& rep, const ReportMeta& meta);
std::string to_json(const Classification& c, const ReportMeta& meta);
std::string to_json(const FdOracleReport& rep, const ReportMeta& meta, const VecX& point);

// Write via a temporary file in the same directory, then rename.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace hessianlab
