#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hessianlab/expr.hpp"
#include "hessianlab/geometry.hpp"
#include "hessianlab/types.hpp"

namespace hessianlab {

struct Tolerances {
  double identity_tol = 1e-9;
  double inequality_tol = 1e-8;
  double classify_tol = 1e-8;
  double phi_floor = 1e-10;   // below this, Phi-division checks are skipped
  double fd_rel_tol = 1e-5;
};

enum class CheckId : int {
  Eq3 = 0,       // Delta J >= 2(n+1) J^2                       (inequality)
  Eq4,           // Delta rho = (n+4)/2 |grad rho|^2_G / rho     (identity)
  Eq12,          // Phi_,i = 2 A_i11 (rho_,1)^2 / rho^2          (identity, adapted frame)
  Prop1,         // Delta Phi lower bound, Ricci-flat case       (inequality)
  Prop2,         // Delta Phi lower bound, S == 0 case           (inequality)
  RicciBound,    // lambda_min(G^-1 Ric) >= -(n+2)^2/16 Phi      (inequality)
  Identities,    // tensor symmetries, trace and rho identities  (identity)
};
inline constexpr int kNumChecks = 7;

std::string_view to_string(CheckId id);
std::optional<CheckId> check_from_string(std::string_view name);
bool is_inequality(CheckId id);

enum class SkipReason {
  None,
  NotRicciFlat,
  PhiBelowFloor,
  DimensionTooSmall,
  DegenerateGradient,
  ScalarCurvatureNonzero,
};
std::string_view to_string(SkipReason r);

struct CheckResult {
  CheckId id = CheckId::Eq4;
  VecX point;
  double lhs = 0.0;
  double rhs = 0.0;
  // Identities: scaled |lhs - rhs| (pass when <= tol). Inequalities:
  // lhs - rhs (pass when >= -tol).
  double residual = 0.0;
  bool pass = false;
  bool skipped = false;
  SkipReason reason = SkipReason::None;
  bool advisory = false;  // reported but never counted as a failure
};

struct Domain {
  VecX lo, hi;
  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const VecX& x) const {
    for (int i = 0; i < x.size(); ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }
};

struct GridSpec {
  VecX lo, hi;
  std::vector<int> count;

  int dim() const { return static_cast<int>(count.size()); }
  long total() const {
    long t = 1;
    for (int c : count) t *= c;
    return t;
  }
  // Row-major node enumeration: the first axis varies slowest.
  VecX node(long index) const;
};

// Per-point evaluation shared by all checkers: plain values plus, when
// `nest` > 0, the order-`nest` jets of Phi, J and rho in the base point.
struct NodeEval {
  PointGeometry vals;
  std::optional<Jet> phi_jet, j_jet, rho_jet;
  int nest = 0;

  VecX jet_grad(const Jet& u) const;
  MatX jet_hess(const Jet& u) const;
  double laplacian(const Jet& u) const;
};
NodeEval eval_node(const Ast& f, const VecX& x, int nest, int base_order = kDefaultJetOrder);
int nest_required(const std::vector<CheckId>& checks);

// Pointwise checkers. Gates that do not apply return skipped results rather
// than failures (e.g. the Delta Phi bounds only hold on Ricci-flat samples).
CheckResult check_eq3(const NodeEval& ne, const Tolerances& tol, bool unscoped = false);
CheckResult check_eq4(const NodeEval& ne, const Tolerances& tol);
CheckResult check_eq12(const NodeEval& ne, const Tolerances& tol);
CheckResult check_prop1(const NodeEval& ne, const Tolerances& tol);
CheckResult check_prop2(const NodeEval& ne, const Tolerances& tol);
CheckResult check_ricci_bound(const NodeEval& ne, const Tolerances& tol);
CheckResult check_identities(const NodeEval& ne, const Tolerances& tol);
CheckResult run_check(CheckId id, const NodeEval& ne, const Tolerances& tol,
                      bool eq3_unscoped = false);

// Convenience single-point forms.
CheckResult check_eq3(const Ast& f, const VecX& x, const Tolerances& tol,
                      bool unscoped = false, int base_order = kDefaultJetOrder);
CheckResult check_eq4(const Ast& f, const VecX& x, const Tolerances& tol,
                      int base_order = kDefaultJetOrder);
CheckResult check_eq12(const Ast& f, const VecX& x, const Tolerances& tol,
                       int base_order = kDefaultJetOrder);
CheckResult check_prop1(const Ast& f, const VecX& x, const Tolerances& tol,
                        int base_order = kDefaultJetOrder);
CheckResult check_prop2(const Ast& f, const VecX& x, const Tolerances& tol,
                        int base_order = kDefaultJetOrder);
CheckResult check_ricci_bound(const Ast& f, const VecX& x, const Tolerances& tol,
                              int base_order = kDefaultJetOrder);
CheckResult check_identities(const Ast& f, const VecX& x, const Tolerances& tol,
                             int base_order = kDefaultJetOrder);

struct Classification {
  struct Flag {
    bool holds = false;
    double max_residual = 0.0;
  };
  Flag flat, ricci_flat, scalar_flat, einstein;
  double einstein_a = 0.0;       // grid average of the per-point fit
  double einstein_spread = 0.0;  // max - min of the per-point fit
  long points = 0;
  long errors = 0;
};
Classification classify(const Ast& f, const GridSpec& grid, const Tolerances& tol,
                        int base_order = kDefaultJetOrder, int threads = 0);

struct FdOracleEntry {
  std::vector<int> alpha;
  double jet = 0.0;
  double fd = 0.0;
  double rel_err = 0.0;
};
struct FdOracleReport {
  std::vector<FdOracleEntry> entries;
  double max_rel_err = 0.0;
  bool pass = false;
};
// Central finite differences with one Richardson step (steps h and h/2,
// h = max(1e-2 s, cbrt(eps) s) with s the per-axis coordinate scale) against
// the jet partials of f at x, for all |alpha| <= max_order.
FdOracleReport fd_oracle(const Ast& f, const Domain& dom, const VecX& x, int max_order,
                         const Tolerances& tol);

struct SweepRow {
  VecX point;
  double rho = 0.0, Phi = 0.0, S = 0.0, K_maxabs = 0.0, R_maxabs = 0.0;
  std::optional<double> J;
  double ein_a = 0.0, ein_res = 0.0;
  std::array<std::optional<CheckResult>, kNumChecks> checks;
  std::string error;  // nonempty when the pipeline failed at this node
};

struct CheckAggregate {
  long pass = 0, fail = 0, skipped = 0;
  double min_residual = 0.0, max_residual = 0.0, mean_residual = 0.0;
};

struct SweepReport {
  int n = 0;
  GridSpec grid;
  std::vector<CheckId> checks;
  std::vector<SweepRow> rows;
  std::array<std::optional<CheckAggregate>, kNumChecks> aggregates;
  long errors = 0;

  bool all_passed() const;  // every non-skipped, non-advisory check passed
};

// Evaluates the pipeline and the requested checks at every grid node.
// Nodes are processed in parallel but merged in row-major order, so reports
// are bit-identical across runs and thread counts. Per-point errors are
// recorded in the row, not fatal.
SweepReport sweep(const Ast& f, const GridSpec& grid, const std::vector<CheckId>& checks,
                  const Tolerances& tol, int base_order = kDefaultJetOrder, int threads = 0,
                  bool eq3_unscoped = false);

}  // namespace hessianlab
