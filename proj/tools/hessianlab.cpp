// hessianlab: evaluate Hessian-metric geometry of convex potentials and
// verify the curvature identities over sampled grids.
//
//   hessianlab <eval|sweep|verify|classify|oracle> --config <path>
//              [--point v1,v2,...] [--out <path>] [--format csv|json]
//              [--check <id>]* [--jet-order N] [--seed N]

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hessianlab/geometry.hpp"
#include "hessianlab/report.hpp"
#include "hessianlab/verify.hpp"

using namespace hessianlab;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitPipeline = 2;
constexpr int kExitCheckFailed = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string potential;
  int n = 0;
  std::vector<double> lo, hi;
  std::vector<int> count;
  std::vector<std::string> checks;
  Tolerances tol;
  std::string out;
  std::string format = "csv";
  int jet_order = kDefaultJetOrder;
  std::optional<long> seed;
  bool eq3_unscoped = false;
  int max_order = 4;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file: " + path);
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    try {
      if (key == "potential") cfg.potential = val;
      else if (key == "n") cfg.n = std::stoi(val);
      else if (key == "lo") cfg.lo.push_back(std::stod(val));
      else if (key == "hi") cfg.hi.push_back(std::stod(val));
      else if (key == "count") cfg.count.push_back(std::stoi(val));
      else if (key == "check") cfg.checks.push_back(val);
      else if (key == "identity_tol") cfg.tol.identity_tol = std::stod(val);
      else if (key == "inequality_tol") cfg.tol.inequality_tol = std::stod(val);
      else if (key == "classify_tol") cfg.tol.classify_tol = std::stod(val);
      else if (key == "phi_floor") cfg.tol.phi_floor = std::stod(val);
      else if (key == "fd_rel_tol") cfg.tol.fd_rel_tol = std::stod(val);
      else if (key == "out") cfg.out = val;
      else if (key == "format") cfg.format = val;
      else if (key == "jet_order") cfg.jet_order = std::stoi(val);
      else if (key == "seed") cfg.seed = std::stol(val);
      else if (key == "eq3_unscoped") cfg.eq3_unscoped = (val == "true" || val == "1");
      else if (key == "max_order") cfg.max_order = std::stoi(val);
      else throw UsageError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw UsageError("config line " + std::to_string(lineno) + ": bad value for '" + key + "'");
    }
  }
  return cfg;
}

struct Loaded {
  Ast f;
  Domain dom;
  GridSpec grid;
  std::vector<CheckId> checks;
};

std::vector<CheckId> parse_checks(const std::vector<std::string>& names) {
  std::vector<CheckId> out;
  for (const std::string& s : names) {
    auto id = check_from_string(s);
    if (!id) throw UsageError("unknown check id: " + s);
    if (std::find(out.begin(), out.end(), *id) == out.end()) out.push_back(*id);
  }
  return out;
}

Loaded materialize(const RunConfig& cfg) {
  if (cfg.potential.empty()) throw UsageError("config is missing 'potential'");
  if (cfg.n < 1) throw UsageError("config is missing a positive 'n'");
  if (cfg.lo.size() != static_cast<std::size_t>(cfg.n) ||
      cfg.hi.size() != static_cast<std::size_t>(cfg.n))
    throw UsageError("config needs exactly n 'lo' and n 'hi' entries");
  Loaded L;
  L.dom.lo = Eigen::Map<const VecX>(cfg.lo.data(), cfg.n);
  L.dom.hi = Eigen::Map<const VecX>(cfg.hi.data(), cfg.n);
  for (int i = 0; i < cfg.n; ++i)
    if (!(L.dom.lo[i] < L.dom.hi[i]) || !std::isfinite(L.dom.lo[i]) || !std::isfinite(L.dom.hi[i]))
      throw UsageError("domain bounds must be finite with lo < hi on every axis");
  L.grid.lo = L.dom.lo;
  L.grid.hi = L.dom.hi;
  L.grid.count = cfg.count.empty() ? std::vector<int>(cfg.n, 11) : cfg.count;
  if (L.grid.count.size() != static_cast<std::size_t>(cfg.n))
    throw UsageError("config needs exactly n 'count' entries (or none for the default)");
  for (int c : L.grid.count)
    if (c < 1) throw UsageError("grid counts must be >= 1");
  L.f = Ast::parse(cfg.potential, cfg.n);
  L.checks = parse_checks(cfg.checks);

  const int min_order = nest_required(L.checks) > 0 ? 5 : 4;
  if (cfg.jet_order < min_order)
    throw UsageError("jet_order must be >= " + std::to_string(min_order) +
                     " for the requested checks");
  return L;
}

VecX parse_point(const std::string& text, int n) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      vals.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError("bad --point component: " + item);
    }
  }
  if (static_cast<int>(vals.size()) != n)
    throw UsageError("--point needs exactly " + std::to_string(n) + " components");
  return Eigen::Map<const VecX>(vals.data(), n);
}

std::string fmt(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void print_matrix(const std::string& label, const MatX& m) {
  std::cout << label << ":\n";
  for (int i = 0; i < m.rows(); ++i) {
    std::cout << "  [";
    for (int j = 0; j < m.cols(); ++j) std::cout << (j ? ", " : "") << fmt(m(i, j));
    std::cout << "]\n";
  }
}

void print_tensor3(const std::string& label, const Tensor3d& t, const char* index_names) {
  const int n = t.extent();
  std::cout << label << ":\n";
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        std::cout << "  " << label << "[" << index_names[0] << "=" << k + 1 << "][" << i + 1
                  << "][" << j + 1 << "] = " << fmt(t(k, i, j)) << "\n";
}

ReportMeta make_meta(const std::string& command, const RunConfig& cfg, const Loaded& L) {
  ReportMeta meta;
  meta.command = command;
  meta.potential = cfg.potential;
  meta.n = cfg.n;
  meta.lo = L.dom.lo;
  meta.hi = L.dom.hi;
  meta.grid_count = L.grid.count;
  meta.jet_order = cfg.jet_order;
  meta.seed = cfg.seed;
  meta.tol = cfg.tol;
  return meta;
}

int cmd_eval(const RunConfig& cfg, const Loaded& L, const std::string& point_arg) {
  if (point_arg.empty()) throw UsageError("eval requires --point");
  const VecX x = parse_point(point_arg, cfg.n);
  if (!L.dom.contains(x)) throw UsageError("point is outside the domain box");

  const PointGeometry v = point_geometry(L.f, x, cfg.jet_order);
  std::cout << "point: (";
  for (int i = 0; i < v.n; ++i) std::cout << (i ? ", " : "") << fmt(x[i]);
  std::cout << ")\n";
  print_matrix("G", v.G);
  print_matrix("Ginv", v.Ginv);
  std::cout << "det(G) = " << fmt(v.detG) << "\n";
  print_tensor3("Gamma", v.Gamma, "k");
  print_tensor3("A", v.A, "i");
  std::cout << "R:\n";
  for (int i = 0; i < v.n; ++i)
    for (int j = 0; j < v.n; ++j)
      for (int k = 0; k < v.n; ++k)
        for (int l = 0; l < v.n; ++l)
          std::cout << "  R[" << i + 1 << "][" << j + 1 << "][" << k + 1 << "][" << l + 1
                    << "] = " << fmt(v.R(i, j, k, l)) << "\n";
  print_matrix("Ric", v.Ric);
  print_matrix("K", v.K);
  std::cout << "S = " << fmt(v.S) << "\n";
  std::cout << "rho = " << fmt(v.rho) << "\n";
  std::cout << "grad_rho = (";
  for (int i = 0; i < v.n; ++i) std::cout << (i ? ", " : "") << fmt(v.grad_rho[i]);
  std::cout << ")\n";
  std::cout << "Phi = " << fmt(v.Phi) << "\n";
  if (v.J)
    std::cout << "J = " << fmt(*v.J) << "\n";
  else
    std::cout << "J = undefined (n = 1); pickNorm2 = " << fmt(v.pickNorm2) << "\n";
  std::cout << "pickNorm2 = " << fmt(v.pickNorm2) << "\n";
  std::cout << "einstein: a = " << fmt(v.einstein.a) << ", residual = " << fmt(v.einstein.residual)
            << "\n";
  return 0;
}

void write_report(const RunConfig& cfg, const SweepReport& rep, const ReportMeta& meta) {
  if (cfg.out.empty()) return;
  if (cfg.format == "csv")
    write_atomic(cfg.out, to_csv(rep));
  else if (cfg.format == "json")
    write_atomic(cfg.out, to_json(rep, meta));
  else
    throw UsageError("unknown format: " + cfg.format);
  std::cout << "report written to " << cfg.out << "\n";
}

void print_check_summary(const SweepReport& rep) {
  for (CheckId id : rep.checks) {
    const auto& agg = rep.aggregates[static_cast<int>(id)];
    if (!agg) continue;
    std::cout << to_string(id) << ": pass " << agg->pass << ", fail " << agg->fail
              << ", skipped " << agg->skipped;
    if (agg->pass + agg->fail > 0)
      std::cout << ", residual min " << fmt(agg->min_residual) << " max "
                << fmt(agg->max_residual) << " mean " << fmt(agg->mean_residual);
    std::cout << "\n";
  }
}

int cmd_sweep(const RunConfig& cfg, const Loaded& L, bool verify_mode) {
  std::vector<CheckId> checks = L.checks;
  if (verify_mode && checks.empty())
    for (int i = 0; i < kNumChecks; ++i) checks.push_back(static_cast<CheckId>(i));

  const SweepReport rep = sweep(L.f, L.grid, checks, cfg.tol, cfg.jet_order, 0, cfg.eq3_unscoped);
  ReportMeta meta = make_meta(verify_mode ? "verify" : "sweep", cfg, L);
  write_report(cfg, rep, meta);

  std::cout << "nodes: " << rep.rows.size() << ", pipeline errors: " << rep.errors << "\n";
  print_check_summary(rep);

  if (rep.errors > 0) {
    for (const SweepRow& row : rep.rows)
      if (!row.error.empty()) {
        std::cout << "pipeline error at (";
        for (int i = 0; i < row.point.size(); ++i) std::cout << (i ? ", " : "") << fmt(row.point[i]);
        std::cout << "): " << row.error << "\n";
        break;
      }
    return kExitPipeline;
  }
  if (verify_mode) {
    const bool ok = rep.all_passed();
    std::cout << "VERIFY: " << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? 0 : kExitCheckFailed;
  }
  return 0;
}

int cmd_classify(const RunConfig& cfg, const Loaded& L) {
  const Classification c = classify(L.f, L.grid, cfg.tol, cfg.jet_order);
  if (c.errors == c.points) {
    std::cout << "classification failed: pipeline error at every grid point\n";
    return kExitPipeline;
  }
  auto line = [](const char* name, const Classification::Flag& f) {
    std::cout << name << ": " << (f.holds ? "yes" : "no")
              << " (max residual " << fmt(f.max_residual) << ")\n";
  };
  line("flat", c.flat);
  line("ricci_flat", c.ricci_flat);
  line("scalar_flat", c.scalar_flat);
  std::cout << "einstein: " << (c.einstein.holds ? "yes" : "no");
  if (c.einstein.holds) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), ", a = %.6f (spread <= %.1e)", c.einstein_a,
                  std::max(c.einstein_spread, 1e-16));
    std::cout << buf;
  }
  std::cout << " (max residual " << fmt(c.einstein.max_residual) << ")\n";
  if (c.errors > 0) std::cout << "points with pipeline errors: " << c.errors << "/" << c.points << "\n";
  if (!cfg.out.empty()) {
    write_atomic(cfg.out, to_json(c, make_meta("classify", cfg, L)));
    std::cout << "report written to " << cfg.out << "\n";
  }
  return 0;
}

int cmd_oracle(const RunConfig& cfg, const Loaded& L, const std::string& point_arg) {
  VecX x;
  if (point_arg.empty()) {
    x = (L.dom.lo + L.dom.hi) / 2.0;
  } else {
    x = parse_point(point_arg, cfg.n);
    if (!L.dom.contains(x)) throw UsageError("point is outside the domain box");
  }
  FdOracleReport rep;
  try {
    rep = fd_oracle(L.f, L.dom, x, cfg.max_order, cfg.tol);
  } catch (const StencilOutsideDomain& e) {
    throw UsageError(e.what());
  }
  for (const FdOracleEntry& e : rep.entries) {
    std::cout << "d^(";
    for (std::size_t i = 0; i < e.alpha.size(); ++i) std::cout << (i ? "," : "") << e.alpha[i];
    std::cout << ") jet " << fmt(e.jet) << "  fd " << fmt(e.fd) << "  rel_err " << fmt(e.rel_err)
              << "\n";
  }
  std::cout << "max_rel_err = " << fmt(rep.max_rel_err) << " (tolerance " << fmt(cfg.tol.fd_rel_tol)
            << ")\n";
  if (!cfg.out.empty()) {
    write_atomic(cfg.out, to_json(rep, make_meta("oracle", cfg, L), x));
    std::cout << "report written to " << cfg.out << "\n";
  }
  std::cout << "ORACLE: " << (rep.pass ? "PASS" : "FAIL") << "\n";
  return rep.pass ? 0 : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hessian-metric geometry of convex potentials"};
  app.require_subcommand(1);

  std::string config_path, point_arg, out_arg, format_arg;
  std::vector<std::string> check_args;
  int jet_order_arg = -1;
  long seed_arg = 0;
  bool seed_set = false;
  int max_order_arg = -1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "config file (key = value)")->required();
    sub->add_option("--point", point_arg, "comma-separated coordinates");
    sub->add_option("--out", out_arg, "report output path");
    sub->add_option("--format", format_arg, "csv|json");
    sub->add_option("--check", check_args, "check id (repeatable)");
    sub->add_option("--jet-order", jet_order_arg, "potential jet truncation order");
    sub->add_option("--seed", seed_arg, "seed recorded in reports")->each([&](const std::string&) {
      seed_set = true;
    });
    sub->add_option("--max-order", max_order_arg, "highest derivative order for oracle");
  };

  CLI::App* eval = app.add_subcommand("eval", "print every invariant at one point");
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "evaluate a grid and write a report");
  CLI::App* verify_cmd = app.add_subcommand("verify", "run checks over a grid; exit 0 iff all pass");
  CLI::App* classify_cmd = app.add_subcommand("classify", "flat/Ricci-flat/scalar-flat/Einstein flags");
  CLI::App* oracle_cmd = app.add_subcommand("oracle", "finite-difference check of jet derivatives");
  for (CLI::App* sub : {eval, sweep_cmd, verify_cmd, classify_cmd, oracle_cmd}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    RunConfig cfg = load_config(config_path);
    if (!out_arg.empty()) cfg.out = out_arg;
    if (!format_arg.empty()) cfg.format = format_arg;
    if (!check_args.empty()) cfg.checks = check_args;
    if (jet_order_arg > 0) cfg.jet_order = jet_order_arg;
    if (seed_set) cfg.seed = seed_arg;
    if (max_order_arg >= 0) cfg.max_order = max_order_arg;
    if (cfg.format != "csv" && cfg.format != "json")
      throw UsageError("unknown format: " + cfg.format);

    const Loaded L = materialize(cfg);

    if (eval->parsed()) return cmd_eval(cfg, L, point_arg);
    if (sweep_cmd->parsed()) return cmd_sweep(cfg, L, false);
    if (verify_cmd->parsed()) return cmd_sweep(cfg, L, true);
    if (classify_cmd->parsed()) return cmd_classify(cfg, L);
    if (oracle_cmd->parsed()) return cmd_oracle(cfg, L, point_arg);
    throw UsageError("no subcommand");
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SyntaxError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnknownIdentifier& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const VariableOutOfRange& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "pipeline error: " << e.what() << "\n";
    return kExitPipeline;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPipeline;
  }
}
