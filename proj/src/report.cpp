#include "hessianlab/report.hpp"

#include <cstdio>
#include <fstream>

namespace hessianlab {

namespace {

// CSV check column order (fixed, independent of the enum order).
constexpr CheckId kCsvChecks[] = {CheckId::Eq4,  CheckId::Prop1,      CheckId::Prop2,
                                  CheckId::Eq3,  CheckId::Eq12,       CheckId::RicciBound};

std::string json_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string row_status(const SweepRow& row) {
  if (!row.error.empty()) {
    std::string msg = row.error;
    for (char& c : msg)
      if (c == ',' || c == '\n') c = ' ';
    return "error(" + msg + ")";
  }
  std::string s;
  for (const auto& c : row.checks) {
    if (!c || !c->skipped) continue;
    if (!s.empty()) s += ';';
    s += std::string(to_string(c->id)) + ":" + std::string(to_string(c->reason));
  }
  for (const auto& c : row.checks) {
    if (!c || c->skipped || !c->advisory) continue;
    if (!s.empty()) s += ';';
    s += std::string(to_string(c->id)) + ":advisory";
  }
  return s.empty() ? "ok" : s;
}

void append_vec_json(std::string& out, const VecX& v) {
  out += '[';
  for (int i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += fmt_real(v[i]);
  }
  out += ']';
}

void append_meta_json(std::string& out, const ReportMeta& meta) {
  out += "\"schema\":1,";
  out += "\"command\":\"" + json_escape(meta.command) + "\",";
  out += "\"potential\":\"" + json_escape(meta.potential) + "\",";
  out += "\"n\":" + std::to_string(meta.n) + ",";
  out += "\"domain\":{\"lo\":";
  append_vec_json(out, meta.lo);
  out += ",\"hi\":";
  append_vec_json(out, meta.hi);
  out += "},";
  out += "\"grid\":[";
  for (std::size_t i = 0; i < meta.grid_count.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(meta.grid_count[i]);
  }
  out += "],";
  out += "\"jet_order\":" + std::to_string(meta.jet_order) + ",";
  out += "\"seed\":" + (meta.seed ? std::to_string(*meta.seed) : std::string("null")) + ",";
  out += "\"tolerances\":{";
  out += "\"identity_tol\":" + fmt_real(meta.tol.identity_tol) + ",";
  out += "\"inequality_tol\":" + fmt_real(meta.tol.inequality_tol) + ",";
  out += "\"classify_tol\":" + fmt_real(meta.tol.classify_tol) + ",";
  out += "\"phi_floor\":" + fmt_real(meta.tol.phi_floor) + ",";
  out += "\"fd_rel_tol\":" + fmt_real(meta.tol.fd_rel_tol) + "},";
}

}  // namespace

std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string to_csv(const SweepReport& rep) {
  std::string out;
  for (int i = 1; i <= rep.n; ++i) out += "x" + std::to_string(i) + ",";
  out += "rho,Phi,J,S,K_maxabs,R_maxabs,ein_a,ein_res,"
         "res_eq4,res_prop1,res_prop2,res_eq3,res_eq12,res_ricci_bound,status\n";

  for (const SweepRow& row : rep.rows) {
    for (int i = 0; i < rep.n; ++i) out += fmt_real(row.point[i]) + ",";
    if (row.error.empty()) {
      out += fmt_real(row.rho) + "," + fmt_real(row.Phi) + ",";
      out += (row.J ? fmt_real(*row.J) : std::string()) + ",";
      out += fmt_real(row.S) + "," + fmt_real(row.K_maxabs) + "," + fmt_real(row.R_maxabs) +
             "," + fmt_real(row.ein_a) + "," + fmt_real(row.ein_res) + ",";
    } else {
      out += ",,,,,,,,";
    }
    for (CheckId id : kCsvChecks) {
      const auto& c = row.checks[static_cast<int>(id)];
      if (c && !c->skipped) out += fmt_real(c->residual);
      out += ',';
    }
    out += row_status(row);
    out += '\n';
  }
  return out;
}

std::string to_json(const SweepReport& rep, const ReportMeta& meta) {
  std::string out = "{";
  append_meta_json(out, meta);

  out += "\"columns\":[";
  for (int i = 1; i <= rep.n; ++i) out += "\"x" + std::to_string(i) + "\",";
  out += "\"rho\",\"Phi\",\"J\",\"S\",\"K_maxabs\",\"R_maxabs\",\"ein_a\",\"ein_res\","
         "\"res_eq4\",\"res_prop1\",\"res_prop2\",\"res_eq3\",\"res_eq12\","
         "\"res_ricci_bound\",\"status\"],";

  out += "\"rows\":[";
  bool first_row = true;
  for (const SweepRow& row : rep.rows) {
    if (!first_row) out += ',';
    first_row = false;
    out += '[';
    for (int i = 0; i < rep.n; ++i) out += fmt_real(row.point[i]) + ",";
    if (row.error.empty()) {
      out += fmt_real(row.rho) + "," + fmt_real(row.Phi) + ",";
      out += (row.J ? fmt_real(*row.J) : std::string("null")) + ",";
      out += fmt_real(row.S) + "," + fmt_real(row.K_maxabs) + "," + fmt_real(row.R_maxabs) +
             "," + fmt_real(row.ein_a) + "," + fmt_real(row.ein_res) + ",";
    } else {
      out += "null,null,null,null,null,null,null,null,";
    }
    for (CheckId id : kCsvChecks) {
      const auto& c = row.checks[static_cast<int>(id)];
      out += (c && !c->skipped) ? fmt_real(c->residual) : std::string("null");
      out += ',';
    }
    out += "\"" + json_escape(row_status(row)) + "\"]";
  }
  out += "],";

  out += "\"checks\":{";
  bool first_check = true;
  for (CheckId id : rep.checks) {
    const auto& agg = rep.aggregates[static_cast<int>(id)];
    if (!agg) continue;
    if (!first_check) out += ',';
    first_check = false;
    out += "\"" + std::string(to_string(id)) + "\":{";
    out += "\"pass\":" + std::to_string(agg->pass) + ",";
    out += "\"fail\":" + std::to_string(agg->fail) + ",";
    out += "\"skipped\":" + std::to_string(agg->skipped) + ",";
    out += "\"min_residual\":" + fmt_real(agg->min_residual) + ",";
    out += "\"max_residual\":" + fmt_real(agg->max_residual) + ",";
    out += "\"mean_residual\":" + fmt_real(agg->mean_residual) + "}";
  }
  out += "},";
  out += "\"errors\":" + std::to_string(rep.errors) + "}";
  out += '\n';
  return out;
}

std::string to_json(const Classification& c, const ReportMeta& meta) {
  std::string out = "{";
  append_meta_json(out, meta);
  auto flag = [](const Classification::Flag& f) {
    return "{\"holds\":" + std::string(f.holds ? "true" : "false") +
           ",\"max_residual\":" + fmt_real(f.max_residual) + "}";
  };
  out += "\"flags\":{";
  out += "\"flat\":" + flag(c.flat) + ",";
  out += "\"ricci_flat\":" + flag(c.ricci_flat) + ",";
  out += "\"scalar_flat\":" + flag(c.scalar_flat) + ",";
  out += "\"einstein\":" + flag(c.einstein) + "},";
  out += "\"einstein_a\":" + fmt_real(c.einstein_a) + ",";
  out += "\"einstein_spread\":" + fmt_real(c.einstein_spread) + ",";
  out += "\"points\":" + std::to_string(c.points) + ",";
  out += "\"errors\":" + std::to_string(c.errors) + "}";
  out += '\n';
  return out;
}

std::string to_json(const FdOracleReport& rep, const ReportMeta& meta, const VecX& point) {
  std::string out = "{";
  append_meta_json(out, meta);
  out += "\"point\":";
  append_vec_json(out, point);
  out += ",\"entries\":[";
  for (std::size_t i = 0; i < rep.entries.size(); ++i) {
    const FdOracleEntry& e = rep.entries[i];
    if (i) out += ',';
    out += "{\"alpha\":[";
    for (std::size_t j = 0; j < e.alpha.size(); ++j) {
      if (j) out += ',';
      out += std::to_string(e.alpha[j]);
    }
    out += "],\"jet\":" + fmt_real(e.jet) + ",\"fd\":" + fmt_real(e.fd) +
           ",\"rel_err\":" + fmt_real(e.rel_err) + "}";
  }
  out += "],";
  out += "\"max_rel_err\":" + fmt_real(rep.max_rel_err) + ",";
  out += "\"pass\":" + std::string(rep.pass ? "true" : "false") + "}";
  out += '\n';
  return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  fs::path dir = path.parent_path();
  if (dir.empty()) dir = ".";
  fs::path tmp = dir / (path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("Io", "cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("Io", "failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace hessianlab
