#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "hessianlab/report.hpp"

using namespace hessianlab;

namespace {

VecX vec(std::initializer_list<double> v) {
  VecX x(static_cast<int>(v.size()));
  int i = 0;
  for (double d : v) x[i++] = d;
  return x;
}

SweepReport sample_report(const std::vector<CheckId>& checks) {
  Tolerances tol;
  Ast f = Ast::parse("exp(x1) + exp(x2)", 2);
  GridSpec g;
  g.lo = vec({-1.0, -1.0});
  g.hi = vec({1.0, 1.0});
  g.count = {3, 3};
  return sweep(f, g, checks, tol);
}

ReportMeta sample_meta() {
  ReportMeta meta;
  meta.command = "sweep";
  meta.potential = "exp(x1) + exp(x2)";
  meta.n = 2;
  meta.lo = vec({-1.0, -1.0});
  meta.hi = vec({1.0, 1.0});
  meta.grid_count = {3, 3};
  return meta;
}

}  // namespace

TEST_CASE("csv header matches the fixed column order") {
  SweepReport rep = sample_report({CheckId::Eq4});
  const std::string csv = to_csv(rep);
  const std::string header = csv.substr(0, csv.find('\n'));
  CHECK(header ==
        "x1,x2,rho,Phi,J,S,K_maxabs,R_maxabs,ein_a,ein_res,"
        "res_eq4,res_prop1,res_prop2,res_eq3,res_eq12,res_ricci_bound,status");
  // 9 data rows after the header
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
  // unrequested checks serialize as empty fields
  const std::string first_row = csv.substr(csv.find('\n') + 1);
  CHECK(first_row.find(",,,,,ok") != std::string::npos);
}

TEST_CASE("csv is byte-stable across runs") {
  std::vector<CheckId> checks = {CheckId::Eq4, CheckId::Prop1, CheckId::Identities};
  const std::string a = to_csv(sample_report(checks));
  const std::string b = to_csv(sample_report(checks));
  CHECK(a == b);
}

TEST_CASE("skipped checks serialize empty residuals with a status flag") {
  Tolerances tol;
  Ast q = Ast::parse("x1^2/2 + x2^2/2", 2);
  GridSpec g;
  g.lo = vec({-1.0, -1.0});
  g.hi = vec({1.0, 1.0});
  g.count = {2, 2};
  SweepReport rep = sweep(q, g, {CheckId::Prop1}, tol);
  const std::string csv = to_csv(rep);
  CHECK(csv.find("prop1:PhiBelowFloor") != std::string::npos);
  // residual column for prop1 stays empty on skipped rows
  const std::string row = csv.substr(csv.find('\n') + 1);
  const std::string tail = row.substr(0, row.find('\n'));
  CHECK(tail.find(",,,,,,prop1:PhiBelowFloor") != std::string::npos);
}

TEST_CASE("json reports carry the schema version and aggregates") {
  SweepReport rep = sample_report({CheckId::Eq4, CheckId::Prop1});
  const std::string js = to_json(rep, sample_meta());
  CHECK(js.find("\"schema\":1") != std::string::npos);
  CHECK(js.find("\"eq4\":{\"pass\":9") != std::string::npos);
  CHECK(js.find("\"prop1\":{\"pass\":9") != std::string::npos);
  CHECK(js.find("\"columns\":[\"x1\",\"x2\",\"rho\"") != std::string::npos);
  CHECK(js.find("\"errors\":0") != std::string::npos);
}

TEST_CASE("reals serialize with 17 significant digits") {
  CHECK(fmt_real(1.0 / 3.0) == "0.33333333333333331");
  CHECK(fmt_real(0.1) == "0.10000000000000001");
  CHECK(fmt_real(2.0) == "2");
}

TEST_CASE("atomic write replaces the target file") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "hessianlab_report_test";
  fs::create_directories(dir);
  const fs::path target = dir / "out.csv";
  write_atomic(target, "first\n");
  write_atomic(target, "second\n");
  std::ifstream in(target);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(content == "second\n");
  CHECK(!fs::exists(dir / "out.csv.tmp"));
  fs::remove_all(dir);
}

TEST_CASE("classification json lists every flag") {
  Tolerances tol;
  Ast f = Ast::parse("-log(x1)", 1);
  GridSpec g;
  g.lo = vec({0.5});
  g.hi = vec({3.0});
  g.count = {5};
  Classification c = classify(f, g, tol);
  ReportMeta meta = sample_meta();
  meta.command = "classify";
  meta.n = 1;
  const std::string js = to_json(c, meta);
  CHECK(js.find("\"flat\":{\"holds\":true") != std::string::npos);
  CHECK(js.find("\"scalar_flat\":{\"holds\":false") != std::string::npos);
  CHECK(js.find("\"einstein_a\":-2") != std::string::npos);
}
