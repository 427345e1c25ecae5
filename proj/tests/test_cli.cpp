#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qplane/io.hpp"
#include "test_support.hpp"

using namespace qtest;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int rc;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string(QPLANE_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

nlohmann::json json_of(const CliRun& r) { return nlohmann::json::parse(r.out); }

complex value_of(const nlohmann::json& j) {
  return {detail::parse_real(j["value"]["re"].get<std::string>()), detail::parse_real(j["value"]["im"].get<std::string>())};
}

fs::path temp_file(const std::string& name) { return fs::path(::testing::TempDir()) / ("qplane_cli_" + name); }

}  // namespace

TEST(Cli, EvalBesselMatchesLibrary) {
  PrecisionScope ps(40);
  const CliRun r = run_cli("eval jackson3-bessel --nu 0.5 --x 0.125 --q 0.5");
  ASSERT_EQ(r.rc, 0);
  const auto j = json_of(r);
  EXPECT_EQ(j["function"], "jackson3-bessel");
  EXPECT_GT(j["terms_used"].get<int>(), 0);
  const QContext ctx(Rational(1, 2), 40);
  const auto want = jackson3_bessel(BesselOrder(Rational(1, 2)), real(0.125), ctx.q(), ctx);
  EXPECT_TRUE(Close(value_of(j), complex(want.value), 1e-24));
  EXPECT_LT(detail::parse_real(j["err_estimate"].get<std::string>()), real(1e-30));
}

TEST(Cli, EmptyPochhammerIsOne) {
  const CliRun r = run_cli("eval qpochhammer --a 0.5 --q 0.5 --n 0");
  ASSERT_EQ(r.rc, 0);
  EXPECT_EQ(json_of(r)["value"]["re"], "1.000000000000000000000000e+00");
}

TEST(Cli, DunklKernelAtMinusHalfIsRubinExponential) {
  const CliRun a = run_cli("eval dunkl-kernel --alpha -0.5 --x 0.25");
  const CliRun b = run_cli("eval rubin-exp --x 0.25");
  ASSERT_EQ(a.rc, 0);
  ASSERT_EQ(b.rc, 0);
  EXPECT_EQ(json_of(a)["value"], json_of(b)["value"]);
}

TEST(Cli, LatticePointSyntax) {
  PrecisionScope ps(40);
  const CliRun a = run_cli("eval q-cos --x q^3");
  const CliRun b = run_cli("eval q-cos --x 0.125");
  ASSERT_EQ(a.rc, 0);
  ASSERT_EQ(b.rc, 0);
  EXPECT_TRUE(Close(value_of(json_of(a)), value_of(json_of(b)), 1e-24));
}

TEST(Cli, CsvEval) {
  const CliRun r = run_cli("eval q-cos --x 0.5 --format csv");
  ASSERT_EQ(r.rc, 0);
  EXPECT_EQ(r.out.rfind("function,re,im,err_estimate,terms_used\nq-cos,", 0), 0u);
}

TEST(Cli, CheckPlaneWave) {
  const CliRun r = run_cli("check plane-wave --beta 0.75 --q 0.5 --N 14");
  ASSERT_EQ(r.rc, 0);
  const auto j = json_of(r);
  EXPECT_TRUE(j["summary"]["all_pass"].get<bool>());
  EXPECT_LT(detail::parse_real(j["summary"]["max_rel_err"].get<std::string>()), real(1e-12));
}

TEST(Cli, CheckJacobiGram) {
  const CliRun r = run_cli("check jacobi-gram --alpha 0.3 --beta 0.7 --q 0.5 --N 8");
  ASSERT_EQ(r.rc, 0);
  const auto j = json_of(r);
  EXPECT_EQ(j["suite_name"], "jacobi-gram");
  EXPECT_TRUE(j["summary"]["all_pass"].get<bool>());
  EXPECT_FALSE(j["cases"].empty());
}

TEST(Cli, CheckWeberRecordsBranches) {
  const CliRun r = run_cli("check weber-schafheitlin");
  ASSERT_EQ(r.rc, 0);
  const auto j = json_of(r);
  EXPECT_TRUE(j["summary"]["all_pass"].get<bool>());
  EXPECT_FALSE(j["records"].empty());
}

TEST(Cli, CheckCsvParsesBack) {
  const CliRun r = run_cli("check i-minus-plus --format csv");
  ASSERT_EQ(r.rc, 0);
  std::istringstream is(r.out);
  const Report back = read_report_csv(is);
  EXPECT_EQ(back.suite_name, "i-minus-plus");
  EXPECT_TRUE(back.all_pass);
}

TEST(Cli, ChecksAreDeterministic) {
  const CliRun a = run_cli("check pw-reconstruct --seed 7");
  const CliRun b = run_cli("check pw-reconstruct --seed 7");
  ASSERT_EQ(a.rc, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, NumericFailureExitsOne) {
  EXPECT_EQ(run_cli("check i-minus-plus --tol 1e-80").rc, 1);
}

TEST(Cli, UsageErrorsExitTwo) {
  for (const char* args : {"", "eval", "check", "eval bogus", "check no-such-suite", "eval q-cos --x 0.5 --q 1.5",
                           "eval little-q-jacobi --alpha -1.5 --beta 0.5 --n 2 --x 0.5", "eval neumann --alpha 2 --x 1",
                           "eval q-cos --x 0.5 --format xml", "eval q-cos --x 0.5 --out /nonexistent/dir/f.json",
                           "transform --alpha 0.3 --in /nonexistent/f.csv"})
    EXPECT_EQ(run_cli(args).rc, 2) << args;
}

TEST(Cli, HelpExitsZero) {
  const CliRun r = run_cli("--help");
  EXPECT_EQ(r.rc, 0);
  EXPECT_NE(r.out.find("eval"), std::string::npos);
}

TEST(Cli, OutWritesFile) {
  const fs::path path = temp_file("eval.json");
  ASSERT_EQ(run_cli("eval q-sin --x 0.5 --out " + path.string()).rc, 0);
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["function"], "q-sin");
  fs::remove(path);
}

TEST(Cli, DunklTransformRoundTrip) {
  PrecisionScope ps(40);
  const QContext ctx(Rational(1, 2), 40);
  LatticeFunction f(-6, 6, true);
  for (const auto& p : f.points())
    if (std::abs(p.k) <= 2) f.set(p, complex(real(p.k + 3) / 7, real(p.sign) / 5));
  const fs::path in = temp_file("f.csv"), mid = temp_file("g.csv"), back = temp_file("h.csv");
  {
    std::ofstream os(in);
    write_lattice_csv(os, f);
  }
  const std::string base = "transform --alpha 0.3 --finite-support --kmin -30 --kmax 50 ";
  ASSERT_EQ(run_cli(base + "--in " + in.string() + " --out " + mid.string()).rc, 0);
  ASSERT_EQ(run_cli("transform --alpha 0.3 --tol 1e-20 --kmin -6 --kmax 6 --inverse --in " + mid.string() + " --out " +
                   back.string()).rc, 0);
  std::ifstream is(back);
  const LatticeFunction g = read_lattice_csv(is);
  for (const auto& p : f.points()) EXPECT_TRUE(Close(g.at(p), f.at(p), 1e-20)) << p.sign << " " << p.k;
  for (const auto& p : {in, mid, back}) fs::remove(p);
}

TEST(Cli, HankelRejectsSignedInput) {
  const fs::path in = temp_file("signed.csv");
  {
    std::ofstream os(in);
    os << "sign,k,re,im\n1,0,1,0\n-1,0,1,0\n";
  }
  EXPECT_EQ(run_cli("transform --kind hankel --alpha 0.3 --finite-support --in " + in.string()).rc, 2);
  fs::remove(in);
}

TEST(Cli, ExpandSynthesizesByDefault) {
  const CliRun r = run_cli("expand --N 5");
  ASSERT_EQ(r.rc, 0);
  const auto j = json_of(r);
  EXPECT_EQ(j["alpha"], "3/10");
  EXPECT_EQ(j["beta"], "7/10");
  ASSERT_EQ(j["coefficients"].size(), 6u);
  for (int n = 0; n <= 5; ++n) EXPECT_EQ(j["coefficients"][n]["n"], n);
  EXPECT_EQ(run_cli("expand --N 5").out, r.out);
  EXPECT_NE(run_cli("expand --N 5 --seed 3").out, r.out);
}

TEST(Cli, ExpandWritesReconstruction) {
  const fs::path rec = temp_file("recon.csv");
  ASSERT_EQ(run_cli("expand --N 4 --recon " + rec.string()).rc, 0);
  std::ifstream is(rec);
  const LatticeFunction g = read_lattice_csv(is);
  EXPECT_TRUE(g.is_signed());
  EXPECT_LE(g.k_min(), g.k_max());
  fs::remove(rec);
}
