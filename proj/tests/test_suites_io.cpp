#include <sstream>

#include "qplane/io.hpp"
#include "test_support.hpp"

using namespace qtest;

class SuiteRun : public ::testing::TestWithParam<std::string> {
 protected:
  PrecisionScope ps{40};
};

TEST_P(SuiteRun, PassesWithDefaults) {
  SuiteConfig cfg;
  cfg.suite = GetParam();
  const Report r = run_suite(cfg);
  EXPECT_EQ(r.suite_name, GetParam());
  EXPECT_FALSE(r.cases.empty());
  EXPECT_TRUE(r.all_pass) << "max_rel_err " << format_real(r.max_rel_err, 3);
  for (const auto& c : r.cases)
    if (!c.pass) ADD_FAILURE() << c.id << " rel_err " << format_real(c.rel_err, 3) << " " << c.note;
  EXPECT_TRUE(std::is_sorted(r.cases.begin(), r.cases.end(),
                             [](const ReportCase& a, const ReportCase& b) { return a.id < b.id; }));
  EXPECT_EQ(r.provenance.precision_digits, 40);
}

INSTANTIATE_TEST_SUITE_P(AllSuites, SuiteRun,
                         ::testing::Values("jacobi-gram", "gegenbauer-norms", "weber-schafheitlin",
                                           "bessel-orthogonality", "neumann-orthogonality", "i-minus-plus",
                                           "lemma-qfpq", "kernel-expansion", "plane-wave", "hankel-kernel",
                                           "pw-reconstruct", "transforms-roundtrip", "hypergeometric-transforms"),
                         [](const auto& info) {
                           std::string s = info.param;
                           std::replace(s.begin(), s.end(), '-', '_');
                           return s;
                         });

TEST(Suites, RegistryListsEverySuite) { EXPECT_EQ(suite_registry().size(), 13u); }

TEST(Suites, UnknownSuiteIsAParameterError) {
  SuiteConfig cfg;
  cfg.suite = "no-such-suite";
  expect_error([&] { run_suite(cfg); }, ErrorKind::InvalidParameter);
}

TEST(Suites, ImpossibleToleranceFails) {
  PrecisionScope ps(40);
  SuiteConfig cfg;
  cfg.suite = "i-minus-plus";
  cfg.tol = 1e-80;
  EXPECT_FALSE(run_suite(cfg).all_pass);
}

TEST(Suites, ReportsAreDeterministic) {
  PrecisionScope ps(40);
  SuiteConfig cfg;
  cfg.suite = "transforms-roundtrip";
  std::ostringstream a, b;
  write_report_json(a, run_suite(cfg));
  write_report_json(b, run_suite(cfg));
  EXPECT_EQ(a.str(), b.str());
  cfg.seed += 1;
  std::ostringstream c;
  write_report_json(c, run_suite(cfg));
  EXPECT_NE(a.str(), c.str());
}

namespace {

Report sample_report() {
  PrecisionScope ps(40);
  SuiteConfig cfg;
  cfg.suite = "weber-schafheitlin";
  cfg.N = 3;
  return run_suite(cfg);
}

void expect_same_report(const Report& a, const Report& b) {
  EXPECT_EQ(a.suite_name, b.suite_name);
  EXPECT_EQ(a.parameters, b.parameters);
  EXPECT_EQ(a.records, b.records);
  EXPECT_EQ(a.all_pass, b.all_pass);
  EXPECT_EQ(a.provenance.precision_digits, b.provenance.precision_digits);
  EXPECT_EQ(a.provenance.k_min, b.provenance.k_min);
  EXPECT_EQ(a.provenance.k_max, b.provenance.k_max);
  EXPECT_EQ(a.provenance.seed, b.provenance.seed);
  ASSERT_EQ(a.cases.size(), b.cases.size());
  for (std::size_t i = 0; i < a.cases.size(); ++i) {
    const auto &x = a.cases[i], &y = b.cases[i];
    EXPECT_EQ(x.id, y.id);
    EXPECT_EQ(x.check, y.check);
    EXPECT_EQ(x.pass, y.pass);
    EXPECT_EQ(x.note, y.note);
    EXPECT_TRUE(Close(y.computed, x.computed, 1e-24, 1e-60)) << x.id;
    EXPECT_TRUE(Close(y.reference, x.reference, 1e-24, 1e-60)) << x.id;
    EXPECT_TRUE(Close(y.rel_err, x.rel_err, 1e-24, 1e-60)) << x.id;
  }
}

}  // namespace

TEST(ReportIo, JsonRoundTrip) {
  const Report r = sample_report();
  std::stringstream ss;
  write_report_json(ss, r);
  const std::string first = ss.str();
  const Report back = read_report_json(ss);
  expect_same_report(r, back);
  std::ostringstream again;
  write_report_json(again, back);
  EXPECT_EQ(again.str(), first);
}

TEST(ReportIo, JsonSchema) {
  const auto j = report_to_json(sample_report());
  for (const char* key : {"suite_name", "parameters", "cases", "summary", "provenance", "records"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_TRUE(j["summary"].contains("max_rel_err"));
  EXPECT_TRUE(j["summary"]["all_pass"].get<bool>());
  const auto& c = j["cases"].at(0);
  for (const char* key : {"id", "check", "computed", "reference", "abs_err", "rel_err", "tolerance", "pass", "note"})
    EXPECT_TRUE(c.contains(key)) << key;
}

TEST(ReportIo, CsvRoundTrip) {
  Report r = sample_report();
  r.cases.front().note = "with, a comma and \"quotes\"";
  std::stringstream ss;
  write_report_csv(ss, r);
  const std::string first = ss.str();
  const Report back = read_report_csv(ss);
  expect_same_report(r, back);
  std::ostringstream again;
  write_report_csv(again, back);
  EXPECT_EQ(again.str(), first);
}

TEST(ReportIo, MalformedInputIsAnIoError) {
  std::istringstream bad_json("{\"suite_name\": 3");
  expect_error([&] { read_report_json(bad_json); }, ErrorKind::Io);
  std::istringstream wrong_shape("[1, 2]");
  expect_error([&] { read_report_json(wrong_shape); }, ErrorKind::Io);
  std::istringstream bad_csv("case_id,check\nx,eq\n");
  expect_error([&] { read_report_csv(bad_csv); }, ErrorKind::Io);
}

TEST(LatticeIo, RoundTripKeepsTwentyFiveDigits) {
  PrecisionScope ps(40);
  const QContext ctx(Rational(1, 2));
  LatticeFunction f(-3, 4, true);
  for (const auto& p : f.points()) f.set(p, complex(real(1) / 3 * p.k, ctx.qpow(static_cast<long long>(p.k)) * p.sign));
  std::stringstream ss;
  write_lattice_csv(ss, f);
  const std::string first = ss.str();
  const LatticeFunction g = read_lattice_csv(ss);
  EXPECT_EQ(g.k_min(), -3);
  EXPECT_EQ(g.k_max(), 4);
  EXPECT_TRUE(g.is_signed());
  for (const auto& p : f.points()) EXPECT_TRUE(Close(g.at(p), f.at(p), 1e-24)) << p.sign << " " << p.k;
  std::ostringstream again;
  write_lattice_csv(again, g);
  EXPECT_EQ(again.str(), first);
}

TEST(LatticeIo, HalfLineInput) {
  std::istringstream is("sign,k,re,im\n1,2,0.5,0\n1,0,1.5,-2\n");
  const LatticeFunction f = read_lattice_csv(is);
  EXPECT_FALSE(f.is_signed());
  EXPECT_EQ(f.k_min(), 0);
  EXPECT_EQ(f.k_max(), 2);
  EXPECT_EQ(f.at({1, 0}), complex(real(1.5), real(-2)));
  EXPECT_EQ(f.at({1, 1}), complex(real(0), real(0)));
}

TEST(LatticeIo, ExtremeMagnitudesSurvive) {
  std::istringstream is("sign,k,re,im\n1,0,1.5e-400,-2.25e+500\n");
  const LatticeFunction f = read_lattice_csv(is);
  EXPECT_EQ(format_real(f.at({1, 0}).real(), 3), "1.50e-400");
  EXPECT_EQ(format_real(f.at({1, 0}).imag(), 3), "-2.25e+500");
}

TEST(LatticeIo, MalformedInput) {
  for (const char* text : {"", "sign,k,re\n1,0,1\n", "sign,k,re,im\n1,x,1,0\n", "sign,k,re,im\n2,0,1,0\n",
                           "sign,k,re,im\n1,0,abc,0\n", "sign,k,re,im\n1,0,1\n"}) {
    std::istringstream is(text);
    expect_error([&] { read_lattice_csv(is); }, ErrorKind::Io);
  }
}
