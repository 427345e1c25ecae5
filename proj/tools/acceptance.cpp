// Acceptance run: one PASS/FAIL line per criterion. Exit status 0 iff all pass.
// With a directory argument, every underlying report is also written there as JSON.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "qplane/io.hpp"
#include "qplane/suites.hpp"

using namespace qplane;

namespace {

struct Tally {
  std::size_t cases = 0, failures = 0;
  real max_rel_err = 0;
  std::optional<real> worst_bound;  // max value/bound over "le" cases other than monotonicity steps
  std::vector<std::string> failed;

  void take(const Report& r, const std::string& prefix = {}) {
    for (const auto& c : r.cases) {
      if (c.id.rfind(prefix, 0) != 0) continue;
      ++cases;
      if (c.rel_err > max_rel_err) max_rel_err = c.rel_err;
      if (c.check == "le" && c.reference.real() > 0 && c.id.find("monotone") == std::string::npos) {
        const real ratio = c.computed.real() / c.reference.real();
        if (!worst_bound || ratio > *worst_bound) worst_bound = ratio;
      }
      if (!c.pass) {
        ++failures;
        if (failed.size() < 5) failed.push_back(r.suite_name + ":" + c.id + " rel_err=" + format_real(c.rel_err, 3));
      }
    }
  }
  bool pass() const { return cases > 0 && failures == 0; }
};

std::optional<std::filesystem::path> report_dir;

Report run(SuiteConfig cfg, const std::string& tag) {
  Report r = run_suite(cfg);
  if (report_dir) {
    std::ofstream os(*report_dir / (tag + ".json"));
    write_report_json(os, r);
  }
  return r;
}

SuiteConfig config(const std::string& suite) {
  SuiteConfig c;
  c.suite = suite;
  return c;
}

int failed_criteria = 0;

void criterion(int id, const std::string& name, const std::function<Tally()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Tally t;
  std::string error;
  try {
    t = body();
  } catch (const std::exception& e) {
    error = e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = error.empty() && t.pass();
  if (!ok) ++failed_criteria;
  std::cout << (ok ? "PASS" : "FAIL") << "  " << std::setw(2) << id << "  " << std::left << std::setw(28) << name
            << std::right << " cases=" << t.cases << " failures=" << t.failures
            << " max_rel_err=" << format_real(t.max_rel_err, 3);
  if (t.worst_bound) std::cout << " worst_value/bound=" << format_real(*t.worst_bound, 3);
  std::cout << " time=" << std::fixed << std::setprecision(1)
            << secs << "s" << std::defaultfloat << '\n';
  if (!error.empty()) std::cout << "      error: " << error << '\n';
  for (const auto& f : t.failed) std::cout << "      failed: " << f << '\n';
  std::cout.flush();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) {
    report_dir = argv[1];
    std::filesystem::create_directories(*report_dir);
  }

  criterion(1, "jacobi-orthogonality", [] {
    Tally t;
    const std::vector<std::pair<Rational, Rational>> params = {
        {Rational(3, 10), Rational(7, 10)}, {Rational(-2, 5), Rational(6, 5)}, {Rational(3, 2), Rational(-1, 5)}};
    for (const auto& [a, b] : params)
      for (const Rational q : {Rational(3, 10), Rational(1, 2), Rational(4, 5)}) {
        SuiteConfig c = config("jacobi-gram");
        c.alpha = a;
        c.beta = b;
        c.q = q;
        c.N = 8;
        t.take(run(c, "c01-jacobi-gram-a" + to_string(a) + "-b" + to_string(b) + "-q" + to_string(q)), "gram.");
      }
    return t;
  });

  criterion(2, "weber-schafheitlin", [] {
    Tally t;
    t.take(run(config("weber-schafheitlin"), "c02-weber-schafheitlin"));
    return t;
  });

  criterion(3, "bessel-orthogonality", [] {
    Tally t;
    for (const Rational a : {Rational(3, 10), Rational(-1, 5)}) {
      SuiteConfig c = config("bessel-orthogonality");
      c.alpha = a;
      c.N = 6;
      t.take(run(c, "c03-bessel-orthogonality-a" + to_string(a)));
    }
    return t;
  });

  criterion(4, "i-minus-plus", [] {
    Tally t;
    t.take(run(config("i-minus-plus"), "c04-i-minus-plus"));
    return t;
  });

  criterion(5, "transform-of-neumann", [] {
    Tally t;
    t.take(run(config("lemma-qfpq"), "c05-lemma-qfpq"));
    return t;
  });

  criterion(6, "kernel-expansion", [] {
    Tally t;
    t.take(run(config("kernel-expansion"), "c06-kernel-expansion"));
    return t;
  });

  criterion(7, "plane-wave", [] {
    Tally t;
    t.take(run(config("plane-wave"), "c07-plane-wave"));
    return t;
  });

  criterion(8, "hankel-kernel", [] {
    Tally t;
    t.take(run(config("hankel-kernel"), "c08-hankel-kernel"));
    return t;
  });

  criterion(9, "transform-round-trips", [] {
    Tally t;
    t.take(run(config("transforms-roundtrip"), "c09-transforms-roundtrip"));
    return t;
  });

  criterion(10, "paley-wiener-reconstruction", [] {
    Tally t;
    t.take(run(config("pw-reconstruct"), "c10-pw-reconstruct"));
    return t;
  });

  criterion(11, "classical-limit", [] {
    Tally t;
    t.take(run(config("jacobi-gram"), "c11-classical-limit"), "classical.");
    return t;
  });

  std::cout << (failed_criteria == 0 ? "ALL PASS" : std::to_string(failed_criteria) + " criteria FAILED") << '\n';
  return failed_criteria == 0 ? 0 : 1;
}
