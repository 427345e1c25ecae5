#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qplane/real.hpp"

namespace qplane {

/// One checked quantity. `check == "eq"` compares computed against reference
/// with a relative (or scaled absolute, for zero references) tolerance;
/// `check == "le"` / `"ge"` assert computed <= / >= reference and carry
/// tolerance 0.
struct ReportCase {
  std::string id;
  complex computed;
  complex reference;
  real abs_err;
  real rel_err;
  real tolerance;
  bool pass = false;
  std::string check = "eq";
  std::string note;
};

struct Provenance {
  int precision_digits = 0;
  int k_min = 0;
  int k_max = 0;
  int max_terms = 0;
  std::uint64_t seed = 0;
};

struct Report {
  std::string suite_name;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<ReportCase> cases;
  real max_rel_err = 0;
  bool all_pass = false;
  Provenance provenance;
  /// Derived quantities worth keeping next to the residuals (empirical
  /// constants, excluded branches, observed decay rates).
  std::vector<std::pair<std::string, std::string>> records;

  void add_parameter(std::string name, std::string value) {
    parameters.emplace_back(std::move(name), std::move(value));
  }
  void add_parameter(std::string name, const Rational& r) {
    parameters.emplace_back(name, to_string(r));
    parameters.emplace_back(std::move(name) + ".float", format_real(to_real(r)));
  }
  void record(std::string key, std::string value) { records.emplace_back(std::move(key), std::move(value)); }

  /// Equality check. A zero reference is judged on abs_err / zero_scale.
  ReportCase& add_close(std::string id, const complex& computed, const complex& reference, const real& tolerance,
                        const real& zero_scale = real(1), std::string note = {}) {
    ReportCase c;
    c.id = std::move(id);
    c.computed = computed;
    c.reference = reference;
    c.abs_err = abs_value(computed - reference);
    real ref_mag = abs_value(reference);
    c.rel_err = ref_mag != 0 ? real(c.abs_err / ref_mag) : real(c.abs_err / zero_scale);
    c.tolerance = tolerance;
    c.pass = c.rel_err <= tolerance;
    c.note = std::move(note);
    cases.push_back(std::move(c));
    return cases.back();
  }

  /// Upper-bound check: passes iff value <= bound.
  ReportCase& add_bound(std::string id, const real& value, const real& bound, std::string note = {}) {
    ReportCase c;
    c.id = std::move(id);
    c.computed = complex(value, real(0));
    c.reference = complex(bound, real(0));
    c.check = "le";
    real excess = value - bound;
    c.abs_err = excess > 0 ? excess : real(0);
    real b = abs_value(bound);
    c.rel_err = b != 0 ? real(c.abs_err / b) : c.abs_err;
    c.tolerance = 0;
    c.pass = value <= bound;
    c.note = std::move(note);
    cases.push_back(std::move(c));
    return cases.back();
  }

  /// Lower-bound check: passes iff value >= bound.
  ReportCase& add_lower_bound(std::string id, const real& value, const real& bound, std::string note = {}) {
    ReportCase c;
    c.id = std::move(id);
    c.computed = complex(value, real(0));
    c.reference = complex(bound, real(0));
    c.check = "ge";
    real shortfall = bound - value;
    c.abs_err = shortfall > 0 ? shortfall : real(0);
    real b = abs_value(bound);
    c.rel_err = b != 0 ? real(c.abs_err / b) : c.abs_err;
    c.tolerance = 0;
    c.pass = value >= bound;
    c.note = std::move(note);
    cases.push_back(std::move(c));
    return cases.back();
  }

  /// Copies the cases and records of `other`, prefixing their ids.
  void absorb(const Report& other, const std::string& prefix) {
    for (auto c : other.cases) {
      c.id = prefix + c.id;
      cases.push_back(std::move(c));
    }
    for (const auto& [k, v] : other.records) records.emplace_back(prefix + k, v);
  }

  /// Canonical ordering and summary; call once all cases are in.
  void finalize() {
    std::stable_sort(cases.begin(), cases.end(),
                     [](const ReportCase& a, const ReportCase& b) { return a.id < b.id; });
    max_rel_err = 0;
    all_pass = !cases.empty();
    for (const auto& c : cases) {
      if (c.rel_err > max_rel_err) max_rel_err = c.rel_err;
      all_pass = all_pass && c.pass;
    }
  }

  std::size_t failures() const {
    return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(), [](const auto& c) { return !c.pass; }));
  }
};

/// Zero-padded index so lexicographic case ordering matches numeric ordering.
inline std::string pad(long long value, int width = 3) {
  std::string s = std::to_string(value < 0 ? -value : value);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
  return (value < 0 ? "m" : "") + s;
}

}  // namespace qplane
