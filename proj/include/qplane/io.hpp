#pragma once

/**
 * @file io.hpp
 * @brief Lattice functions as CSV (sign,k,re,im) and Reports as JSON or CSV.
 *
 * Every number is written with 25 significant digits and JSON keeps them as
 * strings, so a read-back reproduces the printed values exactly.
 */

#include <charconv>
#include <istream>
#include <ostream>
#include <regex>
#include <sstream>

#include "json.hpp"
#include "qplane/qcore.hpp"

namespace qplane {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Lattice functions
// ---------------------------------------------------------------------------

inline void write_lattice_csv(std::ostream& os, const LatticeFunction& f) {
  os << "sign,k,re,im\n";
  for (const auto& p : f.points())
    os << p.sign << ',' << p.k << ',' << format_real(f.at(p).real()) << ',' << format_real(f.at(p).imag()) << '\n';
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

inline real parse_real(const std::string& s) {
  static const std::regex number(R"([+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)");
  if (!std::regex_match(s, number)) throw Error(ErrorKind::Io, "cannot parse '" + s + "' as a number");
  // every written digit is kept, whatever the ambient precision
  PrecisionScope ps(std::max<unsigned>(PrecisionScope::current(), static_cast<unsigned>(s.size())));
  return real(s);
}

inline int parse_int(const std::string& s) {
  int v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
    throw Error(ErrorKind::Io, "cannot parse '" + s + "' as an integer");
  return v;
}

}  // namespace detail

/// Reads sign,k,re,im rows. The window spans the listed k; missing points are 0.
/// Any negative sign makes the function signed.
inline LatticeFunction read_lattice_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorKind::Io, "empty lattice CSV");
  const auto header = detail::split_csv_line(line);
  if (header != std::vector<std::string>{"sign", "k", "re", "im"})
    throw Error(ErrorKind::Io, "lattice CSV header must be 'sign,k,re,im'");
  struct Row {
    int sign, k;
    complex v;
  };
  std::vector<Row> rows;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 4) throw Error(ErrorKind::Io, "line " + std::to_string(lineno) + ": expected 4 fields");
    const int s = detail::parse_int(f[0]);
    if (s != 1 && s != -1) throw Error(ErrorKind::Io, "line " + std::to_string(lineno) + ": sign must be 1 or -1");
    rows.push_back({s, detail::parse_int(f[1]), complex(detail::parse_real(f[2]), detail::parse_real(f[3]))});
  }
  if (rows.empty()) throw Error(ErrorKind::Io, "lattice CSV has no data rows");
  int lo = rows.front().k, hi = lo;
  bool signed_domain = false;
  for (const auto& r : rows) {
    lo = std::min(lo, r.k);
    hi = std::max(hi, r.k);
    signed_domain = signed_domain || r.sign < 0;
  }
  LatticeFunction out(lo, hi, signed_domain);
  for (const auto& r : rows) out.set({r.sign, r.k}, r.v);
  return out;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline ordered_json report_to_json(const Report& r) {
  ordered_json j;
  j["suite_name"] = r.suite_name;
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : r.parameters) params[k] = v;
  j["parameters"] = params;
  ordered_json cases = ordered_json::array();
  for (const auto& c : r.cases) {
    ordered_json cj;
    cj["id"] = c.id;
    cj["check"] = c.check;
    cj["computed"] = {{"re", format_real(c.computed.real())}, {"im", format_real(c.computed.imag())}};
    cj["reference"] = {{"re", format_real(c.reference.real())}, {"im", format_real(c.reference.imag())}};
    cj["abs_err"] = format_real(c.abs_err);
    cj["rel_err"] = format_real(c.rel_err);
    cj["tolerance"] = format_real(c.tolerance);
    cj["pass"] = c.pass;
    cj["note"] = c.note;
    cases.push_back(cj);
  }
  j["cases"] = cases;
  j["summary"] = {{"max_rel_err", format_real(r.max_rel_err)}, {"all_pass", r.all_pass}};
  j["provenance"] = {{"precision_digits", r.provenance.precision_digits},
                     {"k_min", r.provenance.k_min},
                     {"k_max", r.provenance.k_max},
                     {"max_terms", r.provenance.max_terms},
                     {"seed", r.provenance.seed}};
  ordered_json rec = ordered_json::object();
  for (const auto& [k, v] : r.records) rec[k] = v;
  j["records"] = rec;
  return j;
}

inline Report report_from_json(const ordered_json& j) {
  try {
    Report r;
    r.suite_name = j.at("suite_name").get<std::string>();
    for (const auto& [k, v] : j.at("parameters").items()) r.parameters.emplace_back(k, v.get<std::string>());
    for (const auto& cj : j.at("cases")) {
      ReportCase c;
      c.id = cj.at("id").get<std::string>();
      c.check = cj.at("check").get<std::string>();
      c.computed = complex(detail::parse_real(cj.at("computed").at("re").get<std::string>()),
                           detail::parse_real(cj.at("computed").at("im").get<std::string>()));
      c.reference = complex(detail::parse_real(cj.at("reference").at("re").get<std::string>()),
                            detail::parse_real(cj.at("reference").at("im").get<std::string>()));
      c.abs_err = detail::parse_real(cj.at("abs_err").get<std::string>());
      c.rel_err = detail::parse_real(cj.at("rel_err").get<std::string>());
      c.tolerance = detail::parse_real(cj.at("tolerance").get<std::string>());
      c.pass = cj.at("pass").get<bool>();
      c.note = cj.at("note").get<std::string>();
      r.cases.push_back(std::move(c));
    }
    r.max_rel_err = detail::parse_real(j.at("summary").at("max_rel_err").get<std::string>());
    r.all_pass = j.at("summary").at("all_pass").get<bool>();
    const auto& p = j.at("provenance");
    r.provenance = {p.at("precision_digits").get<int>(), p.at("k_min").get<int>(), p.at("k_max").get<int>(),
                    p.at("max_terms").get<int>(), p.at("seed").get<std::uint64_t>()};
    for (const auto& [k, v] : j.at("records").items()) r.records.emplace_back(k, v.get<std::string>());
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, std::string("malformed report JSON: ") + e.what());
  }
}

inline void write_report_json(std::ostream& os, const Report& r) { os << report_to_json(r).dump(2) << '\n'; }

inline Report read_report_json(std::istream& is) {
  try {
    return report_from_json(ordered_json::parse(is));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Io, std::string("report is not valid JSON: ") + e.what());
  }
}

/**
 * One case per row under a fixed header. Metadata comes first as
 * `#kind,key,value` lines (kind in suite, parameter, summary, provenance, record).
 */
inline void write_report_csv(std::ostream& os, const Report& r) {
  using detail::csv_field;
  os << "#suite,suite_name," << csv_field(r.suite_name) << '\n';
  for (const auto& [k, v] : r.parameters) os << "#parameter," << csv_field(k) << ',' << csv_field(v) << '\n';
  os << "#summary,max_rel_err," << format_real(r.max_rel_err) << '\n';
  os << "#summary,all_pass," << (r.all_pass ? "true" : "false") << '\n';
  os << "#provenance,precision_digits," << r.provenance.precision_digits << '\n';
  os << "#provenance,k_min," << r.provenance.k_min << '\n';
  os << "#provenance,k_max," << r.provenance.k_max << '\n';
  os << "#provenance,max_terms," << r.provenance.max_terms << '\n';
  os << "#provenance,seed," << r.provenance.seed << '\n';
  for (const auto& [k, v] : r.records) os << "#record," << csv_field(k) << ',' << csv_field(v) << '\n';
  os << "case_id,check,computed_re,computed_im,reference_re,reference_im,abs_err,rel_err,tolerance,pass,note\n";
  for (const auto& c : r.cases)
    os << csv_field(c.id) << ',' << c.check << ',' << format_real(c.computed.real()) << ','
       << format_real(c.computed.imag()) << ',' << format_real(c.reference.real()) << ','
       << format_real(c.reference.imag()) << ',' << format_real(c.abs_err) << ',' << format_real(c.rel_err) << ','
       << format_real(c.tolerance) << ',' << (c.pass ? "true" : "false") << ',' << csv_field(c.note) << '\n';
}

inline Report read_report_csv(std::istream& is) {
  Report r;
  std::string line;
  bool header_seen = false;
  auto boolean = [](const std::string& s) {
    if (s != "true" && s != "false") throw Error(ErrorKind::Io, "expected true/false, got '" + s + "'");
    return s == "true";
  };
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto f = detail::split_csv_line(line);
    if (!line.empty() && line[0] == '#') {
      if (f.size() != 3) throw Error(ErrorKind::Io, "metadata line needs 3 fields: " + line);
      const std::string kind = f[0].substr(1);
      if (kind == "suite") {
        r.suite_name = f[2];
      } else if (kind == "parameter") {
        r.parameters.emplace_back(f[1], f[2]);
      } else if (kind == "record") {
        r.records.emplace_back(f[1], f[2]);
      } else if (kind == "summary") {
        if (f[1] == "max_rel_err") r.max_rel_err = detail::parse_real(f[2]);
        else r.all_pass = boolean(f[2]);
      } else if (kind == "provenance") {
        if (f[1] == "seed") r.provenance.seed = std::stoull(f[2]);
        else if (f[1] == "precision_digits") r.provenance.precision_digits = detail::parse_int(f[2]);
        else if (f[1] == "k_min") r.provenance.k_min = detail::parse_int(f[2]);
        else if (f[1] == "k_max") r.provenance.k_max = detail::parse_int(f[2]);
        else if (f[1] == "max_terms") r.provenance.max_terms = detail::parse_int(f[2]);
      } else {
        throw Error(ErrorKind::Io, "unknown metadata kind '" + kind + "'");
      }
      continue;
    }
    if (!header_seen) {
      if (f.size() != 11 || f[0] != "case_id") throw Error(ErrorKind::Io, "missing report CSV header");
      header_seen = true;
      continue;
    }
    if (f.size() != 11) throw Error(ErrorKind::Io, "report CSV row needs 11 fields: " + line);
    ReportCase c;
    c.id = f[0];
    c.check = f[1];
    c.computed = complex(detail::parse_real(f[2]), detail::parse_real(f[3]));
    c.reference = complex(detail::parse_real(f[4]), detail::parse_real(f[5]));
    c.abs_err = detail::parse_real(f[6]);
    c.rel_err = detail::parse_real(f[7]);
    c.tolerance = detail::parse_real(f[8]);
    c.pass = boolean(f[9]);
    c.note = f[10];
    r.cases.push_back(std::move(c));
  }
  if (!header_seen) throw Error(ErrorKind::Io, "missing report CSV header");
  return r;
}

}  // namespace qplane
