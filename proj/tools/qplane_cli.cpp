// qplane command-line front end: eval, check, expand, transform.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "qplane/io.hpp"
#include "qplane/suites.hpp"

using namespace qplane;

namespace {

enum Exit { Pass = 0, NumericFailure = 1, Usage = 2 };

struct Options {
  std::string q = "0.5";
  std::optional<std::string> alpha, beta, nu, x, t, a, z;
  std::optional<int> n, N, m;
  std::optional<std::string> lambda, mu;
  int kmin = -40, kmax = 60, precision = 40;
  std::optional<double> tol;
  std::string format = "json";
  std::uint64_t seed = 20240611;
  std::string out;
};

void add_common(CLI::App* app, Options& o) {
  app->add_option("--q", o.q, "base q in (0,1), decimal or p/r")->capture_default_str();
  app->add_option("--kmin", o.kmin, "lower lattice exponent of the window")->capture_default_str();
  app->add_option("--kmax", o.kmax, "upper lattice exponent of the window")->capture_default_str();
  app->add_option("--precision", o.precision, "working precision in decimal digits")->capture_default_str();
  app->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app->add_option("--out", o.out, "output file (default stdout)");
}

void add_params(CLI::App* app, Options& o) {
  app->add_option("--alpha", o.alpha, "parameter alpha");
  app->add_option("--beta", o.beta, "parameter beta");
  app->add_option("--nu", o.nu, "Bessel order nu");
  app->add_option("--n", o.n, "index n");
  app->add_option("--N", o.N, "truncation order N");
  app->add_option("--x", o.x, "point x: decimal, p/r or [-]q^k");
  app->add_option("--t", o.t, "point t: decimal, p/r or [-]q^k");
  app->add_option("--tol", o.tol, "tolerance override");
  app->add_option("--seed", o.seed, "seed for random draws")->capture_default_str();
}

Rational need(const std::optional<std::string>& v, const char* flag) {
  if (!v) throw Error(ErrorKind::InvalidParameter, std::string("missing required option ") + flag);
  return parse_rational(*v);
}

int need(const std::optional<int>& v, const char* flag) {
  if (!v) throw Error(ErrorKind::InvalidParameter, std::string("missing required option ") + flag);
  return *v;
}

QContext context_of(const Options& o) {
  TruncationPolicy tp;
  tp.k_min = o.kmin;
  tp.k_max = o.kmax;
  return QContext(parse_rational(o.q), o.precision, tp);
}

/// Accepts "q^k", "-q^k" and plain numbers that are exact powers of q.
LatticePoint lattice_arg(const std::optional<std::string>& v, const char* flag, const QContext& ctx) {
  if (!v) throw Error(ErrorKind::InvalidParameter, std::string("missing required option ") + flag);
  std::string s = *v;
  int sign = 1;
  if (!s.empty() && s[0] == '-') {
    sign = -1;
    s.erase(0, 1);
  }
  if (s.rfind("q^", 0) == 0) {
    int k = 0;
    const std::string e = s.substr(2);
    auto r = std::from_chars(e.data(), e.data() + e.size(), k);
    if (r.ec != std::errc{} || r.ptr != e.data() + e.size())
      throw Error(ErrorKind::InvalidParameter, std::string(flag) + ": cannot read exponent in '" + *v + "'");
    return {sign, k};
  }
  return detail::lattice_point_of(parse_rational(*v), ctx.q_exact());
}

real real_arg(const std::optional<std::string>& v, const char* flag, const QContext& ctx) {
  if (v && v->find("q^") != std::string::npos) return lattice_arg(v, flag, ctx).value(ctx);
  return to_real(need(v, flag));
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

LatticeFunction load_lattice(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  return read_lattice_csv(in);
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalResult {
  complex value;
  real err_estimate;
  int terms_used = 0;
};

EvalResult from(const SeriesValue& s) { return {s.value, s.err_estimate, s.terms_used}; }
EvalResult from(const real& v) { return {complex(v, real(0)), real(0), 0}; }
EvalResult from(const complex& v) { return {v, real(0), 0}; }

using EvalFn = std::function<EvalResult(const Options&, const QContext&)>;

const std::map<std::string, std::pair<EvalFn, std::string>>& eval_registry() {
  static const std::map<std::string, std::pair<EvalFn, std::string>> reg = {
      {"qpochhammer",
       {[](const Options& o, const QContext& ctx) {
          const complex a(to_real(need(o.a, "--a")), real(0));
          if (o.n) return from(qpochhammer(a, ctx.q(), *o.n));
          return from(qpochhammer_inf(a, ctx.q(), ctx));
        },
        "(a;q)_n, or (a;q)_inf without --n. Needs --a"}},
      {"jackson3-bessel",
       {[](const Options& o, const QContext& ctx) {
          return from(jackson3_bessel(BesselOrder(need(o.nu, "--nu")), complex(real_arg(o.x, "--x", ctx), real(0)),
                                      ctx.q(), ctx));
        },
        "J_nu(x;q) in base q. Needs --nu --x"}},
      {"q-cos",
       {[](const Options& o, const QContext& ctx) {
          return from(q_trig(complex(real_arg(o.x, "--x", ctx), real(0)), ctx.q(), ctx).first);
        },
        "cos(x;q^2). Needs --x"}},
      {"q-sin",
       {[](const Options& o, const QContext& ctx) {
          return from(q_trig(complex(real_arg(o.x, "--x", ctx), real(0)), ctx.q(), ctx).second);
        },
        "sin(x;q^2). Needs --x"}},
      {"rubin-exp",
       {[](const Options& o, const QContext& ctx) {
          return from(rubin_exp(complex(real(0), real_arg(o.x, "--x", ctx)), ctx.q(), ctx));
        },
        "e(ix;q^2). Needs --x"}},
      {"dunkl-kernel",
       {[](const Options& o, const QContext& ctx) {
          return from(dunkl_kernel(KernelParams(need(o.alpha, "--alpha")), real_arg(o.x, "--x", ctx), ctx));
        },
        "E_alpha(ix;q^2). Needs --alpha --x"}},
      {"little-q-jacobi",
       {[](const Options& o, const QContext& ctx) {
          const PolyParams p(need(o.alpha, "--alpha"), need(o.beta, "--beta"));
          return from(little_q_jacobi(need(o.n, "--n"), real_arg(o.x, "--x", ctx), p, ctx.q(), true, ctx));
        },
        "normalized p_n(x;q). Needs --alpha --beta --n --x"}},
      {"classical-jacobi",
       {[](const Options& o, const QContext& ctx) {
          return from(classical_jacobi_oracle(need(o.n, "--n"), real_arg(o.x, "--x", ctx),
                                              to_real(need(o.alpha, "--alpha")), to_real(need(o.beta, "--beta"))));
        },
        "P_n(y) with y from --x. Needs --alpha --beta --n --x"}},
      {"gegenbauer",
       {[](const Options& o, const QContext& ctx) {
          const PolyParams p(need(o.alpha, "--alpha"), need(o.beta, "--beta"));
          return from(gegenbauer_gen(need(o.n, "--n"), real_arg(o.t, "--t", ctx), p, ctx));
        },
        "C_n^{(beta+1/2,alpha+1/2)}(t;q^2). Needs --alpha --beta --n --t"}},
      {"gegenbauer-norm",
       {[](const Options& o, const QContext& ctx) {
          const PolyParams p(need(o.alpha, "--alpha"), need(o.beta, "--beta"));
          return from(gegenbauer_norm(need(o.n, "--n"), p, ctx));
        },
        "h_n. Needs --alpha --beta --n"}},
      {"neumann",
       {[](const Options& o, const QContext& ctx) {
          const int n = need(o.n, "--n");
          return from(neumann_fn(NeumannSystem(need(o.alpha, "--alpha"), std::max(n, 0)), n,
                                 lattice_arg(o.x, "--x", ctx), ctx));
        },
        "Neumann function with base order --alpha. Needs --alpha --n --x"}},
      {"i-minus",
       {[](const Options& o, const QContext& ctx) {
          const PolyParams p(need(o.alpha, "--alpha"), need(o.beta, "--beta"));
          return from(i_minus(p, need(o.n, "--n"), lattice_arg(o.t, "--t", ctx), ctx));
        },
        "I_-(t). Needs --alpha --beta --n --t"}},
      {"i-plus",
       {[](const Options& o, const QContext& ctx) {
          const PolyParams p(need(o.alpha, "--alpha"), need(o.beta, "--beta"));
          return from(i_plus(p, need(o.n, "--n"), lattice_arg(o.t, "--t", ctx), ctx));
        },
        "I_+(t), t <= 1. Needs --alpha --beta --n --t"}},
      {"weber",
       {[](const Options& o, const QContext& ctx) {
          const WeberParams w(need(o.lambda, "--lambda"), need(o.mu, "--mu"), need(o.nu, "--nu"), o.m.value_or(0),
                              o.n.value_or(0));
          return from(weber_schafheitlin_closed(w, WeberBranch::Auto, ctx));
        },
        "closed-form q-Weber-Schafheitlin integral. Needs --lambda --mu --nu, optional --m --n"}},
      {"kernel-expansion",
       {[](const Options& o, const QContext& ctx) {
          const PolyParams p(need(o.alpha, "--alpha"), need(o.beta, "--beta"));
          return from(kernel_expansion_partial(lattice_arg(o.x, "--x", ctx), real_arg(o.t, "--t", ctx), p,
                                               need(o.N, "--N"), ctx));
        },
        "N-term Neumann expansion of E_alpha(ixt). Needs --alpha --beta --x --t --N"}},
      {"plane-wave",
       {[](const Options& o, const QContext& ctx) {
          return from(plane_wave_partial(lattice_arg(o.x, "--x", ctx), real_arg(o.t, "--t", ctx),
                                         need(o.beta, "--beta"), need(o.N, "--N"), ctx));
        },
        "N-term plane-wave expansion of e(ixt;q^2). Needs --beta --x --t --N"}},
      {"hankel-kernel",
       {[](const Options& o, const QContext& ctx) {
          const PolyParams p(need(o.alpha, "--alpha"), need(o.beta, "--beta"));
          return from(hankel_kernel_partial(lattice_arg(o.x, "--x", ctx), real_arg(o.t, "--t", ctx), p,
                                            need(o.N, "--N"), ctx));
        },
        "N-term expansion of J_alpha(xt;q^2)/(xt)^alpha. Needs --alpha --beta --x --t --N"}},
  };
  return reg;
}

void print_eval(std::ostream& os, const std::string& fn, const EvalResult& r, const std::string& format) {
  if (format == "json") {
    ordered_json j;
    j["function"] = fn;
    j["value"] = {{"re", format_real(r.value.real())}, {"im", format_real(r.value.imag())}};
    j["err_estimate"] = format_real(r.err_estimate);
    j["terms_used"] = r.terms_used;
    os << j.dump(2) << '\n';
  } else {
    os << "function,re,im,err_estimate,terms_used\n"
       << fn << ',' << format_real(r.value.real()) << ',' << format_real(r.value.imag()) << ','
       << format_real(r.err_estimate) << ',' << r.terms_used << '\n';
  }
}

// ---------------------------------------------------------------------------
// expand
// ---------------------------------------------------------------------------

void print_coefficients(std::ostream& os, const ExpansionCoefficients& ec, const std::string& format) {
  if (format == "json") {
    ordered_json j;
    j["alpha"] = to_string(ec.alpha);
    j["beta"] = to_string(ec.beta);
    j["q"] = to_string(ec.q);
    j["N"] = ec.N;
    ordered_json cs = ordered_json::array();
    for (std::size_t n = 0; n < ec.coeffs.size(); ++n)
      cs.push_back({{"n", n}, {"re", format_real(ec.coeffs[n].real())}, {"im", format_real(ec.coeffs[n].imag())}});
    j["coefficients"] = cs;
    os << j.dump(2) << '\n';
  } else {
    os << "# alpha=" << to_string(ec.alpha) << " beta=" << to_string(ec.beta) << " q=" << to_string(ec.q)
       << " N=" << ec.N << '\n'
       << "n,re,im\n";
    for (std::size_t n = 0; n < ec.coeffs.size(); ++n)
      os << n << ',' << format_real(ec.coeffs[n].real()) << ',' << format_real(ec.coeffs[n].imag()) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-special functions, transforms and expansion checks"};
  app.require_subcommand(1);
  Options o;
  std::string fn, suite, input, kind = "dunkl", recon_path;
  bool inverse = false, finite_support = false;

  auto* eval = app.add_subcommand("eval", "evaluate one function at a point");
  std::string fn_help = "function name:";
  for (const auto& [name, entry] : eval_registry()) fn_help += "\n  " + name + ": " + entry.second;
  eval->add_option("function", fn, fn_help)->required();
  add_common(eval, o);
  add_params(eval, o);
  eval->add_option("--a", o.a, "argument a of qpochhammer");
  eval->add_option("--lambda", o.lambda, "Weber exponent lambda");
  eval->add_option("--mu", o.mu, "Weber order mu");
  eval->add_option("--m", o.m, "Weber index m");

  auto* check = app.add_subcommand("check", "run a named identity suite and emit a report");
  std::string suite_help = "suite name:";
  for (const auto& [name, entry] : suite_registry()) suite_help += " " + name;
  check->add_option("suite", suite, suite_help)->required();
  add_common(check, o);
  add_params(check, o);

  auto* expand = app.add_subcommand("expand", "Neumann coefficients a_n of a lattice function");
  add_common(expand, o);
  add_params(expand, o);
  expand->add_option("--in", input, "lattice CSV (sign,k,re,im); a seeded random band-limited function if omitted");
  expand->add_option("--recon", recon_path, "also write the reconstruction as lattice CSV");

  auto* transform = app.add_subcommand("transform", "apply F or H to a lattice function");
  add_common(transform, o);
  transform->add_option("--alpha", o.alpha, "parameter alpha")->required();
  transform->add_option("--tol", o.tol, "boundary tolerance override");
  transform->add_option("--in", input, "lattice CSV (sign,k,re,im)")->required();
  transform->add_option("--kind", kind, "transform")->check(CLI::IsMember({"dunkl", "hankel"}))->capture_default_str();
  transform->add_flag("--inverse", inverse, "inverse q-Dunkl transform");
  transform->add_flag("--finite-support", finite_support,
                      "treat the input as zero off the listed points and skip the window-edge check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? Pass : Usage;
  }

  try {
    if (*eval) {
      const auto& reg = eval_registry();
      auto it = reg.find(fn);
      if (it == reg.end()) {
        std::string names;
        for (const auto& [name, entry] : reg) names += " " + name;
        throw Error(ErrorKind::InvalidParameter, "unknown function '" + fn + "'; available:" + names);
      }
      const QContext ctx = context_of(o);
      PrecisionScope ps(ctx.precision_digits());
      const EvalResult r = it->second.first(o, ctx);
      Output out(o.out);
      print_eval(out.stream(), fn, r, o.format);
      return Pass;
    }

    if (*check) {
      SuiteConfig cfg;
      cfg.suite = suite;
      cfg.q = parse_rational(o.q);
      if (o.alpha) cfg.alpha = parse_rational(*o.alpha);
      if (o.beta) cfg.beta = parse_rational(*o.beta);
      if (o.nu) cfg.nu = parse_rational(*o.nu);
      if (o.x) cfg.x = parse_rational(*o.x);
      if (o.t) cfg.t = parse_rational(*o.t);
      cfg.n = o.n;
      cfg.N = o.N;
      cfg.k_min = o.kmin;
      cfg.k_max = o.kmax;
      cfg.precision = o.precision;
      cfg.tol = o.tol;
      cfg.seed = o.seed;
      (void)cfg.context();
      const Report r = run_suite(cfg);
      Output out(o.out);
      if (o.format == "json") write_report_json(out.stream(), r);
      else write_report_csv(out.stream(), r);
      std::cerr << r.suite_name << ": " << r.cases.size() << " cases, " << r.failures()
                << " failures, max_rel_err " << format_real(r.max_rel_err, 3) << '\n';
      return r.all_pass ? Pass : NumericFailure;
    }

    if (*expand) {
      const QContext ctx = context_of(o);
      PrecisionScope ps(ctx.precision_digits());
      const PolyParams p(o.alpha ? parse_rational(*o.alpha) : Rational(3, 10),
                         o.beta ? parse_rational(*o.beta) : Rational(7, 10));
      const int N = o.N.value_or(16);
      LatticeFunction f;
      if (!input.empty()) {
        f = load_lattice(input);
      } else {
        const PWSpec spec = random_pw_spec(p.alpha, 4, 8, o.seed, ctx);
        f = pw_synthesize(spec, pw_window(p.alpha + p.beta, spec.u.k_max(), ctx), ctx);
      }
      const auto [ec, g] = neumann_reconstruct(f, p, N, OutputWindow{f.k_min(), f.k_max()}, ctx);
      Output out(o.out);
      print_coefficients(out.stream(), ec, o.format);
      if (!recon_path.empty()) {
        Output rec(recon_path);
        write_lattice_csv(rec.stream(), g);
      }
      return Pass;
    }

    if (*transform) {
      const QContext ctx(parse_rational(o.q), o.precision);
      PrecisionScope ps(ctx.precision_digits());
      const LatticeFunction f = load_lattice(input);
      const Rational alpha = parse_rational(*o.alpha);
      std::optional<real> tol;
      if (o.tol) tol = real(*o.tol);
      if (finite_support) tol = real(1);
      // an explicit --kmin/--kmax sets the output window, otherwise it is the input window
      OutputWindow w{transform->count("--kmin") ? o.kmin : f.k_min(), transform->count("--kmax") ? o.kmax : f.k_max()};
      require(w.lo <= w.hi, ErrorKind::InvalidParameter, "output window needs kmin <= kmax");
      auto at = [&](const LatticePoint& p) { return f.at(p); };
      LatticeFunction g;
      if (kind == "hankel") {
        require(!f.is_signed(), ErrorKind::InvalidParameter, "the q-Hankel transform takes a half-line function");
        g = hankel_transform_fn(at, alpha, f.k_min(), f.k_max(), w, ctx, tol);
      } else {
        require(f.is_signed(), ErrorKind::InvalidParameter,
                "the q-Dunkl transform takes a signed function (include sign=-1 rows)");
        g = dunkl_transform_fn(at, alpha, f.k_min(), f.k_max(), w, inverse, ctx, tol);
      }
      Output out(o.out);
      write_lattice_csv(out.stream(), g);
      return Pass;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.is_parameter_error() ? Usage : NumericFailure;
  }
  return Usage;
}
