#pragma once

/**
 * @file suites.hpp
 * @brief Named identity suites. Each builds a Report from a SuiteConfig;
 *        random draws use std::mt19937_64 seeded from the config.
 */

#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "qplane/qexpansion.hpp"

namespace qplane {

struct SuiteConfig {
  std::string suite;
  Rational q{1, 2};
  std::optional<Rational> alpha;
  std::optional<Rational> beta;
  std::optional<Rational> nu;
  std::optional<int> n;
  std::optional<int> N;
  std::optional<Rational> x;
  std::optional<Rational> t;
  int k_min = -40;
  int k_max = 60;
  int precision = 40;
  std::optional<double> tol;
  std::uint64_t seed = 20240611;

  Rational alpha_or(Rational d) const { return alpha.value_or(d); }
  Rational beta_or(Rational d) const { return beta.value_or(d); }
  real tol_or(double d) const { return real(tol.value_or(d)); }

  QContext context() const {
    TruncationPolicy tp;
    tp.k_min = k_min;
    tp.k_max = k_max;
    return QContext(q, precision, tp);
  }
};

namespace detail {

inline Report start_report(const std::string& name, const SuiteConfig& cfg, const QContext& ctx) {
  Report r;
  r.suite_name = name;
  r.add_parameter("q", cfg.q);
  r.add_parameter("precision_digits", std::to_string(cfg.precision));
  r.provenance.precision_digits = ctx.precision_digits();
  r.provenance.k_min = ctx.trunc().k_min;
  r.provenance.k_max = ctx.trunc().k_max;
  r.provenance.max_terms = ctx.trunc().max_terms;
  r.provenance.seed = cfg.seed;
  return r;
}

inline void add_gram(Report& r, const GramReport& g, const std::string& prefix, const real& tol) {
  for (int i = 0; i < g.size; ++i)
    for (int j = 0; j < g.size; ++j) {
      const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
      const std::string id = prefix + (i == j ? "diag." : "offdiag.") + pad(i, 2) + "." + pad(j, 2);
      if (i == j)
        r.add_close(id, complex(g.gram[ui][ui]), complex(g.expected_diagonal[ui]), tol);
      else if (i < j)
        r.add_close(id, complex(g.entries[ui][uj]), complex(real(0)), tol, real(1), "relative to sqrt(G_nn G_mm)");
    }
  r.record(prefix + "offdiag_max", format_real(g.offdiag_max, 6));
  r.record(prefix + "diag_rel_err_max", format_real(g.diag_rel_err_max, 6));
}

inline std::string lattice_tag(const LatticePoint& x) { return (x.sign > 0 ? "p" : "n") + pad(x.k, 2); }

inline std::string join_reals(const std::vector<real>& v, int digits = 4) {
  std::string s;
  for (const auto& r : v) s += (s.empty() ? "" : " ") + format_real(r, digits);
  return s;
}

/// Residual sequence checks shared by the expansion suites: final value below
/// `bound` and non-increasing up to working-precision noise.
inline void add_residual_cases(Report& r, const std::string& prefix, const ResidualSequence& rs, const real& bound,
                               const QContext& ctx) {
  const int N = static_cast<int>(rs.l2.size()) - 1;
  const real noise = pow10(10 - ctx.precision_digits()) * rs.reference_norm;
  r.add_bound(prefix + "l2.final", rs.l2.back(), bound, "N=" + std::to_string(N));
  for (int n = 0; n < N; ++n)
    r.add_bound(prefix + "l2.monotone." + pad(n + 1, 2), rs.l2[static_cast<std::size_t>(n + 1)],
                rs.l2[static_cast<std::size_t>(n)] + noise);
  r.record(prefix + "l2", join_reals(rs.l2));
  r.record(prefix + "sup", join_reals(rs.sup));
  r.record(prefix + "reference_l2", format_real(rs.reference_norm, 10));
}

/// x = s q^k exactly, or InvalidParameter.
inline LatticePoint lattice_point_of(const Rational& x, const Rational& q) {
  require(x.numerator() != 0, ErrorKind::ZeroArgument, "lattice point must be nonzero");
  const int s = x < 0 ? -1 : 1;
  const Rational ax = x < 0 ? -x : x;
  Rational p(1);
  for (int k = 0; k <= 60; ++k) {
    if (ax == p) return {s, k};
    if (ax == 1 / p) return {s, -k};
    if (p.denominator() > (std::int64_t(1) << 40)) break;
    p *= q;
  }
  throw Error(ErrorKind::InvalidParameter, "x = " + to_string(x) + " is not of the form +-q^k on the lattice");
}

}  // namespace detail

// ---------------------------------------------------------------------------

/// Discrete Jacobi orthogonality for N+1 polynomials, and the q -> 1 limit
/// against classical Jacobi polynomials at q = 0.999.
inline Report suite_jacobi_gram(const SuiteConfig& cfg) {
  const QContext ctx = cfg.context();
  PrecisionScope ps(ctx.precision_digits());
  const PolyParams p(cfg.alpha_or(Rational(3, 10)), cfg.beta_or(Rational(7, 10)));
  const int N = cfg.N.value_or(8);
  Report r = detail::start_report("jacobi-gram", cfg, ctx);
  r.add_parameter("alpha", p.alpha);
  r.add_parameter("beta", p.beta);
  r.add_parameter("N", std::to_string(N));
  detail::add_gram(r, jacobi_gram(p, N, ctx), "gram.", cfg.tol_or(1e-25));

  const QContext c999 = ctx.with_q(Rational(999, 1000));
  const real a = to_real(p.alpha), b = to_real(p.beta);
  for (int n = 0; n <= 5; ++n)
    for (int xi : {1, 3, 5, 7, 9}) {
      const real x = to_real(Rational(xi, 10));
      const real v = little_q_jacobi(n, x, p, c999.q(), true, c999);
      const real c = classical_jacobi_oracle(n, real(1 - 2 * x), a, b);
      r.add_bound("classical.n" + pad(n, 1) + ".x0" + std::to_string(xi), abs_value(v - c), real(0.05),
                  "|p_n(x;0.999) - P_n(1-2x)|");
    }
  r.finalize();
  return r;
}

/// Gegenbauer orthogonality with the closed-form norms, and biorthonormality of (P_n, Q_m).
inline Report suite_gegenbauer_norms(const SuiteConfig& cfg) {
  const QContext ctx = cfg.context();
  PrecisionScope ps(ctx.precision_digits());
  const PolyParams p(cfg.alpha_or(Rational(3, 10)), cfg.beta_or(Rational(7, 10)));
  const int N = cfg.N.value_or(8);
  Report r = detail::start_report("gegenbauer-norms", cfg, ctx);
  r.add_parameter("alpha", p.alpha);
  r.add_parameter("beta", p.beta);
  r.add_parameter("N", std::to_string(N));
  const real tol = cfg.tol_or(to_double(pow10(12 - ctx.precision_digits())));
  detail::add_gram(r, gegenbauer_gram(p, N, ctx), "gram.", tol);
  for (int n = 0; n <= N; ++n)
    for (int m = 0; m <= N; ++m)
      r.add_close("biorthonormal." + pad(n, 2) + "." + pad(m, 2), complex(biorthogonal_pairing(n, m, p, ctx)),
                  complex(real(n == m ? 1 : 0)), tol);
  r.finalize();
  return r;
}

/// Seeded generic draws (both branches and the oracle agree) and constructed
/// exceptional cases (only the predicted branch agrees).
inline Report suite_weber_schafheitlin(const SuiteConfig& cfg) {
  const QContext ctx = cfg.context();
  PrecisionScope ps(ctx.precision_digits());
  const int draws = cfg.N.value_or(50);
  const real tol = cfg.tol_or(1e-20);
  Report r = detail::start_report("weber-schafheitlin", cfg, ctx);
  r.add_parameter("draws", std::to_string(draws));
  r.add_parameter("seed", std::to_string(cfg.seed));

  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> order(-90, 290), gap(25, 300), shift(-2, 2);
  auto generic = [](const WeberParams& w) {
    for (const Rational& v : {1 - w.lambda + w.mu + w.nu, 1 - w.lambda + w.mu - w.nu, 1 - w.lambda - w.mu + w.nu,
                              1 + w.lambda + w.nu - w.mu, 1 + w.lambda + w.mu - w.nu, w.lambda, w.mu, w.nu})
      if (is_integer(v)) return false;
    return true;
  };
  int rejected = 0;
  for (int i = 0; i < draws;) {
    const Rational mu(order(rng), 97), nu(order(rng), 97);
    const Rational lambda = mu + nu + 1 - Rational(gap(rng), 97);
    const WeberParams w(lambda, mu, nu, shift(rng), shift(rng));
    if (!generic(w)) {
      ++rejected;
      continue;
    }
    const std::string id = "draw." + pad(i, 2) + ".";
    const real oracle = weber_schafheitlin_oracle(w, ctx).value.real();
    const real first = weber_schafheitlin_closed(w, WeberBranch::First, ctx).value.real();
    const real second = weber_schafheitlin_closed(w, WeberBranch::Second, ctx).value.real();
    const std::string note = "l=" + to_string(w.lambda) + " mu=" + to_string(w.mu) + " nu=" + to_string(w.nu) +
                             " m=" + std::to_string(w.m) + " n=" + std::to_string(w.n);
    r.add_close(id + "first_vs_oracle", complex(first), complex(oracle), tol, real(1), note);
    r.add_close(id + "second_vs_oracle", complex(second), complex(oracle), tol, real(1), note);
    r.add_close(id + "first_vs_second", complex(first), complex(second), tol, real(1), note);
    ++i;
  }
  r.record("rejected_nongeneric_draws", std::to_string(rejected));

  // exceptional: n-m+(1+l+mu-nu)/2 and (1-l+nu-mu)/2 non-positive integers
  const std::vector<WeberParams> exceptional = {
      WeberParams(Rational(1), Rational(23, 10), Rational(3, 10), 2, 0),
      WeberParams(Rational(1, 2), Rational(27, 10), Rational(1, 5), 3, 0),
      WeberParams(Rational(-1, 2), Rational(17, 10), Rational(1, 5), 1, 0),
  };
  int idx = 0;
  for (const auto& base : exceptional)
    for (const WeberParams& w : {base, base.swapped()}) {
      const std::string id = "exceptional." + pad(idx++, 2) + ".";
      const auto st = weber_branch_status(w);
      const real oracle = weber_schafheitlin_oracle(w, ctx).value.real();
      WeberBranch used = WeberBranch::Auto;
      const real chosen = weber_schafheitlin_closed(w, WeberBranch::Auto, ctx, &used).value.real();
      const WeberBranch excluded = st.first_excluded ? WeberBranch::First : WeberBranch::Second;
      const real other = weber_schafheitlin_closed(w, excluded, ctx).value.real();
      const real scale = std::max({abs_value(chosen), abs_value(other), real(1)});
      r.add_close(id + "oracle_vs_valid_branch", complex(oracle), complex(chosen), tol, scale,
                  std::string("branch ") + to_string(used));
      r.add_lower_bound(id + "excluded_branch_deviation", real(abs_value(other - oracle) / scale), real(1e-6),
                        std::string("excluded ") + to_string(excluded) + " branch");
      r.record(id + "excluded", to_string(excluded));
      r.record(id + "params", "l=" + to_string(w.lambda) + " mu=" + to_string(w.mu) + " nu=" + to_string(w.nu) +
                                   " m=" + std::to_string(w.m) + " n=" + std::to_string(w.n));
    }
  r.finalize();
  return r;
}

/// Gram of J_{alpha+2n+1}(q^n x;q^2) under d_q x / x.
inline Report suite_bessel_orthogonality(const SuiteConfig& cfg) {
  const QContext ctx = cfg.context();
  PrecisionScope ps(ctx.precision_digits());
  const Rational alpha = cfg.alpha_or(Rational(3, 10));
  const int N = cfg.N.value_or(6);
  Report r = detail::start_report("bessel-orthogonality", cfg, ctx);
  r.add_parameter("alpha", alpha);
  r.add_parameter("N", std::to_string(N));
  detail::add_gram(r, bessel_lemma_gram(alpha, N, ctx), "gram.", cfg.tol_or(1e-22));
  r.finalize();
  return r;
}

/// Orthogonality of the q-Neumann functions cJ_{alpha,n} under both shift rules.
inline Report suite_neumann_orthogonality(const SuiteConfig& cfg) {
  const QContext ctx = cfg.context();
  PrecisionScope ps(ctx.precision_digits());
  const Rational alpha = cfg.alpha_or(Rational(1));
  const int N = cfg.N.value_or(6);
  Report r = detail::start_report("neumann-orthogonality", cfg, ctx);
  r.add_parameter("base_order", alpha);
  r.add_parameter("N", std::to_string(N));
  const real tol = cfg.tol_or(1e-22);
  detail::add_gram(r, qbessel_orthogonality_suite(alpha, N, ctx, ShiftRule::FloorHalf), "floor_half.", tol);
  detail::add_gram(r, qbessel_orthogonality_suite(alpha, N, ctx, ShiftRule::FloorHalfUp), "floor_half_up.", tol);
  r.finalize();
  return r;
}

/// Closed forms of I_-(t), I_+(t) against the defining q-integrals.
inline Report suite_i_minus_plus(const SuiteConfig& cfg) {
  const QContext ctx = cfg.context();
  PrecisionScope ps(ctx.precision_digits());
  const PolyParams p(cfg.alpha_or(Rational(3, 10)), cfg.beta_or(Rational(7, 10)));
  const int N = cfg.N.value_or(4);
  const real tol = cfg.tol_or(1e-20);
  Report r = detail::start_report("i-minus-plus", cfg, ctx);
  r.add_parameter("alpha", p.alpha);
  r.add_parameter("beta", p.beta);
  r.add_parameter("N", std::to_string(N));
  for (int n = 0; n <= N; ++n) {
    real scale = 0;
    for (int j = 0; j <= 12; ++j) scale = std::max(scale, abs_value(i_minus(p, n, {1, j}, ctx)));
    for (int j = -2; j <= 12; ++j) {
      const LatticePoint t{1, j};
      const std::string tag = "n" + pad(n, 1) + ".j" + pad(j, 2);
      const real closed = i_minus(p, n, t, ctx), oracle_m = i_minus_plus_oracle(p, n, t, false, ctx);
      if (j < 0) {
        r.add_close("minus." + tag, complex(oracle_m), complex(closed), tol, scale, "t > 1: closed form is 0");
        continue;
      }
      r.add_close("minus." + tag, complex(closed), complex(oracle_m), tol);
      const real oracle = i_minus_plus_oracle(p, n, t, true, ctx);
      r.add_close("plus." + tag, complex(i_plus(p, n, t, ctx)), complex(oracle), tol);
      if (n >= 1 && j <= 1)
        r.add_lower_bound("plus_printed_exponent_rejected." + tag,
                          abs_value(i_plus(p, n, t, ctx, IPlusExponent::Printed) - oracle) / abs_value(oracle),
                          real(1e-6), "numerator exponent 2alpha+n+2 disagrees with the oracle");
    }
  }
  r.record("i_plus_numerator_exponent", "2alpha+2n+2");
  r.finalize();
  return r;
}

/// Lemma on F(cJ_k) and F(|x|^{2beta} cJ_k) for k = 0..N.
inline Report suite_lemma_qfpq(const SuiteConfig& cfg) {
  const QContext ctx = cfg.context();
  PrecisionScope ps(ctx.precision_digits());
  const PolyParams p(cfg.alpha_or(Rational(3, 10)), cfg.beta_or(Rational(7, 10)));
  const int N = cfg.N.value_or(6);
  Report r = detail::start_report("lemma-qfpq", cfg, ctx);
  r.add_parameter("alpha", p.alpha);
  r.add_parameter("beta", p.beta);
  r.add_parameter("N", std::to_string(N));
  for (int k = 0; k <= N; ++k) r.absorb(lemma_qFPQ_check(k, p, -2, 10, ctx, cfg.tol_or(1e-18)), "k" + pad(k, 2) + ".");
  r.finalize();
  return r;
}

/// L^2([-1,1]) residual of the kernel expansion against E_alpha(ixt).
inline Report suite_kernel_expansion(const SuiteConfig& cfg) {
  const QContext ctx = cfg.context();
  PrecisionScope ps(ctx.precision_digits());
  const PolyParams p(cfg.alpha_or(Rational(3, 10)), cfg.beta_or(Rational(7, 10)));
  const int N = cfg.N.value_or(20);
  const real tol = cfg.tol_or(1e-12);
  Report r = detail::start_report("kernel-expansion", cfg, ctx);
  r.add_parameter("alpha", p.alpha);
  r.add_parameter("beta", p.beta);
  r.add_parameter("N", std::to_string(N));
  std::vector<LatticePoint> xs = {{1, 3}, {1, 0}, {1, -2}};
  if (cfg.x) xs = {detail::lattice_point_of(*cfg.x, cfg.q)};
  for (const auto& x : xs) {
    const std::string px = "x" + detail::lattice_tag(x) + ".";
    detail::add_residual_cases(r, px, kernel_expansion_residuals(x, p, N, ctx), tol, ctx);
    for (int j : {0, 2}) {
      const real t = ctx.qpow(static_cast<long long>(j));
      const complex a = kernel_expansion_partial(x, t, p, N, ctx).value;
      const complex b = kernel_expansion_partial(x, real(-t), p, N, ctx).value;
      r.add_close(px + "conjugate_symmetry.j" + pad(j, 2), b, std::conj(a), pow10(10 - ctx.precision_digits()));
    }
  }
  r.record("shift_rule", to_string(ShiftRule::FloorHalf));
  r.finalize();
  return r;
}

/// The plane-wave expansion of e(ixt;q^2) (alpha = -1/2) for beta in {3/4, 3/2} or --beta.
inline Report suite_plane_wave(const SuiteConfig& cfg) {
  const QContext ctx = cfg.context();
  PrecisionScope ps(ctx.precision_digits());
  const int N = cfg.N.value_or(20);
  const real tol = cfg.tol_or(1e-12);
  std::vector<Rational> betas = {Rational(3, 4), Rational(3, 2)};
  if (cfg.beta) betas = {*cfg.beta};
  Report r = detail::start_report("plane-wave", cfg, ctx);
  r.add_parameter("N", std::to_string(N));
  std::string bl;
  for (const auto& b : betas) bl += (bl.empty() ? "" : ",") + to_string(b);
  r.add_parameter("beta", bl);
  for (const auto& beta : betas) {
    const std::string pb = "beta" + to_string(beta) + ".";
    for (int k : {-1, 0, 2}) {
      const LatticePoint x{1, k};
      detail::add_residual_cases(r, pb + "x" + detail::lattice_tag(x) + ".", plane_wave_residuals(x, beta, N, ctx),
                                 tol, ctx);
      for (int j : {0, 1, 3}) {
        const real t = ctx.qpow(static_cast<long long>(j));
        const complex ref = rubin_exp(complex(real(0), real(x.value(ctx) * t)), ctx.q(), ctx).value;
        r.add_close(pb + "pointwise.x" + detail::lattice_tag(x) + ".j" + pad(j, 2),
                    plane_wave_partial(x, t, beta, N, ctx).value, ref, tol);
      }
    }
  }
  // beta in (-1/2, 0]: outside the hypotheses of the kernel expansion, reported only
  for (const Rational beta : {Rational(-1, 4), Rational(0)}) {
    const auto rs = plane_wave_residuals({1, 0}, beta, N, ctx);
    r.record("probe.beta" + to_string(beta) + ".x1.l2", detail::join_reals(rs.l2, 3));
  }
  r.finalize();
  return r;
}

/// Expansion of J_alpha(xt;q^2)/(xt)^alpha in cJ_{alpha+beta,2n}(x) p_n(t^2).
inline Report suite_hankel_kernel(const SuiteConfig& cfg) {
  const QContext ctx = cfg.context();
  PrecisionScope ps(ctx.precision_digits());
  const PolyParams p(cfg.alpha_or(Rational(3, 10)), cfg.beta_or(Rational(7, 10)));
  const int N = cfg.N.value_or(10);
  const real tol = cfg.tol_or(1e-12);
  Report r = detail::start_report("hankel-kernel", cfg, ctx);
  r.add_parameter("alpha", p.alpha);
  r.add_parameter("beta", p.beta);
  r.add_parameter("N", std::to_string(N));
  const NeumannSystem sys(p.alpha + p.beta, 2 * N + 1);
  const int j_max = 60;
  std::vector<LatticePoint> xs = {{1, 3}, {1, 0}, {1, -2}};
  if (cfg.x) xs = {detail::lattice_point_of(*cfg.x, cfg.q)};
  const real even_scale =
      pochhammer_q2_inf(2 * (p.alpha + 1), ctx) / pochhammer_q2_inf(Rational(2), ctx);
  for (const auto& x : xs) {
    const std::string px = "x" + detail::lattice_tag(x) + ".";
    std::vector<real> coef;
    for (int n = 0; n <= N; ++n) coef.push_back(hankel_kernel_coefficient(n, p, ctx) * neumann_fn(sys, 2 * n, x, ctx));
    std::vector<std::vector<real>> poly(static_cast<std::size_t>(N + 1));
    for (int n = 0; n <= N; ++n)
      for (int j = 0; j <= j_max; ++j)
        poly[static_cast<std::size_t>(n)].push_back(
            little_q_jacobi(n, ctx.qpow(static_cast<long long>(2 * j)), p, ctx.q2(), true, ctx));
    const auto rs = detail::residual_sequence(
        [&](int n, const LatticePoint& t) {
          return coef[static_cast<std::size_t>(n)] * poly[static_cast<std::size_t>(n)][static_cast<std::size_t>(t.k)];
        },
        [&](const LatticePoint& t) { return hankel_kernel_reference(x.times(t), p.alpha, ctx); }, N, p.alpha, j_max,
        ctx);
    detail::add_residual_cases(r, px, rs, tol, ctx);
    for (int j : {0, 1, 2, 3}) {
      const real t = ctx.qpow(static_cast<long long>(j));
      const std::string tj = ".j" + pad(j, 2);
      const real h = hankel_kernel_partial(x, t, p, N, ctx).value.real();
      r.add_close(px + "pointwise" + tj, complex(h),
                  complex(hankel_kernel_reference(x.times(LatticePoint{1, j}), p.alpha, ctx)), tol);
      r.add_close(px + "even_half_of_kernel_expansion" + tj, complex(h),
                  complex(even_scale * kernel_expansion_partial(x, t, p, 2 * N + 1, ctx).value.real()),
                  pow10(10 - ctx.precision_digits()));
      r.add_close(px + "even_in_t" + tj, hankel_kernel_partial(x, real(-t), p, N, ctx).value, complex(h),
                  pow10(10 - ctx.precision_digits()));
    }
  }
  r.finalize();
  return r;
}

/// Paley-Wiener synthesis from seeded spectra and reconstruction from a_n, n <= N.
inline Report suite_pw_reconstruct(const SuiteConfig& cfg) {
  const QContext ctx = cfg.context();
  PrecisionScope ps(ctx.precision_digits());
  const PolyParams p(cfg.alpha_or(Rational(3, 10)), cfg.beta_or(Rational(7, 10)));
  const int N = cfg.N.value_or(16);
  const real tol = cfg.tol_or(1e-10);
  const int spectra = 5, points = 4, j_data = 10;
  Report r = detail::start_report("pw-reconstruct", cfg, ctx);
  r.add_parameter("alpha", p.alpha);
  r.add_parameter("beta", p.beta);
  r.add_parameter("N", std::to_string(N));
  r.add_parameter("seed", std::to_string(cfg.seed));
  const OutputWindow win = pw_window(p.alpha, j_data, ctx);
  const OutputWindow check_win{0, 10};
  for (int s = 0; s < spectra; ++s) {
    const std::string ps_ = "spectrum" + pad(s, 1) + ".";
    const PWSpec spec = random_pw_spec(p.alpha, points, j_data, cfg.seed + static_cast<std::uint64_t>(s), ctx);
    const LatticeFunction f = pw_synthesize(spec, win, ctx);
    const auto [ec, g] = neumann_reconstruct(f, p, N, check_win, ctx);
    real err = 0;
    for (const auto& x : g.points()) err = std::max(err, abs_value(g.at(x) - f.at(x)));
    r.add_bound(ps_ + "sup_error", err, tol, "max over +-q^0..q^10");
    std::vector<real> mags;
    for (const auto& a : ec.coeffs) mags.push_back(abs_value(a));
    r.record(ps_ + "abs_a_n", detail::join_reals(mags, 3));
    if (s == 0) {
      real scale = 0;
      for (const auto& m : mags) scale = std::max(scale, m);
      for (int n = 0; n <= std::min(N, 8); ++n) {
        const LatticeFunction T = tn_direct(n, p, win, ctx);
        const complex cn = pairing_with_tn(f, T, p.alpha, ctx);
        const complex pred = cn * sn_constant(n, p, ctx) / (1 - ctx.qpow(2 * (p.alpha + p.beta + n + 1)));
        r.add_close(ps_ + "coefficient_vs_Tn_pairing." + pad(n, 2), ec.coeffs[static_cast<std::size_t>(n)], pred,
                    pow10(15 - ctx.precision_digits()), scale);
      }
    }
  }
  // single mode: u = Q_0 gives f = cJ_0 / c_0, exact at N = 0
  {
    const int jm = unit_window(p.alpha, ctx) + 2;
    LatticeFunction u(0, jm, true);
    for (const auto& t : u.points()) u.set(t, complex(biorthogonal_Q(0, t, p, ctx)));
    const LatticeFunction f = pw_synthesize(PWSpec(u, p.alpha), pw_window(p.alpha + p.beta, jm, ctx), ctx);
    const auto [ec, g] = neumann_reconstruct(f, p, 0, check_win, ctx);
    real err = 0, fmax = 0;
    for (const auto& x : g.points()) {
      err = std::max(err, abs_value(g.at(x) - f.at(x)));
      fmax = std::max(fmax, abs_value(f.at(x)));
    }
    r.add_bound("single_mode.sup_error", err / fmax, pow10(15 - ctx.precision_digits()), "u = Q_0, N = 0");
  }
  const complex s0 = sn_constant(0, p, ctx), s1 = sn_constant(1, p, ctx);
  r.record("S_n/cJ_n", "i^n q^{-floor(n/2)beta}(1-q^{2a+2b+2n+2})(q^2;q^2)_inf/(q^{2a+2b+2};q^2)_inf");
  r.record("S_0/cJ_0", format_real(s0.real()));
  r.record("S_1/cJ_1", format_real(s1.imag()) + "i");
  r.finalize();
  return r;
}

/// H o H, F^{-1} o F, Plancherel and the multiplication formula on seeded
/// finitely supported lattice functions.
inline Report suite_transforms_roundtrip(const SuiteConfig& cfg) {
  const QContext ctx = cfg.context();
  PrecisionScope ps(ctx.precision_digits());
  const Rational alpha = cfg.alpha_or(Rational(3, 10));
  const real tol = cfg.tol_or(1e-18);
  const int draws = cfg.N.value_or(5);
  Report r = detail::start_report("transforms-roundtrip", cfg, ctx);
  r.add_parameter("alpha", alpha);
  r.add_parameter("draws", std::to_string(draws));
  r.add_parameter("seed", std::to_string(cfg.seed));
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const int lo = -30, hi = 50, sup_lo = -3, sup_hi = 6;
  auto draw = [&](bool signed_domain, bool complex_values) {
    LatticeFunction f(lo, hi, signed_domain);
    for (int k = sup_lo; k <= sup_hi; ++k)
      for (int s : {1, -1}) {
        if (s < 0 && !signed_domain) continue;
        f.set({s, k}, complex(real(U(rng)), complex_values ? real(U(rng)) : real(0)));
      }
    return f;
  };
  auto sup_diff = [](const LatticeFunction& a, const LatticeFunction& b) {
    real e = 0, m = 0;
    for (const auto& x : a.points()) {
      e = std::max(e, abs_value(a.at(x) - b.at(x)));
      m = std::max(m, abs_value(b.at(x)));
    }
    return std::pair{e, m};
  };
  auto pair = [&](const LatticeFunction& a, const LatticeFunction& b, bool conj_b, bool dunkl) {
    complex s(real(0), real(0));
    for (const auto& x : a.points()) {
      const complex bv = conj_b ? std::conj(b.at(x)) : b.at(x);
      s += a.at(x) * bv * lattice_mass(alpha, x.k, ctx);
    }
    return dunkl ? complex(s * real(pochhammer_q2_inf(2 * alpha + 2, ctx) / pochhammer_q2_inf(Rational(2), ctx) / 2))
                 : s;
  };
  for (int d = 0; d < draws; ++d) {
    const std::string pd = "draw" + pad(d, 1) + ".";
    {
      const LatticeFunction f = draw(false, false), g = draw(false, false);
      const LatticeFunction Hf = hankel_transform(f, alpha, ctx), Hg = hankel_transform(g, alpha, ctx);
      const auto [e, m] = sup_diff(hankel_transform(Hf, alpha, ctx), f);
      r.add_close(pd + "hankel.involution", complex(e), complex(real(0)), tol, m, "sup |HHf - f| / sup |f|");
      r.add_close(pd + "hankel.plancherel", pair(Hf, Hf, true, false), pair(f, f, true, false), tol);
      r.add_close(pd + "hankel.multiplication", pair(f, Hg, false, false), pair(Hf, g, false, false), tol);
    }
    {
      const LatticeFunction f = draw(true, true), g = draw(true, true);
      const LatticeFunction Ff = dunkl_transform(f, alpha, false, ctx), Fg = dunkl_transform(g, alpha, false, ctx);
      const auto [e, m] = sup_diff(dunkl_transform(Ff, alpha, true, ctx), f);
      r.add_close(pd + "dunkl.inverse", complex(e), complex(real(0)), tol, m, "sup |F^-1 F f - f| / sup |f|");
      r.add_close(pd + "dunkl.plancherel", pair(Ff, Ff, true, true), pair(f, f, true, true), tol);
      r.add_close(pd + "dunkl.multiplication", pair(f, Fg, false, true), pair(Ff, g, false, true), tol);
      const auto [e2, m2] = sup_diff(dunkl_transform_decomposed(f, alpha, false, ctx), Ff);
      r.add_close(pd + "dunkl.decomposed_route", complex(e2), complex(real(0)), tol, m2);
      if (d == 0) {
        const auto [c, dev] = dunkl_odd_constant(f, alpha, ctx);
        r.record("odd_part_constant", format_real(c.real()) + " " + format_real(c.imag()) + "i");
        r.record("odd_part_constant_spread", format_real(dev, 3));
      }
    }
  }
  r.finalize();
  return r;
}

/// The 2phi1 transformation and Heine's formula at seeded real points.
inline Report suite_hypergeometric_transforms(const SuiteConfig& cfg) {
  const QContext ctx = cfg.context();
  PrecisionScope ps(ctx.precision_digits());
  const int draws = cfg.N.value_or(10);
  Report r = detail::start_report("hypergeometric-transforms", cfg, ctx);
  r.add_parameter("draws", std::to_string(draws));
  r.add_parameter("seed", std::to_string(cfg.seed));
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> U(-0.9, 0.9);
  const real q = ctx.q();
  for (int d = 0; d < draws;) {
    const real a(U(rng)), b(U(rng)), c(U(rng)), z(U(rng));
    if (abs_value(c) < 0.05 || abs_value(a) < 0.05 || abs_value(b) < 0.05 || abs_value(real(a * b * z / c)) >= 0.9)
      continue;
    const Report sub = hypergeometric_transform_check(complex(a), complex(b), complex(c), complex(z), q, ctx,
                                                      cfg.tol ? std::optional<real>(real(*cfg.tol)) : std::nullopt);
    r.absorb(sub, "draw" + pad(d, 2) + ".");
    r.record("draw" + pad(d, 2) + ".abcz", format_real(a, 8) + " " + format_real(b, 8) + " " + format_real(c, 8) +
                                               " " + format_real(z, 8));
    ++d;
  }
  r.finalize();
  return r;
}

using SuiteFn = std::function<Report(const SuiteConfig&)>;

inline const std::map<std::string, SuiteFn>& suite_registry() {
  static const std::map<std::string, SuiteFn> reg = {
      {"jacobi-gram", suite_jacobi_gram},
      {"gegenbauer-norms", suite_gegenbauer_norms},
      {"weber-schafheitlin", suite_weber_schafheitlin},
      {"bessel-orthogonality", suite_bessel_orthogonality},
      {"neumann-orthogonality", suite_neumann_orthogonality},
      {"i-minus-plus", suite_i_minus_plus},
      {"lemma-qfpq", suite_lemma_qfpq},
      {"kernel-expansion", suite_kernel_expansion},
      {"plane-wave", suite_plane_wave},
      {"hankel-kernel", suite_hankel_kernel},
      {"pw-reconstruct", suite_pw_reconstruct},
      {"transforms-roundtrip", suite_transforms_roundtrip},
      {"hypergeometric-transforms", suite_hypergeometric_transforms},
  };
  return reg;
}

inline Report run_suite(const SuiteConfig& cfg) {
  const auto& reg = suite_registry();
  const auto it = reg.find(cfg.suite);
  if (it == reg.end()) {
    std::string names;
    for (const auto& [k, v] : reg) names += (names.empty() ? "" : ", ") + k;
    throw Error(ErrorKind::InvalidParameter, "unknown suite '" + cfg.suite + "'; available: " + names);
  }
  return it->second(cfg);
}

}  // namespace qplane
