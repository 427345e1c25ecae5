#pragma once

/**
 * @file qexpansion.hpp
 * @brief Expansions of the q-Dunkl kernel in q-Neumann functions and generalized
 *        little q-Gegenbauer polynomials, and the Paley-Wiener pipeline.
 *
 * Notation: Q = q^2, C_n = C_n^{(beta+1/2, alpha+1/2)}(t;Q), w the Gegenbauer
 * weight, h_n its norms, cJ_n = cJ_{alpha+beta,n} and (a)_inf = (Q^a;Q)_inf.
 *
 *   E_alpha(ixt) = (1)/(a+b+1) sum_n i^n q^{-h(n) beta} (1 - Q^{a+b+n+1}) cJ_n(x) C_n(t)
 *
 * in L^2([-1,1], d mu_{q,alpha}), h(n) = floor(n/2).
 */

#include <functional>
#include <optional>
#include <random>

#include "qplane/neumann.hpp"
#include "qplane/qortho.hpp"
#include "qplane/qtransform.hpp"

namespace qplane {

// ---------------------------------------------------------------------------
// The integrals I_-(alpha,beta,n) and I_+(alpha,beta,n)
// ---------------------------------------------------------------------------

/// Exponent of the (q^{..};q^2)_inf factor in the numerator of I_+.
enum class IPlusExponent {
  Corrected,  // 2alpha + 2n + 2
  Printed,    // 2alpha + n + 2
};

namespace detail {

inline void check_ipm(const PolyParams& p, int n, const LatticePoint& t) {
  p.require_sum();
  require(n >= 0, ErrorKind::DomainError, "I_-+ need n >= 0");
  require(t.sign > 0, ErrorKind::DomainError, "I_-+ are evaluated at t = q^j > 0");
}

}  // namespace detail

/// I_-(t) = q^{n beta} (Q^{beta+n+1};Q)_inf/(Q^{n+1};Q)_inf w(t) p_n^{(alpha,beta)}(t^2;Q); zero for t > 1.
inline real i_minus(const PolyParams& p, int n, const LatticePoint& t, const QContext& ctx) {
  detail::check_ipm(p, n, t);
  PrecisionScope ps(ctx.precision_digits());
  const real w = gegenbauer_weight(t, p.beta, ctx);
  if (w == 0) return w;
  return ctx.qpow(n * p.beta) * pochhammer_q2_inf(2 * (p.beta + n + 1), ctx) /
         pochhammer_q2_inf(Rational(2 * n + 2), ctx) * w *
         little_q_jacobi(n, ctx.qpow(static_cast<long long>(2 * t.k)), p, ctx.q2(), true, ctx);
}

/// I_+(t) = q^{-n beta} (Q^{alpha+n+1};Q)_inf/(Q^{alpha+beta+n+1};Q)_inf p_n^{(alpha,beta)}(t^2;Q), for t <= 1.
inline real i_plus(const PolyParams& p, int n, const LatticePoint& t, const QContext& ctx,
                   IPlusExponent e = IPlusExponent::Corrected) {
  detail::check_ipm(p, n, t);
  require(t.k >= 0, ErrorKind::DomainError, "the closed form of I_+ holds for t in (0,1] only");
  PrecisionScope ps(ctx.precision_digits());
  const Rational num = e == IPlusExponent::Corrected ? 2 * p.alpha + 2 * n + 2 : 2 * p.alpha + n + 2;
  return ctx.qpow(-n * p.beta) * pochhammer_q2_inf(num, ctx) /
         pochhammer_q2_inf(2 * (p.alpha + p.beta + n + 1), ctx) *
         little_q_jacobi(n, ctx.qpow(static_cast<long long>(2 * t.k)), p, ctx.q2(), true, ctx);
}

/**
 * The defining q-integrals, summed directly:
 *   I_-+(q^j) = sum_k q^{k(1 -+ beta + alpha)} R_alpha(k+j) q^{(n+k) nu} R_nu(n+k),  nu = alpha+beta+2n+1,
 * i.e. int_0^inf x^{-+2beta} J_alpha(tx)/(tx)^alpha cJ_{alpha+beta,2n}(x) x^{2alpha+1} d_q x / (1-q).
 */
inline real i_minus_plus_oracle(const PolyParams& p, int n, const LatticePoint& t, bool plus, const QContext& ctx) {
  detail::check_ipm(p, n, t);
  PrecisionScope ps(ctx.precision_digits());
  const Rational nu = p.alpha + p.beta + 2 * n + 1;
  const Rational expo = 1 + p.alpha + (plus ? p.beta : -p.beta);
  const Rational decay = expo + nu;
  const int k_lo = -std::max({n, t.k, 0}) - 14;
  const int k_hi = window_upper_for_decay(ctx.q_exact(), to_double(to_real(decay)), ctx.precision_digits()) +
                   std::max(0, -t.k) + 2;
  real sum = 0, mass = 0, edge_lo = 0, edge_hi = 0;
  for (int k = k_lo; k <= k_hi; ++k) {
    const real v = ctx.qpow(expo * k + nu * (n + k)) * bessel_ratio_lattice(p.alpha, k + t.k, ctx).value *
                   bessel_ratio_lattice(nu, n + k, ctx).value;
    sum += v;
    mass += abs_value(v);
    if (k == k_lo) edge_lo = abs_value(v);
    if (k == k_hi) edge_hi = abs_value(v);
  }
  detail::check_edges(edge_lo, edge_hi, mass, ctx.tail_tol(), k_lo, k_hi);
  return sum;
}

// ---------------------------------------------------------------------------
// The biorthogonal pair P_n = C_n, Q_n = h_n^{-1} w C_n
// ---------------------------------------------------------------------------

inline real biorthogonal_P(int n, const real& t, const PolyParams& p, const QContext& ctx) {
  return gegenbauer_gen(n, t, p, ctx);
}

inline real biorthogonal_Q(int n, const real& t, const PolyParams& p, const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  const real w = gegenbauer_weight(t, p.beta, ctx);
  if (w == 0) return w;
  return w * gegenbauer_gen(n, t, p, ctx) / gegenbauer_norm(n, p, ctx);
}

inline real biorthogonal_Q(int n, const LatticePoint& t, const PolyParams& p, const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  const real w = gegenbauer_weight(t, p.beta, ctx);
  if (w == 0) return w;
  return w * gegenbauer_gen(n, t, p, ctx) / gegenbauer_norm(n, p, ctx);
}

/// int_{-1}^{1} P_n Q_m d mu_{q,alpha} by direct lattice summation.
inline real biorthogonal_pairing(int n, int m, const PolyParams& p, const QContext& base_ctx) {
  return gegenbauer_inner(n, m, p, base_ctx) / gegenbauer_norm(m, p, base_ctx);
}

// ---------------------------------------------------------------------------
// Tables shared by the expansions
// ---------------------------------------------------------------------------

/// C_n(q^j) for n = 0..N, j in [j_lo, j_hi]; negative t by parity.
class GegenbauerTable {
 public:
  GegenbauerTable(const PolyParams& p, int N, int j_lo, int j_hi, const QContext& ctx)
      : N_(N), j_lo_(j_lo), j_hi_(j_hi) {
    PrecisionScope ps(ctx.precision_digits());
    vals_.resize(static_cast<std::size_t>(N + 1));
    for (int n = 0; n <= N; ++n)
      for (int j = j_lo; j <= j_hi; ++j)
        vals_[static_cast<std::size_t>(n)].push_back(gegenbauer_gen(n, LatticePoint{1, j}, p, ctx));
  }
  real operator()(int n, const LatticePoint& t) const {
    require(n >= 0 && n <= N_ && t.k >= j_lo_ && t.k <= j_hi_ && !t.is_zero(), ErrorKind::OutOfWindow,
            "Gegenbauer table lookup outside its range");
    const real& v = vals_[static_cast<std::size_t>(n)][static_cast<std::size_t>(t.k - j_lo_)];
    return (t.sign < 0 && n % 2 == 1) ? real(-v) : v;
  }

 private:
  int N_, j_lo_, j_hi_;
  std::vector<std::vector<real>> vals_;
};

/// i^n as a complex number.
inline complex i_power(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {real(1), real(0)};
    case 1: return {real(0), real(1)};
    case 2: return {real(-1), real(0)};
    default: return {real(0), real(-1)};
  }
}

/// Discrete L^2([-1,1], d mu_{q,alpha}) norm of g sampled at +-q^j, j = 0..j_max.
/// The j_max term of the squared sum must stay below boundary_tol times
/// max(sum, mass_floor).
template <class G>
real unit_l2_norm(G&& g, const Rational& alpha, int j_max, const QContext& ctx, std::optional<real> boundary_tol = {},
                  const real& mass_floor = real(0)) {
  PrecisionScope ps(ctx.precision_digits());
  const real c = pochhammer_q2_inf(2 * alpha + 2, ctx) / pochhammer_q2_inf(Rational(2), ctx) / 2;
  real sum = 0, edge = 0;
  for (int j = 0; j <= j_max; ++j) {
    const real a = lattice_mass(alpha, j, ctx) * (boost::multiprecision::pow(abs_value(complex(g(LatticePoint{1, j}))), 2) +
                                                  boost::multiprecision::pow(abs_value(complex(g(LatticePoint{-1, j}))), 2));
    sum += a;
    if (j == j_max) edge = a;
  }
  const real tol = boundary_tol ? *boundary_tol : real(1e-12);
  if (edge > tol * std::max(sum, mass_floor) && edge > 0)
    throw Error(ErrorKind::WindowTooSmall, "L^2 boundary term at j_max = " + std::to_string(j_max) + " is not negligible");
  return boost::multiprecision::sqrt(c * sum);
}

// ---------------------------------------------------------------------------
// Lemma: the Dunkl transforms of cJ_k and |x|^{2beta} cJ_k
// ---------------------------------------------------------------------------

/// Right-hand constant of F(cJ_k) = c_k Q_k: (-i)^k q^{h beta}/(1-Q^{a+b+k+1}) (a+b+1)_inf/(1)_inf.
inline complex qfq_constant(int k, const PolyParams& p, const QContext& ctx, ShiftRule rule = ShiftRule::FloorHalf) {
  PrecisionScope ps(ctx.precision_digits());
  const Rational ab = p.alpha + p.beta;
  const real c = ctx.qpow(neumann_shift(k, rule) * p.beta) / (1 - ctx.qpow(2 * (ab + k + 1))) *
                 pochhammer_q2_inf(2 * (ab + 1), ctx) / pochhammer_q2_inf(Rational(2), ctx);
  return i_power(-k) * c;
}

/// Right-hand constant of F(|x|^{2beta} cJ_k) = d_k P_k on [-1,1]: (-i)^k q^{-h beta} (a+1)_inf/(a+b+1)_inf.
inline complex qfp_constant(int k, const PolyParams& p, const QContext& ctx, ShiftRule rule = ShiftRule::FloorHalf) {
  PrecisionScope ps(ctx.precision_digits());
  const real c = ctx.qpow(-neumann_shift(k, rule) * p.beta) * pochhammer_q2_inf(2 * (p.alpha + 1), ctx) /
                 pochhammer_q2_inf(2 * (p.alpha + p.beta + 1), ctx);
  return i_power(-k) * c;
}

/// Input window for transforming cJ_k (times |x|^{2 extra}) with d mu_alpha.
inline std::pair<int, int> neumann_transform_window(int k, const PolyParams& p, const Rational& extra,
                                                    const QContext& ctx, int out_hi) {
  const double decay = to_double(to_real(2 * p.alpha + 2 + 2 * extra)) + k;
  const int lo = -half_floor(k) - 14;
  const int hi = window_upper_for_decay(ctx.q_exact(), decay, ctx.precision_digits()) + std::max(0, -out_hi) + 2;
  return {lo, hi};
}

/**
 * Certifies both identities of the lemma for index k on t = +-q^j,
 * j in [t_lo, t_hi]: F(cJ_k) = c_k Q_k everywhere (so it vanishes for |t| > 1)
 * and F(|x|^{2beta} cJ_k) = d_k P_k on [-1,1].
 */
inline Report lemma_qFPQ_check(int k, const PolyParams& p, int t_lo, int t_hi, const QContext& ctx,
                               real tolerance = real(1e-20), ShiftRule rule = ShiftRule::FloorHalf) {
  p.require_sum();
  require(k >= 0, ErrorKind::DomainError, "lemma index k must be >= 0");
  require(t_lo <= t_hi, ErrorKind::InvalidParameter, "empty t window");
  PrecisionScope ps(ctx.precision_digits());
  const NeumannSystem sys(p.alpha + p.beta, std::max(k, 1), rule);
  Report rep;
  rep.suite_name = "lemma_qFPQ";
  rep.add_parameter("k", std::to_string(k));
  rep.add_parameter("alpha", p.alpha);
  rep.add_parameter("beta", p.beta);
  rep.add_parameter("q", ctx.q_exact());
  rep.add_parameter("shift_rule", to_string(rule));

  const OutputWindow out{t_lo, t_hi};
  auto [lo1, hi1] = neumann_transform_window(k, p, Rational(0), ctx, t_lo);
  auto [lo2, hi2] = neumann_transform_window(k, p, p.beta, ctx, t_lo);
  const LatticeFunction FQ = dunkl_transform_fn(
      [&](const LatticePoint& x) { return neumann_fn(sys, k, x, ctx); }, p.alpha, lo1, hi1, out, false, ctx);
  const LatticeFunction FP = dunkl_transform_fn(
      [&](const LatticePoint& x) { return ctx.qpow(2 * p.beta * x.k) * neumann_fn(sys, k, x, ctx); }, p.alpha, lo2,
      hi2, out, false, ctx);

  const complex cq = qfq_constant(k, p, ctx, rule), cp = qfp_constant(k, p, ctx, rule);
  rep.record("constant.qF-Q", format_real(cq.real()) + " " + format_real(cq.imag()) + "i");
  rep.record("constant.qF-P", format_real(cp.real()) + " " + format_real(cp.imag()) + "i");

  real scale_q = 0, scale_p = 0;
  for (const auto& t : FQ.points()) {
    scale_q = std::max(scale_q, abs_value(cq * biorthogonal_Q(k, t, p, ctx)));
    if (t.k >= 0) scale_p = std::max(scale_p, abs_value(cp * gegenbauer_gen(k, t, p, ctx)));
  }
  if (scale_q == 0) scale_q = 1;
  if (scale_p == 0) scale_p = 1;
  for (const auto& t : FQ.points()) {
    const std::string tag = (t.sign > 0 ? "p" : "n") + pad(t.k);
    const complex rq = cq * biorthogonal_Q(k, t, p, ctx);
    rep.add_close((t.k < 0 ? "qF-Q.vanish." : "qF-Q.") + tag, FQ.at(t), rq, tolerance, scale_q,
                  t.k < 0 ? "outside [-1,1]" : "");
    if (t.k >= 0) rep.add_close("qF-P." + tag, FP.at(t), cp * gegenbauer_gen(k, t, p, ctx), tolerance, scale_p);
  }
  rep.provenance = {ctx.precision_digits(), std::min(lo1, lo2), std::max(hi1, hi2), 0, 0};
  rep.finalize();
  return rep;
}

// ---------------------------------------------------------------------------
// The kernel expansion
// ---------------------------------------------------------------------------

/// i^n q^{-h(n) beta} (1 - Q^{a+b+n+1}) (1)_inf/(a+b+1)_inf: the factor multiplying cJ_n(x) C_n(t).
inline complex kernel_coefficient(int n, const PolyParams& p, const QContext& ctx, ShiftRule rule = ShiftRule::FloorHalf) {
  PrecisionScope ps(ctx.precision_digits());
  const Rational ab = p.alpha + p.beta;
  const real c = pochhammer_q2_inf(Rational(2), ctx) / pochhammer_q2_inf(2 * (ab + 1), ctx) *
                 ctx.qpow(-neumann_shift(n, rule) * p.beta) * (1 - ctx.qpow(2 * (ab + n + 1)));
  return i_power(n) * c;
}

/// Partial sum n <= N of the kernel expansion at lattice x and real t;
/// err_estimate is the magnitude of the last term.
inline SeriesValue kernel_expansion_partial(const LatticePoint& x, const real& t, const PolyParams& p, int N,
                                            const QContext& ctx, ShiftRule rule = ShiftRule::FloorHalf) {
  p.require_sum();
  require(N >= 0, ErrorKind::DomainError, "truncation order N must be >= 0");
  PrecisionScope ps(ctx.precision_digits());
  const NeumannSystem sys(p.alpha + p.beta, N, rule);
  SeriesValue s;
  s.value = complex(real(0), real(0));
  for (int n = 0; n <= N; ++n) {
    const complex term = kernel_coefficient(n, p, ctx, rule) * neumann_fn(sys, n, x, ctx) * gegenbauer_gen(n, t, p, ctx);
    s.value += term;
    s.err_estimate = abs_value(term);
  }
  s.terms_used = N + 1;
  return s;
}

struct ResidualSequence {
  /// Discrete L^2([-1,1], d mu_alpha) residual of the partial sum of order N, N = 0..N_max.
  std::vector<real> l2;
  /// max over the t lattice of the pointwise residual.
  std::vector<real> sup;
  /// L^2 norm of the reference function itself.
  real reference_norm = 0;
  int j_max = 0;
};

namespace detail {

/// Residuals of partial sums sum_{n<=N} term(n, t) against ref(t) over t = +-q^j, j = 0..j_max.
template <class Term, class Ref>
ResidualSequence residual_sequence(Term&& term, Ref&& ref, int N_max, const Rational& alpha, int j_max,
                                   const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  std::vector<LatticePoint> ts;
  for (int j = 0; j <= j_max; ++j) {
    ts.push_back({1, j});
    ts.push_back({-1, j});
  }
  std::vector<complex> partial(ts.size(), complex(real(0), real(0))), refs;
  for (const auto& t : ts) refs.push_back(complex(ref(t)));
  ResidualSequence rs;
  rs.j_max = j_max;
  rs.reference_norm = unit_l2_norm([&](const LatticePoint& t) { return refs[(t.sign > 0 ? 0 : 1) + 2 * t.k]; }, alpha,
                                   j_max, ctx);
  // residuals below the working-precision noise need no window certificate
  const real c = pochhammer_q2_inf(2 * alpha + 2, ctx) / pochhammer_q2_inf(Rational(2), ctx) / 2;
  const real floor = pow10(2 * (10 - ctx.precision_digits())) * rs.reference_norm * rs.reference_norm / c;
  for (int n = 0; n <= N_max; ++n) {
    real sup = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      partial[i] += complex(term(n, ts[i]));
      sup = std::max(sup, abs_value(refs[i] - partial[i]));
    }
    rs.sup.push_back(sup);
    rs.l2.push_back(unit_l2_norm(
        [&](const LatticePoint& t) {
          const std::size_t i = (t.sign > 0 ? 0 : 1) + 2 * static_cast<std::size_t>(t.k);
          return refs[i] - partial[i];
        },
        alpha, j_max, ctx, {}, floor));
  }
  return rs;
}

}  // namespace detail

/// L^2 and sup residuals of the kernel expansion at x against E_alpha(ixt), N = 0..N_max.
inline ResidualSequence kernel_expansion_residuals(const LatticePoint& x, const PolyParams& p, int N_max,
                                                   const QContext& ctx, ShiftRule rule = ShiftRule::FloorHalf,
                                                   int j_max = 60) {
  p.require_sum();
  require(!x.is_zero(), ErrorKind::ZeroArgument, "expansion point x must be nonzero");
  PrecisionScope ps(ctx.precision_digits());
  const NeumannSystem sys(p.alpha + p.beta, N_max, rule);
  const GegenbauerTable C(p, N_max, 0, j_max, ctx);
  std::vector<complex> coef;
  for (int n = 0; n <= N_max; ++n) coef.push_back(kernel_coefficient(n, p, ctx, rule) * neumann_fn(sys, n, x, ctx));
  const KernelParams kp(p.alpha);
  return detail::residual_sequence([&](int n, const LatticePoint& t) { return coef[static_cast<std::size_t>(n)] * C(n, t); },
                                   [&](const LatticePoint& t) { return dunkl_kernel_lattice(kp, x.times(t), ctx).value; },
                                   N_max, p.alpha, j_max, ctx);
}

// ---------------------------------------------------------------------------
// The plane-wave expansion (alpha = -1/2, beta -> beta - 1/2)
// ---------------------------------------------------------------------------

/**
 * Coefficient of x^{-beta} J_{beta+n}(x q^h;Q) in the plane-wave expansion,
 * folded with the normalization of C_n^beta so that beta = 0 stays finite:
 *   (Q;Q)_inf (1-Q^{beta+n}) / (Q^beta;Q)_inf * (Q^beta;Q)_r/(q;Q)_r
 *     = (Q;Q)_inf (1-Q^{beta+n}) / ((Q^{beta+r};Q)_inf (q;Q)_r),
 * with r = ceil(n/2); for n = 0 this is (Q;Q)_inf/(Q^{beta+1};Q)_inf.
 * The remaining factor of C_n^beta is (-1)^m p_m(t^2) or (-1)^m t p_m(t^2).
 */
inline real plane_wave_coefficient(int n, const Rational& beta, const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  const int r = half_ceil(n);
  const real top = pochhammer_q2_inf(Rational(2), ctx);
  if (n == 0) return top / pochhammer_q2_inf(2 * beta + 2, ctx);
  return top * (1 - ctx.qpow(2 * beta + 2 * n)) / (pochhammer_q2_inf(2 * beta + 2 * r, ctx) * pochhammer_q2(Rational(1), r, ctx));
}

/// C_n^beta(t;Q) without its (Q^beta;Q)_r/(q;Q)_r normalization.
inline real plane_wave_poly(int n, const real& t, const Rational& beta, const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  const int m = n / 2;
  const real sign = m % 2 == 0 ? real(1) : real(-1);
  const Rational b = beta - Rational(1, 2);
  if (n % 2 == 0) return sign * little_q_jacobi(m, real(t * t), PolyParams(Rational(-1, 2), b), ctx.q2(), true, ctx);
  return sign * t * little_q_jacobi(m, real(t * t), PolyParams(Rational(1, 2), b), ctx.q2(), true, ctx);
}

/// x^{-beta} J_{beta+n}(x q^h;Q) at lattice x, with the parity of n for x < 0.
inline real plane_wave_bessel(int n, const LatticePoint& x, const Rational& beta, const QContext& ctx,
                              ShiftRule rule) {
  PrecisionScope ps(ctx.precision_digits());
  require(!x.is_zero(), ErrorKind::ZeroArgument, "plane-wave expansion point x must be nonzero");
  const int h = neumann_shift(n, rule);
  const Rational nu = beta + n;
  real v = ctx.qpow(Rational(static_cast<std::int64_t>(x.k) * n) + nu * h) *
           bessel_ratio_lattice(nu, x.k + h, ctx).value;
  return (x.sign < 0 && n % 2 == 1) ? real(-v) : v;
}

inline void check_plane_wave_beta(const Rational& beta) {
  require(beta > Rational(-1, 2), ErrorKind::InvalidParameter,
          "plane-wave expansion needs beta > -1/2, got " + to_string(beta));
}

/// i^n q^{-h(beta-1/2)} times plane_wave_coefficient times x^{-beta}J_{beta+n}(xq^h).
inline complex plane_wave_x_factor(int n, const LatticePoint& x, const Rational& beta, const QContext& ctx,
                                   ShiftRule rule) {
  PrecisionScope ps(ctx.precision_digits());
  return i_power(n) * (ctx.qpow(-neumann_shift(n, rule) * (beta - Rational(1, 2))) *
                       plane_wave_coefficient(n, beta, ctx) * plane_wave_bessel(n, x, beta, ctx, rule));
}

/// Partial sum n <= N of the plane-wave expansion of e(ixt;Q).
inline SeriesValue plane_wave_partial(const LatticePoint& x, const real& t, const Rational& beta, int N,
                                      const QContext& ctx, ShiftRule rule = ShiftRule::FloorHalf) {
  check_plane_wave_beta(beta);
  require(N >= 0, ErrorKind::DomainError, "truncation order N must be >= 0");
  PrecisionScope ps(ctx.precision_digits());
  SeriesValue s;
  s.value = complex(real(0), real(0));
  for (int n = 0; n <= N; ++n) {
    const complex term = plane_wave_x_factor(n, x, beta, ctx, rule) * plane_wave_poly(n, t, beta, ctx);
    s.value += term;
    s.err_estimate = abs_value(term);
  }
  s.terms_used = N + 1;
  return s;
}

/// Residuals of the plane-wave expansion at x against e(ixt;Q) on [-1,1] with d mu_{-1/2}.
inline ResidualSequence plane_wave_residuals(const LatticePoint& x, const Rational& beta, int N_max,
                                             const QContext& ctx, ShiftRule rule = ShiftRule::FloorHalf,
                                             int j_max = 60) {
  check_plane_wave_beta(beta);
  PrecisionScope ps(ctx.precision_digits());
  std::vector<complex> coef;
  for (int n = 0; n <= N_max; ++n) coef.push_back(plane_wave_x_factor(n, x, beta, ctx, rule));
  std::vector<std::vector<real>> poly(static_cast<std::size_t>(N_max + 1));
  for (int n = 0; n <= N_max; ++n)
    for (int j = 0; j <= j_max; ++j)
      poly[static_cast<std::size_t>(n)].push_back(plane_wave_poly(n, ctx.qpow(static_cast<long long>(j)), beta, ctx));
  const real xv = x.value(ctx);
  return detail::residual_sequence(
      [&](int n, const LatticePoint& t) {
        real v = poly[static_cast<std::size_t>(n)][static_cast<std::size_t>(t.k)];
        if (t.sign < 0 && n % 2 == 1) v = -v;
        return coef[static_cast<std::size_t>(n)] * v;
      },
      [&](const LatticePoint& t) { return rubin_exp(complex(real(0), real(xv * t.value(ctx))), ctx.q(), ctx).value; },
      N_max, Rational(-1, 2), j_max, ctx);
}

// ---------------------------------------------------------------------------
// Expansion of the q-Hankel kernel J_alpha(xt;Q)/(xt)^alpha
// ---------------------------------------------------------------------------

/// (a+1)_inf/(a+b+1)_inf q^{-n beta} (1-Q^{a+b+2n+1}) (Q^{a+b+1};Q)_n/(Q^{a+1};Q)_n.
inline real hankel_kernel_coefficient(int n, const PolyParams& p, const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  const Rational ab = p.alpha + p.beta;
  return pochhammer_q2_inf(2 * (p.alpha + 1), ctx) / pochhammer_q2_inf(2 * (ab + 1), ctx) *
         ctx.qpow(-n * p.beta) * (1 - ctx.qpow(2 * ab + 4 * n + 2)) *
         detail::q2_ratio(2 * (ab + 1), 2 * (p.alpha + 1), n, ctx);
}

/// Partial sum n <= N of the expansion of J_alpha(xt;Q)/(xt)^alpha in cJ_{a+b,2n}(x) p_n(t^2).
inline SeriesValue hankel_kernel_partial(const LatticePoint& x, const real& t, const PolyParams& p, int N,
                                         const QContext& ctx) {
  p.require_sum();
  require(N >= 0, ErrorKind::DomainError, "truncation order N must be >= 0");
  PrecisionScope ps(ctx.precision_digits());
  const NeumannSystem sys(p.alpha + p.beta, 2 * N);
  SeriesValue s;
  s.value = complex(real(0), real(0));
  for (int n = 0; n <= N; ++n) {
    const real term = hankel_kernel_coefficient(n, p, ctx) * neumann_fn(sys, 2 * n, x, ctx) *
                      little_q_jacobi(n, real(t * t), p, ctx.q2(), true, ctx);
    s.value += complex(term, real(0));
    s.err_estimate = abs_value(term);
  }
  s.terms_used = N + 1;
  return s;
}

/// J_alpha(xt;Q)/(xt)^alpha at a lattice product xt = s q^k: R_alpha(k).
inline real hankel_kernel_reference(const LatticePoint& xt, const Rational& alpha, const QContext& ctx) {
  if (xt.is_zero()) {
    PrecisionScope ps(ctx.precision_digits());
    return pochhammer_q2_inf(2 * alpha + 2, ctx) / pochhammer_q2_inf(Rational(2), ctx);
  }
  return bessel_ratio_lattice(alpha, xt.k, ctx).value;
}

// ---------------------------------------------------------------------------
// Paley-Wiener synthesis and reconstruction
// ---------------------------------------------------------------------------

struct PWSpec {
  /// Samples on the [-1,1] lattice: signed, k_min >= 0.
  LatticeFunction u;
  Rational alpha;

  PWSpec(LatticeFunction samples, Rational a) : u(std::move(samples)), alpha(a) {
    require(alpha > -1, ErrorKind::InvalidParameter, "alpha must satisfy alpha > -1");
    require(u.is_signed() && u.k_min() >= 0, ErrorKind::DomainError,
            "Paley-Wiener data u must live on the [-1,1] lattice");
  }
};

struct ExpansionCoefficients {
  Rational alpha;
  Rational beta;
  Rational q;
  std::vector<complex> coeffs;
  int N = 0;
};

/// Window needed to carry a Paley-Wiener function with data up to q^{u_k_max}
/// through d mu_a integrals (a = alpha+beta for the reconstruction, a = alpha
/// for pairings with T_n).
inline OutputWindow pw_window(const Rational& a, int u_k_max, const QContext& ctx) {
  const double decay = to_double(to_real(2 * a + 2));
  return {-u_k_max - 14, window_upper_for_decay(ctx.q_exact(), decay, ctx.precision_digits()) + 2};
}

/// f(t) = int_{-1}^{1} u(x) E_alpha(ixt) d mu_alpha(x) on the window `out`.
inline LatticeFunction pw_synthesize(const PWSpec& spec, OutputWindow out, const QContext& ctx) {
  return dunkl_transform_fn([&](const LatticePoint& x) { return spec.u.at(x); }, spec.alpha, spec.u.k_min(),
                            spec.u.k_max(), out, true, ctx, real(1), true);
}

/// u with `points` nonzero entries at random lattice points of [-1,1] (j <= j_max), standard normal values.
inline PWSpec random_pw_spec(const Rational& alpha, int points, int j_max, std::uint64_t seed, const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_k(0, j_max), pick_s(0, 1);
  std::normal_distribution<double> val(0.0, 1.0);
  LatticeFunction u(0, j_max, true);
  for (int i = 0; i < points; ++i) {
    const LatticePoint pt{pick_s(rng) == 0 ? 1 : -1, pick_k(rng)};
    u.set(pt, complex(real(val(rng)), real(val(rng))));
  }
  return PWSpec(std::move(u), alpha);
}

/**
 * a_n = (1)_inf/(a+b+1)_inf int_R f cJ_n d mu_{alpha+beta}, n = 0..N, and the
 * reconstruction sum_n a_n (1 - Q^{a+b+n+1}) cJ_n on `recon`.
 */
inline std::pair<ExpansionCoefficients, LatticeFunction> neumann_reconstruct(const LatticeFunction& f,
                                                                               const PolyParams& p, int N,
                                                                               OutputWindow recon,
                                                                               const QContext& ctx,
                                                                               ShiftRule rule = ShiftRule::FloorHalf) {
  p.require_sum();
  require(f.is_signed(), ErrorKind::InvalidParameter, "reconstruction needs a function on the signed lattice");
  require(N >= 0, ErrorKind::DomainError, "truncation order N must be >= 0");
  PrecisionScope ps(ctx.precision_digits());
  const Rational ab = p.alpha + p.beta;
  const NeumannSystem sys(ab, N, rule);
  const NeumannTable J(sys, N, std::min(f.k_min(), recon.lo), std::max(f.k_max(), recon.hi), ctx);
  ExpansionCoefficients ec{p.alpha, p.beta, ctx.q_exact(), {}, N};
  // (1)_inf/(a+b+1)_inf times the d mu_{a+b} constant leaves 1/2 sum_{s,k} q^{k(2a+2b+2)}
  for (int n = 0; n <= N; ++n) {
    complex a(real(0), real(0));
    real mass = 0, edge_lo = 0, edge_hi = 0;
    for (int k = f.k_min(); k <= f.k_max(); ++k) {
      real edge = 0;
      for (int s : {1, -1}) {
        const LatticePoint x{s, k};
        const complex v = f.at(x) * (lattice_mass(ab, k, ctx) * J(n, x));
        a += v;
        edge += abs_value(v);
      }
      mass += edge;
      if (k == f.k_min()) edge_lo = edge;
      if (k == f.k_max()) edge_hi = edge;
    }
    if (mass > 0) detail::check_edges(edge_lo, edge_hi, mass, ctx.tail_tol(), f.k_min(), f.k_max());
    ec.coeffs.push_back(a / real(2));
  }
  LatticeFunction g(recon.lo, recon.hi, true);
  for (const auto& x : g.points()) {
    complex v(real(0), real(0));
    for (int n = 0; n <= N; ++n) v += ec.coeffs[static_cast<std::size_t>(n)] * ((1 - ctx.qpow(2 * (ab + n + 1))) * J(n, x));
    g.set(x, v);
  }
  return {ec, g};
}

// ---------------------------------------------------------------------------
// The abstract biorthogonal construction instantiated for F_{alpha,q}
// ---------------------------------------------------------------------------

/**
 * With K(x,t) = E_alpha(ixt), P_n = C_n and Q_n the biorthogonal partner,
 *   S_n = F^{-1}(chi Q_n),  T_n = conj(F(chi P_n)),
 *   K(x,t) = sum_n P_n(t) S_n(x),  f = sum_n <f, T_n> S_n on PW.
 * The lemma gives S_n = sigma_n cJ_n with sigma_n = 1/c_n (c_n = qfq_constant).
 */
inline complex sn_constant(int n, const PolyParams& p, const QContext& ctx, ShiftRule rule = ShiftRule::FloorHalf) {
  return complex(real(1), real(0)) / qfq_constant(n, p, ctx, rule);
}

/// S_n = F^{-1}(chi_{[-1,1]} Q_n) by direct transform on the window `out`.
inline LatticeFunction sn_direct(int n, const PolyParams& p, OutputWindow out, const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  const int j_max = unit_window(p.alpha, ctx) + 2;
  const real scale = gegenbauer_norm(n, p, ctx);
  const GegenbauerTable C(p, n, 0, j_max, ctx);
  std::vector<real> w;
  for (int j = 0; j <= j_max; ++j) w.push_back(gegenbauer_weight(LatticePoint{1, j}, p.beta, ctx));
  return dunkl_transform_fn(
      [&](const LatticePoint& t) { return w[static_cast<std::size_t>(t.k)] * C(n, t) / scale; }, p.alpha, 0, j_max,
      out, true, ctx, {}, true);
}

/// T_n = conj(F(chi_{[-1,1]} P_n)) by direct transform on the window `out`.
inline LatticeFunction tn_direct(int n, const PolyParams& p, OutputWindow out, const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  const int j_max = unit_window(p.alpha, ctx) + 2;
  const GegenbauerTable C(p, n, 0, j_max, ctx);
  LatticeFunction F = dunkl_transform_fn([&](const LatticePoint& t) { return C(n, t); }, p.alpha, 0, j_max, out, false,
                                         ctx, {}, true);
  for (const auto& x : F.points()) F.set(x, std::conj(F.at(x)));
  return F;
}

/// <f, T_n> = int_R f conj(T_n) d mu_alpha over the common window of f and T_n.
inline complex pairing_with_tn(const LatticeFunction& f, const LatticeFunction& Tn, const Rational& alpha,
                               const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  const int lo = std::max(f.k_min(), Tn.k_min()), hi = std::min(f.k_max(), Tn.k_max());
  require(lo <= hi, ErrorKind::OutOfWindow, "f and T_n share no lattice points");
  const real c = pochhammer_q2_inf(2 * alpha + 2, ctx) / pochhammer_q2_inf(Rational(2), ctx) / 2;
  complex s(real(0), real(0));
  real mass = 0, edge_lo = 0, edge_hi = 0;
  for (int k = lo; k <= hi; ++k) {
    real e = 0;
    for (int sg : {1, -1}) {
      const LatticePoint x{sg, k};
      const complex v = f.at(x) * std::conj(Tn.at(x)) * lattice_mass(alpha, k, ctx);
      s += v;
      e += abs_value(v);
    }
    mass += e;
    if (k == lo) edge_lo = e;
    if (k == hi) edge_hi = e;
  }
  if (mass > 0) detail::check_edges(edge_lo, edge_hi, mass, ctx.tail_tol(), lo, hi);
  return s * c;
}

}  // namespace qplane
