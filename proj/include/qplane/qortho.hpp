#pragma once

/**
 * @file qortho.hpp
 * @brief Little q-Jacobi polynomials, generalized little q-Gegenbauer
 * polynomials, their norms and Gram-matrix orthogonality checks.
 *
 * Conventions (Q = q^2 throughout the Gegenbauer family):
 *
 *   p_n(x; q^a, q^b; q)    = 2phi1(q^{-n}, q^{a+b+n+1}; q^{a+1} | q; qx)
 *   p_n^{(a,b)}(x; q)      = q^{-n(a+1)/2} (q^{a+1};q)_n/(q;q)_n p_n(x; q^a, q^b; q)
 *   C_{2m}(t)   = (-1)^m (Q^{a+b+1};Q)_m/(Q^{a+1};Q)_m p_m^{(a,b)}(t^2; Q)
 *   C_{2m+1}(t) = (-1)^m (Q^{a+b+1};Q)_{m+1}/(Q^{a+1};Q)_{m+1} t p_m^{(a+1,b)}(t^2; Q)
 *
 * with C_n = C_n^{(b+1/2, a+1/2)}. They are orthogonal on [-1,1] against
 * w(t) d mu_{q,a}(t), w(t) = (t^2 Q;Q)_inf/(t^2 Q^{b+1};Q)_inf.
 */

#include <vector>

#include "qplane/measure.hpp"

namespace qplane {

struct PolyParams {
  Rational alpha;
  Rational beta;

  PolyParams(Rational a, Rational b) : alpha(a), beta(b) {
    require(alpha > -1, ErrorKind::InvalidParameter, "alpha must satisfy alpha > -1, got " + to_string(alpha));
    require(beta > -1, ErrorKind::InvalidParameter, "beta must satisfy beta > -1, got " + to_string(beta));
  }
  void require_sum() const {
    require(alpha + beta > -1, ErrorKind::InvalidParameter,
            "alpha + beta must exceed -1, got " + to_string(alpha + beta));
  }
};

struct GramReport {
  int size = 0;
  /// max |G_nm| / sqrt(G_nn G_mm) over n != m.
  real offdiag_max = 0;
  /// max |G_nn - h_n| / |h_n|.
  real diag_rel_err_max = 0;
  std::vector<std::vector<real>> gram;
  /// Per-entry residual in the sense of offdiag_max / diag_rel_err_max.
  std::vector<std::vector<real>> entries;
  std::vector<real> expected_diagonal;
};

/// Fills residuals and maxima once gram and expected_diagonal are set.
inline void finish_gram(GramReport& g) {
  const int n = g.size;
  g.entries.assign(static_cast<std::size_t>(n), std::vector<real>(static_cast<std::size_t>(n), real(0)));
  g.offdiag_max = 0;
  g.diag_rel_err_max = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
      real r;
      if (i == j) {
        r = abs_value(g.gram[ui][ui] - g.expected_diagonal[ui]) / abs_value(g.expected_diagonal[ui]);
        if (r > g.diag_rel_err_max) g.diag_rel_err_max = r;
      } else {
        r = abs_value(g.gram[ui][uj]) / boost::multiprecision::sqrt(abs_value(g.gram[ui][ui] * g.gram[uj][uj]));
        if (r > g.offdiag_max) g.offdiag_max = r;
      }
      g.entries[ui][uj] = r;
    }
}

/**
 * Raw or normalized little q-Jacobi polynomial in base `base`, summed as the
 * terminating series term by term. Terms reach ~ base^{-n(n-1)/2} before
 * cancelling, so the sum runs with that many extra digits.
 */
inline real little_q_jacobi(int n, const real& x_in, const PolyParams& p, const real& base_in, bool normalized,
                            const QContext& ctx) {
  require(n >= 0, ErrorKind::DomainError, "polynomial degree must be >= 0");
  require(base_in > 0 && base_in < 1, ErrorKind::DomainError, "little q-Jacobi base must lie in (0,1)");
  const double lb = -std::log(to_double(base_in));
  const int guard = static_cast<int>(std::ceil(n * (n - 1) / 2.0 * lb / std::log(10.0))) + 10;
  PrecisionScope outer(ctx.precision_digits());
  real result;
  {
    PrecisionScope ps(ctx.precision_digits() + guard);
    const real x = promote(x_in);
    const real b = promote(base_in);
    const real a1 = rpow(b, p.alpha + 1);
    const real ab = rpow(b, p.alpha + p.beta + n + 1);
    const real b_minus_n = boost::multiprecision::pow(b, real(-n));
    real term = 1, sum = 1, bk = 1;  // bk = b^k
    for (int k = 0; k < n; ++k) {
      term *= (1 - b_minus_n * bk) * (1 - ab * bk) / ((1 - a1 * bk) * (1 - b * bk)) * b * x;
      sum += term;
      bk *= b;
    }
    if (normalized) sum *= rpow(b, -Rational(n) * (p.alpha + 1) / 2) * qpochhammer(a1, b, n) / qpochhammer(b, b, n);
    result = sum;
  }
  real out = result;
  out.precision(ctx.precision_digits());
  return out;
}

namespace detail {

/// (Q^{e};Q)_m / (Q^{f};Q)_m with Q = q^2 and q^e, q^f taken exactly.
inline real q2_ratio(const Rational& e, const Rational& f, int m, const QContext& ctx) {
  return pochhammer_q2(e, m, ctx) / pochhammer_q2(f, m, ctx);
}

}  // namespace detail

/// C_n^{(beta+1/2, alpha+1/2)}(t; q^2).
inline real gegenbauer_gen(int n, const real& t_in, const PolyParams& p, const QContext& ctx) {
  require(n >= 0, ErrorKind::DomainError, "polynomial degree must be >= 0");
  PrecisionScope ps(ctx.precision_digits());
  const real t = promote(t_in);
  const real Q = ctx.q2();
  const int m = n / 2;
  const real sign = m % 2 == 0 ? real(1) : real(-1);
  if (n % 2 == 0)
    return sign * detail::q2_ratio(2 * (p.alpha + p.beta + 1), 2 * (p.alpha + 1), m, ctx) *
           little_q_jacobi(m, real(t * t), p, Q, true, ctx);
  return sign * detail::q2_ratio(2 * (p.alpha + p.beta + 1), 2 * (p.alpha + 1), m + 1, ctx) * t *
         little_q_jacobi(m, real(t * t), PolyParams(p.alpha + 1, p.beta), Q, true, ctx);
}

inline real gegenbauer_gen(int n, const LatticePoint& t, const PolyParams& p, const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  return gegenbauer_gen(n, t.value(ctx), p, ctx);
}

/// C_n^beta(t; q^2) = C_n^{(beta, 0)}(t; q^2), i.e. (alpha, beta) -> (-1/2, beta - 1/2).
inline real little_gegenbauer(int n, const real& t, const Rational& beta, const QContext& ctx) {
  return gegenbauer_gen(n, t, PolyParams(Rational(-1, 2), beta - Rational(1, 2)), ctx);
}

/// w(t) = (t^2 q^2;q^2)_inf/(t^2 q^{2beta+2};q^2)_inf for real t.
inline real gegenbauer_weight(const real& t_in, const Rational& beta, const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  const real t = promote(t_in);
  const real Q = ctx.q2();
  const real t2 = t * t;
  const real num = qpochhammer_inf(real(t2 * Q), Q, ctx).value;
  if (num == 0) return num;
  return num / qpochhammer_inf(real(t2 * ctx.qpow(2 * beta + 2)), Q, ctx).value;
}

/// w(+-q^k) = (q^{2k+2};q^2)_inf/(q^{2k+2beta+2};q^2)_inf, exactly 0 for k <= -1.
inline real gegenbauer_weight(const LatticePoint& t, const Rational& beta, const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  if (t.is_zero()) return pochhammer_q2_inf(2, ctx) / pochhammer_q2_inf(2 * beta + 2, ctx);
  const real num = pochhammer_q2_inf(Rational(2 * t.k + 2), ctx);
  if (num == 0) return num;
  return num / pochhammer_q2_inf(2 * beta + 2 + 2 * t.k, ctx);
}

/// h_n^{(beta,alpha)}: the squared norm of C_n against w d mu_{q,alpha} on [-1,1].
inline real gegenbauer_norm(int n, const PolyParams& p, const QContext& ctx) {
  require(n >= 0, ErrorKind::DomainError, "polynomial degree must be >= 0");
  p.require_sum();
  PrecisionScope ps(ctx.precision_digits());
  const int m = n / 2;
  const Rational ab1 = 2 * (p.alpha + p.beta + 1);
  const int r = n % 2 == 0 ? m : m + 1;
  const real lead = 1 / (1 - ctx.qpow(ab1 + 2 * n));
  const real poch = detail::q2_ratio(ab1, 2 * (p.alpha + 1), r, ctx);
  const real inf = pochhammer_q2_inf(Rational(2 * m + 2), ctx) * pochhammer_q2_inf(ab1, ctx) /
                   (pochhammer_q2_inf(2 * p.beta + 2 * m + 2, ctx) * pochhammer_q2_inf(Rational(2), ctx));
  return lead * poch * inf;
}

/// Extra digits for lattice sums of products of polynomials up to degree N in
/// x^2 (base q^2): values near x = 1 reach q^{-N(N-1)} while the sums stay O(1).
inline int poly_guard_digits(int N, const QContext& ctx) {
  const double lq = -std::log(static_cast<double>(ctx.q_exact().numerator()) /
                              static_cast<double>(ctx.q_exact().denominator()));
  return static_cast<int>(std::ceil(N * (N - 1) * lq / std::log(10.0))) + 10;
}

/// Lattice index j_max such that [-1,1] sums of a |x|^{2alpha+1}-weighted bounded
/// integrand are converged to the working precision.
inline int unit_window(const Rational& alpha, const QContext& ctx, double extra_decay = 0.0) {
  const double decay = 2.0 * (static_cast<double>(alpha.numerator()) / static_cast<double>(alpha.denominator())) +
                       2.0 + extra_decay;
  return window_upper_for_decay(ctx.q_exact(), decay, ctx.precision_digits());
}

/// Direct [-1,1] q-integral of C_n C_m w d mu_{q,alpha}.
inline real gegenbauer_inner(int n, int m, const PolyParams& p, const QContext& base_ctx) {
  const QContext ctx =
      base_ctx.with_precision(base_ctx.precision_digits() + poly_guard_digits(std::max(n, m) / 2 + 1, base_ctx));
  PrecisionScope ps(ctx.precision_digits());
  const QContext wctx = ctx.with_window(-1, unit_window(p.alpha, ctx));
  return mu_integral(
             [&](const LatticePoint& t) {
               return gegenbauer_gen(n, t, p, ctx) * gegenbauer_gen(m, t, p, ctx) *
                      gegenbauer_weight(t, p.beta, ctx);
             },
             p.alpha, LatticeDomain::UnitSymmetric, wctx)
      .value;
}

/// Closed-form diagonal of the Jacobi orthogonality in base q^2:
/// (1-q)/(1-q^{2a+2b+4n+2}) (q^{2n+2}, q^{2a+2b+2n+2};q^2)_inf/(q^{2a+2n+2}, q^{2b+2n+2};q^2)_inf.
inline real jacobi_norm(int n, const PolyParams& p, const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  const Rational ab = 2 * (p.alpha + p.beta);
  return (1 - ctx.q()) / (1 - ctx.qpow(ab + 4 * n + 2)) * pochhammer_q2_inf(Rational(2 * n + 2), ctx) *
         pochhammer_q2_inf(ab + 2 * n + 2, ctx) /
         (pochhammer_q2_inf(2 * p.alpha + 2 * n + 2, ctx) * pochhammer_q2_inf(2 * p.beta + 2 * n + 2, ctx));
}

/**
 * Gram matrix of p_n^{(a,b)}(x^2; q^2), n = 0..N, under
 * (q^2 x^2;q^2)_inf/(q^{2b+2} x^2;q^2)_inf x^{2a+1} d_q x on (0,1].
 * The weight is propagated along the lattice by
 * w(q^{j+1}) = w(q^j) (1 - q^{2b+2+2j})/(1 - q^{2j+2}).
 */
inline GramReport jacobi_gram(const PolyParams& p, int N, const QContext& base_ctx) {
  require(N >= 0, ErrorKind::DomainError, "Gram order must be >= 0");
  p.require_sum();
  const QContext ctx = base_ctx.with_precision(base_ctx.precision_digits() + poly_guard_digits(N, base_ctx));
  PrecisionScope ps(ctx.precision_digits());
  const int j_max = unit_window(p.alpha, ctx);
  const real q = ctx.q(), Q = ctx.q2();
  const real Qb1 = ctx.qpow(2 * p.beta + 2);
  const auto size = static_cast<std::size_t>(N + 1);

  GramReport g;
  g.size = N + 1;
  g.gram.assign(size, std::vector<real>(size, real(0)));
  real w = gegenbauer_weight(LatticePoint{1, 0}, p.beta, ctx);
  real Qj = 1;  // Q^j
  std::vector<real> vals(size);
  for (int j = 0; j <= j_max; ++j) {
    const real mass = (1 - q) * ctx.qpow((2 * p.alpha + 2) * j) * w;
    for (std::size_t n = 0; n < size; ++n) vals[n] = little_q_jacobi(static_cast<int>(n), Qj, p, Q, true, ctx);
    for (std::size_t n = 0; n < size; ++n)
      for (std::size_t m = n; m < size; ++m) g.gram[n][m] += mass * vals[n] * vals[m];
    w *= (1 - Qb1 * Qj) / (1 - Q * Qj);
    Qj *= Q;
  }
  for (std::size_t n = 0; n < size; ++n)
    for (std::size_t m = 0; m < n; ++m) g.gram[n][m] = g.gram[m][n];
  for (int n = 0; n <= N; ++n) g.expected_diagonal.push_back(jacobi_norm(n, p, ctx));
  finish_gram(g);
  return g;
}

/// Gram matrix of C_0..C_N against w d mu_{q,alpha}, with h_n on the diagonal.
inline GramReport gegenbauer_gram(const PolyParams& p, int N, const QContext& base_ctx) {
  p.require_sum();
  const QContext ctx = base_ctx.with_precision(base_ctx.precision_digits() + poly_guard_digits(N / 2 + 1, base_ctx));
  PrecisionScope ps(ctx.precision_digits());
  const int j_max = unit_window(p.alpha, ctx);
  const auto size = static_cast<std::size_t>(N + 1);
  std::vector<std::vector<real>> vals(size);
  for (std::size_t n = 0; n < size; ++n)
    for (int j = 0; j <= j_max; ++j) vals[n].push_back(gegenbauer_gen(static_cast<int>(n), LatticePoint{1, j}, p, ctx));
  const real c = MeasureSpec(MeasureKind::DunklMu, p.alpha).constant(ctx) * (1 - ctx.q());
  GramReport g;
  g.size = N + 1;
  g.gram.assign(size, std::vector<real>(size, real(0)));
  for (int j = 0; j <= j_max; ++j) {
    const real mass = c * ctx.qpow((2 * p.alpha + 2) * j) * gegenbauer_weight(LatticePoint{1, j}, p.beta, ctx);
    const auto uj = static_cast<std::size_t>(j);
    for (std::size_t n = 0; n < size; ++n)
      for (std::size_t m = n; m < size; ++m) {
        // C_n(-t) C_m(-t) = (-1)^{n+m} C_n(t) C_m(t)
        if ((n + m) % 2 == 0) g.gram[n][m] += 2 * mass * vals[n][uj] * vals[m][uj];
      }
  }
  for (std::size_t n = 0; n < size; ++n)
    for (std::size_t m = 0; m < n; ++m) g.gram[n][m] = g.gram[m][n];
  for (int n = 0; n <= N; ++n) g.expected_diagonal.push_back(gegenbauer_norm(n, p, ctx));
  finish_gram(g);
  return g;
}

/// Classical Jacobi polynomial P_n^{(a,b)}(y) by the three-term recurrence.
inline real classical_jacobi_oracle(int n, const real& y, const real& a, const real& b) {
  require(n >= 0, ErrorKind::DomainError, "polynomial degree must be >= 0");
  if (n == 0) return real(1);
  real p0 = 1;
  real p1 = (a + 1) + (a + b + 2) * (y - 1) / 2;
  for (int k = 2; k <= n; ++k) {
    const real s = 2 * k + a + b;
    const real c1 = 2 * k * (k + a + b) * (s - 2);
    const real c2 = (s - 1) * (s * (s - 2) * y + a * a - b * b);
    const real c3 = 2 * (k + a - 1) * (k + b - 1) * s;
    real p2 = (c2 * p1 - c3 * p0) / c1;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

}  // namespace qplane
