#pragma once

/**
 * @file qbessel.hpp
 * @brief Third Jackson (Hahn-Exton) q-Bessel function, q-trigonometric
 * functions, Rubin's q-exponential and the Dunkl-type kernel E_alpha.
 *
 * Two evaluation paths exist for J_nu(x; b):
 *
 *  - general x: the prefactored 1phi1(0; b^{nu+1} | b; b x^2), summed at a
 *    working precision raised by kappa^2/2 * log10(1/b) digits when
 *    x^2 = b^{-kappa} > 1: terms peak near b^{-kappa^2/2} while the sum can
 *    be as small as b^{kappa^2/2} (near the lattice points), so kappa^2
 *    log10(1/b) guard digits absorb the cancellation;
 *  - lattice x = q^k with base q^2: the cancellation-free expansion
 *        J_nu(q^k; q^2) / q^{k nu}
 *          = sum_{n >= max(0,-k)} (-1)^n q^{n(n+1) + 2 n nu}
 *                / ((q^2;q^2)_n (q^2;q^2)_{n+k}),
 *    obtained from (b;Q)_inf 1phi1(0;b|Q;z) = (z;Q)_inf 1phi1(0;z|Q;b).
 *    Every term after the first is smaller by at least q^{2(n+1+nu)}, so the
 *    sum is accurate at the base precision for any k.
 */

#include <unordered_map>
#include <utility>

#include "qplane/qcore.hpp"

namespace qplane {

struct BesselOrder {
  Rational nu;
  explicit BesselOrder(Rational v) : nu(v) {
    require(nu > -1, ErrorKind::InvalidParameter, "Bessel order must satisfy nu > -1, got " + to_string(nu));
  }
};

struct KernelParams {
  Rational alpha;
  explicit KernelParams(Rational a) : alpha(a) {
    require(alpha > -1, ErrorKind::InvalidParameter, "kernel parameter must satisfy alpha > -1, got " + to_string(alpha));
  }
};

namespace detail {

/// Extra digits needed to sum 1phi1(0; c | b; b |x|^2) without losing accuracy.
inline int phi11_guard_digits(const real& x_abs2, const real& base) {
  if (x_abs2 <= 1) return 0;
  double lb = -to_double(boost::multiprecision::log(base));
  double kappa = to_double(boost::multiprecision::log(x_abs2)) / lb;
  return static_cast<int>(std::ceil(kappa * kappa * lb / std::log(10.0))) + 10;
}

template <class V>
Series<V> phi11_zero(const real& c, const real& base, const V& z, const QContext& ctx, int guard) {
  QContext wide = ctx.with_precision(ctx.precision_digits() + guard);
  PrecisionScope ps(wide.precision_digits());
  V zero = V(real(0));
  V cc = promote(V(c));
  return basic_hypergeometric<V>(std::span<const V>(&zero, 1), std::span<const V>(&cc, 1), base, z, wide);
}

/// (c;b)_inf/(b;b)_inf together with its relative truncation error.
inline std::pair<real, real> bessel_prefactor(const real& c, const real& base, const QContext& ctx) {
  const auto num = qpochhammer_inf(c, base, ctx);
  const auto den = qpochhammer_inf(base, base, ctx);
  const real rel = num.err_estimate / abs_value(num.value) + den.err_estimate / abs_value(den.value);
  return {num.value / den.value, rel};
}

}  // namespace detail

/// J_nu(x; b) = (b^{nu+1};b)_inf/(b;b)_inf x^nu 1phi1(0; b^{nu+1} | b; b x^2).
inline SeriesValue jackson3_bessel(const BesselOrder& order, const complex& x_in, const real& base_in,
                                   const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  const complex x = promote(x_in);
  const real base = promote(base_in);
  require(base > 0 && base < 1, ErrorKind::DomainError, "Bessel base must lie in (0,1)");
  const Rational& nu = order.nu;
  if (x == complex(real(0), real(0))) {
    require(nu >= 0, ErrorKind::DomainError, "J_nu(0) is infinite for nu < 0");
    SeriesValue out;
    out.value = complex(real(nu.numerator() == 0 ? 1 : 0), real(0));
    out.terms_used = 1;
    return out;
  }
  const complex power = principal_pow(x, nu);
  const real c = rpow(base, nu + 1);
  const real x2 = std::norm(x);
  auto s = detail::phi11_zero<complex>(c, base, complex(base, real(0)) * x * x, ctx,
                                       detail::phi11_guard_digits(x2, base));
  const auto [pref, pref_rel] = detail::bessel_prefactor(c, base, ctx);
  SeriesValue out;
  out.value = complex(pref, real(0)) * power * s.value;
  out.err_estimate = pref * abs_value(power) * (s.err_estimate + pref_rel * abs_value(s.value));
  out.terms_used = s.terms_used;
  return out;
}

/// The explicit power series sum (-1)^n b^{n(n+1)/2} x^{2n} / ((b^{nu+1};b)_n (b;b)_n),
/// summed independently of basic_hypergeometric.
inline SeriesValue jackson3_bessel_series(const BesselOrder& order, const complex& x_in, const real& base_in,
                                          const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits() + detail::phi11_guard_digits(std::norm(x_in), base_in));
  const complex x = promote(x_in);
  const real base = promote(base_in);
  const Rational& nu = order.nu;
  if (x == complex(real(0), real(0))) return jackson3_bessel(order, x, base, ctx);
  const real c = rpow(base, nu + 1);
  const complex x2 = x * x;
  const real tol = ctx.tail_tol();
  complex sum(real(0), real(0)), term(real(1), real(0));
  real bn = 1;  // b^n
  int n = 0;
  real err = 0;
  for (;; ++n) {
    sum += term;
    // t_{n+1}/t_n = -b^{n+1} x^2 / ((1 - c b^n)(1 - b^{n+1}))
    complex next = term * complex(real(-bn * base), real(0)) * x2 / complex((1 - c * bn) * (1 - bn * base), real(0));
    bn *= base;
    real nm = abs_value(next);
    if ((nm <= tol * abs_value(sum) && nm <= abs_value(term)) || n + 1 >= ctx.trunc().max_terms) {
      err = nm / (1 - base);
      break;
    }
    term = next;
  }
  const auto [pref, pref_rel] = detail::bessel_prefactor(c, base, ctx);
  const complex power = principal_pow(x, nu);
  SeriesValue out;
  out.value = complex(pref, real(0)) * power * sum;
  out.err_estimate = pref * abs_value(power) * (err + pref_rel * abs_value(sum));
  out.terms_used = n + 1;
  return out;
}

/// J_nu(x; b) / x^nu for real x, an even entire function of x.
inline RealSeries bessel_ratio(const Rational& nu, const real& x_in, const real& base_in, const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  const real x = promote(x_in);
  const real base = promote(base_in);
  BesselOrder order(nu);
  const real c = rpow(base, nu + 1);
  auto s = detail::phi11_zero<real>(c, base, real(base * x * x), ctx, detail::phi11_guard_digits(x * x, base));
  const auto [pref, pref_rel] = detail::bessel_prefactor(c, base, ctx);
  return {pref * s.value, pref * (s.err_estimate + pref_rel * abs_value(s.value)), s.terms_used};
}

/// J_nu(q^k; q^2) / q^{k nu} on the lattice, via the cancellation-free expansion.
inline RealSeries bessel_ratio_lattice(const Rational& nu, int k, const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits() + 10);
  BesselOrder order(nu);
  const real Q = ctx.q2();
  const int n0 = k < 0 ? -k : 0;
  // (Q;Q)_{n0} and (Q;Q)_{n0+k}
  real fac_n = 1, fac_nk = 1;
  {
    real Qj = Q;
    for (int j = 1; j <= std::max(n0, n0 + k); ++j) {
      if (j <= n0) fac_n *= 1 - Qj;
      if (j <= n0 + k) fac_nk *= 1 - Qj;
      Qj *= Q;
    }
  }
  const Rational lead_exp = Rational(static_cast<std::int64_t>(n0) * (n0 + 1)) + 2 * nu * n0;
  real term = ctx.qpow(lead_exp) / (fac_n * fac_nk);
  if (n0 % 2 == 1) term = -term;
  const real Qnu = ctx.qpow(2 * nu);
  real Qn1 = ctx.qpow(static_cast<long long>(2 * (n0 + 1)));      // Q^{n+1}
  real Qnk1 = ctx.qpow(static_cast<long long>(2 * (n0 + k + 1)));  // Q^{n+k+1}
  const real tol = ctx.tail_tol();
  RealSeries out;
  real sum = 0;
  for (int n = n0;; ++n) {
    sum += term;
    real next = -term * Qn1 * Qnu / ((1 - Qn1) * (1 - Qnk1));
    Qn1 *= Q;
    Qnk1 *= Q;
    real nm = abs_value(next), tm = abs_value(term);
    if ((nm <= tol * abs_value(sum) && nm <= tm) || n - n0 + 1 >= ctx.trunc().max_terms) {
      real rho = tm > 0 ? real(nm / tm) : real(0);
      if (rho < Q) rho = Q;
      out.value = sum;
      out.err_estimate = nm / (1 - rho);
      out.terms_used = n - n0 + 1;
      return out;
    }
    term = next;
  }
}

/// J_nu(q^k; q^2).
inline RealSeries jackson3_bessel_lattice(const Rational& nu, int k, const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  auto r = bessel_ratio_lattice(nu, k, ctx);
  const real scale = ctx.qpow(nu * k);
  return {r.value * scale, r.err_estimate * scale, r.terms_used};
}

/// Memo of bessel_ratio_lattice(nu, m) for one computation. Not shared
/// between calls, so it never outlives the context it was built from.
class BesselRatioCache {
 public:
  BesselRatioCache(Rational nu, const QContext& ctx) : nu_(nu), ctx_(ctx) {}
  const real& operator()(int m) {
    auto it = values_.find(m);
    if (it == values_.end()) it = values_.emplace(m, bessel_ratio_lattice(nu_, m, ctx_).value).first;
    return it->second;
  }

 private:
  Rational nu_;
  QContext ctx_;
  std::unordered_map<int, real> values_;
};

// ---------------------------------------------------------------------------
// q-trigonometric functions and q-exponentials
// ---------------------------------------------------------------------------

/// cos(z;q^2) = 1phi1(0; q | q^2; q^2 z^2) and sin(z;q^2) = z/(1-q) 1phi1(0; q^3 | q^2; q^2 z^2).
///
/// These are the reduced forms of (q^2;q^2)_inf/(q;q^2)_inf z^{1/2} J_{-+1/2}(z;q^2):
/// the half-integer powers cancel, so both are entire and need no branch.
inline std::pair<SeriesValue, SeriesValue> q_trig(const complex& z_in, const real& q_in, const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  const complex z = promote(z_in);
  const real q = promote(q_in);
  const real Q = q * q;
  const int guard = detail::phi11_guard_digits(std::norm(z), Q);
  const complex arg = complex(Q, real(0)) * z * z;
  auto c = detail::phi11_zero<complex>(q, Q, arg, ctx, guard);
  auto s = detail::phi11_zero<complex>(q * Q, Q, arg, ctx, guard);
  const complex scale = z / complex(real(1 - q), real(0));
  SeriesValue sin_val{scale * s.value, abs_value(scale) * s.err_estimate, s.terms_used};
  return {c, sin_val};
}

/// The literal Bessel form of q_trig, through the principal square root.
inline std::pair<SeriesValue, SeriesValue> q_trig_from_bessel(const complex& z_in, const real& q_in,
                                                              const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  const complex z = promote(z_in);
  const real q = promote(q_in);
  const real Q = q * q;
  const real pref = qpochhammer_inf(Q, Q, ctx).value / qpochhammer_inf(q, Q, ctx).value;
  const complex root = principal_pow(z, Rational(1, 2));
  auto jm = jackson3_bessel(BesselOrder(Rational(-1, 2)), z, Q, ctx);
  auto jp = jackson3_bessel(BesselOrder(Rational(1, 2)), z, Q, ctx);
  const complex f = complex(pref, real(0)) * root;
  return {SeriesValue{f * jm.value, abs_value(f) * jm.err_estimate, jm.terms_used},
          SeriesValue{f * jp.value, abs_value(f) * jp.err_estimate, jp.terms_used}};
}

/// e(z;q^2) = cos(-iz;q^2) + i sin(-iz;q^2).
inline SeriesValue rubin_exp(const complex& z, const real& q, const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  const complex i(real(0), real(1));
  auto [c, s] = q_trig(-i * z, q, ctx);
  return {c.value + i * s.value, c.err_estimate + s.err_estimate, std::max(c.terms_used, s.terms_used)};
}

/// E_alpha(ix; q^2) for real x via the 1phi1 pair.
inline SeriesValue dunkl_kernel(const KernelParams& p, const real& x_in, const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  const real x = promote(x_in);
  const real Q = ctx.q2();
  const int guard = detail::phi11_guard_digits(x * x, Q);
  const real c1 = ctx.qpow(2 * p.alpha + 2);
  const real arg = Q * x * x;
  auto even = detail::phi11_zero<real>(c1, Q, arg, ctx, guard);
  auto odd = detail::phi11_zero<real>(c1 * Q, Q, arg, ctx, guard);
  const real scale = x / (1 - c1);
  return {complex(even.value, scale * odd.value), even.err_estimate + abs_value(scale) * odd.err_estimate,
          std::max(even.terms_used, odd.terms_used)};
}

/// E_alpha(ix; q^2) through the Bessel quotients
/// (q^2;q^2)_inf/(q^{2alpha+2};q^2)_inf (J_alpha(x)/x^alpha + i x J_{alpha+1}(x)/x^{alpha+1}),
/// using jackson3_bessel at |x| and the evenness of J_nu(x)/x^nu.
inline SeriesValue dunkl_kernel_bessel_form(const KernelParams& p, const real& x_in, const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  const real x = promote(x_in);
  const real Q = ctx.q2();
  const real C = qpochhammer_inf(Q, Q, ctx).value / pochhammer_q2_inf(2 * p.alpha + 2, ctx);
  const real ax = abs_value(x);
  auto ratio = [&](const Rational& nu) -> std::pair<real, real> {
    if (ax == 0) return {pochhammer_q2_inf(2 * nu + 2, ctx) / qpochhammer_inf(Q, Q, ctx).value, real(0)};
    auto j = jackson3_bessel(BesselOrder(nu), complex(ax, real(0)), Q, ctx);
    real pw = rpow(ax, nu);
    return {j.value.real() / pw, j.err_estimate / pw};
  };
  auto [ev, ee] = ratio(p.alpha);
  auto [od, oe] = ratio(p.alpha + 1);
  return {complex(C * ev, C * x * od), C * (ee + ax * oe), 0};
}

/// Constant (q^2;q^2)_inf/(q^{2alpha+2};q^2)_inf in front of the Bessel form of E_alpha.
inline real dunkl_kernel_constant(const Rational& alpha, const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  return qpochhammer_inf(ctx.q2(), ctx.q2(), ctx).value / pochhammer_q2_inf(2 * alpha + 2, ctx);
}

/// E_alpha(ix; q^2) at a lattice point x = s q^k, free of cancellation.
inline SeriesValue dunkl_kernel_lattice(const KernelParams& p, const LatticePoint& x, const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  if (x.is_zero()) return {complex(real(1), real(0)), real(0), 1};
  const real C = dunkl_kernel_constant(p.alpha, ctx);
  auto ev = bessel_ratio_lattice(p.alpha, x.k, ctx);
  auto od = bessel_ratio_lattice(p.alpha + 1, x.k, ctx);
  const real xv = x.value(ctx);
  return {complex(C * ev.value, C * xv * od.value), C * (ev.err_estimate + abs_value(xv) * od.err_estimate),
          std::max(ev.terms_used, od.terms_used)};
}

}  // namespace qplane
