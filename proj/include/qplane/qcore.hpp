#pragma once

/**
 * @file qcore.hpp
 * @brief q-Pochhammer symbols, basic hypergeometric series and Jackson q-integrals.
 *
 * Everything here is a pure function of its arguments and a QContext. The
 * context carries the base q as an exact rational, the working precision in
 * decimal digits and the truncation policy; numeric values of q and its
 * powers are materialised at whatever MPFR precision is active, so callers
 * that widen the precision also get a correspondingly sharper q.
 *
 * Truncated sums report an a-posteriori error estimate: the magnitude of the
 * first neglected term times 1/(1 - rho), rho the larger of q and the last
 * observed term ratio. It is a heuristic majorant for geometrically decaying
 * tails, not a rigorous bound.
 */

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "qplane/error.hpp"
#include "qplane/real.hpp"
#include "qplane/report.hpp"

namespace qplane {

struct TruncationPolicy {
  int max_terms = 10000;
  /// 0 selects the default 10^(5 - precision_digits).
  double tail_rel_tol = 0.0;
  /// Lattice window for doubly infinite sums over q^k.
  int k_min = -40;
  int k_max = 60;
};

class QContext {
 public:
  explicit QContext(Rational q, int precision_digits = 40, TruncationPolicy trunc = {})
      : q_(q), precision_digits_(precision_digits), trunc_(trunc) {
    require(q_ > 0 && q_ < 1, ErrorKind::InvalidParameter, "q must lie strictly inside (0,1), got " + to_string(q_));
    require(precision_digits_ >= 30, ErrorKind::InvalidParameter,
            "precision_digits must be >= 30, got " + std::to_string(precision_digits_));
    require(trunc_.max_terms > 0, ErrorKind::InvalidParameter, "max_terms must be positive");
    require(trunc_.tail_rel_tol >= 0, ErrorKind::InvalidParameter, "tail_rel_tol must be positive");
    require(trunc_.k_min < 0 && trunc_.k_max > 0, ErrorKind::InvalidParameter,
            "lattice window must satisfy k_min < 0 < k_max");
  }
  explicit QContext(std::string_view q, int precision_digits = 40, TruncationPolicy trunc = {})
      : QContext(parse_rational(q), precision_digits, trunc) {}

  const Rational& q_exact() const { return q_; }
  int precision_digits() const { return precision_digits_; }
  const TruncationPolicy& trunc() const { return trunc_; }

  real q() const { return to_real(q_); }
  real q2() const {
    real v = q();
    return v * v;
  }
  /// q^e for a rational exponent, at the active precision.
  real qpow(const Rational& e) const { return rpow(q(), e); }
  real qpow(long long k) const { return qpow(Rational(k)); }

  real tail_tol() const {
    if (trunc_.tail_rel_tol > 0) return real(trunc_.tail_rel_tol);
    return pow10(5 - precision_digits_);
  }

  QContext with_precision(int digits) const { return QContext(q_, digits, trunc_); }
  QContext with_window(int k_min, int k_max) const {
    TruncationPolicy t = trunc_;
    t.k_min = k_min;
    t.k_max = k_max;
    return QContext(q_, precision_digits_, t);
  }
  QContext with_trunc(const TruncationPolicy& t) const { return QContext(q_, precision_digits_, t); }
  QContext with_q(const Rational& q) const { return QContext(q, precision_digits_, trunc_); }

 private:
  Rational q_;
  int precision_digits_;
  TruncationPolicy trunc_;
};

/// Numeric value plus truncation-error estimate and the number of terms summed.
template <class V>
struct Series {
  V value{};
  real err_estimate = 0;
  int terms_used = 0;
};
using SeriesValue = Series<complex>;
using RealSeries = Series<real>;

// ---------------------------------------------------------------------------
// Lattice points and lattice-sampled functions
// ---------------------------------------------------------------------------

/// The point sign * q^k; sign == 0 is the distinguished origin.
struct LatticePoint {
  int sign = 1;
  int k = 0;

  static LatticePoint zero() { return {0, 0}; }
  bool is_zero() const { return sign == 0; }
  LatticePoint negated() const { return {-sign, k}; }
  /// Multiplication by q^dk.
  LatticePoint scaled(int dk) const { return is_zero() ? *this : LatticePoint{sign, k + dk}; }
  /// Product of two lattice points.
  LatticePoint times(const LatticePoint& o) const {
    if (is_zero() || o.is_zero()) return zero();
    return {sign * o.sign, k + o.k};
  }
  real value(const QContext& ctx) const {
    if (is_zero()) return real(0);
    real v = ctx.qpow(static_cast<long long>(k));
    return sign < 0 ? real(-v) : v;
  }
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

/// Complex samples on {+-q^k : k_min <= k <= k_max} (signed) or {q^k} (half line).
class LatticeFunction {
 public:
  LatticeFunction() = default;
  LatticeFunction(int k_min, int k_max, bool signed_domain)
      : k_min_(k_min), k_max_(k_max), signed_(signed_domain) {
    require(k_min <= k_max, ErrorKind::InvalidParameter, "lattice window must satisfy k_min <= k_max");
    pos_.assign(static_cast<std::size_t>(k_max - k_min + 1), complex(real(0), real(0)));
    if (signed_) neg_ = pos_;
  }

  template <class F>
  static LatticeFunction tabulate(int k_min, int k_max, bool signed_domain, F&& f) {
    LatticeFunction out(k_min, k_max, signed_domain);
    for (const auto& p : out.points()) out.set(p, f(p));
    return out;
  }

  int k_min() const { return k_min_; }
  int k_max() const { return k_max_; }
  bool is_signed() const { return signed_; }

  bool contains(const LatticePoint& p) const {
    if (p.is_zero() || p.k < k_min_ || p.k > k_max_) return false;
    return p.sign > 0 || signed_;
  }

  const complex& at(const LatticePoint& p) const {
    check(p);
    return slot(p);
  }
  void set(const LatticePoint& p, const complex& v) {
    check(p);
    const_cast<complex&>(slot(p)) = v;
  }

  std::vector<LatticePoint> points() const {
    std::vector<LatticePoint> pts;
    if (signed_)
      for (int k = k_max_; k >= k_min_; --k) pts.push_back({-1, k});
    for (int k = k_min_; k <= k_max_; ++k) pts.push_back({1, k});
    return pts;
  }

  LatticeFunction even_part() const { return parity_part(+1); }
  LatticeFunction odd_part() const { return parity_part(-1); }

 private:
  void check(const LatticePoint& p) const {
    if (!contains(p))
      throw Error(ErrorKind::OutOfWindow, "lattice point (" + std::to_string(p.sign) + ", " + std::to_string(p.k) +
                                              ") lies outside the window [" + std::to_string(k_min_) + ", " +
                                              std::to_string(k_max_) + "]");
  }
  const complex& slot(const LatticePoint& p) const {
    auto i = static_cast<std::size_t>(p.k - k_min_);
    return p.sign > 0 ? pos_[i] : neg_[i];
  }
  LatticeFunction parity_part(int parity) const {
    require(signed_, ErrorKind::InvalidParameter, "parity decomposition needs a signed lattice function");
    LatticeFunction out(k_min_, k_max_, true);
    for (const auto& p : points()) {
      complex v = (at(p) + complex(real(parity), real(0)) * at(p.negated())) / real(2);
      out.set(p, v);
    }
    return out;
  }

  int k_min_ = 0;
  int k_max_ = 0;
  bool signed_ = false;
  std::vector<complex> pos_;
  std::vector<complex> neg_;
};

// ---------------------------------------------------------------------------
// q-Pochhammer symbols
// ---------------------------------------------------------------------------

/// (a;q)_n = prod_{k=1}^{n} (1 - a q^{k-1}); (a;q)_0 = 1.
template <class V>
V qpochhammer(const V& a_in, const real& q_in, int n) {
  require(n >= 0, ErrorKind::DomainError, "qpochhammer needs n >= 0");
  const V a = promote(a_in);
  const real q = promote(q_in);
  V prod = V(real(1));
  V aq = a;
  for (int k = 0; k < n; ++k) {
    prod *= V(real(1)) - aq;
    aq *= q;
  }
  return prod;
}

/// (a;q)_inf truncated once |a| q^N drops below the tail tolerance.
template <class V>
Series<V> qpochhammer_inf(const V& a_in, const real& q_in, const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  const V a = promote(a_in);
  const real q = promote(q_in);
  require(q > 0 && q < 1, ErrorKind::DomainError, "qpochhammer_inf needs 0 < q < 1");
  const real tol = ctx.tail_tol();
  Series<V> out;
  out.value = V(real(1));
  V aq = a;
  real mag = abs_value(a);
  int n = 0;
  while (mag >= tol) {
    if (n >= ctx.trunc().max_terms)
      throw Error(ErrorKind::NonConvergent, "infinite product did not reach the tail tolerance within max_terms");
    out.value *= V(real(1)) - aq;
    aq *= q;
    mag *= q;
    ++n;
    if (out.value == V(real(0))) break;
  }
  out.terms_used = n;
  out.err_estimate = out.value == V(real(0)) ? real(0) : real(abs_value(out.value) * mag / (1 - q));
  return out;
}

/// (q^e; q^2)_n with q taken from the context. Exactly zero when q^e is a
/// non-positive power of q^2 reached within n factors.
inline real pochhammer_q2(const Rational& e, int n, const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  if (is_integer(e) && e <= 0 && e.numerator() % 2 == 0 && n > -e.numerator() / 2) return real(0);
  return qpochhammer(ctx.qpow(e), ctx.q2(), n);
}

/// (q^e; q^2)_inf, exactly zero when e is an even integer <= 0.
inline real pochhammer_q2_inf(const Rational& e, const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  if (is_integer(e) && e <= 0 && e.numerator() % 2 == 0) return real(0);
  return qpochhammer_inf(ctx.qpow(e), ctx.q2(), ctx).value;
}

/// (q^2;q^2)_m for m = 0..max_m, the denominators of every lattice series.
inline std::vector<real> q2_factorials(int max_m, const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  std::vector<real> out(static_cast<std::size_t>(max_m + 1));
  const real Q = ctx.q2();
  real Qk = Q;
  out[0] = 1;
  for (int m = 1; m <= max_m; ++m) {
    out[static_cast<std::size_t>(m)] = out[static_cast<std::size_t>(m - 1)] * (1 - Qk);
    Qk *= Q;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Basic hypergeometric series
// ---------------------------------------------------------------------------

namespace detail {

/// m >= 0 with a == q^{-m} (to within 10^(10 - active digits)), if any.
template <class V>
std::optional<int> inverse_qpower_index(const V& a, const real& q, int max_m) {
  using std::abs;
  const real eps = pow10(10 - static_cast<int>(PrecisionScope::current()));
  real mag = abs_value(a);
  if (mag < 1 - eps) return std::nullopt;
  if constexpr (std::is_same_v<V, complex>) {
    if (abs_value(a.imag()) > eps * mag || a.real() <= 0) return std::nullopt;
  } else {
    if (a <= 0) return std::nullopt;
  }
  double m_est = to_double(boost::multiprecision::log(mag) / -boost::multiprecision::log(q));
  long long m = std::llround(m_est);
  if (m < 0 || m > max_m) return std::nullopt;
  V prod = a * V(boost::multiprecision::pow(q, real(m)));
  if (abs_value(prod - V(real(1))) <= eps) return static_cast<int>(m);
  return std::nullopt;
}

}  // namespace detail

/**
 * s_phi_r(upper; lower | q; z) with the factor ((-1)^n q^{n(n-1)/2})^{r-s+1}.
 *
 * Terminating series (an upper parameter equal to q^{-m}) are summed exactly
 * in m+1 terms with zero error estimate. A lower parameter q^{-m} reached
 * before termination is a pole. Non-terminating series with s = r+1 and
 * |z| >= 1, or s > r+1 and z != 0, are rejected as divergent.
 */
template <class V>
Series<V> basic_hypergeometric(std::span<const V> upper_in, std::span<const V> lower_in, const real& q_in,
                               const V& z_in, const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  std::vector<V> upper, lower;
  for (const auto& a : upper_in) upper.push_back(promote(a));
  for (const auto& b : lower_in) lower.push_back(promote(b));
  const real q = promote(q_in);
  const V z = promote(z_in);
  const int max_terms = ctx.trunc().max_terms;
  const int s = static_cast<int>(upper.size());
  const int r = static_cast<int>(lower.size());

  std::optional<int> stop;
  for (const auto& a : upper)
    if (auto m = detail::inverse_qpower_index(a, q, max_terms)) stop = stop ? std::min(*stop, *m) : *m;
  for (const auto& b : lower)
    if (auto m = detail::inverse_qpower_index(b, q, max_terms); m && (!stop || *m < *stop))
      throw Error(ErrorKind::PoleInParameters,
                  "lower parameter equals q^-" + std::to_string(*m) + " before the series terminates");

  const bool zero_arg = z == V(real(0));
  if (!stop && !zero_arg) {
    if (s > r + 1) throw Error(ErrorKind::DivergentSeries, "s > r+1 series diverges for z != 0");
    if (s == r + 1 && abs_value(z) >= 1)
      throw Error(ErrorKind::DivergentSeries, "s = r+1 series needs |z| < 1 unless it terminates");
  }

  const int sign_power = r - s + 1;
  const real tol = ctx.tail_tol();
  Series<V> out;
  V term = V(real(1));
  V sum = term;
  real qn = 1;  // q^n
  int n = 0;
  for (;;) {
    if (stop && n == *stop) {
      out.value = sum;
      out.err_estimate = 0;
      out.terms_used = n + 1;
      return out;
    }
    V ratio = z;
    for (const auto& a : upper) ratio *= V(real(1)) - a * V(qn);
    V denom = V(real(1) - qn * q);
    for (const auto& b : lower) denom *= V(real(1)) - b * V(qn);
    ratio /= denom;
    if (sign_power != 0) ratio *= V(boost::multiprecision::pow(real(-qn), real(sign_power)));
    V next = term * ratio;
    real next_mag = abs_value(next);
    real term_mag = abs_value(term);
    const bool tail_small = next_mag <= tol * abs_value(sum) && next_mag <= term_mag;
    if (tail_small || n + 1 >= max_terms) {
      real rho = term_mag > 0 ? real(next_mag / term_mag) : real(0);
      if (rho < q) rho = q;
      out.value = sum;
      out.err_estimate = rho < 1 ? real(next_mag / (1 - rho)) : real(next_mag * max_terms);
      out.terms_used = n + 1;
      return out;
    }
    sum += next;
    term = next;
    qn *= q;
    ++n;
  }
}

template <class V>
Series<V> basic_hypergeometric(std::initializer_list<V> upper, std::initializer_list<V> lower, const real& q,
                               const V& z, const QContext& ctx) {
  return basic_hypergeometric<V>(std::span<const V>(upper.begin(), upper.size()),
                                 std::span<const V>(lower.begin(), lower.size()), q, z, ctx);
}

// ---------------------------------------------------------------------------
// Jackson q-integrals
// ---------------------------------------------------------------------------

enum class QDomain { ZeroToA, HalfLine, RealLine };

/**
 * Jackson q-integral of f over (0,a], (0,inf) or the real line.
 *
 * (0,a] is summed adaptively until two consecutive terms fall below the tail
 * tolerance relative to the accumulated mass; the two infinite domains use
 * the policy's lattice window and fail with WindowTooSmall when a boundary
 * term is not negligible.
 */
template <class F>
auto q_integral(F&& f, QDomain domain, const real& q_in, const QContext& ctx, const real& a_in = real(1))
    -> Series<std::decay_t<std::invoke_result_t<F&, real>>> {
  using V = std::decay_t<std::invoke_result_t<F&, real>>;
  PrecisionScope ps(ctx.precision_digits());
  const real q = promote(q_in);
  const real a = promote(a_in);
  const real tol = ctx.tail_tol();
  Series<V> out;
  out.value = V(real(0));

  if (domain == QDomain::ZeroToA) {
    real point = a;
    real weight = (1 - q) * a;
    real mass = 0;
    real prev_mag = 0;
    const int max_terms = ctx.trunc().max_terms;
    for (int n = 0;; ++n) {
      V term = f(point) * V(weight);
      real mag = abs_value(term);
      out.value += term;
      mass += mag;
      point *= q;
      weight *= q;
      if ((n >= 8 && mag <= tol * mass && prev_mag <= tol * mass) || n + 1 >= max_terms) {
        real next = abs_value(f(point) * V(weight));
        out.err_estimate = next / (1 - q);
        out.terms_used = n + 1;
        return out;
      }
      prev_mag = mag;
    }
  }

  const int k_min = ctx.trunc().k_min;
  const int k_max = ctx.trunc().k_max;
  real mass = 0, edge_lo = 0, edge_hi = 0;
  for (int k = k_min; k <= k_max; ++k) {
    real x = boost::multiprecision::pow(q, real(k));
    real w = (1 - q) * x;
    V term = f(x) * V(w);
    if (domain == QDomain::RealLine) term += f(real(-x)) * V(w);
    real mag = abs_value(term);
    out.value += term;
    mass += mag;
    if (k == k_min) edge_lo = mag;
    if (k == k_max) edge_hi = mag;
  }
  if (edge_lo > tol * mass || edge_hi > tol * mass)
    throw Error(ErrorKind::WindowTooSmall, "boundary terms of the lattice window are not negligible (k_min=" +
                                               std::to_string(k_min) + ", k_max=" + std::to_string(k_max) + ")");
  out.err_estimate = (edge_lo + edge_hi) / (1 - q);
  out.terms_used = (k_max - k_min + 1) * (domain == QDomain::RealLine ? 2 : 1);
  return out;
}

/// Lattice domains of q-integrals whose integrand is naturally indexed by LatticePoint.
enum class LatticeDomain {
  UnitHalf,       // (0,1]: q^j, j = 0..k_max
  UnitSymmetric,  // [-1,1]: +-q^j, j = 0..k_max
  HalfLine,       // (0,inf): q^k, k_min..k_max
  RealLine,       // R: +-q^k, k_min..k_max
};

/**
 * Jackson q-integral (1-q) sum f(x) |x| over lattice points of the domain.
 * Boundary terms at the open ends of the window are checked against
 * `boundary_tol` times the absolute mass of the sum.
 */
template <class F>
auto q_lattice_integral(F&& f, LatticeDomain domain, const QContext& ctx, std::optional<real> boundary_tol = {})
    -> Series<std::decay_t<std::invoke_result_t<F&, LatticePoint>>> {
  using V = std::decay_t<std::invoke_result_t<F&, LatticePoint>>;
  PrecisionScope ps(ctx.precision_digits());
  const real tol = boundary_tol ? *boundary_tol : ctx.tail_tol();
  const bool unit = domain == LatticeDomain::UnitHalf || domain == LatticeDomain::UnitSymmetric;
  const bool two_sided = domain == LatticeDomain::UnitSymmetric || domain == LatticeDomain::RealLine;
  const int k_lo = unit ? 0 : ctx.trunc().k_min;
  const int k_hi = ctx.trunc().k_max;
  const real q = ctx.q();

  Series<V> out;
  out.value = V(real(0));
  real mass = 0, edge_lo = 0, edge_hi = 0;
  real x = boost::multiprecision::pow(q, real(k_lo));
  for (int k = k_lo; k <= k_hi; ++k) {
    real w = (1 - q) * x;
    V term = f(LatticePoint{1, k});
    if (two_sided) term += f(LatticePoint{-1, k});
    term *= V(w);
    real mag = abs_value(term);
    out.value += term;
    mass += mag;
    if (k == k_lo) edge_lo = mag;
    if (k == k_hi) edge_hi = mag;
    x *= q;
  }
  const bool lo_open = !unit;
  if ((lo_open && edge_lo > tol * mass) || edge_hi > tol * mass)
    throw Error(ErrorKind::WindowTooSmall, "boundary terms of the lattice window are not negligible (k_min=" +
                                               std::to_string(k_lo) + ", k_max=" + std::to_string(k_hi) + ")");
  out.err_estimate = ((lo_open ? edge_lo : real(0)) + edge_hi) / (1 - q);
  out.terms_used = (k_hi - k_lo + 1) * (two_sided ? 2 : 1);
  return out;
}

/// Smallest k such that q^{k * decay} is below 10^-(digits + 3): the window end
/// needed on the small-|x| side when the integrand behaves like |x|^{decay-1}.
inline int window_upper_for_decay(const Rational& q, double decay, int digits, int at_least = 0) {
  require(decay > 0, ErrorKind::WindowTooSmall, "integrand does not decay at the origin (exponent <= 0)");
  double lq = -std::log(static_cast<double>(q.numerator()) / static_cast<double>(q.denominator()));
  int k = static_cast<int>(std::ceil((digits + 3) * std::log(10.0) / (decay * lq))) + 1;
  return std::max(k, at_least);
}

// ---------------------------------------------------------------------------
// Transformation cross-checks
// ---------------------------------------------------------------------------

/**
 * Residuals of two 2phi1 transformations at (a, b, c, z) and base q:
 *   2phi1(a,b;c|q;z) = (abz/c;q)_inf/(z;q)_inf 2phi1(c/a,c/b;c|q;abz/c)
 *   2phi1(a,b;c|q;z) = (b,az;q)_inf/(c,z;q)_inf 2phi1(c/b,z;az|q;b)   (Heine)
 * Only meaningful where all three series converge.
 */
inline Report hypergeometric_transform_check(const complex& a, const complex& b, const complex& c, const complex& z,
                                             const real& q, const QContext& ctx,
                                             std::optional<real> tolerance = {}) {
  PrecisionScope ps(ctx.precision_digits());
  const real tol = tolerance ? *tolerance : pow10(10 - ctx.precision_digits());
  Report rep;
  rep.suite_name = "hypergeometric-transforms";
  rep.add_parameter("a", format_real(a.real()) + (a.imag() != 0 ? "+" + format_real(a.imag()) + "i" : ""));
  rep.add_parameter("b", format_real(b.real()));
  rep.add_parameter("c", format_real(c.real()));
  rep.add_parameter("z", format_real(z.real()));
  rep.add_parameter("q", format_real(q));

  auto phi = [&](const complex& a1, const complex& a2, const complex& c1, const complex& arg) {
    return basic_hypergeometric<complex>({a1, a2}, {c1}, q, arg, ctx).value;
  };
  auto pinf = [&](const complex& x) { return qpochhammer_inf(x, q, ctx).value; };

  const complex lhs = phi(a, b, c, z);
  const complex w = a * b * z / c;
  const complex rhs1 = pinf(w) / pinf(z) * phi(c / a, c / b, c, w);
  rep.add_close("basictransform", rhs1, lhs, tol);
  const complex rhs2 = pinf(b) * pinf(a * z) / (pinf(c) * pinf(z)) * phi(c / b, z, a * z, b);
  rep.add_close("heine", rhs2, lhs, tol);
  rep.provenance.precision_digits = ctx.precision_digits();
  rep.provenance.max_terms = ctx.trunc().max_terms;
  rep.finalize();
  return rep;
}

}  // namespace qplane
