#pragma once

/**
 * @file qtransform.hpp
 * @brief q-Hankel and q-Dunkl transforms on the lattice, the
 * q-Weber-Schafheitlin integral and the q-Bessel orthogonality checks.
 *
 * With R_a(m) = J_a(q^m;q^2)/q^{m a} the transforms reduce to
 *
 *   H_a f(q^j)        = sum_k q^{k(2a+2)} R_a(j+k) f(q^k),
 *   F_a f(sigma q^j)  = 1/2 sum_{s,k} q^{k(2a+2)} f(s q^k)
 *                         [R_a(j+k) - i sigma s q^{j+k} R_{a+1}(j+k)],
 *
 * the measure constants of d omega and d mu having cancelled against the
 * constant in front of E_a. The inverse F^{-1} evaluates F at -y.
 */

#include <optional>
#include <vector>

#include "qplane/measure.hpp"
#include "qplane/neumann.hpp"
#include "qplane/qortho.hpp"

namespace qplane {

namespace detail {

/// R_nu(m) for m in [lo, hi], computed once.
class RatioTable {
 public:
  RatioTable(const Rational& nu, int lo, int hi, const QContext& ctx) : lo_(lo) {
    PrecisionScope ps(ctx.precision_digits());
    for (int m = lo; m <= hi; ++m) vals_.push_back(bessel_ratio_lattice(nu, m, ctx).value);
  }
  const real& operator()(int m) const { return vals_.at(static_cast<std::size_t>(m - lo_)); }

 private:
  int lo_;
  std::vector<real> vals_;
};

inline void check_edges(const real& lo, const real& hi, const real& mass, const real& tol, int k_lo, int k_hi,
                        bool check_lo = true) {
  if ((check_lo && lo > tol * mass) || hi > tol * mass)
    throw Error(ErrorKind::WindowTooSmall, "input mass at the window edges is not negligible (window " +
                                               std::to_string(k_lo) + ".." + std::to_string(k_hi) + ", edge/mass " +
                                               format_real(lo / mass, 3) + " / " + format_real(hi / mass, 3) + ")");
}

}  // namespace detail

/// Output lattice window [lo, hi] of a transform.
struct OutputWindow {
  int lo;
  int hi;
};

/**
 * H_{alpha,q} of g sampled at q^k, k in [k_lo, k_hi], evaluated on `out`.
 * The input mass q^{k(2alpha+2)}|g(q^k)| at both ends must be below
 * `boundary_tol` times its total; the lower end is exempt when it is a true
 * edge of the support of g (functions living on [-1,1]).
 */
template <class G>
LatticeFunction hankel_transform_fn(G&& g, const Rational& alpha, int k_lo, int k_hi, OutputWindow out,
                                    const QContext& ctx, std::optional<real> boundary_tol = {},
                                    bool lower_is_support_edge = false) {
  require(alpha > -1, ErrorKind::InvalidParameter, "q-Hankel transform needs alpha > -1");
  PrecisionScope ps(ctx.precision_digits());
  std::vector<complex> w;
  real mass = 0;
  for (int k = k_lo; k <= k_hi; ++k) {
    w.push_back(complex(g(LatticePoint{1, k})) * lattice_mass(alpha, k, ctx));
    mass += abs_value(w.back());
  }
  detail::check_edges(abs_value(w.front()), abs_value(w.back()), mass,
                      boundary_tol ? *boundary_tol : ctx.tail_tol(), k_lo, k_hi, !lower_is_support_edge);
  const detail::RatioTable R(alpha, out.lo + k_lo, out.hi + k_hi, ctx);
  LatticeFunction res(out.lo, out.hi, false);
  for (int j = out.lo; j <= out.hi; ++j) {
    real re = 0, im = 0;
    for (int k = k_lo; k <= k_hi; ++k) {
      const auto& wk = w[static_cast<std::size_t>(k - k_lo)];
      const real& r = R(j + k);
      re += wk.real() * r;
      im += wk.imag() * r;
    }
    res.set(LatticePoint{1, j}, complex(re, im));
  }
  return res;
}

/// H_{alpha,q} f on the window of f.
inline LatticeFunction hankel_transform(const LatticeFunction& f, const Rational& alpha, const QContext& ctx,
                                        std::optional<real> boundary_tol = {}) {
  return hankel_transform_fn([&](const LatticePoint& p) { return f.at(p); }, alpha, f.k_min(), f.k_max(),
                             OutputWindow{f.k_min(), f.k_max()}, ctx, boundary_tol);
}

/// F_{alpha,q} (or its inverse) of g sampled at +-q^k, k in [k_lo, k_hi], on the signed window `out`.
template <class G>
LatticeFunction dunkl_transform_fn(G&& g, const Rational& alpha, int k_lo, int k_hi, OutputWindow out, bool inverse,
                                   const QContext& ctx, std::optional<real> boundary_tol = {},
                                   bool lower_is_support_edge = false) {
  require(alpha > -1, ErrorKind::InvalidParameter, "q-Dunkl transform needs alpha > -1");
  PrecisionScope ps(ctx.precision_digits());
  // even and odd parts of g, weighted: e_k = m_k (g(q^k) + g(-q^k))/2, o_k = m_k (g(q^k) - g(-q^k))/2
  std::vector<complex> ev, od;
  real mass = 0, edge_lo = 0, edge_hi = 0;
  for (int k = k_lo; k <= k_hi; ++k) {
    const complex gp = complex(g(LatticePoint{1, k})), gm = complex(g(LatticePoint{-1, k}));
    const real m = lattice_mass(alpha, k, ctx);
    ev.push_back((gp + gm) * (m / 2));
    od.push_back((gp - gm) * (m / 2));
    const real a = m * (abs_value(gp) + abs_value(gm));
    mass += a;
    if (k == k_lo) edge_lo = a;
    if (k == k_hi) edge_hi = a;
  }
  detail::check_edges(edge_lo, edge_hi, mass, boundary_tol ? *boundary_tol : ctx.tail_tol(), k_lo, k_hi,
                      !lower_is_support_edge);
  const detail::RatioTable R0(alpha, out.lo + k_lo, out.hi + k_hi, ctx);
  const detail::RatioTable R1(alpha + 1, out.lo + k_lo, out.hi + k_hi, ctx);
  std::vector<real> qpow;
  for (int m = out.lo + k_lo; m <= out.hi + k_hi; ++m) qpow.push_back(ctx.qpow(static_cast<long long>(m)));
  LatticeFunction res(out.lo, out.hi, true);
  for (int j = out.lo; j <= out.hi; ++j) {
    // even part sum_k e_k R0(j+k); odd part sum_k o_k q^{j+k} R1(j+k)
    real er = 0, ei = 0, orr = 0, oi = 0;
    for (int k = k_lo; k <= k_hi; ++k) {
      const auto uk = static_cast<std::size_t>(k - k_lo);
      const real& r0 = R0(j + k);
      const real r1 = qpow[static_cast<std::size_t>(j + k - out.lo - k_lo)] * R1(j + k);
      er += ev[uk].real() * r0;
      ei += ev[uk].imag() * r0;
      orr += od[uk].real() * r1;
      oi += od[uk].imag() * r1;
    }
    // F(sigma q^j) = E - i sigma O, E and O the two sums above
    for (int sigma : {1, -1}) {
      const int s_eff = inverse ? -sigma : sigma;
      const complex v(er + s_eff * oi, ei - s_eff * orr);
      res.set(LatticePoint{sigma, j}, v);
    }
  }
  return res;
}

/// F_{alpha,q} f (or F^{-1}) on the signed window of f.
inline LatticeFunction dunkl_transform(const LatticeFunction& f, const Rational& alpha, bool inverse,
                                       const QContext& ctx, std::optional<real> boundary_tol = {}) {
  require(f.is_signed(), ErrorKind::InvalidParameter, "q-Dunkl transform needs a function on the signed lattice");
  return dunkl_transform_fn([&](const LatticePoint& p) { return f.at(p); }, alpha, f.k_min(), f.k_max(),
                            OutputWindow{f.k_min(), f.k_max()}, inverse, ctx, boundary_tol);
}

/**
 * The decomposed route: H_alpha on the even part plus c y H_{alpha+1}[f_odd(x)/x](|y|)
 * on the odd part, with c = -i (or +i for the inverse). Used as an oracle
 * for dunkl_transform.
 */
inline LatticeFunction dunkl_transform_decomposed(const LatticeFunction& f, const Rational& alpha, bool inverse,
                                                  const QContext& ctx, std::optional<real> boundary_tol = {}) {
  PrecisionScope ps(ctx.precision_digits());
  const LatticeFunction ev = f.even_part(), od = f.odd_part();
  const OutputWindow out{f.k_min(), f.k_max()};
  auto he = hankel_transform_fn([&](const LatticePoint& p) { return ev.at(p); }, alpha, f.k_min(), f.k_max(), out,
                                ctx, boundary_tol);
  auto ho = hankel_transform_fn([&](const LatticePoint& p) { return od.at(p) / p.value(ctx); }, alpha + 1, f.k_min(),
                                f.k_max(), out, ctx, boundary_tol);
  const complex c(real(0), real(inverse ? 1 : -1));
  LatticeFunction res(f.k_min(), f.k_max(), true);
  for (const auto& y : res.points()) {
    const LatticePoint a{1, y.k};
    res.set(y, he.at(a) + c * y.value(ctx) * ho.at(a));
  }
  return res;
}

/**
 * Ratio F(f_odd)(y) / (y H_{alpha+1}[f_odd(x)/x](|y|)) at every window point
 * where the denominator is not negligible; the empirical constant linking the
 * odd part of F_{alpha,q} to H_{alpha+1,q}. Returns the mean and the largest
 * deviation from it.
 */
inline std::pair<complex, real> dunkl_odd_constant(const LatticeFunction& f, const Rational& alpha,
                                                   const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  const LatticeFunction od = f.odd_part();
  const OutputWindow out{f.k_min(), f.k_max()};
  auto direct = dunkl_transform(od, alpha, false, ctx);
  auto ho = hankel_transform_fn([&](const LatticePoint& p) { return od.at(p) / p.value(ctx); }, alpha + 1, f.k_min(),
                                f.k_max(), out, ctx);
  std::vector<complex> ratios;
  real scale = 0;
  for (const auto& y : direct.points()) scale = std::max(scale, abs_value(direct.at(y)));
  for (const auto& y : direct.points()) {
    const complex den = y.value(ctx) * ho.at(LatticePoint{1, y.k});
    if (abs_value(direct.at(y)) > scale * pow10(-10)) ratios.push_back(direct.at(y) / den);
  }
  require(!ratios.empty(), ErrorKind::DomainError, "odd part vanishes; no constant to determine");
  complex mean(real(0), real(0));
  for (const auto& r : ratios) mean += r;
  mean /= real(static_cast<long long>(ratios.size()));
  real dev = 0;
  for (const auto& r : ratios) dev = std::max(dev, abs_value(r - mean));
  return {mean, dev};
}

// ---------------------------------------------------------------------------
// q-Weber-Schafheitlin integral
// ---------------------------------------------------------------------------

struct WeberParams {
  Rational lambda, mu, nu;
  int m = 0, n = 0;

  WeberParams(Rational l, Rational mu_, Rational nu_, int m_, int n_) : lambda(l), mu(mu_), nu(nu_), m(m_), n(n_) {
    require(mu > -1 && nu > -1, ErrorKind::InvalidParameter, "Bessel orders must exceed -1");
    require(lambda < mu + nu + 1, ErrorKind::ConvergenceViolation,
            "integral diverges unless lambda < mu + nu + 1 (lambda=" + to_string(lambda) +
                ", mu+nu+1=" + to_string(mu + nu + 1) + ")");
  }
  WeberParams swapped() const { return WeberParams(lambda, nu, mu, n, m); }
};

enum class WeberBranch { First, Second, Auto };

inline const char* to_string(WeberBranch b) {
  return b == WeberBranch::First ? "first" : b == WeberBranch::Second ? "second" : "auto";
}

inline bool is_nonpositive_integer(const Rational& r) { return is_integer(r) && r <= 0; }

/**
 * Exceptional cases, exact in the rationals: when n-m+(1+l+mu-nu)/2 and
 * (1-l+nu-mu)/2 are both non-positive integers the integral equals the first
 * expression only (the second is excluded); symmetrically for the second.
 */
struct WeberBranchStatus {
  bool first_excluded = false;
  bool second_excluded = false;
};

inline WeberBranchStatus weber_branch_status(const WeberParams& w) {
  const Rational two(2);
  const bool c1 = is_nonpositive_integer(Rational(w.n - w.m) + (1 + w.lambda + w.mu - w.nu) / two) &&
                  is_nonpositive_integer((1 - w.lambda + w.nu - w.mu) / two);
  const bool c2 = is_nonpositive_integer(Rational(w.m - w.n) + (1 + w.lambda + w.nu - w.mu) / two) &&
                  is_nonpositive_integer((1 - w.lambda + w.mu - w.nu) / two);
  return {c2, c1};
}

namespace detail {

/**
 * The first expression; the second is this with (m, mu) and (n, nu) swapped.
 * When its 2phi1(A, B; C | Q; Z) neither terminates nor has |Z| < 1 the
 * series is continued through Heine's transformation with B = q^{1-l+mu+nu},
 * |B| < 1 by the convergence condition:
 *   (B, AZ;Q)_inf/(C, Z;Q)_inf 2phi1(C/B, Z; AZ | Q; B).
 * When AZ = Q^{-j} the product (AZ;Q)_inf 2phi1 is summed in its limit form.
 * A pole of the continuation (Z a non-positive power of Q) is reported as
 * DivergentSeries.
 */
inline SeriesValue weber_first_expression(const WeberParams& w, const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  const Rational &l = w.lambda, &mu = w.mu, &nu = w.nu;
  const Rational pre_exp = Rational(w.n) * (l - 1) + Rational(w.m - w.n) * mu;
  const real num = pochhammer_q2_inf(1 + l + nu - mu, ctx) * pochhammer_q2_inf(2 * mu + 2, ctx);
  const real den = pochhammer_q2_inf(1 - l + nu + mu, ctx) * pochhammer_q2_inf(Rational(2), ctx);
  const real pref = (1 - ctx.q()) * ctx.qpow(pre_exp) * num / den;
  const Rational a1 = 1 - l + mu + nu, a2 = 1 - l + mu - nu, c = 2 * mu + 2;
  const Rational z = Rational(2 * w.m - 2 * w.n) + 1 + l + nu - mu;
  const bool terminates = (is_integer(a1) && a1 <= 0 && a1.numerator() % 2 == 0) ||
                          (is_integer(a2) && a2 <= 0 && a2.numerator() % 2 == 0);
  if (num == 0) {
    if (terminates || z > 0) return {complex(real(0), real(0)), real(0), 0};
    throw Error(ErrorKind::DivergentSeries,
                "vanishing prefactor times 2phi1 at q^" + to_string(z) + " on its pole: indeterminate");
  }
  const real Q = ctx.q2();
  if (terminates || z > 0) {
    auto s = basic_hypergeometric<real>({ctx.qpow(a1), ctx.qpow(a2)}, {ctx.qpow(c)}, Q, ctx.qpow(z), ctx);
    return {complex(pref * s.value, real(0)), abs_value(pref) * s.err_estimate, s.terms_used};
  }
  const real den2 = pochhammer_q2_inf(c, ctx) * pochhammer_q2_inf(z, ctx);
  if (den2 == 0)
    throw Error(ErrorKind::DivergentSeries, "2phi1 at q^" + to_string(z) + " sits on a pole of its continuation");
  std::string why;
  for (auto [A, B] : {std::pair{a2, a1}, std::pair{a1, a2}}) {
    if (B <= 0) continue;
    const Rational az = A + z;
    if (is_integer(az) && az <= 0 && az.numerator() % 2 == 0) {
      // AZ = Q^{-j}: (AZ;Q)_inf 2phi1(C/B, Z; AZ | Q; B) = sum_{n>j} (C/B, Z;Q)_n/(Q;Q)_n (Q^{n-j};Q)_inf B^n
      const long long j = -az.numerator() / 2;
      const real cb = ctx.qpow(c - B), Z = ctx.qpow(z), Bv = ctx.qpow(B);
      real term = 1, tail = pochhammer_q2_inf(Rational(2), ctx), sum = 0, Qn = 1;
      const real tol = ctx.tail_tol();
      int used = 0;
      for (long long n = 0; n < ctx.trunc().max_terms; ++n) {
        if (n > j) {
          const real v = term * tail;
          sum += v;
          ++used;
          if (abs_value(v) <= tol * abs_value(sum) && n > j + 2) break;
          tail /= 1 - ctx.qpow(2 * (n - j));
        }
        term *= (1 - cb * Qn) * (1 - Z * Qn) / (1 - Qn * ctx.q2()) * Bv;
        Qn *= ctx.q2();
      }
      const real f = pref * pochhammer_q2_inf(B, ctx) / den2;
      return {complex(f * sum, real(0)), abs_value(f * sum) * tol, used};
    }
    try {
      const real cont = pochhammer_q2_inf(B, ctx) * pochhammer_q2_inf(A + z, ctx) / den2;
      auto s = basic_hypergeometric<real>({ctx.qpow(c - B), ctx.qpow(z)}, {ctx.qpow(A + z)}, Q, ctx.qpow(B), ctx);
      const real f = pref * cont;
      return {complex(f * s.value, real(0)), abs_value(f) * s.err_estimate, s.terms_used};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PoleInParameters) throw;
      why = e.what();
    }
  }
  throw Error(ErrorKind::DivergentSeries, "continued 2phi1 at q^" + to_string(z) + " has a pole: " + why);
}

}  // namespace detail

/// Right-hand side of the q-Weber-Schafheitlin identity on the chosen branch.
/// `Auto` takes the first branch that is neither excluded nor divergent.
inline SeriesValue weber_schafheitlin_closed(const WeberParams& w, WeberBranch branch, const QContext& ctx,
                                             WeberBranch* used = nullptr) {
  if (branch == WeberBranch::First) {
    if (used) *used = WeberBranch::First;
    return detail::weber_first_expression(w, ctx);
  }
  if (branch == WeberBranch::Second) {
    if (used) *used = WeberBranch::Second;
    return detail::weber_first_expression(w.swapped(), ctx);
  }
  const auto st = weber_branch_status(w);
  std::string why;
  for (auto b : {WeberBranch::First, WeberBranch::Second}) {
    const bool excluded = b == WeberBranch::First ? st.first_excluded : st.second_excluded;
    if (excluded) {
      why += std::string(" ") + to_string(b) + " branch excluded;";
      continue;
    }
    try {
      return weber_schafheitlin_closed(w, b, ctx, used);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DivergentSeries && e.kind() != ErrorKind::PoleInParameters) throw;
      why += std::string(" ") + to_string(b) + " branch not evaluable (" + e.what() + ");";
    }
  }
  throw Error(ErrorKind::NoValidBranch, "no valid branch:" + why);
}

/// Direct lattice sum (1-q) sum_k q^{k(1-l)} J_mu(q^{m+k};q^2) J_nu(q^{n+k};q^2).
inline SeriesValue weber_schafheitlin_oracle(const WeberParams& w, const QContext& ctx) {
  PrecisionScope ps(ctx.precision_digits());
  const Rational decay = 1 - w.lambda + w.mu + w.nu;
  const int shift = std::max(std::abs(w.m), std::abs(w.n));
  const int k_hi = window_upper_for_decay(ctx.q_exact(), to_double(to_real(decay)), ctx.precision_digits()) + 2 * shift;
  const int k_lo = -shift - 12;
  BesselRatioCache Rm(w.mu, ctx), Rn(w.nu, ctx);
  real sum = 0, mass = 0, edge_lo = 0, edge_hi = 0;
  for (int k = k_lo; k <= k_hi; ++k) {
    const Rational e = Rational(k) * (1 - w.lambda) + Rational(w.m + k) * w.mu + Rational(w.n + k) * w.nu;
    const real t = ctx.qpow(e) * Rm(w.m + k) * Rn(w.n + k);
    sum += t;
    mass += abs_value(t);
    if (k == k_lo) edge_lo = abs_value(t);
    if (k == k_hi) edge_hi = abs_value(t);
  }
  detail::check_edges(edge_lo, edge_hi, mass, ctx.tail_tol(), k_lo, k_hi);
  const real q = ctx.q(), rho = ctx.qpow(decay);
  return {complex((1 - q) * sum, real(0)), (1 - q) * (edge_lo + edge_hi * rho / (1 - rho)), k_hi - k_lo + 1};
}

// ---------------------------------------------------------------------------
// q-Bessel orthogonality
// ---------------------------------------------------------------------------

/// Gram of J_{a+2n+1}(q^n x; q^2), n = 0..N, under d_q x / x against
/// (1-q)/(1-q^{2a+4n+2}) on the diagonal.
inline GramReport bessel_lemma_gram(const Rational& alpha, int N, const QContext& ctx) {
  require(alpha > -1, ErrorKind::InvalidParameter, "alpha must exceed -1");
  PrecisionScope ps(ctx.precision_digits());
  GramReport g;
  g.size = N + 1;
  const auto size = static_cast<std::size_t>(N + 1);
  g.gram.assign(size, std::vector<real>(size, real(0)));
  for (int n = 0; n <= N; ++n) {
    for (int m = n; m <= N; ++m) {
      WeberParams w(Rational(1), alpha + 2 * m + 1, alpha + 2 * n + 1, m, n);
      const real v = weber_schafheitlin_oracle(w, ctx).value.real();
      g.gram[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)] = v;
      g.gram[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)] = v;
    }
    g.expected_diagonal.push_back((1 - ctx.q()) / (1 - ctx.qpow(2 * alpha + 4 * n + 2)));
  }
  finish_gram(g);
  return g;
}

/**
 * Gram of the q-Neumann functions cJ_{alpha,n}, n = 0..N, under d mu_{q,alpha}
 * on the real line, against (q^{2alpha+2};q^2)_inf/(q^2;q^2)_inf / (1-q^{2alpha+2n+2}).
 */
inline GramReport qbessel_orthogonality_suite(const Rational& alpha, int N, const QContext& ctx,
                                              ShiftRule rule = ShiftRule::FloorHalf) {
  require(alpha > -1, ErrorKind::InvalidParameter, "alpha must exceed -1");
  PrecisionScope ps(ctx.precision_digits());
  const NeumannSystem sys(alpha, N, rule);
  const int k_hi = window_upper_for_decay(ctx.q_exact(), 2.0 * to_double(to_real(alpha)) + 2.0, ctx.precision_digits());
  const int k_lo = -N - 14;
  const NeumannTable tab(sys, N, k_lo, k_hi, ctx);
  const real c = MeasureSpec(MeasureKind::DunklMu, alpha).constant(ctx) * (1 - ctx.q());
  GramReport g;
  g.size = N + 1;
  const auto size = static_cast<std::size_t>(N + 1);
  g.gram.assign(size, std::vector<real>(size, real(0)));
  for (int n = 0; n <= N; ++n)
    for (int m = n; m <= N; ++m) {
      real sum = 0;
      for (int k = k_lo; k <= k_hi; ++k)
        for (int s : {1, -1}) sum += lattice_mass(alpha, k, ctx) * tab(n, {s, k}) * tab(m, {s, k});
      g.gram[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)] = c * sum;
      g.gram[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)] = c * sum;
    }
  const real C = pochhammer_q2_inf(2 * alpha + 2, ctx) / pochhammer_q2_inf(Rational(2), ctx);
  for (int n = 0; n <= N; ++n) g.expected_diagonal.push_back(C / (1 - ctx.qpow(2 * alpha + 2 * n + 2)));
  finish_gram(g);
  return g;
}

}  // namespace qplane
