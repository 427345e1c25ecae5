#pragma once

/**
 * @file measure.hpp
 * @brief The measures d mu_{q,alpha} on the real line and d omega_{q,alpha} on (0,inf).
 *
 * With Q = q^2 and the Jackson integral on the lattice +-q^k,
 *
 *   int g d mu_{q,alpha} = 1/(2(1-q)) (Q^{alpha+1};Q)_inf/(Q;Q)_inf int g(x) |x|^{2alpha+1} d_q x
 *                        = 1/2 (Q^{alpha+1};Q)_inf/(Q;Q)_inf sum_{s,k} q^{k(2alpha+2)} g(s q^k),
 *   int g d omega_{q,alpha} = 1/(1-q) int g(y) y^{2alpha+1} d_q y = sum_k q^{k(2alpha+2)} g(q^k).
 */

#include <optional>

#include "qplane/qcore.hpp"

namespace qplane {

enum class MeasureKind { DunklMu, HankelOmega };

struct MeasureSpec {
  MeasureKind kind = MeasureKind::DunklMu;
  Rational alpha;

  MeasureSpec(MeasureKind k, Rational a) : kind(k), alpha(a) {
    require(alpha > -1, ErrorKind::InvalidParameter, "measure parameter must satisfy alpha > -1, got " + to_string(alpha));
  }

  /// Constant c with weight(x) = c |x|^{2alpha+1} against d_q x.
  real constant(const QContext& ctx) const {
    PrecisionScope ps(ctx.precision_digits());
    if (kind == MeasureKind::HankelOmega) return 1 / (1 - ctx.q());
    return pochhammer_q2_inf(2 * alpha + 2, ctx) / pochhammer_q2_inf(Rational(2), ctx) / (2 * (1 - ctx.q()));
  }

  /// Density against d_q x at a lattice point; strictly positive.
  real weight(const LatticePoint& x, const QContext& ctx) const {
    PrecisionScope ps(ctx.precision_digits());
    require(!x.is_zero(), ErrorKind::ZeroArgument, "measure weight requested at the origin");
    require(kind == MeasureKind::DunklMu || x.sign > 0, ErrorKind::DomainError, "d omega lives on (0,inf)");
    return constant(ctx) * ctx.qpow((2 * alpha + 1) * x.k);
  }
};

/// Point mass of d mu_{q,alpha} (or d omega_{q,alpha}) at s q^k divided by the
/// measure constant: q^{k(2alpha+2)}.
inline real lattice_mass(const Rational& alpha, int k, const QContext& ctx) {
  return ctx.qpow((2 * alpha + 2) * k);
}

/**
 * int g d mu_{q,alpha} over [-1,1] (j = 0..k_max) or the real line
 * (k_min..k_max), as the two-sided lattice sum. The boundary terms are
 * checked against `boundary_tol` times the absolute mass.
 */
template <class F>
auto mu_integral(F&& g, const Rational& alpha, LatticeDomain domain, const QContext& ctx,
                 std::optional<real> boundary_tol = {}) {
  PrecisionScope ps(ctx.precision_digits());
  require(domain == LatticeDomain::UnitSymmetric || domain == LatticeDomain::RealLine, ErrorKind::InvalidParameter,
          "d mu integrals run over [-1,1] or the real line");
  const MeasureSpec m(MeasureKind::DunklMu, alpha);
  const real c = m.constant(ctx);
  auto s = q_lattice_integral(
      [&](const LatticePoint& p) { return g(p) * c * ctx.qpow((2 * alpha + 1) * p.k); }, domain, ctx, boundary_tol);
  return s;
}

/// int g d omega_{q,alpha} over (0,1] or (0,inf).
template <class F>
auto omega_integral(F&& g, const Rational& alpha, LatticeDomain domain, const QContext& ctx,
                    std::optional<real> boundary_tol = {}) {
  PrecisionScope ps(ctx.precision_digits());
  require(domain == LatticeDomain::UnitHalf || domain == LatticeDomain::HalfLine, ErrorKind::InvalidParameter,
          "d omega integrals run over (0,1] or (0,inf)");
  const real c = 1 / (1 - ctx.q());
  return q_lattice_integral([&](const LatticePoint& p) { return g(p) * c * ctx.qpow((2 * alpha + 1) * p.k); },
                            domain, ctx, boundary_tol);
}

}  // namespace qplane
