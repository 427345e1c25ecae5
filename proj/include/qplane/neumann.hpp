#pragma once

/**
 * @file neumann.hpp
 * @brief q-Neumann functions  cJ_{g,n}(x) = J_{g+n+1}(x q^h; q^2) / x^{g+1}.
 *
 * The shift h = h(n) is selectable. `FloorHalf` (h = floor(n/2)) is the one
 * under which the kernel expansion of E_alpha holds; `FloorHalfUp`
 * (h = floor((n+1)/2)) is kept for comparison, it agrees on even n only.
 * Orthogonality of the system holds under either rule since a common lattice
 * shift of both arguments leaves the d_q x / x integral unchanged.
 *
 * On the lattice x = s q^k:
 *   cJ_{g,n}(s q^k) = s^n q^{k n + h (g+n+1)} R_{g+n+1}(k + h),
 * with R_nu(m) = J_nu(q^m;q^2)/q^{m nu} from bessel_ratio_lattice.
 */

#include "qplane/qbessel.hpp"

namespace qplane {

enum class ShiftRule { FloorHalf, FloorHalfUp };

inline int neumann_shift(int n, ShiftRule rule) {
  return rule == ShiftRule::FloorHalf ? half_floor(n) : half_ceil(n);
}

inline const char* to_string(ShiftRule r) { return r == ShiftRule::FloorHalf ? "floor(n/2)" : "floor((n+1)/2)"; }

struct NeumannSystem {
  Rational base_order;
  int max_index = 64;
  ShiftRule shift = ShiftRule::FloorHalf;

  explicit NeumannSystem(Rational g, int max_n = 64, ShiftRule rule = ShiftRule::FloorHalf)
      : base_order(g), max_index(max_n), shift(rule) {
    require(base_order > -1, ErrorKind::InvalidParameter,
            "Neumann base order must satisfy > -1, got " + to_string(base_order));
    require(max_index >= 0, ErrorKind::InvalidParameter, "max_index must be >= 0");
  }

  Rational order(int n) const { return base_order + n + 1; }
  int shift_of(int n) const { return neumann_shift(n, shift); }

  void check_index(int n) const {
    require(n >= 0 && n <= max_index, ErrorKind::DomainError,
            "Neumann index " + std::to_string(n) + " outside 0.." + std::to_string(max_index));
  }
};

inline real neumann_fn(const NeumannSystem& sys, int n, const LatticePoint& x, const QContext& ctx) {
  sys.check_index(n);
  require(!x.is_zero(), ErrorKind::ZeroArgument, "q-Neumann functions are evaluated at nonzero lattice points only");
  PrecisionScope ps(ctx.precision_digits());
  const int h = sys.shift_of(n);
  const Rational nu = sys.order(n);
  real v = ctx.qpow(Rational(static_cast<std::int64_t>(x.k) * n) + nu * h) *
           bessel_ratio_lattice(nu, x.k + h, ctx).value;
  return (x.sign < 0 && n % 2 == 1) ? real(-v) : v;
}

/// cJ_{g,n} at a real nonzero x, via J_nu(y)/y^nu: cJ(x) = x^n q^{h nu} (J_nu/y^nu)(|x| q^h).
inline real neumann_fn(const NeumannSystem& sys, int n, const real& x_in, const QContext& ctx) {
  sys.check_index(n);
  PrecisionScope ps(ctx.precision_digits());
  const real x = promote(x_in);
  require(x != 0, ErrorKind::ZeroArgument, "q-Neumann functions are evaluated at nonzero points only");
  const int h = sys.shift_of(n);
  const Rational nu = sys.order(n);
  const real qh = ctx.qpow(static_cast<long long>(h));
  return boost::multiprecision::pow(x, real(n)) * ctx.qpow(nu * h) *
         bessel_ratio(nu, real(abs_value(x) * qh), ctx.q2(), ctx).value;
}

/// Tabulates cJ_{g,n}(q^k) for n = 0..N and k in [k_lo, k_hi] (positive side);
/// negative points follow from the parity (-1)^n.
class NeumannTable {
 public:
  NeumannTable(const NeumannSystem& sys, int N, int k_lo, int k_hi, const QContext& ctx)
      : N_(N), k_lo_(k_lo), k_hi_(k_hi) {
    PrecisionScope ps(ctx.precision_digits());
    vals_.resize(static_cast<std::size_t>(N + 1));
    for (int n = 0; n <= N; ++n)
      for (int k = k_lo; k <= k_hi; ++k) vals_[static_cast<std::size_t>(n)].push_back(neumann_fn(sys, n, LatticePoint{1, k}, ctx));
  }
  real operator()(int n, const LatticePoint& x) const {
    require(n >= 0 && n <= N_ && x.k >= k_lo_ && x.k <= k_hi_ && !x.is_zero(), ErrorKind::OutOfWindow,
            "Neumann table lookup outside its range");
    const real& v = vals_[static_cast<std::size_t>(n)][static_cast<std::size_t>(x.k - k_lo_)];
    return (x.sign < 0 && n % 2 == 1) ? real(-v) : v;
  }
  int max_n() const { return N_; }

 private:
  int N_, k_lo_, k_hi_;
  std::vector<std::vector<real>> vals_;
};

}  // namespace qplane
