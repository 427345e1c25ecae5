#include "test_support.hpp"

using namespace qtest;

class Neumann : public QTest {};
class Expansion : public QTest {};

TEST_F(Neumann, OrderZeroIsUnshiftedBessel) {
  const NeumannSystem sys(Rational(3, 10), 8);
  // cJ_0(x) = J_{1.3}(x;q^2)/x^{1.3} at x = q^2
  const real x = ctx.qpow(2LL);
  const real want = jackson3_bessel(BesselOrder(Rational(13, 10)), cplx(x), ctx.q2(), ctx).value.real() /
                    pow(x, R(13, 10));
  EXPECT_TRUE(Close(neumann_fn(sys, 0, LatticePoint{1, 2}, ctx), want, 1e-34));
  EXPECT_TRUE(Close(neumann_fn(sys, 0, x, ctx), want, 1e-34));
}

TEST_F(Neumann, LatticeAndRealRoutesAgree) {
  for (ShiftRule rule : {ShiftRule::FloorHalf, ShiftRule::FloorHalfUp}) {
    const NeumannSystem sys(Rational(1), 6, rule);
    for (int n = 0; n <= 6; ++n)
      for (int k = -3; k <= 6; ++k)
        for (int s : {1, -1}) {
          const LatticePoint x{s, k};
          EXPECT_TRUE(Close(neumann_fn(sys, n, x, ctx), neumann_fn(sys, n, x.value(ctx), ctx), 1e-30, 1e-30))
              << n << " " << s << " " << k;
        }
  }
}

TEST_F(Neumann, Parity) {
  const NeumannSystem sys(Rational(3, 10), 6);
  for (int n = 0; n <= 6; ++n)
    for (int k = -2; k <= 4; ++k) {
      const real sign = n % 2 == 0 ? real(1) : real(-1);
      EXPECT_EQ(neumann_fn(sys, n, LatticePoint{-1, k}, ctx), sign * neumann_fn(sys, n, LatticePoint{1, k}, ctx));
    }
}

TEST_F(Neumann, ShiftRules) {
  EXPECT_EQ(neumann_shift(0, ShiftRule::FloorHalf), 0);
  EXPECT_EQ(neumann_shift(1, ShiftRule::FloorHalf), 0);
  EXPECT_EQ(neumann_shift(5, ShiftRule::FloorHalf), 2);
  EXPECT_EQ(neumann_shift(1, ShiftRule::FloorHalfUp), 1);
  EXPECT_EQ(neumann_shift(5, ShiftRule::FloorHalfUp), 3);
  // n = 1 under floor((n+1)/2): x J_{a+2}(x q)/(x q)^{a+2} q^{a+2}
  const NeumannSystem up(Rational(3, 10), 2, ShiftRule::FloorHalfUp);
  const real x = ctx.qpow(3LL);
  const real y = x * q;
  const real want =
      x * pow(q, R(23, 10)) * jackson3_bessel(BesselOrder(Rational(23, 10)), cplx(y), ctx.q2(), ctx).value.real() /
      pow(y, R(23, 10));
  EXPECT_TRUE(Close(neumann_fn(up, 1, LatticePoint{1, 3}, ctx), want, 1e-33));
}

TEST_F(Neumann, Errors) {
  const NeumannSystem sys(Rational(3, 10), 4);
  expect_error([&] { neumann_fn(sys, 0, LatticePoint::zero(), ctx); }, ErrorKind::ZeroArgument);
  expect_error([&] { neumann_fn(sys, 0, real(0), ctx); }, ErrorKind::ZeroArgument);
  expect_error([&] { neumann_fn(sys, 5, LatticePoint{1, 0}, ctx); }, ErrorKind::DomainError);
  expect_error([&] { neumann_fn(sys, -1, LatticePoint{1, 0}, ctx); }, ErrorKind::DomainError);
  expect_error([] { NeumannSystem(Rational(-1)); }, ErrorKind::InvalidParameter);
  const NeumannTable tab(sys, 2, 0, 5, ctx);
  expect_error([&] { tab(3, {1, 0}); }, ErrorKind::OutOfWindow);
  expect_error([&] { tab(0, {1, 6}); }, ErrorKind::OutOfWindow);
}

TEST_F(Neumann, TableMatchesDirect) {
  const NeumannSystem sys(Rational(3, 10), 5);
  const NeumannTable tab(sys, 5, -4, 10, ctx);
  for (int n = 0; n <= 5; ++n)
    for (int k = -4; k <= 10; ++k) EXPECT_EQ(tab(n, {-1, k}), neumann_fn(sys, n, LatticePoint{-1, k}, ctx));
}

TEST_F(Neumann, OnlyFloorHalfReproducesTheKernel) {
  // both shift rules give orthogonal systems; only floor(n/2) expands E_alpha
  const auto good = qbessel_orthogonality_suite(Rational(1), 4, ctx, ShiftRule::FloorHalf);
  const auto up = qbessel_orthogonality_suite(Rational(1), 4, ctx, ShiftRule::FloorHalfUp);
  EXPECT_LT(good.offdiag_max, real(1e-28));
  EXPECT_LT(up.offdiag_max, real(1e-28));
  const PolyParams p(Rational(3, 10), Rational(7, 10));
  const real t = q;
  const complex want = dunkl_kernel(KernelParams(p.alpha), t, ctx).value;
  const complex a = kernel_expansion_partial({1, 0}, t, p, 24, ctx, ShiftRule::FloorHalf).value;
  const complex b = kernel_expansion_partial({1, 0}, t, p, 24, ctx, ShiftRule::FloorHalfUp).value;
  EXPECT_TRUE(Close(a, want, 1e-25));
  EXPECT_GT(abs_value(b - want), real(1e-2));
  EXPECT_TRUE(Close(complex(b.real(), real(0)), complex(want.real(), real(0)), 1e-25));
}

TEST_F(Expansion, IMinusVanishesOutsideUnitInterval) {
  const PolyParams p(Rational(3, 10), Rational(7, 10));
  for (int n = 0; n <= 3; ++n) {
    EXPECT_EQ(i_minus(p, n, {1, -2}, ctx), real(0));
    EXPECT_LT(abs_value(i_minus_plus_oracle(p, n, {1, -2}, false, ctx)), pow10(-34)) << n;
  }
}

TEST_F(Expansion, IMinusPlusMatchOracle) {
  const PolyParams p(Rational(3, 10), Rational(7, 10));
  EXPECT_TRUE(Close(i_minus(p, 1, {1, 3}, ctx), i_minus_plus_oracle(p, 1, {1, 3}, false, ctx), 1e-30));
  EXPECT_TRUE(Close(i_plus(p, 0, {1, 2}, ctx), i_minus_plus_oracle(p, 0, {1, 2}, true, ctx), 1e-30));
  for (const PolyParams& pp : {p, PolyParams(Rational(-2, 5), Rational(6, 5))})
    for (int n = 0; n <= 3; ++n)
      for (int j = 0; j <= 6; ++j) {
        EXPECT_TRUE(Close(i_minus(pp, n, {1, j}, ctx), i_minus_plus_oracle(pp, n, {1, j}, false, ctx), 1e-28, 1))
            << n << " " << j;
        EXPECT_TRUE(Close(i_plus(pp, n, {1, j}, ctx), i_minus_plus_oracle(pp, n, {1, j}, true, ctx), 1e-28, 1))
            << n << " " << j;
      }
}

TEST_F(Expansion, PrintedIPlusExponentIsRejected) {
  const PolyParams p(Rational(3, 10), Rational(7, 10));
  EXPECT_EQ(i_plus(p, 0, {1, 2}, ctx, IPlusExponent::Printed), i_plus(p, 0, {1, 2}, ctx));
  for (int n = 1; n <= 3; ++n) {
    const real oracle = i_minus_plus_oracle(p, n, {1, 2}, true, ctx);
    EXPECT_GT(abs_value(i_plus(p, n, {1, 2}, ctx, IPlusExponent::Printed) - oracle) / abs_value(oracle), real(1e-6))
        << n;
  }
}

TEST_F(Expansion, IMinusPlusErrors) {
  const PolyParams p(Rational(3, 10), Rational(7, 10));
  expect_error([&] { i_plus(p, 1, {1, -1}, ctx); }, ErrorKind::DomainError);
  expect_error([&] { i_minus(p, -1, {1, 1}, ctx); }, ErrorKind::DomainError);
  expect_error([&] { i_minus(p, 0, {-1, 1}, ctx); }, ErrorKind::DomainError);
}

TEST_F(Expansion, Biorthogonality) {
  const PolyParams p(Rational(3, 10), Rational(7, 10));
  EXPECT_TRUE(Close(biorthogonal_pairing(0, 0, p, ctx), real(1), 1e-30));
  EXPECT_LT(abs_value(biorthogonal_pairing(2, 3, p, ctx)), pow10(-36));
  EXPECT_LT(abs_value(biorthogonal_pairing(2, 0, p, ctx)), pow10(-30));
  for (int n = 0; n <= 4; ++n)
    for (int m = 0; m <= 4; ++m) {
      const real v = biorthogonal_pairing(n, m, p, ctx);
      if (n == m) {
        EXPECT_TRUE(Close(v, real(1), 1e-28)) << n;
      } else {
        EXPECT_LT(abs_value(v), pow10(-28)) << n << "," << m;
      }
    }
  // Q_n = w P_n / h_n
  const real t = R(3, 5);
  EXPECT_TRUE(Close(biorthogonal_Q(2, t, p, ctx),
                    gegenbauer_weight(t, p.beta, ctx) * biorthogonal_P(2, t, p, ctx) / gegenbauer_norm(2, p, ctx),
                    1e-36));
  EXPECT_EQ(biorthogonal_Q(2, LatticePoint{1, -1}, p, ctx), real(0));
}

TEST_F(Expansion, LemmaLowIndices) {
  const PolyParams p(Rational(3, 10), Rational(7, 10));
  for (int k : {0, 1}) {
    const Report r = lemma_qFPQ_check(k, p, -3, 10, ctx, real(1e-24));
    EXPECT_TRUE(r.all_pass) << k << " max " << format_real(r.max_rel_err, 3);
    EXPECT_FALSE(r.cases.empty());
  }
}

TEST_F(Expansion, LemmaEvenCaseIsHankelIdentity) {
  // k = 0: F(cJ_0) on even input is H_alpha(cJ_0) and equals c_0 Q_0 on (0,1]
  const PolyParams p(Rational(3, 10), Rational(7, 10));
  const NeumannSystem sys(p.alpha + p.beta, 1);
  const auto [lo, hi] = neumann_transform_window(0, p, Rational(0), ctx, 0);
  const auto h = hankel_transform_fn([&](const LatticePoint& x) { return neumann_fn(sys, 0, x, ctx); }, p.alpha, lo, hi,
                                     OutputWindow{0, 6}, ctx);
  const complex c0 = qfq_constant(0, p, ctx);
  for (int j = 0; j <= 6; ++j)
    EXPECT_TRUE(Close(h.at({1, j}), c0 * biorthogonal_Q(0, LatticePoint{1, j}, p, ctx), 1e-28)) << j;
}

TEST_F(Expansion, TransformOfNeumannVanishesOutside) {
  const PolyParams p(Rational(3, 10), Rational(7, 10));
  const NeumannSystem sys(p.alpha + p.beta, 3);
  for (int k = 0; k <= 3; ++k) {
    const auto [lo, hi] = neumann_transform_window(k, p, Rational(0), ctx, -3);
    const auto F = dunkl_transform_fn([&](const LatticePoint& x) { return neumann_fn(sys, k, x, ctx); }, p.alpha, lo,
                                      hi, OutputWindow{-3, 0}, false, ctx);
    const real scale = abs_value(F.at({1, 0}));
    for (int s : {1, -1}) EXPECT_LT(abs_value(F.at({s, -3})), scale * pow10(-28)) << k;
  }
}

TEST_F(Expansion, KernelPartialSmallX) {
  const PolyParams p(Rational(3, 10), Rational(7, 10));
  const KernelParams kp(p.alpha);
  const LatticePoint x{1, 5};
  for (const real& t : {real(1), R(1, 2), R(-3, 4)}) {
    const complex want = dunkl_kernel(kp, real(x.value(ctx) * t), ctx).value;
    const auto s0 = kernel_expansion_partial(x, t, p, 0, ctx);
    const auto s1 = kernel_expansion_partial(x, t, p, 1, ctx);
    // the first omitted term bounds the error up to a small factor
    EXPECT_LE(abs_value(s0.value - want), 2 * s1.err_estimate);
    EXPECT_LT(abs_value(s1.value - want), abs_value(s0.value - want));
  }
}

TEST_F(Expansion, KernelResidualsDecrease) {
  const PolyParams p(Rational(3, 10), Rational(7, 10));
  const auto rs = kernel_expansion_residuals({1, 0}, p, 12, ctx);
  ASSERT_EQ(rs.l2.size(), 13u);
  for (std::size_t n = 1; n < rs.l2.size(); ++n) EXPECT_LE(rs.l2[n], rs.l2[n - 1]) << n;
  EXPECT_LT(rs.l2.back(), real(1e-12));
  EXPECT_LT(rs.sup.back(), real(1e-10));
}

TEST_F(Expansion, KernelConjugateSymmetry) {
  const PolyParams p(Rational(3, 10), Rational(7, 10));
  for (const real& t : {R(1, 3), q, real(1)}) {
    const complex a = kernel_expansion_partial({1, 1}, t, p, 10, ctx).value;
    const complex b = kernel_expansion_partial({1, 1}, real(-t), p, 10, ctx).value;
    EXPECT_TRUE(Close(b, std::conj(a), 1e-36));
  }
}

TEST_F(Expansion, PlaneWaveAtZero) {
  const LatticePoint x{1, 1};
  for (int N : {0, 3, 8}) {
    const complex v = plane_wave_partial(x, real(0), Rational(3, 4), N, ctx).value;
    const complex odd_free = plane_wave_partial(x, real(0), Rational(3, 4), N - N % 2, ctx).value;
    EXPECT_EQ(v, odd_free) << N;
  }
  const complex want = rubin_exp(cplx(real(0)), q, ctx).value;
  EXPECT_TRUE(Close(want, cplx(real(1)), 1e-38));
  EXPECT_TRUE(Close(plane_wave_partial(x, real(0), Rational(3, 4), 30, ctx).value, want, 1e-30));
}

TEST_F(Expansion, PlaneWaveConverges) {
  const auto rs = plane_wave_residuals({1, 1}, Rational(3, 4), 14, ctx);
  EXPECT_LT(rs.l2.back(), real(1e-12));
  const real t = ctx.q2();
  const complex want = rubin_exp(complex(real(0), real(q * t)), q, ctx).value;
  EXPECT_TRUE(Close(plane_wave_partial({1, 1}, t, Rational(3, 4), 14, ctx).value, want, 1e-12));
}

TEST_F(Expansion, PlaneWaveIsKernelSpecialCase) {
  const Rational beta(3, 4);
  const PolyParams p(Rational(-1, 2), beta - Rational(1, 2));
  for (const real& t : {R(1, 3), q, R(-9, 10)})
    for (int k : {-1, 0, 2}) {
      const LatticePoint x{1, k};
      EXPECT_TRUE(Close(plane_wave_partial(x, t, beta, 9, ctx).value, kernel_expansion_partial(x, t, p, 9, ctx).value,
                        1e-32, 1))
          << k;
    }
  expect_error([&] { plane_wave_partial({1, 0}, q, Rational(-1, 2), 3, ctx); }, ErrorKind::InvalidParameter);
}

TEST_F(Expansion, HankelKernelIsEvenHalf) {
  const PolyParams p(Rational(3, 10), Rational(7, 10));
  const LatticePoint x{1, 0};
  const real t = ctx.q2();
  for (int N : {2, 5}) {
    // (K(t) + K(-t))/2 collects the n = 0, 2, .. terms; E_alpha's even part is C J_alpha(y)/y^alpha
    const complex k1 = kernel_expansion_partial(x, t, p, 2 * N + 1, ctx).value;
    const complex k2 = kernel_expansion_partial(x, real(-t), p, 2 * N + 1, ctx).value;
    EXPECT_TRUE(Close(dunkl_kernel_constant(p.alpha, ctx) * hankel_kernel_partial(x, t, p, N, ctx).value,
                      (k1 + k2) / real(2), 1e-32))
        << N;
  }
}

TEST_F(Expansion, HankelKernelConverges) {
  const PolyParams p(Rational(3, 10), Rational(7, 10));
  const LatticePoint x{1, 0};
  const real ref = hankel_kernel_reference({1, 2}, p.alpha, ctx);
  EXPECT_LT(abs_value(hankel_kernel_partial(x, ctx.q2(), p, 8, ctx).value - cplx(ref)), real(1e-12));
  EXPECT_EQ(hankel_kernel_partial(x, ctx.q2(), p, 8, ctx).value,
            hankel_kernel_partial(x, real(-ctx.q2()), p, 8, ctx).value);
  // R_alpha against the series form
  const real direct = bessel_ratio(p.alpha, ctx.q2(), ctx.q2(), ctx).value;
  EXPECT_TRUE(Close(ref, direct, 1e-34));
}

TEST_F(Expansion, ZeroDataReconstructsToZero) {
  const PolyParams p(Rational(3, 10), Rational(7, 10));
  const PWSpec spec(LatticeFunction(0, 8, true), p.alpha);
  const auto f = pw_synthesize(spec, pw_window(p.alpha, 8, ctx), ctx);
  for (const auto& x : f.points()) EXPECT_EQ(f.at(x), cplx(real(0)));
  const auto [ec, g] = neumann_reconstruct(f, p, 6, {0, 10}, ctx);
  for (const auto& a : ec.coeffs) EXPECT_EQ(a, cplx(real(0)));
  for (const auto& x : g.points()) EXPECT_EQ(g.at(x), cplx(real(0)));
}

TEST_F(Expansion, SingleModeIsExactAtOrderZero) {
  const PolyParams p(Rational(3, 10), Rational(7, 10));
  const int jm = unit_window(p.alpha, ctx) + 2;
  LatticeFunction u(0, jm, true);
  for (const auto& t : u.points()) u.set(t, cplx(biorthogonal_Q(0, t, p, ctx)));
  const auto f = pw_synthesize(PWSpec(u, p.alpha), pw_window(p.alpha + p.beta, jm, ctx), ctx);
  const auto [ec, g] = neumann_reconstruct(f, p, 0, {0, 10}, ctx);
  for (const auto& x : g.points()) EXPECT_TRUE(Close(g.at(x), f.at(x), 1e-25, 1)) << x.sign << " " << x.k;
}

TEST_F(Expansion, RandomSpectrumReconstructs) {
  const PolyParams p(Rational(3, 10), Rational(7, 10));
  const PWSpec spec = random_pw_spec(p.alpha, 4, 10, 99, ctx);
  const auto f = pw_synthesize(spec, pw_window(p.alpha, 10, ctx), ctx);
  const auto [ec, g] = neumann_reconstruct(f, p, 16, {0, 10}, ctx);
  EXPECT_EQ(ec.coeffs.size(), 17u);
  real err = 0;
  for (const auto& x : g.points()) err = std::max(err, abs_value(g.at(x) - f.at(x)));
  EXPECT_LT(err, real(1e-10));
}

TEST_F(Expansion, SnIsScaledNeumannFunction) {
  const PolyParams p(Rational(3, 10), Rational(7, 10));
  const NeumannSystem sys(p.alpha + p.beta, 3);
  for (int n = 0; n <= 3; ++n) {
    const auto S = sn_direct(n, p, {-2, 8}, ctx);
    const complex sigma = sn_constant(n, p, ctx);
    for (const auto& x : S.points()) EXPECT_TRUE(Close(S.at(x), sigma * neumann_fn(sys, n, x, ctx), 1e-26, 1)) << n;
  }
}

TEST_F(Expansion, CoefficientsMatchTnPairing) {
  const PolyParams p(Rational(3, 10), Rational(7, 10));
  const OutputWindow win = pw_window(p.alpha, 6, ctx);
  const auto f = pw_synthesize(random_pw_spec(p.alpha, 3, 6, 5, ctx), win, ctx);
  const auto [ec, g] = neumann_reconstruct(f, p, 4, {0, 2}, ctx);
  for (int n = 0; n <= 4; ++n) {
    const complex cn = pairing_with_tn(f, tn_direct(n, p, win, ctx), p.alpha, ctx);
    const complex pred = cn * sn_constant(n, p, ctx) / (1 - ctx.qpow(2 * (p.alpha + p.beta + n + 1)));
    EXPECT_TRUE(Close(ec.coeffs[static_cast<std::size_t>(n)], pred, 1e-24, 1)) << n;
  }
}

TEST_F(Expansion, CachedAndFreshValuesAreIdentical) {
  const PolyParams p(Rational(3, 10), Rational(7, 10));
  const complex a = kernel_coefficient(3, p, ctx), b = kernel_coefficient(3, p, ctx);
  EXPECT_EQ(a, b);
  const real r1 = bessel_ratio_lattice(Rational(13, 10), 4, ctx).value;
  const QContext fresh(Rational(1, 2));
  EXPECT_EQ(r1, bessel_ratio_lattice(Rational(13, 10), 4, fresh).value);
  EXPECT_EQ(pochhammer_q2_inf(Rational(13, 5), ctx), pochhammer_q2_inf(Rational(13, 5), fresh));
  EXPECT_EQ(kernel_expansion_partial({1, 0}, q, p, 6, ctx).value, kernel_expansion_partial({1, 0}, q, p, 6, fresh).value);
}
