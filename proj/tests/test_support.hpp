#pragma once

#include <gtest/gtest.h>

#include <random>

#include "qplane/suites.hpp"

namespace qtest {

using namespace qplane;

/// Relative closeness, or absolute closeness scaled by zero_scale when `want` is 0.
inline ::testing::AssertionResult Close(const complex& got, const complex& want, double tol, double zero_scale = 1.0) {
  const real diff = abs_value(got - want);
  const real mag = abs_value(want);
  const real err = mag != 0 ? real(diff / mag) : real(diff / real(zero_scale));
  if (err <= real(tol)) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << "got (" << format_real(got.real(), 20) << ", " << format_real(got.imag(), 20)
                                       << ") want (" << format_real(want.real(), 20) << ", "
                                       << format_real(want.imag(), 20) << ") err " << format_real(err, 3)
                                       << " > tol " << tol;
}

inline ::testing::AssertionResult Close(const real& got, const real& want, double tol, double zero_scale = 1.0) {
  return Close(complex(got, real(0)), complex(want, real(0)), tol, zero_scale);
}

inline complex cplx(const real& re, const real& im = real(0)) { return complex(re, im); }

inline real R(std::int64_t n, std::int64_t d = 1) { return to_real(Rational(n, d)); }

/// 40-digit working precision and q = 1/2 unless a test asks otherwise.
class QTest : public ::testing::Test {
 protected:
  PrecisionScope ps{40};
  QContext ctx{Rational(1, 2)};
  real q = ctx.q();
};

template <class F>
void expect_error(F&& f, ErrorKind kind) {
  try {
    f();
    ADD_FAILURE() << "expected an error of kind " << to_string(kind);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

}  // namespace qtest
