#pragma once

// Scalar types shared by every module: a variable-precision MPFR real, its
// complex counterpart and exact rationals for parameters whose integrality
// drives branch decisions.

#include <boost/multiprecision/mpfr.hpp>
#include <boost/rational.hpp>

#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <string_view>

#include "qplane/error.hpp"

namespace qplane {

using real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;
using complex = std::complex<real>;
// Compare Rational only against Rational or int64_t: with C++20 rewritten
// comparisons, boost 1.74's mixed `rational<int64_t> == int` recurses forever.
using Rational = boost::rational<std::int64_t>;

/// RAII guard for the MPFR default precision (decimal digits).
///
/// The outermost guard sets the precision exactly; nested guards only ever
/// raise it, so a caller that opened a high-precision region is never
/// silently downgraded by a library function that asks for its own default.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned digits) : saved_(real::default_precision()) {
    if (depth() == 0 || digits > saved_) real::default_precision(digits);
    ++depth();
  }
  ~PrecisionScope() {
    --depth();
    real::default_precision(saved_);
  }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

  static unsigned current() { return real::default_precision(); }

 private:
  static int& depth() {
    thread_local int d = 0;
    return d;
  }
  unsigned saved_;
};

/// Copy of x carried at (at least) the active precision. Boost computes
/// results at the precision of their operands, so values handed in by a
/// caller must be promoted before a raised-precision region can use them.
inline real promote(const real& x) {
  real y(x);
  if (y.precision() < real::default_precision()) y.precision(real::default_precision());
  return y;
}
inline std::complex<real> promote(const std::complex<real>& z) {
  return {promote(z.real()), promote(z.imag())};
}

inline real to_real(const Rational& r) {
  return real(r.numerator()) / real(r.denominator());
}

inline bool is_integer(const Rational& r) { return r.denominator() == 1; }

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t d = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --d;
  return d;
}

/// floor((n+1)/2), only defined for n >= 0.
inline int half_ceil(int n) {
  if (n < 0) throw Error(ErrorKind::DomainError, "floor((n+1)/2) requested for negative index " + std::to_string(n));
  return (n + 1) / 2;
}

/// floor(n/2), only defined for n >= 0.
inline int half_floor(int n) {
  if (n < 0) throw Error(ErrorKind::DomainError, "floor(n/2) requested for negative index " + std::to_string(n));
  return n / 2;
}

/// Parses "0.3", "-1.25", "7/10", "2", "1e-3" into an exact rational.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto fail = [&]() -> Rational {
    throw Error(ErrorKind::InvalidParameter, "cannot parse '" + s + "' as an exact rational");
  };
  if (s.empty()) return fail();
  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::int64_t num = 0, den = 0;
    auto r1 = std::from_chars(s.data(), s.data() + slash, num);
    auto r2 = std::from_chars(s.data() + slash + 1, s.data() + s.size(), den);
    if (r1.ec != std::errc{} || r1.ptr != s.data() + slash || r2.ec != std::errc{} ||
        r2.ptr != s.data() + s.size() || den == 0)
      return fail();
    return Rational(num, den);
  }
  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  std::int64_t mantissa = 0;
  int frac_digits = 0, digits = 0;
  bool seen_point = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (c == '.') {
      if (seen_point) return fail();
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      if (++digits > 17) return fail();
      mantissa = mantissa * 10 + (c - '0');
      if (seen_point) ++frac_digits;
    } else {
      break;
    }
  }
  if (digits == 0) return fail();
  int exponent = 0;
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') return fail();
    ++pos;
    auto r = std::from_chars(s.data() + pos + (s[pos] == '+' ? 1 : 0), s.data() + s.size(), exponent);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) return fail();
  }
  exponent -= frac_digits;
  if (exponent > 17 || exponent < -17) return fail();
  std::int64_t scale = 1;
  for (int i = 0; i < std::abs(exponent); ++i) scale *= 10;
  Rational r = exponent >= 0 ? Rational(mantissa * scale) : Rational(mantissa, scale);
  return negative ? -r : r;
}

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// Fixed significant-digit scientific rendering used by every serialized report.
inline std::string format_real(const real& x, int significant = 25) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(significant - 1) << x;
  return os.str();
}

inline double to_double(const real& x) { return x.convert_to<double>(); }

inline real abs_value(const real& x) { return boost::multiprecision::abs(x); }
inline real abs_value(const complex& z) { return std::abs(z); }

inline real pow10(int e) { return boost::multiprecision::pow(real(10), e); }

/// b^e for b > 0 and a rational exponent.
inline real rpow(const real& b, const Rational& e) {
  if (e.numerator() == 0) return real(1);
  if (is_integer(e)) return boost::multiprecision::pow(b, real(e.numerator()));
  return boost::multiprecision::exp(to_real(e) * boost::multiprecision::log(b));
}

/// Principal branch z^e; throws BranchCut on the closed negative real axis
/// for non-integer e.
inline complex principal_pow(const complex& z, const Rational& e) {
  if (is_integer(e)) {
    complex out(real(1), real(0));
    complex base = e >= 0 ? z : complex(real(1), real(0)) / z;
    for (std::int64_t n = e >= 0 ? e.numerator() : -e.numerator(); n > 0; n >>= 1) {
      if (n & 1) out *= base;
      base *= base;
    }
    return out;
  }
  if (z.imag() == 0 && z.real() <= 0) {
    if (z.real() == 0 && e > 0) return complex(real(0), real(0));
    throw Error(ErrorKind::BranchCut, "non-integer power of a non-positive real argument");
  }
  real mod = boost::multiprecision::log(std::abs(z));
  real arg = boost::multiprecision::atan2(z.imag(), z.real());
  real re = to_real(e) * mod, im = to_real(e) * arg;
  real r = boost::multiprecision::exp(re);
  return complex(r * boost::multiprecision::cos(im), r * boost::multiprecision::sin(im));
}

}  // namespace qplane
