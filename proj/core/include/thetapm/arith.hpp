#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>

#include "thetapm/errors.hpp"

namespace thetapm {

// Exact arbitrary-precision integers and rationals, backed by GMP.
// mpq_class keeps fractions canonical (denominator > 0, gcd(num, den) = 1),
// which is exactly the invariant we need for Bernoulli numbers and Eisenstein
// constant terms.
using Integer = mpz_class;
using Rational = mpq_class;

// p-adic valuation with a dedicated +infinity for the valuation of zero.
// Never a magic integer: vp(0) occurs naturally as the valuation of the zero
// series and must compare larger than every finite valuation.
class Valuation {
 public:
  static Valuation infinity() { return Valuation(true, 0); }
  static Valuation of(long v) { return Valuation(false, v); }

  bool is_infinite() const { return infinite_; }

  // Finite value; it is a logic error to ask for the value of +infinity.
  long value() const {
    if (infinite_) throw std::logic_error("Valuation: value() of +infinity");
    return value_;
  }

  friend bool operator==(const Valuation& a, const Valuation& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
    if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
    if (a.infinite_) return std::strong_ordering::greater;
    if (b.infinite_) return std::strong_ordering::less;
    return a.value_ <=> b.value_;
  }
  friend bool operator>=(const Valuation& a, long b) {
    return a.infinite_ || a.value_ >= b;
  }

  // vp(xy) = vp(x) + vp(y); infinity absorbs.
  friend Valuation operator+(const Valuation& a, const Valuation& b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return of(a.value_ + b.value_);
  }

  std::string str() const { return infinite_ ? "+inf" : std::to_string(value_); }

 private:
  Valuation(bool inf, long v) : infinite_(inf), value_(v) {}
  bool infinite_;
  long value_;
};

// A prime power p^m with p >= 5 prime and m >= 1.  The modulus value is
// cached.  Instances are immutable and cheap to copy.
class PrimePowerModulus {
 public:
  PrimePowerModulus(long p, int m);

  long p() const { return p_; }
  int exponent() const { return m_; }
  const Integer& modulus() const { return modulus_; }

  // p^e for 0 <= e <= m, taken from the cached power ladder.
  Integer prime_power(int e) const;

  friend bool operator==(const PrimePowerModulus& a, const PrimePowerModulus& b) {
    return a.p_ == b.p_ && a.m_ == b.m_;
  }

 private:
  long p_;
  int m_;
  Integer modulus_;
};

// An element of Z/p^m Z in canonical form, 0 <= value < p^m.
struct Residue {
  Integer value;
  PrimePowerModulus mod;
};

// Deterministic trial-division primality test; adequate for the desk-scale
// moduli and Hecke indices this library deals with.
bool is_prime(long n);

// Binomial coefficient C(n, k), exact.
Integer binomial(unsigned long n, unsigned long k);

// k-th Bernoulli number, computed through the convolution recurrence
//   sum_{j=0}^{n} C(n+1, j) B_j = 0   (n >= 1)
// with B_0 = 1 and the convention B_1 = -1/2.  Values are memoized in a
// growable table behind a mutex; concurrent readers see consistent values.
Rational bernoulli(unsigned long k);

// Divisor power sum sigma_t(n) = sum_{d | n} d^t, n >= 1.
Integer sigma(unsigned long t, unsigned long n);

// Divisor power sum restricted to divisors prime to p.
Integer sigma_star(unsigned long t, unsigned long n, long p);

// p-adic valuations.  vp(0) = +infinity.
Valuation vp(const Integer& x, long p);
Valuation vp(const Rational& x, long p);

// a^(-1) mod modulus; throws NonInvertibleDenominator when gcd(a, modulus) > 1.
Integer mod_inverse(const Integer& a, const Integer& modulus);

// base^exp mod modulus, exp >= 0.
Integer mod_pow(const Integer& base, const Integer& exp, const Integer& modulus);

// Canonical representative of x in [0, modulus).
Integer mod_reduce(const Integer& x, const Integer& modulus);

// numerator * denominator^(-1) mod p^m.  Requires vp(denominator, p) = 0;
// otherwise throws NonInvertibleDenominator.
Residue reduce_rational(const Rational& x, const PrimePowerModulus& mod);

}  // namespace thetapm
