#pragma once

#include <optional>
#include <string>
#include <vector>

#include "thetapm/arith.hpp"

namespace thetapm {

enum class RingKind { rationals, integers, mod_prime_power };

// Descriptor of a coefficient domain: Q, Z, or Z/p^m Z.  Domains are closed;
// there is no implicit promotion between them, only the explicit maps
// reduce_series / lift_series / rationalize below.
class Ring {
 public:
  static Ring rationals() { return Ring(RingKind::rationals, std::nullopt); }
  static Ring integers() { return Ring(RingKind::integers, std::nullopt); }
  static Ring mod(PrimePowerModulus m) { return Ring(RingKind::mod_prime_power, std::move(m)); }

  RingKind kind() const { return kind_; }
  bool is_modular() const { return kind_ == RingKind::mod_prime_power; }
  const PrimePowerModulus& modulus() const {
    if (!mod_) throw std::logic_error("Ring: modulus() of a non-modular ring");
    return *mod_;
  }

  std::string name() const;

  friend bool operator==(const Ring& a, const Ring& b) {
    if (a.kind_ != b.kind_) return false;
    if (a.kind_ != RingKind::mod_prime_power) return true;
    return *a.mod_ == *b.mod_;
  }

 private:
  Ring(RingKind kind, std::optional<PrimePowerModulus> mod)
      : kind_(kind), mod_(std::move(mod)) {}
  RingKind kind_;
  std::optional<PrimePowerModulus> mod_;
};

// A truncated q-expansion a_0 + a_1 q + ... + a_{N-1} q^{N-1}, known modulo
// q^N, over one of the three coefficient domains.  Values are immutable after
// construction and all operations are pure, so series can be shared freely
// across threads.
//
// Precision bookkeeping is strict: every operation records the guaranteed
// precision of its output, and comparisons past guaranteed precision raise
// InsufficientPrecision rather than silently truncating.
class QSeries {
 public:
  // Coefficients must already belong to the declared domain: denominators 1
  // for Z, canonical residues are produced by reduction mod p^m for Z/p^m Z
  // (integer inputs are accepted and canonicalized).
  QSeries(Ring ring, std::vector<Rational> coeffs);

  static QSeries zero(const Ring& ring, long precision);
  static QSeries constant(const Ring& ring, const Rational& value, long precision);

  const Ring& ring() const { return ring_; }
  long precision() const { return static_cast<long>(coeffs_.size()); }
  const Rational& coeff(long n) const;
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  bool is_zero() const;

  friend bool operator==(const QSeries& a, const QSeries& b) {
    return a.ring_ == b.ring_ && a.coeffs_ == b.coeffs_;
  }

 private:
  Ring ring_;
  std::vector<Rational> coeffs_;
};

// Ring operations.  Operands must live over the same domain (DomainMismatch
// otherwise); the result precision is the minimum of the input precisions.
QSeries add(const QSeries& f, const QSeries& g);
QSeries sub(const QSeries& f, const QSeries& g);
QSeries mul(const QSeries& f, const QSeries& g);
QSeries scale(const Rational& c, const QSeries& f);
QSeries negate(const QSeries& f);

// Binary exponentiation of the truncated product; pow(f, 0) = 1 at f's
// precision.
QSeries pow(const QSeries& f, unsigned long e);

inline QSeries operator+(const QSeries& f, const QSeries& g) { return add(f, g); }
inline QSeries operator-(const QSeries& f, const QSeries& g) { return sub(f, g); }
inline QSeries operator*(const QSeries& f, const QSeries& g) { return mul(f, g); }
inline QSeries operator*(const Rational& c, const QSeries& f) { return scale(c, f); }

// q d/dq on expansions: coefficient n is multiplied by n.  Precision is
// preserved.
QSeries theta_naive(const QSeries& f);

// The V operator, sum a_n q^n |-> sum a_n q^{np}.  Output precision is
// p * (input precision); callers wanting N output coefficients must supply
// ceil(N/p) input coefficients.
QSeries apply_V(const QSeries& f, long p);

// First `precision` coefficients of f.
QSeries truncate(const QSeries& f, long precision);

// True iff every coefficient of f - g up to `upto` (default: the shared
// precision) has p-adic valuation >= t.  Accepts Q/Z series in any mix, or
// two modular series over powers of the same p with exponents >= t.
bool congruent_mod(const QSeries& f, const QSeries& g, long p, int t,
                   std::optional<long> upto = std::nullopt);

// min_n vp(a_n); +infinity for the zero series.  Exact domains only.
Valuation series_vp(const QSeries& f, long p);

// Minimum valuation of the coefficients of a Z/p^m Z series, capped at m
// (a residue that vanishes mod p^m carries valuation at least m; more is not
// knowable).  Used for the v_p(f) = 0 side conditions.
Valuation series_vp_capped(const QSeries& f);

// Explicit domain maps.
QSeries reduce_series(const QSeries& f, const PrimePowerModulus& mod);
QSeries lift_series(const QSeries& f);        // Z/p^m Z -> Z, canonical lift
QSeries rationalize(const QSeries& f);        // Z -> Q

// JSON serialization:
//   {"ring": "Q"|"Z"|"Zpm", "p": int?, "m": int?, "precision": N,
//    "coeffs": [decimal strings, rationals as "a/b"]}
// The round trip is bit-exact.
std::string to_json(const QSeries& f);
QSeries qseries_from_json(const std::string& text);

}  // namespace thetapm
