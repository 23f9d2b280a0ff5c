#include "thetapm/eisenstein.hpp"

namespace thetapm {

namespace {

void check_weight(long k) {
  if (k < 4 || k % 2 != 0) {
    throw std::invalid_argument("eisenstein: weight must be an even integer >= 4");
  }
}

// sigma_{k-1} tail with an arbitrary exact prefactor, assembled in the
// requested ring.
QSeries eisenstein_from(const Rational& constant, const Rational& factor, long k,
                        long precision, const Ring& ring) {
  if (precision < 1) throw std::invalid_argument("eisenstein: precision must be >= 1");
  std::vector<Rational> coeffs;
  coeffs.reserve(static_cast<size_t>(precision));
  coeffs.push_back(constant);
  for (long n = 1; n < precision; ++n) {
    coeffs.push_back(factor * Rational(sigma(static_cast<unsigned long>(k - 1),
                                             static_cast<unsigned long>(n))));
  }
  if (ring.is_modular()) {
    QSeries exact(Ring::rationals(), std::move(coeffs));
    return reduce_series(exact, ring.modulus());
  }
  return QSeries(ring, std::move(coeffs));
}

}  // namespace

QSeries eisenstein_g(long k, long precision, const Ring& ring) {
  check_weight(k);
  const Rational constant =
      -bernoulli(static_cast<unsigned long>(k)) / Rational(2 * k);
  return eisenstein_from(constant, Rational(1), k, precision, ring);
}

QSeries eisenstein_e(long k, long precision, const Ring& ring) {
  check_weight(k);
  const Rational factor =
      Rational(-2 * k) / bernoulli(static_cast<unsigned long>(k));
  return eisenstein_from(Rational(1), factor, k, precision, ring);
}

QSeries g2_series(long precision, const Ring& ring) {
  return eisenstein_from(Rational(-1, 24), Rational(1), 2, precision, ring);
}

QSeries e2_series(long precision, const Ring& ring) {
  return eisenstein_from(Rational(1), Rational(-24), 2, precision, ring);
}

QSeries delta_series(long precision, const Ring& ring) {
  const Ring z = Ring::integers();
  const QSeries e4 = eisenstein_e(4, precision, z);
  const QSeries e6 = eisenstein_e(6, precision, z);
  const QSeries numerator = sub(pow(e4, 3), pow(e6, 2));
  std::vector<Rational> coeffs;
  coeffs.reserve(static_cast<size_t>(precision));
  for (long n = 0; n < precision; ++n) {
    Rational c = numerator.coeff(n) / 1728;
    if (c.get_den() != 1) throw std::logic_error("delta_series: 1728 does not divide E4^3 - E6^2");
    coeffs.push_back(std::move(c));
  }
  QSeries result(z, std::move(coeffs));
  if (ring.is_modular()) return reduce_series(result, ring.modulus());
  if (ring.kind() == RingKind::rationals) return rationalize(result);
  return result;
}

QSeries g_star(long k, long p, int t, long precision) {
  if (k < 2 || k % 2 != 0) throw std::invalid_argument("g_star: weight must be even and >= 2");
  if (k % (p - 1) == 0) {
    throw DivisibilityViolation("g_star: requires (p-1) not dividing k");
  }
  const PrimePowerModulus mod(p, t);
  Integer shift = mod.prime_power(t - 1) * (p - 1);
  const long shifted = k + shift.get_si();
  return eisenstein_g(shifted, precision, Ring::mod(mod));
}

QSeries g_star_direct(long k, long p, int t, long precision) {
  if (k < 2 || k % 2 != 0) throw std::invalid_argument("g_star_direct: weight must be even and >= 2");
  if (k % (p - 1) == 0) {
    throw DivisibilityViolation("g_star_direct: requires (p-1) not dividing k");
  }
  const PrimePowerModulus mod(p, t);
  // The restricted divisor sum pins only the nonconstant coefficients; the
  // constant term is taken from the shifted Eisenstein series.
  const QSeries reference = g_star(k, p, t, 1);
  std::vector<Rational> coeffs;
  coeffs.reserve(static_cast<size_t>(precision));
  coeffs.push_back(reference.coeff(0));
  for (long n = 1; n < precision; ++n) {
    coeffs.push_back(Rational(mod_reduce(
        sigma_star(static_cast<unsigned long>(k - 1), static_cast<unsigned long>(n), p),
        mod.modulus())));
  }
  return QSeries(Ring::mod(mod), std::move(coeffs));
}

}  // namespace thetapm
