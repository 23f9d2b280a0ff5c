#pragma once

#include "thetapm/qseries.hpp"

namespace thetapm {

// Generators of the level-1 Eisenstein q-expansions.
//
//   G_k = -B_k/2k + sum_{n>=1} sigma_{k-1}(n) q^n          (k even, >= 4)
//   E_k = -(2k/B_k) G_k                                    (constant term 1)
//   G_2 = -1/24 + sum_{n>=1} sigma_1(n) q^n,  E_2 = -24 G_2
//
// Over Z/p^m Z the constant term (resp. the normalization factor) is reduced
// exactly; a non-p-integral value raises NonInvertibleDenominator, which for
// G_k happens precisely when (p-1) | k.

QSeries eisenstein_g(long k, long precision, const Ring& ring);
QSeries eisenstein_e(long k, long precision, const Ring& ring);
QSeries g2_series(long precision, const Ring& ring);
QSeries e2_series(long precision, const Ring& ring);

// The discriminant cusp form, delta = (E_4^3 - E_6^2)/1728, normalized with
// a_1 = +1.  Integral.
QSeries delta_series(long precision, const Ring& ring);

// Truncation mod p^t of the p-adic Eisenstein series of weight k: for
// (p-1) not dividing k it equals G_{k + p^(t-1)(p-1)} mod p^t.  Throws
// DivisibilityViolation when (p-1) | k.
QSeries g_star(long k, long p, int t, long precision);

// The same series with nonconstant coefficients computed directly as
// restricted divisor sums, coefficient n = sigma*_{k-1}(n) mod p^t for n >= 1.
// The constant term is copied from g_star; the two generators cross-check
// each other on all nonconstant coefficients.
QSeries g_star_direct(long k, long p, int t, long precision);

}  // namespace thetapm
