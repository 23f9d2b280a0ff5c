#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "thetapm/eisenstein.hpp"
#include "thetapm/qseries.hpp"

using namespace thetapm;

namespace {

const Ring Q = Ring::rationals();
const Ring Z = Ring::integers();

QSeries make(const Ring& ring, std::vector<long> values) {
  std::vector<Rational> coeffs;
  for (long v : values) coeffs.emplace_back(v);
  return QSeries(ring, std::move(coeffs));
}

QSeries random_series(std::mt19937_64& rng, const Ring& ring, long precision) {
  std::vector<Rational> coeffs;
  for (long i = 0; i < precision; ++i) {
    coeffs.emplace_back(static_cast<long>(rng() % 19) - 9);
  }
  return QSeries(ring, std::move(coeffs));
}

}  // namespace

TEST_CASE("truncated product and sum") {
  const QSeries a = make(Q, {1, 1, 0});
  const QSeries b = make(Q, {1, -1, 0});
  const QSeries product = mul(a, b);
  CHECK(product.precision() == 3);
  CHECK(product.coeff(0) == 1);
  CHECK(product.coeff(1) == 0);
  CHECK(product.coeff(2) == -1);
  CHECK(add(a, b) == make(Q, {2, 0, 0}));
}

TEST_CASE("scaling by zero gives the zero series") {
  const QSeries f = make(Z, {3, -2, 5, 7});
  CHECK(scale(Rational(0), f).is_zero());
  CHECK(scale(Rational(0), f).precision() == 4);
}

TEST_CASE("E4 * E6 matches E10") {
  const QSeries lhs = mul(eisenstein_e(4, 10, Q), eisenstein_e(6, 10, Q));
  const QSeries rhs = eisenstein_e(10, 10, Q);
  CHECK(lhs == rhs);
}

TEST_CASE("pow basics") {
  const QSeries f = make(Q, {1, 1, 0, 0});
  CHECK(pow(f, 0) == QSeries::constant(Q, Rational(1), 4));
  const QSeries square = pow(f, 2);
  CHECK(square.coeff(0) == 1);
  CHECK(square.coeff(1) == 2);
  CHECK(square.coeff(2) == 1);
}

TEST_CASE("E4^3 - E6^2 is 1728 delta") {
  const QSeries difference = sub(pow(eisenstein_e(4, 5, Q), 3), pow(eisenstein_e(6, 5, Q), 2));
  CHECK(difference.coeff(0) == 0);
  CHECK(difference.coeff(1) == 1728);
  CHECK(difference == scale(Rational(1728), delta_series(5, Q)));
}

TEST_CASE("theta_naive multiplies coefficient n by n") {
  const QSeries f = make(Q, {7, 4, 5});
  const QSeries t = theta_naive(f);
  CHECK(t.coeff(0) == 0);
  CHECK(t.coeff(1) == 4);
  CHECK(t.coeff(2) == 10);
  CHECK(theta_naive(QSeries::constant(Q, Rational(3), 6)).is_zero());
}

TEST_CASE("theta_naive of G2 gives n * sigma_1(n)") {
  const QSeries t = theta_naive(g2_series(5, Q));
  CHECK(t.coeff(0) == 0);
  CHECK(t.coeff(1) == 1);
  CHECK(t.coeff(2) == 6);
  CHECK(t.coeff(3) == 12);
  CHECK(t.coeff(4) == 28);
}

TEST_CASE("apply_V spreads coefficients to indices np") {
  const QSeries f = make(Q, {1, 1});
  const QSeries v = apply_V(f, 5);
  CHECK(v.precision() == 10);
  CHECK(v.coeff(0) == 1);
  CHECK(v.coeff(5) == 1);
  for (long n : {1, 2, 3, 4, 6, 7, 8, 9}) CHECK(v.coeff(n) == 0);
  CHECK(apply_V(QSeries::zero(Q, 4), 5).is_zero());
}

TEST_CASE("V of E4 is congruent to E4^5 mod 5") {
  const QSeries e4 = eisenstein_e(4, 25, Q);
  CHECK(congruent_mod(truncate(apply_V(e4, 5), 25), pow(e4, 5), 5, 1));
}

TEST_CASE("congruent_mod basics") {
  const QSeries f = make(Q, {1, 2, 3, 4});
  CHECK(congruent_mod(f, f, 5, 3));
  for (long p : {5L, 7L}) {
    for (int t = 1; t <= 3; ++t) {
      Integer pt;
      mpz_ui_pow_ui(pt.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(t));
      const QSeries one = QSeries::constant(Q, Rational(1), 4);
      const QSeries perturbed = add(make(Q, {1, 0, 0, 0}),
                                    scale(Rational(pt), make(Q, {0, 1, 0, 0})));
      CHECK(congruent_mod(one, perturbed, p, t));
      const QSeries tight = add(make(Q, {1, 0, 0, 0}),
                                scale(Rational(Integer(pt / p)), make(Q, {0, 1, 0, 0})));
      CHECK_FALSE(congruent_mod(one, tight, p, t));
    }
  }
}

TEST_CASE("congruent_mod rejects comparisons past guaranteed precision") {
  const QSeries f = make(Q, {1, 2});
  const QSeries g = make(Q, {1, 2, 3});
  CHECK_THROWS_AS(congruent_mod(f, g, 5, 1, 3), InsufficientPrecision);
}

TEST_CASE("series_vp") {
  const QSeries f = scale(Rational(5), make(Q, {1, 1}));
  CHECK(series_vp(f, 5) == Valuation::of(1));
  CHECK(series_vp(QSeries::zero(Q, 3), 5).is_infinite());
  // G_{p+1} for p = 5: the constant term -B_6/12 = -1/504 is a 5-adic unit.
  const QSeries g6 = eisenstein_g(6, 8, Q);
  CHECK(g6.coeff(0) == Rational(-1, 504));
  CHECK(series_vp(g6, 5) == Valuation::of(0));
}

TEST_CASE("domains are closed under arithmetic") {
  const PrimePowerModulus mod(5, 2);
  const QSeries a = make(Q, {1, 2});
  const QSeries b = make(Ring::mod(mod), {1, 2});
  CHECK_THROWS_AS(add(a, b), DomainMismatch);
  CHECK_THROWS_AS(mul(a, b), DomainMismatch);
  CHECK_THROWS_AS(series_vp(b, 5), DomainMismatch);
  // Explicit maps do the crossing.
  CHECK(add(reduce_series(a, mod), b).coeff(0) == 2);
  CHECK(lift_series(b).ring().kind() == RingKind::integers);
}

TEST_CASE("modular series reduce coefficients canonically") {
  const PrimePowerModulus mod(5, 2);
  const QSeries f = make(Ring::mod(mod), {26, -1, 100});
  CHECK(f.coeff(0) == 1);
  CHECK(f.coeff(1) == 24);
  CHECK(f.coeff(2) == 0);
}

TEST_CASE("theta is a derivation for the product") {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 60; ++i) {
    const QSeries f = random_series(rng, Q, 12);
    const QSeries g = random_series(rng, Q, 12);
    const QSeries lhs = theta_naive(mul(f, g));
    const QSeries rhs = add(mul(theta_naive(f), g), mul(f, theta_naive(g)));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("V is a ring homomorphism on truncations") {
  std::mt19937_64 rng(103);
  for (int i = 0; i < 60; ++i) {
    const long p = (i % 2 == 0) ? 5 : 7;
    const QSeries f = random_series(rng, Z, 10);
    const QSeries g = random_series(rng, Z, 10);
    CHECK(truncate(apply_V(mul(f, g), p), 10 * p) ==
          truncate(mul(apply_V(f, p), apply_V(g, p)), 10 * p));
    CHECK(apply_V(add(f, g), p) == add(apply_V(f, p), apply_V(g, p)));
  }
}

TEST_CASE("theta after V is p times V after theta") {
  std::mt19937_64 rng(107);
  for (int i = 0; i < 60; ++i) {
    const long p = (i % 2 == 0) ? 5 : 7;
    const QSeries f = random_series(rng, Q, 9);
    CHECK(theta_naive(apply_V(f, p)) == scale(Rational(p), apply_V(theta_naive(f), p)));
  }
}

TEST_CASE("V agrees with the p-th power mod p on the named forms") {
  for (long p : {5L, 7L}) {
    for (long k : {4L, 6L}) {
      const QSeries f = eisenstein_e(k, 30, Q);
      CHECK(congruent_mod(truncate(apply_V(f, p), 30), pow(f, static_cast<unsigned long>(p)), p, 1));
    }
    const QSeries d = delta_series(30, Q);
    CHECK(congruent_mod(truncate(apply_V(d, p), 30), pow(d, static_cast<unsigned long>(p)), p, 1));
    const QSeries g = eisenstein_g(p + 1, 30, Q);
    CHECK(congruent_mod(truncate(apply_V(g, p), 30), pow(g, static_cast<unsigned long>(p)), p, 1));
  }
}

TEST_CASE("json round trip is bit exact") {
  std::mt19937_64 rng(109);
  std::vector<Rational> coeffs;
  for (int i = 0; i < 8; ++i) {
    coeffs.emplace_back(static_cast<long>(rng() % 2001) - 1000,
                        1 + static_cast<long>(rng() % 40));
  }
  const QSeries f(Q, coeffs);
  CHECK(qseries_from_json(to_json(f)) == f);

  const QSeries g = random_series(rng, Z, 12);
  CHECK(qseries_from_json(to_json(g)) == g);

  const PrimePowerModulus mod(7, 2);
  const QSeries h = reduce_series(g, mod);
  const std::string text = to_json(h);
  CHECK(qseries_from_json(text) == h);
  CHECK(text.find("\"ring\":\"Zpm\"") != std::string::npos);
  CHECK(text.find("\"p\":7") != std::string::npos);
  CHECK(text.find("\"m\":2") != std::string::npos);
}

TEST_CASE("json schema example") {
  const QSeries f = g2_series(3, Q);
  CHECK(to_json(f) == R"({"ring":"Q","precision":3,"coeffs":["-1/24","1","3"]})");
}

TEST_CASE("json rejects malformed input") {
  CHECK_THROWS(qseries_from_json(R"({"ring":"Q","precision":2,"coeffs":["1"]})"));
  CHECK_THROWS(qseries_from_json(R"({"ring":"Zpm","p":5,"m":1,"precision":1,"coeffs":["7"]})"));
  CHECK_THROWS(qseries_from_json(R"({"ring":"Q","precision":1,"coeffs":["1/0"]})"));
}

TEST_CASE("precision bookkeeping") {
  const QSeries f = make(Q, {1, 2, 3});
  CHECK_THROWS_AS(f.coeff(3), InsufficientPrecision);
  CHECK_THROWS_AS(truncate(f, 4), InsufficientPrecision);
  CHECK(truncate(f, 2).precision() == 2);
  CHECK_THROWS_AS(QSeries(Q, {}), std::invalid_argument);
  CHECK(mul(make(Q, {1, 2, 3, 4}), make(Q, {1, 1})).precision() == 2);
}
