#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <thread>

#include "thetapm/eisenstein.hpp"
#include "thetapm/forms.hpp"

using namespace thetapm;

namespace {

const Ring Q = Ring::rationals();
const Ring Z = Ring::integers();

// Rank of the span of the weight-k monomials E_4^a E_6^b over Q, computed by
// row reduction of their q-expansions.  Independent of dim_modular_forms.
long rank_oracle(long k) {
  std::vector<std::vector<Rational>> rows;
  const long n = k / 4 + 4;
  for (long a = 0; 4 * a <= k; ++a) {
    const long rest = k - 4 * a;
    if (rest % 6 != 0) continue;
    const QSeries monomial = mul(pow(eisenstein_e(4, n, Q), static_cast<unsigned long>(a)),
                                 pow(eisenstein_e(6, n, Q), static_cast<unsigned long>(rest / 6)));
    rows.push_back(monomial.coeffs());
  }
  long rank = 0;
  size_t lead = 0;
  while (!rows.empty() && lead < static_cast<size_t>(n)) {
    size_t pivot = rows.size();
    for (size_t r = static_cast<size_t>(rank); r < rows.size(); ++r) {
      if (rows[r][lead] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot == rows.size()) {
      ++lead;
      continue;
    }
    std::swap(rows[static_cast<size_t>(rank)], rows[pivot]);
    const Rational inv = 1 / rows[static_cast<size_t>(rank)][lead];
    for (auto& c : rows[static_cast<size_t>(rank)]) c *= inv;
    for (size_t r = 0; r < rows.size(); ++r) {
      if (r == static_cast<size_t>(rank)) continue;
      const Rational factor = rows[r][lead];
      if (factor == 0) continue;
      for (size_t c = lead; c < static_cast<size_t>(n); ++c) {
        rows[r][c] -= factor * rows[static_cast<size_t>(rank)][c];
      }
    }
    ++rank;
    ++lead;
    if (rank == static_cast<long>(rows.size())) break;
  }
  return rank;
}

// q prod_{j>=1} (1 - q^j)^24, expanded directly.  Independent route to delta.
QSeries delta_product_oracle(long n) {
  std::vector<Rational> one(static_cast<size_t>(n), Rational(0));
  one[0] = 1;
  QSeries eta(Z, one);
  for (long j = 1; j < n; ++j) {
    std::vector<Rational> binomial(static_cast<size_t>(n), Rational(0));
    binomial[0] = 1;
    binomial[static_cast<size_t>(j)] = -1;
    eta = mul(eta, QSeries(Z, std::move(binomial)));
  }
  const QSeries eta24 = pow(eta, 24);
  std::vector<Rational> shifted(static_cast<size_t>(n), Rational(0));
  for (long i = 0; i + 1 < n; ++i) shifted[static_cast<size_t>(i + 1)] = eta24.coeff(i);
  return QSeries(Z, std::move(shifted));
}

}  // namespace

TEST_CASE("dimension formula") {
  CHECK(dim_modular_forms(0) == 1);
  CHECK(dim_modular_forms(2) == 0);
  CHECK(dim_modular_forms(12) == 2);
  CHECK(dim_modular_forms(-4) == 0);
  CHECK(dim_modular_forms(7) == 0);
  CHECK(dim_modular_forms(14) == 1);
  for (long k = 0; k <= 48; k += 2) {
    CHECK(dim_modular_forms(k) == rank_oracle(k));
  }
}

TEST_CASE("miller basis echelon structure") {
  const auto basis0 = miller_basis(0, 8);
  CHECK(basis0->dimension() == 1);
  CHECK(basis0->element(0) == QSeries::constant(Z, Rational(1), basis0->precision()));

  const auto basis12 = miller_basis(12, 16);
  CHECK(basis12->dimension() == 2);
  CHECK(basis12->element(0).coeff(0) == 1);
  CHECK(basis12->element(0).coeff(1) == 0);
  CHECK(basis12->element(1).coeff(0) == 0);
  CHECK(basis12->element(1).coeff(1) == 1);

  // The second weight-12 element is the discriminant form.
  const QSeries oracle = delta_product_oracle(16);
  for (long n = 0; n < 16; ++n) {
    CHECK(basis12->element(1).coeff(n) == oracle.coeff(n));
  }
  CHECK(basis12->element(1).coeff(2) == -24);

  CHECK_THROWS_AS(MillerBasis(24, 2), PrecisionTooLow);
}

TEST_CASE("delta generator matches the product formula") {
  const QSeries ours = delta_series(21, Z);
  const QSeries oracle = delta_product_oracle(21);
  CHECK(ours == oracle);
}

TEST_CASE("express reads coordinates off echelon positions") {
  const Form e4 = express(eisenstein_e(4, 10, Q), 4);
  CHECK(e4.coords() == std::vector<Rational>{Rational(1)});

  // theta of E4 is not modular of weight 6.
  CHECK_THROWS_AS(express(theta_naive(eisenstein_e(4, 10, Q)), 6), NotModularOfThisWeight);

  const QSeries e4cubed = pow(eisenstein_e(4, 12, Q), 3);
  const Form f = express(e4cubed, 12);
  CHECK(f.q_expansion(12) == e4cubed);
  CHECK(f.coords()[0] == 1);
  CHECK(f.coords()[1] == 720);

  CHECK_THROWS_AS(express(eisenstein_e(4, 2, Q), 24), InsufficientPrecision);
}

TEST_CASE("express round trip on random forms") {
  std::mt19937_64 rng(211);
  for (int i = 0; i < 60; ++i) {
    const long weight = 2 * (2 + static_cast<long>(rng() % 29));  // 4..60
    const long d = dim_modular_forms(weight);
    std::vector<Rational> coords;
    for (long j = 0; j < d; ++j) coords.emplace_back(static_cast<long>(rng() % 41) - 20);
    const Form f(weight, Z, coords);
    const Form back = express(f.q_expansion(default_precision(weight) + d), weight);
    CHECK(back.coords() == f.coords());
  }
}

TEST_CASE("solver agrees with brute force on small systems mod 25") {
  const PrimePowerModulus mod(5, 2);
  std::mt19937_64 rng(223);
  long solvable_seen = 0;
  for (int instance = 0; instance < 60; ++instance) {
    std::vector<std::vector<Integer>> rows(2, std::vector<Integer>(2));
    std::vector<Integer> rhs(2);
    for (auto& row : rows) {
      for (auto& e : row) e = Integer(rng() % 25);
    }
    for (auto& b : rhs) b = Integer(rng() % 25);

    bool brute_solvable = false;
    for (long x = 0; x < 25 && !brute_solvable; ++x) {
      for (long y = 0; y < 25 && !brute_solvable; ++y) {
        brute_solvable =
            mod_reduce(rows[0][0] * x + rows[0][1] * y - rhs[0], mod.modulus()) == 0 &&
            mod_reduce(rows[1][0] * x + rows[1][1] * y - rhs[1], mod.modulus()) == 0;
      }
    }

    const auto solution = solve_mod_prime_power(rows, rhs, mod);
    CHECK(solution.has_value() == brute_solvable);
    if (solution) {
      ++solvable_seen;
      for (int r = 0; r < 2; ++r) {
        const Integer lhs = rows[static_cast<size_t>(r)][0] * (*solution)[0] +
                            rows[static_cast<size_t>(r)][1] * (*solution)[1];
        CHECK(mod_reduce(lhs - rhs[static_cast<size_t>(r)], mod.modulus()) == 0);
      }
    }
  }
  CHECK(solvable_seen > 5);
}

TEST_CASE("solver handles zero-divisor pivots") {
  const PrimePowerModulus mod(5, 2);
  // 5x = 10 mod 25 is solvable, 5x = 1 mod 25 is not.
  auto sol = solve_mod_prime_power({{Integer(5)}}, {Integer(10)}, mod);
  REQUIRE(sol.has_value());
  CHECK(mod_reduce((*sol)[0] * 5 - 10, mod.modulus()) == 0);
  CHECK_FALSE(solve_mod_prime_power({{Integer(5)}}, {Integer(1)}, mod).has_value());
}

TEST_CASE("is_congruent_to_weight finds and refutes witnesses") {
  const PrimePowerModulus mod25(5, 2);
  const QSeries e4_red = reduce_series(eisenstein_e(4, 10, Q), mod25);
  const auto identity = is_congruent_to_weight(e4_red, 4, mod25);
  REQUIRE(identity.has_value());
  CHECK(identity->coords() == std::vector<Rational>{Rational(1)});

  const PrimePowerModulus mod5(5, 1);
  const QSeries delta_red = reduce_series(delta_series(10, Q), mod5);
  CHECK_FALSE(is_congruent_to_weight(delta_red, 0, mod5).has_value());

  // E4 * E4^5 reduces to E4 mod 25 because E4^5 = 1 mod 25.
  const QSeries e4_sixth = reduce_series(pow(eisenstein_e(4, 10, Q), 6), mod25);
  const auto witness = is_congruent_to_weight(e4_sixth, 4, mod25);
  REQUIRE(witness.has_value());
  CHECK(witness->coords() == std::vector<Rational>{Rational(1)});
}

TEST_CASE("weight filtration of the discriminant form mod 5") {
  const PrimePowerModulus mod(5, 1);
  const QSeries target = reduce_series(delta_series(2 * default_precision(12), Q), mod);
  const FiltrationReport report = weight_filtration(target, 12, mod);
  CHECK(report.w == 12);
  CHECK(report.rejected == std::vector<long>{0, 4, 8});
  CHECK(report.witness.weight() == 12);
}

TEST_CASE("E_{p-1}^{p^{m-1}} has filtration zero") {
  const PrimePowerModulus mod(5, 2);
  const QSeries target = reduce_series(pow(eisenstein_e(4, 12, Q), 5), mod);
  const FiltrationReport report = weight_filtration(target, 20, mod);
  CHECK(report.w == 0);
  CHECK(report.witness.coords() == std::vector<Rational>{Rational(1)});
  CHECK(report.rejected.empty());
}

TEST_CASE("the Hasse invariant direction: E6 mod 7 has filtration zero") {
  const PrimePowerModulus mod(7, 1);
  const QSeries target = reduce_series(eisenstein_e(6, 12, Q), mod);
  CHECK(weight_filtration(target, 6, mod).w == 0);
}

TEST_CASE("weight filtration rejects series vanishing mod p") {
  const PrimePowerModulus mod(5, 2);
  const QSeries target = reduce_series(scale(Rational(5), delta_series(12, Q)), mod);
  CHECK_THROWS_AS(weight_filtration(target, 12, mod), NotNormalized);
}

TEST_CASE("filtration report serialization") {
  const PrimePowerModulus mod(5, 1);
  const QSeries target = reduce_series(delta_series(2 * default_precision(12), Q), mod);
  const std::string json = to_json(weight_filtration(target, 12, mod));
  CHECK(json.find("\"p\":5") != std::string::npos);
  CHECK(json.find("\"w\":12") != std::string::npos);
  CHECK(json.find("\"rejected\":[0,4,8]") != std::string::npos);
}

TEST_CASE("hecke operator eigenvalues") {
  // T_2 on the discriminant form acts by -24; oracle via the product formula.
  const QSeries delta = delta_product_oracle(21);
  const QSeries t2 = hecke_tl(rationalize(delta), 12, 2);
  CHECK(t2.precision() == 11);
  for (long n = 0; n < 11; ++n) {
    CHECK(t2.coeff(n) == Rational(-24) * delta.coeff(n));
  }

  // T_2 E_4 = (1 + 2^3) E_4.
  const QSeries e4 = eisenstein_e(4, 20, Q);
  const QSeries t2e4 = hecke_tl(e4, 4, 2, 10);
  CHECK(t2e4 == scale(Rational(9), truncate(e4, 10)));

  CHECK(hecke_tl(QSeries::zero(Q, 12), 12, 3).is_zero());
  CHECK_THROWS_AS(hecke_tl(e4, 4, 2, 11), InsufficientPrecision);
  CHECK_THROWS_AS(hecke_tl(e4, 4, 4), std::invalid_argument);
}

TEST_CASE("derivation on constants vanishes") {
  const Form one(0, Z, {Rational(1)});
  const Form d = partial_derivation(one);
  CHECK(d.weight() == 2);
  CHECK(d.q_expansion(8).is_zero());
}

TEST_CASE("derivation of E4 is -4 E6") {
  // Classical identity, re-derived on expansions: 12 theta E4 - 4 E2 E4 = -4 E6.
  const QSeries e4 = eisenstein_e(4, 8, Q);
  const QSeries direct = sub(scale(Rational(12), theta_naive(e4)),
                             scale(Rational(4), mul(e2_series(8, Q), e4)));
  CHECK(direct == scale(Rational(-4), eisenstein_e(6, 8, Q)));

  const Form d = partial_derivation(express(e4, 4));
  CHECK(d.weight() == 6);
  CHECK(d.coords() == std::vector<Rational>{Rational(-4)});
}

TEST_CASE("derivation satisfies Leibniz on a square") {
  const Form e4 = express(eisenstein_e(4, 10, Q), 4);
  const Form e4sq = express(pow(eisenstein_e(4, 10, Q), 2), 8);
  const long n = 10;
  const QSeries lhs = partial_derivation(e4sq).q_expansion(n);
  const QSeries rhs = scale(Rational(2), mul(e4.q_expansion(n),
                                             partial_derivation(e4).q_expansion(n)));
  CHECK(lhs == rhs);
}

TEST_CASE("derivation Leibniz on random integral pairs") {
  std::mt19937_64 rng(227);
  for (int i = 0; i < 25; ++i) {
    const long wf = 2 * (2 + static_cast<long>(rng() % 7));  // 4..16
    const long wg = 2 * (2 + static_cast<long>(rng() % 7));
    std::vector<Rational> cf, cg;
    for (long j = 0; j < dim_modular_forms(wf); ++j) cf.emplace_back(static_cast<long>(rng() % 9) - 4);
    for (long j = 0; j < dim_modular_forms(wg); ++j) cg.emplace_back(static_cast<long>(rng() % 9) - 4);
    const Form f(wf, Z, cf);
    const Form g(wg, Z, cg);
    const long n = default_precision(wf + wg + 2) + 4;
    const Form fg = express(mul(f.q_expansion(n), g.q_expansion(n)), wf + wg);
    const QSeries lhs = partial_derivation(fg).q_expansion(n);
    const QSeries rhs = add(mul(partial_derivation(f).q_expansion(n), g.q_expansion(n)),
                            mul(f.q_expansion(n), partial_derivation(g).q_expansion(n)));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("mod-p theta raises the filtration by p + 1 when p does not divide it") {
  struct Instance {
    long p;
    const char* name;
    long weight;
  };
  for (const Instance& inst : {Instance{5, "delta", 12}, Instance{7, "delta", 12}}) {
    const PrimePowerModulus mod(inst.p, 1);
    const QSeries delta = delta_series(2 * default_precision(inst.weight + inst.p + 1), Q);
    CHECK(weight_filtration(reduce_series(delta, mod), inst.weight, mod).w == inst.weight);
    const QSeries theta_target = reduce_series(theta_naive(delta), mod);
    const FiltrationReport report =
        weight_filtration(theta_target, inst.weight + inst.p + 1, mod);
    CHECK(report.w == inst.weight + inst.p + 1);
  }

  // E4 * delta mod 7: filtration 16, theta image lands exactly at 24.
  {
    const PrimePowerModulus mod(7, 1);
    const long n = 2 * default_precision(24);
    const QSeries f = mul(eisenstein_e(4, n, Q), delta_series(n, Q));
    CHECK(weight_filtration(reduce_series(f, mod), 16, mod).w == 16);
    CHECK(weight_filtration(reduce_series(theta_naive(f), mod), 24, mod).w == 24);
  }
}

TEST_CASE("mod-p theta drops strictly when p divides the filtration") {
  // Searched pool of desk-scale candidates with p | w_p(f) and theta f
  // nonzero mod p.
  struct Candidate {
    long p;
    long weight;
    QSeries series;
  };
  const long n5 = 2 * default_precision(36);
  const long n7 = 2 * default_precision(36);
  std::vector<Candidate> pool;
  pool.push_back({5, 30,
                  add(pow(eisenstein_e(6, n5, Q), 5),
                      mul(delta_series(n5, Q),
                          mul(pow(eisenstein_e(4, n5, Q), 3), eisenstein_e(6, n5, Q))))});
  pool.push_back({7, 28,
                  add(pow(eisenstein_e(4, n7, Q), 7),
                      scale(Rational(2), mul(delta_series(n7, Q),
                                             pow(eisenstein_e(4, n7, Q), 4))))});

  int found = 0;
  for (const auto& candidate : pool) {
    const PrimePowerModulus mod(candidate.p, 1);
    const QSeries reduced = reduce_series(candidate.series, mod);
    const FiltrationReport base = weight_filtration(reduced, candidate.weight, mod);
    const QSeries theta_target = reduce_series(theta_naive(candidate.series), mod);
    if (base.w % candidate.p != 0 || base.w == 0 ||
        series_vp_capped(theta_target).value() != 0) {
      continue;
    }
    ++found;
    const FiltrationReport raised =
        weight_filtration(theta_target, base.w + candidate.p + 1, mod);
    CHECK(raised.w < base.w + candidate.p + 1);
  }
  // Both hand-picked candidates realize the strict case.
  CHECK(found == 2);
}

TEST_CASE("filtration of E_{p+1}^a delta") {
  for (long p : {5L, 7L}) {
    for (long a = 1; a <= 2; ++a) {
      const long weight = 12 + a * (p + 1);
      const long n = 2 * default_precision(weight);
      const QSeries f = mul(pow(eisenstein_e(p + 1, n, Q), static_cast<unsigned long>(a)),
                            delta_series(n, Q));
      const PrimePowerModulus mod(p, 1);
      CHECK(weight_filtration(reduce_series(f, mod), weight, mod).w == weight);
    }
  }
}

TEST_CASE("solver returns consistent witnesses at doubled precision") {
  std::mt19937_64 rng(229);
  const PrimePowerModulus mod(5, 2);
  for (int i = 0; i < 25; ++i) {
    const long weight = 2 * (2 + static_cast<long>(rng() % 15));  // 4..32
    const long d = dim_modular_forms(weight);
    std::vector<Rational> coords;
    for (long j = 0; j < d; ++j) coords.emplace_back(static_cast<long>(rng() % 25));
    const Form f(weight, Ring::mod(mod), coords);
    const long n = default_precision(weight);
    const auto once = is_congruent_to_weight(f.q_expansion(n), weight, mod);
    const auto twice = is_congruent_to_weight(f.q_expansion(2 * n), weight, mod);
    REQUIRE(once.has_value());
    REQUIRE(twice.has_value());
    CHECK(once->coords() == twice->coords());
    CHECK(once->coords() == f.coords());
  }
}

TEST_CASE("miller basis cache is safe under concurrent readers") {
  std::vector<std::thread> workers;
  std::vector<Rational> results(8);
  for (int i = 0; i < 8; ++i) {
    workers.emplace_back([i, &results] {
      const auto basis = miller_basis(36, 40);
      results[static_cast<size_t>(i)] = basis->element(basis->dimension() - 1).coeff(36);
    });
  }
  for (auto& w : workers) w.join();
  for (const auto& r : results) CHECK(r == results[0]);
}
