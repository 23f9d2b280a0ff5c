#include "thetapm/arith.hpp"

#include <mutex>
#include <vector>

namespace thetapm {

PrimePowerModulus::PrimePowerModulus(long p, int m) : p_(p), m_(m) {
  if (p < 5) throw std::invalid_argument("PrimePowerModulus: p must be >= 5");
  if (!is_prime(p)) throw std::invalid_argument("PrimePowerModulus: p must be prime");
  if (m < 1) throw std::invalid_argument("PrimePowerModulus: m must be >= 1");
  mpz_ui_pow_ui(modulus_.get_mpz_t(), static_cast<unsigned long>(p),
                static_cast<unsigned long>(m));
}

Integer PrimePowerModulus::prime_power(int e) const {
  if (e < 0 || e > m_) throw std::invalid_argument("prime_power: exponent out of range");
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p_),
                static_cast<unsigned long>(e));
  return r;
}

bool is_prime(long n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (long d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

Integer binomial(unsigned long n, unsigned long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

namespace {

std::mutex bernoulli_mutex;
std::vector<Rational> bernoulli_table;  // bernoulli_table[j] = B_j

// Extends the memo table through index k.  Caller holds the lock.
void extend_bernoulli_table(unsigned long k) {
  if (bernoulli_table.empty()) {
    bernoulli_table.emplace_back(1);         // B_0
    bernoulli_table.emplace_back(-1, 2);     // B_1 = -1/2
  }
  while (bernoulli_table.size() <= k) {
    const unsigned long n = bernoulli_table.size();
    // B_n = -1/(n+1) * sum_{j=0}^{n-1} C(n+1, j) B_j, with the binomial row
    // updated incrementally.
    Rational acc(0);
    Integer binom(1);  // C(n+1, 0)
    for (unsigned long j = 0; j < n; ++j) {
      acc += Rational(binom) * bernoulli_table[j];
      binom *= static_cast<long>(n + 1 - j);
      mpz_divexact_ui(binom.get_mpz_t(), binom.get_mpz_t(), j + 1);
    }
    acc /= Rational(static_cast<long>(n + 1));
    bernoulli_table.push_back(-acc);
  }
}

}  // namespace

Rational bernoulli(unsigned long k) {
  std::lock_guard<std::mutex> lock(bernoulli_mutex);
  extend_bernoulli_table(k);
  return bernoulli_table[k];
}

Integer sigma(unsigned long t, unsigned long n) {
  if (n < 1) throw std::invalid_argument("sigma: n must be >= 1");
  Integer total(0);
  Integer power;
  for (unsigned long d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    mpz_ui_pow_ui(power.get_mpz_t(), d, t);
    total += power;
    const unsigned long e = n / d;
    if (e != d) {
      mpz_ui_pow_ui(power.get_mpz_t(), e, t);
      total += power;
    }
  }
  return total;
}

Integer sigma_star(unsigned long t, unsigned long n, long p) {
  if (n < 1) throw std::invalid_argument("sigma_star: n must be >= 1");
  if (p < 2) throw std::invalid_argument("sigma_star: p must be prime");
  const unsigned long up = static_cast<unsigned long>(p);
  Integer total(0);
  Integer power;
  for (unsigned long d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    if (d % up != 0) {
      mpz_ui_pow_ui(power.get_mpz_t(), d, t);
      total += power;
    }
    const unsigned long e = n / d;
    if (e != d && e % up != 0) {
      mpz_ui_pow_ui(power.get_mpz_t(), e, t);
      total += power;
    }
  }
  return total;
}

Valuation vp(const Integer& x, long p) {
  if (x == 0) return Valuation::infinity();
  if (p < 2) throw std::invalid_argument("vp: p must be prime");
  Integer rest;
  const auto v = mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), Integer(p).get_mpz_t());
  return Valuation::of(static_cast<long>(v));
}

Valuation vp(const Rational& x, long p) {
  if (x == 0) return Valuation::infinity();
  const Valuation num = vp(Integer(x.get_num()), p);
  const Valuation den = vp(Integer(x.get_den()), p);
  return Valuation::of(num.value() - den.value());
}

Integer mod_inverse(const Integer& a, const Integer& modulus) {
  Integer r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), modulus.get_mpz_t()) == 0) {
    throw NonInvertibleDenominator("mod_inverse: argument shares a factor with the modulus");
  }
  return r;
}

Integer mod_pow(const Integer& base, const Integer& exp, const Integer& modulus) {
  if (exp < 0) throw std::invalid_argument("mod_pow: negative exponent");
  Integer r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), modulus.get_mpz_t());
  return r;
}

Integer mod_reduce(const Integer& x, const Integer& modulus) {
  Integer r;
  mpz_mod(r.get_mpz_t(), x.get_mpz_t(), modulus.get_mpz_t());
  return r;
}

Residue reduce_rational(const Rational& x, const PrimePowerModulus& mod) {
  const Integer den(x.get_den());
  if (mpz_divisible_ui_p(den.get_mpz_t(), static_cast<unsigned long>(mod.p()))) {
    throw NonInvertibleDenominator("reduce_rational: denominator divisible by p");
  }
  Integer value = mod_reduce(Integer(x.get_num()) * mod_inverse(den, mod.modulus()),
                             mod.modulus());
  return Residue{std::move(value), mod};
}

}  // namespace thetapm
