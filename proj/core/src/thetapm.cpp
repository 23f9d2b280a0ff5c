#include "thetapm/thetapm.hpp"

#include <map>
#include <mutex>

#include "thetapm/eisenstein.hpp"

namespace thetapm {

namespace {

long checked_pow(long base, int e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base),
                static_cast<unsigned long>(e));
  if (!r.fits_slong_p()) throw std::overflow_error("prime power exceeds long range");
  return r.get_si();
}

void check_pm(long p, int m) {
  if (p < 5 || !is_prime(p)) throw std::invalid_argument("p must be a prime >= 5");
  if (m < 1) throw std::invalid_argument("m must be >= 1");
}

}  // namespace

long decomposition_weight(long p, int m, int j) {
  check_pm(p, m);
  if (j < 0 || j > m - 1) throw std::invalid_argument("decomposition_weight: j out of range");
  if (m == 1) return p + 1;
  if (j == m - 1) return checked_pow(p, m - 1) * (p + 1);
  return 2 + checked_pow(p, m - j - 1) * (checked_pow(p, j + 1) - 1);
}

long theta_weight_gain(long p, int m) {
  check_pm(p, m);
  return 2 + 2 * checked_pow(p, m - 1) * (p - 1);
}

long decomposition_exponent(long p, int m, int j) {
  const long diff = theta_weight_gain(p, m) - decomposition_weight(p, m, j);
  const long step = checked_pow(p, m - j - 1) * (p - 1);
  if (diff <= 0 || diff % step != 0) {
    throw std::logic_error("decomposition_exponent: k(m) - k_j is not a positive "
                           "multiple of p^{m-j-1}(p-1)");
  }
  return diff / step;
}

QSeries entry_term_mod(const G2Entry& entry, const PrimePowerModulus& mod,
                       long precision) {
  const QSeries expansion = entry.form.q_expansion(precision);
  QSeries reduced = expansion.ring().is_modular()
                        ? reduce_series(lift_series(expansion), mod)
                        : reduce_series(expansion, mod);
  return scale(Rational(mod.prime_power(entry.j)), reduced);
}

Form find_v_approximation(const Form& f, long s, int t, long p, long precision) {
  check_pm(p, t);
  if (s < 0) throw std::invalid_argument("find_v_approximation: s must be >= 0");
  const long k = f.weight();
  // inf(s+1, p^s + 1 - k) >= t
  Integer ps;
  mpz_ui_pow_ui(ps.get_mpz_t(), static_cast<unsigned long>(p),
                static_cast<unsigned long>(s));
  if (s + 1 < t || ps + 1 - k < t) {
    throw std::invalid_argument("find_v_approximation: inf(s+1, p^s+1-k) < t");
  }

  const long target_weight = k + checked_pow(p, static_cast<int>(s)) * (p - 1);
  const long n = std::max(precision, 2 * default_precision(target_weight));
  const PrimePowerModulus mod(p, t);

  const long n_in = (n + p - 1) / p;
  const QSeries fx = f.q_expansion(n_in);
  if (fx.ring().is_modular()) {
    if (series_vp_capped(fx).value() != 0) {
      throw std::invalid_argument("find_v_approximation: requires v_p(f) = 0");
    }
  } else if (!(series_vp(fx, p) == Valuation::of(0))) {
    throw std::invalid_argument("find_v_approximation: requires v_p(f) = 0");
  }

  const QSeries shifted = apply_V(fx.ring().is_modular() ? lift_series(fx) : fx, p);
  const QSeries target = reduce_series(truncate(shifted, n), mod);

  auto witness = is_congruent_to_weight(target, target_weight, mod);
  if (!witness) {
    throw NoSolution("find_v_approximation: no weight-" + std::to_string(target_weight) +
                     " form matches f|V mod p^" + std::to_string(t) +
                     "; this contradicts the existence guarantee");
  }
  if (series_vp_capped(witness->q_expansion(n)).value() != 0) {
    throw NoSolution("find_v_approximation: witness has positive valuation");
  }
  return *witness;
}

namespace {

std::mutex decomposition_mutex;
std::map<std::pair<long, int>, std::shared_ptr<const G2Decomposition>> decomposition_cache;

std::shared_ptr<const G2Decomposition> build_uncached(long p, int m, long precision) {
  const PrimePowerModulus mod(p, m);
  const long top_weight = decomposition_weight(p, m, m - 1);
  const long n = std::max(precision, 2 * default_precision(top_weight));

  std::vector<G2Entry> entries;
  entries.reserve(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) {
    const long kj = decomposition_weight(p, m, j);
    const long tj = decomposition_exponent(p, m, j);
    if (m == 1 || j == 0) {
      // f_0 = G_{2 + p^{m-1}(p-1)} (G_{p+1} when m = 1), written down exactly.
      const long weight = (m == 1) ? p + 1 : 2 + checked_pow(p, m - 1) * (p - 1);
      if (weight != kj) throw std::logic_error("decomposition: weight bookkeeping failed");
      Form f0 = express(eisenstein_g(weight, std::max(n, default_precision(weight) * 2),
                                     Ring::rationals()),
                        weight);
      entries.push_back(G2Entry{j, kj, tj, std::move(f0)});
    } else if (j == m - 1) {
      // f_{m-1} = G_{p+1}^{p^{m-1}}.
      const unsigned long e = static_cast<unsigned long>(checked_pow(p, m - 1));
      const long nf = std::max(n, default_precision(kj) * 2);
      const QSeries base = eisenstein_g(p + 1, nf, Ring::rationals());
      Form fj = express(pow(base, e), kj);
      entries.push_back(G2Entry{j, kj, tj, std::move(fj)});
    } else {
      // g_0 = G_{2 + p^{m-j-1}(p-1)}, then j approximation steps
      // g_r | V = g_{r+1} mod p^{m-j} with s = m - j + r.
      const int t = m - j;
      const long w0 = 2 + checked_pow(p, m - j - 1) * (p - 1);
      Form g = express(eisenstein_g(w0, default_precision(w0) * 2, Ring::rationals()), w0);
      for (int r = 0; r < j; ++r) {
        g = find_v_approximation(g, m - j + r, t, p, n);
      }
      if (g.weight() != kj) throw std::logic_error("decomposition: induction landed off-weight");
      entries.push_back(G2Entry{j, kj, tj, std::move(g)});
    }
  }

  // Invariants: strictly increasing weights, exponent bookkeeping,
  // v_p(f_j) = 0, and the defining congruence.
  const long km = theta_weight_gain(p, m);
  for (int j = 0; j < m; ++j) {
    const auto& e = entries[static_cast<size_t>(j)];
    if (j > 0 && entries[static_cast<size_t>(j - 1)].weight >= e.weight) {
      throw std::logic_error("decomposition: weights are not strictly increasing");
    }
    if (e.weight + e.exponent_tj * checked_pow(p, m - j - 1) * (p - 1) != km) {
      throw std::logic_error("decomposition: k_j + t_j p^{m-j-1}(p-1) != k(m)");
    }
    const QSeries fx = e.form.q_expansion(n);
    const bool unit = fx.ring().is_modular()
                          ? series_vp_capped(fx).value() == 0
                          : series_vp(fx, p) == Valuation::of(0);
    if (!unit) throw std::logic_error("decomposition: v_p(f_j) != 0");
  }

  QSeries total = QSeries::zero(Ring::mod(mod), n);
  for (const auto& e : entries) total = add(total, entry_term_mod(e, mod, n));
  const QSeries g2_red = reduce_series(g2_series(n, Ring::rationals()), mod);
  if (!congruent_mod(total, g2_red, p, m)) {
    throw std::logic_error("decomposition: sum p^j f_j is not congruent to G_2 mod p^m");
  }

  return std::make_shared<const G2Decomposition>(G2Decomposition{mod, std::move(entries), n});
}

}  // namespace

std::shared_ptr<const G2Decomposition> build_g2_decomposition(long p, int m,
                                                              long precision) {
  check_pm(p, m);
  {
    std::lock_guard<std::mutex> lock(decomposition_mutex);
    auto it = decomposition_cache.find({p, m});
    if (it != decomposition_cache.end() && it->second->verified_precision >= precision) {
      return it->second;
    }
  }
  auto built = build_uncached(p, m, precision);
  std::lock_guard<std::mutex> lock(decomposition_mutex);
  auto& slot = decomposition_cache[{p, m}];
  if (!slot || slot->verified_precision < built->verified_precision) slot = built;
  return slot;
}

ThetaResult theta_pm(const Form& f, long p, int m, long precision) {
  check_pm(p, m);
  if (f.ring().is_modular() || !f.is_integral()) {
    throw DomainMismatch("theta_pm: input must be an integral form");
  }
  const PrimePowerModulus mod(p, m);
  const long k = f.weight();
  const long km = theta_weight_gain(p, m);
  const long target_weight = k + km;
  const long n = std::max(precision, 2 * default_precision(target_weight));

  const auto decomposition = build_g2_decomposition(p, m, n);
  const Form derived = partial_derivation(f);

  const Ring ring = Ring::mod(mod);
  const QSeries hasse = eisenstein_e(p - 1, n, ring);
  const QSeries f_red = reduce_series(f.q_expansion(n), mod);

  // (1/12) E_{p-1}^{2 p^{m-1}} df
  const unsigned long lift_exp = 2 * static_cast<unsigned long>(checked_pow(p, m - 1));
  const Rational inv12(mod_inverse(Integer(12), mod.modulus()));
  QSeries first = scale(inv12, mul(pow(hasse, lift_exp),
                                   reduce_series(derived.q_expansion(n), mod)));

  // 2k f sum_j p^j E_{p-1}^{p^{m-j-1} t_j} f_j
  QSeries series_sum = QSeries::zero(ring, n);
  for (const auto& entry : decomposition->entries) {
    const unsigned long e =
        static_cast<unsigned long>(checked_pow(p, m - entry.j - 1)) *
        static_cast<unsigned long>(entry.exponent_tj);
    // Weight audit: every summand lands in weight k + k(m).
    if (entry.weight + static_cast<long>(e) * (p - 1) + k != target_weight) {
      throw std::logic_error("theta_pm: summand weight mismatch");
    }
    series_sum = add(series_sum, mul(pow(hasse, e), entry_term_mod(entry, mod, n)));
  }
  const QSeries second = scale(Rational(2 * k), mul(f_red, series_sum));

  const QSeries assembled = sub(first, second);

  // Defining property: the effect on q-expansions is a_n -> n a_n.
  if (!congruent_mod(assembled, theta_naive(f_red), p, m)) {
    throw std::logic_error("theta_pm: output does not act as q d/dq mod p^m");
  }

  auto output = is_congruent_to_weight(assembled, target_weight, mod);
  if (!output) {
    throw NoSolution("theta_pm: assembled series is not modular of weight k + k(m)");
  }
  return ThetaResult{f, std::move(*output), mod, decomposition};
}

bool verify_commutation(const Form& f, long ell, long p, int m, long out_precision) {
  check_pm(p, m);
  if (!is_prime(ell)) throw std::invalid_argument("verify_commutation: ell must be prime");
  if (ell == p) throw std::invalid_argument("verify_commutation: requires ell != p");
  if (out_precision < 1) throw std::invalid_argument("verify_commutation: precision must be >= 1");

  const long k = f.weight();
  const long target_weight = k + theta_weight_gain(p, m);

  const ThetaResult theta_f = theta_pm(f, p, m, default_precision(target_weight));
  const QSeries lhs = hecke_tl(theta_f.output.q_expansion(ell * out_precision),
                               target_weight, ell, out_precision);

  const long express_depth = default_precision(k) + 1;
  const QSeries f_exp = f.q_expansion(ell * express_depth);
  const Form hecke_f = express(hecke_tl(f_exp, k, ell), k);
  const ThetaResult theta_hecke_f = theta_pm(hecke_f, p, m, default_precision(target_weight));
  const QSeries rhs =
      scale(Rational(ell), theta_hecke_f.output.q_expansion(out_precision));

  return congruent_mod(lhs, rhs, p, m, out_precision);
}

OptimalWeightReport verify_optimal_weight(const Form& f, long p, int m) {
  check_pm(p, m);
  if (m < 2) throw std::invalid_argument("verify_optimal_weight: requires m >= 2");
  const long k = f.weight();
  const long predicted = k + theta_weight_gain(p, m);

  OptimalWeightReport report;
  report.predicted = predicted;

  if (k % p == 0) {
    report.status = "hypothesis_failure";
    report.note = "p divides the weight k = " + std::to_string(k);
    return report;
  }

  // w_p(f) = k is part of the hypothesis; check it mod p first.
  const PrimePowerModulus mod_p(p, 1);
  const QSeries f_mod_p = reduce_series(f.q_expansion(2 * default_precision(k)), mod_p);
  const FiltrationReport base = weight_filtration(f_mod_p, k, mod_p);
  if (base.w != k) {
    report.status = "hypothesis_failure";
    report.note = "w_p(f) = " + std::to_string(base.w) + " differs from k = " + std::to_string(k);
    return report;
  }

  const PrimePowerModulus mod(p, m);
  const QSeries theta_f = reduce_series(
      theta_naive(f.q_expansion(2 * default_precision(predicted))), mod);
  FiltrationReport filtration = weight_filtration(theta_f, predicted, mod);
  report.observed = filtration.w;
  report.status = (filtration.w == predicted) ? "pass" : "fail";
  report.filtration = std::move(filtration);
  return report;
}

bool verify_bernoulli_congruence(long p) {
  if (p < 5 || !is_prime(p)) throw std::invalid_argument("p must be a prime >= 5");
  const PrimePowerModulus mod(p, 2);
  const unsigned long up = static_cast<unsigned long>(p);
  const Rational lhs = bernoulli(2) / 2;
  const Rational rhs =
      bernoulli(up * (up - 1) + 2) / Rational(p * (p - 1) + 2) +
      Rational(p) * bernoulli(up + 1) / Rational(p + 1);
  return reduce_rational(lhs, mod).value == reduce_rational(rhs, mod).value;
}

}  // namespace thetapm
