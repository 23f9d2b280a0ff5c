#include "thetapm/forms.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include <json.hpp>

#include "thetapm/eisenstein.hpp"

namespace thetapm {

long dim_modular_forms(long k) {
  if (k < 0 || k % 2 != 0) return 0;
  const long base = k / 12 + 1;
  return k % 12 == 2 ? base - 1 : base;
}

long default_precision(long max_weight) {
  if (max_weight < 0) throw std::invalid_argument("default_precision: negative weight");
  return max_weight / 12 + 5;
}

MillerBasis::MillerBasis(long weight, long precision)
    : weight_(weight), precision_(precision) {
  const long d = dim_modular_forms(weight);
  if (precision < d + 1) {
    throw PrecisionTooLow("MillerBasis: need precision >= dim + 1");
  }
  if (d == 0) return;

  const Ring z = Ring::integers();
  const QSeries e4 = eisenstein_e(4, precision, z);
  const QSeries e6 = eisenstein_e(6, precision, z);
  const QSeries disc = delta_series(precision, z);

  // Monomial delta^i E_4^a E_6^b of weight `weight` with leading term q^i.
  // b in {0, 1} is forced by weight - 12 i mod 4; the remainder is never 2.
  elements_.reserve(static_cast<size_t>(d));
  for (long i = 0; i < d; ++i) {
    const long w = weight - 12 * i;
    const long b = (w % 4 == 0) ? 0 : 1;
    const long a = (w - 6 * b) / 4;
    if (a < 0) throw std::logic_error("MillerBasis: monomial weight bookkeeping failed");
    QSeries g = mul(pow(e4, static_cast<unsigned long>(a)),
                    pow(e6, static_cast<unsigned long>(b)));
    if (i > 0) g = mul(g, pow(disc, static_cast<unsigned long>(i)));
    elements_.push_back(std::move(g));
  }

  // The matrix of leading coefficients is unitriangular, so integral
  // back-substitution echelonizes without division.
  for (long i = d - 1; i >= 0; --i) {
    for (long j = i + 1; j < d; ++j) {
      const Rational c = elements_[static_cast<size_t>(i)].coeff(j);
      if (c != 0) {
        elements_[static_cast<size_t>(i)] = sub(
            elements_[static_cast<size_t>(i)],
            scale(c, elements_[static_cast<size_t>(j)]));
      }
    }
  }

  for (long i = 0; i < d; ++i) {
    for (long j = 0; j < d; ++j) {
      if (elements_[static_cast<size_t>(i)].coeff(j) != Rational(i == j ? 1 : 0)) {
        throw std::logic_error("MillerBasis: echelon property failed");
      }
    }
  }
}

namespace {

std::mutex basis_cache_mutex;
std::map<long, std::shared_ptr<const MillerBasis>> basis_cache;

}  // namespace

std::shared_ptr<const MillerBasis> miller_basis(long weight, long precision) {
  const long needed = std::max(precision, dim_modular_forms(weight) + 1);
  std::lock_guard<std::mutex> lock(basis_cache_mutex);
  auto it = basis_cache.find(weight);
  if (it != basis_cache.end() && it->second->precision() >= needed) return it->second;
  // Round up so that a slowly growing precision demand does not rebuild the
  // basis every call.
  const long built = ((needed + 31) / 32) * 32;
  auto basis = std::make_shared<const MillerBasis>(weight, built);
  basis_cache[weight] = basis;
  return basis;
}

namespace {

Rational canonical_coord(const Ring& ring, Rational value) {
  if (value.get_den() == 0) throw std::invalid_argument("Form: zero denominator");
  value.canonicalize();
  switch (ring.kind()) {
    case RingKind::rationals:
      return value;
    case RingKind::integers:
      if (value.get_den() != 1) throw DomainMismatch("Form: non-integral coordinate");
      return value;
    case RingKind::mod_prime_power:
      if (value.get_den() != 1) {
        throw DomainMismatch("Form: residue coordinates must be integers");
      }
      return Rational(mod_reduce(Integer(value.get_num()), ring.modulus().modulus()));
  }
  throw std::logic_error("unreachable");
}

}  // namespace

Form::Form(long weight, Ring ring, std::vector<Rational> coords)
    : weight_(weight), ring_(std::move(ring)) {
  if (static_cast<long>(coords.size()) != dim_modular_forms(weight)) {
    throw std::invalid_argument("Form: coordinate count must equal dim M_k");
  }
  coords_.reserve(coords.size());
  for (auto& c : coords) coords_.push_back(canonical_coord(ring_, std::move(c)));
}

Form Form::zero(long weight, Ring ring) {
  return Form(weight, std::move(ring),
              std::vector<Rational>(static_cast<size_t>(dim_modular_forms(weight)),
                                    Rational(0)));
}

bool Form::is_integral() const {
  if (ring_.is_modular()) return false;
  return std::all_of(coords_.begin(), coords_.end(),
                     [](const Rational& c) { return c.get_den() == 1; });
}

QSeries Form::q_expansion(long precision) const {
  if (precision < 1) throw std::invalid_argument("Form: precision must be >= 1");
  const auto basis = miller_basis(weight_, precision);
  std::vector<Rational> out(static_cast<size_t>(precision), Rational(0));
  for (long i = 0; i < static_cast<long>(coords_.size()); ++i) {
    const Rational& c = coords_[static_cast<size_t>(i)];
    if (c == 0) continue;
    const QSeries& b = basis->element(i);
    for (long n = 0; n < precision; ++n) out[static_cast<size_t>(n)] += c * b.coeff(n);
  }
  return QSeries(ring_, std::move(out));
}

Form express(const QSeries& f, long weight) {
  if (f.ring().is_modular()) {
    throw DomainMismatch("express: exact series only; use is_congruent_to_weight mod p^m");
  }
  const long d = dim_modular_forms(weight);
  if (f.precision() < d + 1) {
    throw InsufficientPrecision("express: need at least dim + 1 coefficients");
  }
  std::vector<Rational> coords(f.coeffs().begin(), f.coeffs().begin() + d);
  Form candidate(weight, f.ring(), std::move(coords));
  const QSeries expanded = candidate.q_expansion(f.precision());
  for (long n = 0; n < f.precision(); ++n) {
    if (expanded.coeff(n) != f.coeff(n)) {
      throw NotModularOfThisWeight(
          "express: series disagrees with the forced weight-" + std::to_string(weight) +
          " candidate at q^" + std::to_string(n));
    }
  }
  return candidate;
}

std::optional<std::vector<Integer>> solve_mod_prime_power(
    std::vector<std::vector<Integer>> rows, std::vector<Integer> rhs,
    const PrimePowerModulus& mod) {
  const long n_rows = static_cast<long>(rows.size());
  if (rhs.size() != rows.size()) {
    throw std::invalid_argument("solve_mod_prime_power: shape mismatch");
  }
  const long n_cols = n_rows == 0 ? 0 : static_cast<long>(rows.front().size());
  const Integer& modulus = mod.modulus();
  const int cap = mod.exponent();

  for (long r = 0; r < n_rows; ++r) {
    if (static_cast<long>(rows[static_cast<size_t>(r)].size()) != n_cols) {
      throw std::invalid_argument("solve_mod_prime_power: ragged matrix");
    }
    for (auto& e : rows[static_cast<size_t>(r)]) e = mod_reduce(e, modulus);
    rhs[static_cast<size_t>(r)] = mod_reduce(rhs[static_cast<size_t>(r)], modulus);
  }

  const auto val = [&](const Integer& x) -> int {
    if (x == 0) return cap;
    const Valuation v = vp(x, mod.p());
    return v.is_infinite() ? cap : static_cast<int>(std::min<long>(v.value(), cap));
  };

  std::vector<bool> row_used(static_cast<size_t>(n_rows), false);
  std::vector<bool> col_used(static_cast<size_t>(n_cols), false);
  // (row, col, valuation) per pivot step, in selection order.
  std::vector<std::tuple<long, long, int>> pivots;

  while (true) {
    long best_r = -1, best_c = -1;
    int best_v = cap;
    for (long c = 0; c < n_cols; ++c) {
      if (col_used[static_cast<size_t>(c)]) continue;
      for (long r = 0; r < n_rows; ++r) {
        if (row_used[static_cast<size_t>(r)]) continue;
        const int v = val(rows[static_cast<size_t>(r)][static_cast<size_t>(c)]);
        if (v < best_v) {
          best_v = v;
          best_r = r;
          best_c = c;
        }
      }
    }
    if (best_r < 0) break;

    auto& pivot_row = rows[static_cast<size_t>(best_r)];
    const Integer pv = mod.prime_power(best_v);
    Integer unit = pivot_row[static_cast<size_t>(best_c)] / pv;
    const Integer unit_inv = mod_inverse(unit, modulus);
    for (auto& e : pivot_row) e = mod_reduce(e * unit_inv, modulus);
    rhs[static_cast<size_t>(best_r)] =
        mod_reduce(rhs[static_cast<size_t>(best_r)] * unit_inv, modulus);

    for (long r = 0; r < n_rows; ++r) {
      if (r == best_r || row_used[static_cast<size_t>(r)]) continue;
      const Integer& e = rows[static_cast<size_t>(r)][static_cast<size_t>(best_c)];
      if (e == 0) continue;
      // Minimal-valuation pivoting guarantees p^v divides every remaining
      // entry of this column.
      const Integer factor = e / pv;
      for (long c = 0; c < n_cols; ++c) {
        auto& target = rows[static_cast<size_t>(r)][static_cast<size_t>(c)];
        target = mod_reduce(target - factor * pivot_row[static_cast<size_t>(c)], modulus);
      }
      rhs[static_cast<size_t>(r)] = mod_reduce(
          rhs[static_cast<size_t>(r)] - factor * rhs[static_cast<size_t>(best_r)], modulus);
    }

    row_used[static_cast<size_t>(best_r)] = true;
    col_used[static_cast<size_t>(best_c)] = true;
    pivots.emplace_back(best_r, best_c, best_v);
  }

  // Rows without a pivot must have vanished entirely.
  for (long r = 0; r < n_rows; ++r) {
    if (!row_used[static_cast<size_t>(r)] && rhs[static_cast<size_t>(r)] != 0) {
      return std::nullopt;
    }
  }

  std::vector<Integer> solution(static_cast<size_t>(n_cols), Integer(0));
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
    const auto [r, c, v] = *it;
    Integer residual = rhs[static_cast<size_t>(r)];
    for (long cc = 0; cc < n_cols; ++cc) {
      if (cc == c) continue;
      const Integer& e = rows[static_cast<size_t>(r)][static_cast<size_t>(cc)];
      if (e != 0) residual -= e * solution[static_cast<size_t>(cc)];
    }
    residual = mod_reduce(residual, modulus);
    const Integer pv = mod.prime_power(v);
    if (!mpz_divisible_p(residual.get_mpz_t(), pv.get_mpz_t())) return std::nullopt;
    // Determined mod p^{m-v}; take the canonical representative.
    solution[static_cast<size_t>(c)] = mod_reduce(residual / pv, modulus);
  }
  return solution;
}

std::optional<Form> is_congruent_to_weight(const QSeries& target, long weight,
                                           const PrimePowerModulus& mod) {
  if (!target.ring().is_modular() || !(target.ring().modulus() == mod)) {
    throw DomainMismatch("is_congruent_to_weight: target must live over Z/p^m Z");
  }
  const long d = dim_modular_forms(weight);
  const long n = target.precision();
  if (n < d + 1) {
    throw InsufficientPrecision("is_congruent_to_weight: need at least dim + 1 coefficients");
  }
  if (d == 0) {
    if (!target.is_zero()) return std::nullopt;
    return Form::zero(weight, Ring::mod(mod));
  }

  const auto basis = miller_basis(weight, n);
  std::vector<std::vector<Integer>> rows(static_cast<size_t>(n),
                                         std::vector<Integer>(static_cast<size_t>(d)));
  std::vector<Integer> rhs(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < d; ++j) {
      rows[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          Integer(basis->element(j).coeff(i).get_num());
    }
    rhs[static_cast<size_t>(i)] = Integer(target.coeff(i).get_num());
  }
  auto solution = solve_mod_prime_power(std::move(rows), std::move(rhs), mod);
  if (!solution) return std::nullopt;

  std::vector<Rational> coords;
  coords.reserve(solution->size());
  for (auto& s : *solution) coords.emplace_back(std::move(s));
  Form witness(weight, Ring::mod(mod), std::move(coords));
  if (!congruent_mod(witness.q_expansion(n), target, mod.p(), mod.exponent())) {
    throw std::logic_error("is_congruent_to_weight: solver produced a bad witness");
  }
  return witness;
}

std::string to_json(const FiltrationReport& report) {
  nlohmann::ordered_json j;
  j["p"] = report.p;
  j["m"] = report.m;
  j["input_weight"] = report.input_weight;
  j["w"] = report.w;
  auto coords = nlohmann::ordered_json::array();
  for (const auto& c : report.witness.coords()) coords.push_back(c.get_num().get_str());
  j["witness_coords"] = std::move(coords);
  j["rejected"] = report.rejected;
  return j.dump();
}

FiltrationReport weight_filtration(const QSeries& target, long input_weight,
                                   const PrimePowerModulus& mod) {
  if (!target.ring().is_modular() || !(target.ring().modulus() == mod)) {
    throw DomainMismatch("weight_filtration: target must live over Z/p^m Z");
  }
  if (series_vp_capped(target).value() > 0) {
    throw NotNormalized("weight_filtration: input vanishes mod p; factor out p first");
  }
  if (input_weight < 0) throw std::invalid_argument("weight_filtration: negative weight");
  const long n = target.precision();
  if (n < dim_modular_forms(input_weight) + 1) {
    throw InsufficientPrecision("weight_filtration: target precision below dim + 1");
  }

  Integer step_z = mod.prime_power(mod.exponent() - 1) * (mod.p() - 1);
  const long step = step_z.get_si();

  std::vector<long> rejected;
  for (long w = input_weight % step; w <= input_weight; w += step) {
    auto witness = is_congruent_to_weight(target, w, mod);
    if (witness) {
      return FiltrationReport{mod.p(), mod.exponent(), input_weight, w,
                              std::move(*witness), std::move(rejected)};
    }
    rejected.push_back(w);
  }
  throw NoSolution("weight_filtration: target is not congruent to any form of the "
                   "admissible weights up to the input weight");
}

QSeries hecke_tl(const QSeries& f, long weight, long ell,
                 std::optional<long> out_precision) {
  if (!is_prime(ell)) throw std::invalid_argument("hecke_tl: ell must be prime");
  const long available = (f.precision() - 1) / ell + 1;
  const long n_out = out_precision.value_or(available);
  if (n_out > available) {
    throw InsufficientPrecision("hecke_tl: need input precision >= ell * output precision");
  }

  const Rational factor = [&]() -> Rational {
    if (weight >= 1) {
      Integer power;
      mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(ell),
                    static_cast<unsigned long>(weight - 1));
      if (f.ring().is_modular()) {
        return Rational(mod_reduce(power, f.ring().modulus().modulus()));
      }
      return Rational(power);
    }
    // ell^{k-1} with k <= 0 is not an integer; only exact rational series or
    // moduli prime to ell can absorb it.
    Integer power;
    mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(ell),
                  static_cast<unsigned long>(1 - weight));
    switch (f.ring().kind()) {
      case RingKind::rationals:
        return Rational(1) / Rational(power);
      case RingKind::mod_prime_power:
        return Rational(mod_inverse(power, f.ring().modulus().modulus()));
      case RingKind::integers:
        throw DomainMismatch("hecke_tl: nonpositive weight over Z needs rational coefficients");
    }
    throw std::logic_error("unreachable");
  }();

  std::vector<Rational> out;
  out.reserve(static_cast<size_t>(n_out));
  for (long n = 0; n < n_out; ++n) {
    Rational c = f.coeff(ell * n);
    if (n % ell == 0) c += factor * f.coeff(n / ell);
    out.push_back(std::move(c));
  }
  return QSeries(f.ring(), std::move(out));
}

Form partial_derivation(const Form& f) {
  if (f.ring().is_modular()) {
    throw DomainMismatch("partial_derivation: defined on exact integral forms");
  }
  if (!f.is_integral()) {
    throw DomainMismatch("partial_derivation: form must have integral coordinates");
  }
  const long k = f.weight();
  const long n = 2 * default_precision(k + 2);
  const QSeries fx = f.q_expansion(n);
  const QSeries e2 = e2_series(n, f.ring());
  const QSeries derived =
      sub(scale(Rational(12), theta_naive(fx)), scale(Rational(k), mul(e2, fx)));
  Form result = express(derived, k + 2);
  if (!result.is_integral()) {
    throw std::logic_error("partial_derivation: non-integral coordinates for an integral form");
  }
  return result;
}

}  // namespace thetapm
