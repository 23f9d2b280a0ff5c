#include "thetapm/qseries.hpp"

#include <algorithm>

#include <json.hpp>

namespace thetapm {

namespace {

void require_same_ring(const QSeries& f, const QSeries& g, const char* op) {
  if (!(f.ring() == g.ring())) {
    throw DomainMismatch(std::string(op) + ": operands live over different coefficient domains");
  }
}

Rational canonical_coeff(const Ring& ring, Rational value) {
  if (value.get_den() == 0) throw std::invalid_argument("QSeries: zero denominator");
  value.canonicalize();
  switch (ring.kind()) {
    case RingKind::rationals:
      return value;
    case RingKind::integers:
      if (value.get_den() != 1) {
        throw DomainMismatch("QSeries: non-integral coefficient in an integral series");
      }
      return value;
    case RingKind::mod_prime_power: {
      if (value.get_den() != 1) {
        throw DomainMismatch("QSeries: residues must be constructed from integers; "
                             "use reduce_series for rational input");
      }
      return Rational(mod_reduce(Integer(value.get_num()), ring.modulus().modulus()));
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

std::string Ring::name() const {
  switch (kind_) {
    case RingKind::rationals: return "Q";
    case RingKind::integers: return "Z";
    case RingKind::mod_prime_power: return "Zpm";
  }
  throw std::logic_error("unreachable");
}

QSeries::QSeries(Ring ring, std::vector<Rational> coeffs) : ring_(std::move(ring)) {
  if (coeffs.empty()) throw std::invalid_argument("QSeries: precision must be >= 1");
  coeffs_.reserve(coeffs.size());
  for (auto& c : coeffs) coeffs_.push_back(canonical_coeff(ring_, std::move(c)));
}

QSeries QSeries::zero(const Ring& ring, long precision) {
  if (precision < 1) throw std::invalid_argument("QSeries: precision must be >= 1");
  return QSeries(ring, std::vector<Rational>(static_cast<size_t>(precision), Rational(0)));
}

QSeries QSeries::constant(const Ring& ring, const Rational& value, long precision) {
  QSeries r = zero(ring, precision);
  r.coeffs_[0] = canonical_coeff(ring, value);
  return r;
}

const Rational& QSeries::coeff(long n) const {
  if (n < 0 || n >= precision()) {
    throw InsufficientPrecision("QSeries: coefficient index past guaranteed precision");
  }
  return coeffs_[static_cast<size_t>(n)];
}

bool QSeries::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const Rational& c) { return c == 0; });
}

namespace {

QSeries combine(const QSeries& f, const QSeries& g, int sign) {
  const long n = std::min(f.precision(), g.precision());
  std::vector<Rational> out(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) {
    out[static_cast<size_t>(i)] = sign > 0 ? Rational(f.coeff(i) + g.coeff(i))
                                           : Rational(f.coeff(i) - g.coeff(i));
  }
  return QSeries(f.ring(), std::move(out));
}

}  // namespace

QSeries add(const QSeries& f, const QSeries& g) {
  require_same_ring(f, g, "add");
  return combine(f, g, +1);
}

QSeries sub(const QSeries& f, const QSeries& g) {
  require_same_ring(f, g, "sub");
  return combine(f, g, -1);
}

QSeries mul(const QSeries& f, const QSeries& g) {
  require_same_ring(f, g, "mul");
  const long n = std::min(f.precision(), g.precision());
  std::vector<Rational> out(static_cast<size_t>(n), Rational(0));
  for (long i = 0; i < n; ++i) {
    if (f.coeff(i) == 0) continue;
    for (long j = 0; i + j < n; ++j) {
      if (g.coeff(j) == 0) continue;
      out[static_cast<size_t>(i + j)] += f.coeff(i) * g.coeff(j);
    }
  }
  QSeries result(f.ring(), std::move(out));
  return result;
}

QSeries scale(const Rational& c, const QSeries& f) {
  const Rational factor = [&] {
    switch (f.ring().kind()) {
      case RingKind::rationals:
        return c;
      case RingKind::integers:
        if (c.get_den() != 1) throw DomainMismatch("scale: non-integral scalar for a Z series");
        return c;
      case RingKind::mod_prime_power:
        if (c.get_den() != 1) {
          throw DomainMismatch("scale: rational scalar for a modular series; reduce it first");
        }
        return Rational(mod_reduce(Integer(c.get_num()), f.ring().modulus().modulus()));
    }
    throw std::logic_error("unreachable");
  }();
  std::vector<Rational> out;
  out.reserve(static_cast<size_t>(f.precision()));
  for (long i = 0; i < f.precision(); ++i) out.push_back(factor * f.coeff(i));
  return QSeries(f.ring(), std::move(out));
}

QSeries negate(const QSeries& f) { return scale(Rational(-1), f); }

QSeries pow(const QSeries& f, unsigned long e) {
  QSeries acc = QSeries::constant(f.ring(), Rational(1), f.precision());
  QSeries base = f;
  while (e > 0) {
    if (e & 1UL) acc = mul(acc, base);
    e >>= 1UL;
    if (e > 0) base = mul(base, base);
  }
  return acc;
}

QSeries theta_naive(const QSeries& f) {
  std::vector<Rational> out;
  out.reserve(static_cast<size_t>(f.precision()));
  for (long n = 0; n < f.precision(); ++n) out.push_back(Rational(n) * f.coeff(n));
  return QSeries(f.ring(), std::move(out));
}

QSeries apply_V(const QSeries& f, long p) {
  if (p < 2) throw std::invalid_argument("apply_V: p must be prime");
  const long n = f.precision() * p;
  std::vector<Rational> out(static_cast<size_t>(n), Rational(0));
  for (long i = 0; i < f.precision(); ++i) out[static_cast<size_t>(i * p)] = f.coeff(i);
  return QSeries(f.ring(), std::move(out));
}

QSeries truncate(const QSeries& f, long precision) {
  if (precision < 1) throw std::invalid_argument("truncate: precision must be >= 1");
  if (precision > f.precision()) {
    throw InsufficientPrecision("truncate: requested precision exceeds the guaranteed one");
  }
  std::vector<Rational> out(f.coeffs().begin(), f.coeffs().begin() + precision);
  return QSeries(f.ring(), std::move(out));
}

namespace {

bool exact_domain(const Ring& r) {
  return r.kind() == RingKind::rationals || r.kind() == RingKind::integers;
}

}  // namespace

bool congruent_mod(const QSeries& f, const QSeries& g, long p, int t,
                   std::optional<long> upto) {
  if (t < 1) throw std::invalid_argument("congruent_mod: t must be >= 1");
  const long shared = std::min(f.precision(), g.precision());
  const long n = upto.value_or(shared);
  if (n > shared) {
    throw InsufficientPrecision("congruent_mod: comparison past guaranteed precision");
  }

  if (exact_domain(f.ring()) && exact_domain(g.ring())) {
    for (long i = 0; i < n; ++i) {
      if (!(vp(Rational(f.coeff(i) - g.coeff(i)), p) >= t)) return false;
    }
    return true;
  }

  if (f.ring().is_modular() && g.ring().is_modular()) {
    const auto& mf = f.ring().modulus();
    const auto& mg = g.ring().modulus();
    if (mf.p() != p || mg.p() != p) {
      throw DomainMismatch("congruent_mod: modular series over a different prime");
    }
    if (mf.exponent() < t || mg.exponent() < t) {
      throw InsufficientPrecision("congruent_mod: modulus exponent below the comparison depth");
    }
    Integer pt;
    mpz_ui_pow_ui(pt.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(t));
    for (long i = 0; i < n; ++i) {
      const Integer d = Integer(f.coeff(i).get_num()) - Integer(g.coeff(i).get_num());
      if (mod_reduce(d, pt) != 0) return false;
    }
    return true;
  }

  throw DomainMismatch("congruent_mod: mixed exact/modular comparison; reduce explicitly");
}

Valuation series_vp(const QSeries& f, long p) {
  if (!exact_domain(f.ring())) {
    throw DomainMismatch("series_vp: defined for exact coefficient domains only");
  }
  Valuation best = Valuation::infinity();
  for (const auto& c : f.coeffs()) {
    const Valuation v = vp(Rational(c), p);
    if (v < best) best = v;
  }
  return best;
}

Valuation series_vp_capped(const QSeries& f) {
  if (!f.ring().is_modular()) {
    throw DomainMismatch("series_vp_capped: defined for modular series only");
  }
  const auto& mod = f.ring().modulus();
  long best = mod.exponent();
  for (const auto& c : f.coeffs()) {
    const Valuation v = vp(Integer(c.get_num()), mod.p());
    if (!v.is_infinite() && v.value() < best) best = v.value();
    if (best == 0) break;
  }
  return Valuation::of(best);
}

QSeries reduce_series(const QSeries& f, const PrimePowerModulus& mod) {
  std::vector<Rational> out;
  out.reserve(static_cast<size_t>(f.precision()));
  if (f.ring().is_modular()) {
    const auto& src = f.ring().modulus();
    if (src.p() != mod.p() || src.exponent() < mod.exponent()) {
      throw DomainMismatch("reduce_series: cannot reduce to a larger or foreign modulus");
    }
    for (const auto& c : f.coeffs()) {
      out.push_back(Rational(mod_reduce(Integer(c.get_num()), mod.modulus())));
    }
  } else {
    for (const auto& c : f.coeffs()) out.push_back(Rational(reduce_rational(c, mod).value));
  }
  return QSeries(Ring::mod(mod), std::move(out));
}

QSeries lift_series(const QSeries& f) {
  if (!f.ring().is_modular()) throw DomainMismatch("lift_series: input is not modular");
  return QSeries(Ring::integers(), f.coeffs());
}

QSeries rationalize(const QSeries& f) {
  if (f.ring().kind() != RingKind::integers) {
    throw DomainMismatch("rationalize: input is not an integral series");
  }
  return QSeries(Ring::rationals(), f.coeffs());
}

namespace {

std::string coeff_to_string(const Rational& c) {
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational coeff_from_string(const std::string& s) {
  Rational r;
  if (r.set_str(s, 10) != 0 || r.get_den() == 0) {
    throw std::invalid_argument("qseries_from_json: malformed coefficient '" + s + "'");
  }
  r.canonicalize();
  return r;
}

}  // namespace

std::string to_json(const QSeries& f) {
  nlohmann::ordered_json j;
  j["ring"] = f.ring().name();
  if (f.ring().is_modular()) {
    j["p"] = f.ring().modulus().p();
    j["m"] = f.ring().modulus().exponent();
  }
  j["precision"] = f.precision();
  auto coeffs = nlohmann::ordered_json::array();
  for (const auto& c : f.coeffs()) coeffs.push_back(coeff_to_string(c));
  j["coeffs"] = std::move(coeffs);
  return j.dump();
}

QSeries qseries_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const std::string ring_name = j.at("ring").get<std::string>();
  Ring ring = [&] {
    if (ring_name == "Q") return Ring::rationals();
    if (ring_name == "Z") return Ring::integers();
    if (ring_name == "Zpm") {
      return Ring::mod(PrimePowerModulus(j.at("p").get<long>(), j.at("m").get<int>()));
    }
    throw std::invalid_argument("qseries_from_json: unknown ring '" + ring_name + "'");
  }();
  const long precision = j.at("precision").get<long>();
  std::vector<Rational> coeffs;
  for (const auto& c : j.at("coeffs")) coeffs.push_back(coeff_from_string(c.get<std::string>()));
  if (static_cast<long>(coeffs.size()) != precision) {
    throw std::invalid_argument("qseries_from_json: precision does not match coefficient count");
  }
  if (ring.is_modular()) {
    for (const auto& c : coeffs) {
      if (c.get_den() != 1 || c < 0 || Integer(c.get_num()) >= ring.modulus().modulus()) {
        throw std::invalid_argument("qseries_from_json: non-canonical residue");
      }
    }
  }
  return QSeries(std::move(ring), std::move(coeffs));
}

}  // namespace thetapm
