#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "thetapm/qseries.hpp"

namespace thetapm {

// dim M_k(SL_2(Z)): 0 for k < 0 or k odd, floor(k/12) + 1 otherwise, minus 1
// when k = 2 (mod 12).
long dim_modular_forms(long k);

// Working precision policy: for a task whose largest involved weight is K,
// use floor(K/12) + 5 coefficients.  Congruences verified at this depth are
// re-verified at twice the depth as an anti-coincidence check; Sturm-type
// bounds at level 1 justify floor(K/12) + 1, the margin guards slips.
long default_precision(long max_weight);

// Integral echelonized basis of M_k(SL_2(Z), Z): element i has coefficient
// delta_{ij} at q^j for j < dim.  Built from monomials in E_4, E_6 and powers
// of delta, then integrally row-reduced (all pivots are 1, so no division
// ever occurs).
class MillerBasis {
 public:
  MillerBasis(long weight, long precision);

  long weight() const { return weight_; }
  long dimension() const { return static_cast<long>(elements_.size()); }
  long precision() const { return precision_; }
  const QSeries& element(long i) const { return elements_.at(static_cast<size_t>(i)); }

 private:
  long weight_;
  long precision_;
  std::vector<QSeries> elements_;
};

// Cached access; the returned basis has precision >= `precision`.
// Construction is deterministic per (weight, precision) and the cache is
// guarded, so concurrent readers see consistent values.
std::shared_ptr<const MillerBasis> miller_basis(long weight, long precision);

// A modular form of level 1 given by its coordinates in the Miller basis of
// its weight.  The coordinate domain mirrors the series domains: exact
// (rational or integral) or Z/p^m Z.  The q-expansion at any precision is
// the coordinate combination of the basis elements at that precision.
class Form {
 public:
  Form(long weight, Ring ring, std::vector<Rational> coords);

  static Form zero(long weight, Ring ring);

  long weight() const { return weight_; }
  const Ring& ring() const { return ring_; }
  const std::vector<Rational>& coords() const { return coords_; }
  bool is_integral() const;

  QSeries q_expansion(long precision) const;

  friend bool operator==(const Form& a, const Form& b) {
    return a.weight_ == b.weight_ && a.ring_ == b.ring_ && a.coords_ == b.coords_;
  }

 private:
  long weight_;
  Ring ring_;
  std::vector<Rational> coords_;
};

// Reads the coordinates of an exact series off the echelon positions of the
// weight-k Miller basis and verifies the full expansion against the input.
// Throws NotModularOfThisWeight when trailing coefficients disagree and
// InsufficientPrecision when fewer than dim + 1 coefficients are supplied.
Form express(const QSeries& f, long weight);

// Solves A x = b over Z/p^m Z by elimination with minimal-valuation pivoting
// (Z/p^m Z is not a field; choosing pivots of least valuation handles the
// zero divisors).  A is row-major with rows.size() equations.  Returns the
// canonical solution (free coordinates zero) or nullopt when the system has
// none.
std::optional<std::vector<Integer>> solve_mod_prime_power(
    std::vector<std::vector<Integer>> rows, std::vector<Integer> rhs,
    const PrimePowerModulus& mod);

// A weight-k' form over Z/p^m Z whose expansion is congruent to `target` at
// the target's full precision, or nullopt if none exists.
std::optional<Form> is_congruent_to_weight(const QSeries& target, long weight,
                                           const PrimePowerModulus& mod);

// Result of a weight filtration computation: the smallest weight w = k
// (mod p^{m-1}(p-1)) whose forms realize the target expansion mod p^m,
// together with a witness and the refuted lower weights.
struct FiltrationReport {
  long p;
  int m;
  long input_weight;
  long w;
  Form witness;
  std::vector<long> rejected;
};

// Serializes as {"p":, "m":, "input_weight":, "w":, "witness_coords": [...],
// "rejected": [...]} with coordinates as decimal strings.
std::string to_json(const FiltrationReport& report);

// Scans the weights k, k - step, k - 2 step, ... >= 0 (step = p^{m-1}(p-1))
// from the bottom and returns the smallest one admitting a witness.  The
// target must not vanish mod p (NotNormalized otherwise).
FiltrationReport weight_filtration(const QSeries& target, long input_weight,
                                   const PrimePowerModulus& mod);

// Hecke operator at level 1: coefficient n of T_ell f is
// a_{ell n} + ell^{k-1} a_{n/ell}, with a_{n/ell} = 0 unless ell | n.
// The output carries floor((P-1)/ell) + 1 coefficients for input precision P;
// requesting more raises InsufficientPrecision.
QSeries hecke_tl(const QSeries& f, long weight, long ell,
                 std::optional<long> out_precision = std::nullopt);

// Ramanujan's weight-raising derivation: for integral f of weight k,
//   d f = 12 theta(f) - k E_2 f
// is an integral form of weight k + 2.  Integrality of the coordinates is
// asserted.
Form partial_derivation(const Form& f);

}  // namespace thetapm
