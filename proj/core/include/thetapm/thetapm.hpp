#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "thetapm/forms.hpp"

namespace thetapm {

// Weight bookkeeping for the decomposition of G_2 mod p^m and for the theta
// operator's landing weight.
//
//   k_j  = 2 + p^{m-j-1}(p^{j+1} - 1)    for j = 0..m-2,
//   k_{m-1} = p^{m-1}(p + 1),            and k_0 = p + 1 when m = 1;
//   k(m) = 2 + 2 p^{m-1}(p - 1);
//   t_j  = (k(m) - k_j) / (p^{m-j-1}(p - 1)), an exact positive integer.
long decomposition_weight(long p, int m, int j);
long theta_weight_gain(long p, int m);
long decomposition_exponent(long p, int m, int j);

// One term of the decomposition G_2 = sum_j p^j f_j mod p^m: f_j is a form of
// weight k_j with v_p(f_j) = 0.  Exact entries (j = 0, j = m-1) carry
// rational coordinates; the inductively solved middle entries live over
// Z/p^{m-j} Z, which is all the congruence consumes.
struct G2Entry {
  int j;
  long weight;       // k_j
  long exponent_tj;  // t_j
  Form form;         // f_j
};

struct G2Decomposition {
  PrimePowerModulus mod;
  std::vector<G2Entry> entries;
  long verified_precision;  // depth at which the defining congruence was checked
};

// The expansion of p^j f_j as a series over Z/p^m Z.
QSeries entry_term_mod(const G2Entry& entry, const PrimePowerModulus& mod,
                       long precision);

// Weight-raising approximation of the V operator: given a form f of weight k
// with v_p(f) = 0 and inf(s+1, p^s + 1 - k) >= t, produces a form h of weight
// k + p^s(p-1) over Z/p^t Z with f|V = h mod p^t and v_p(h) = 0.  Existence
// is guaranteed; a solver miss raises NoSolution and indicates a bug or a
// precision failure, never a mathematical outcome.
Form find_v_approximation(const Form& f, long s, int t, long p, long precision);

// Builds the decomposition G_2 = sum_j p^j f_j mod p^m: f_0 and f_{m-1} are
// written down exactly (f_{m-1} = G_{p+1}^{p^{m-1}}), the middle terms are
// found by iterating find_v_approximation along f_j = G_{...} | V^j.  All
// invariants, including the defining congruence, are verified before
// returning.  Results are cached per (p, m).
std::shared_ptr<const G2Decomposition> build_g2_decomposition(long p, int m,
                                                              long precision);

// The theta operator on forms mod p^m: input of weight k, output of weight
// k + k(m) over Z/p^m Z, acting as sum a_n q^n |-> sum n a_n q^n.  Assembled
// as
//   (1/12) E_{p-1}^{2 p^{m-1}} df  -  2k f sum_j p^j E_{p-1}^{p^{m-j-1} t_j} f_j
// with d the weight-raising derivation; every summand has weight exactly
// k + k(m).  The q-expansion law is asserted before returning.
struct ThetaResult {
  Form input;
  Form output;  // weight k + k(m), over Z/p^m Z
  PrimePowerModulus mod;
  std::shared_ptr<const G2Decomposition> decomposition;
};

ThetaResult theta_pm(const Form& f, long p, int m, long precision);

// Checks T_ell theta f = ell * theta T_ell f mod p^m on the first
// `out_precision` coefficients.  ell must be a prime different from p.
bool verify_commutation(const Form& f, long ell, long p, int m, long out_precision);

// Checks that theta lands in the smallest admissible weight: under the
// hypotheses m >= 2, p not dividing k, and w_p(f) = k, the filtration of
// theta f mod p^m must equal k + k(m) exactly.  Hypothesis violations are
// reported, not silently skipped.
struct OptimalWeightReport {
  std::string status;  // "pass" | "fail" | "hypothesis_failure"
  long predicted;
  std::optional<long> observed;
  std::optional<FiltrationReport> filtration;
  std::string note;
};

OptimalWeightReport verify_optimal_weight(const Form& f, long p, int m);

// Exact check of the Bernoulli congruence
//   B_2/2 = B_{p(p-1)+2}/(p(p-1)+2) + p B_{p+1}/(p+1)  (mod p^2).
bool verify_bernoulli_congruence(long p);

}  // namespace thetapm
