#pragma once

#include <stdexcept>

namespace thetapm {

// Error taxonomy shared by all modules.  Everything derives from
// std::runtime_error so callers can catch coarsely; the distinct types exist
// because several of them are contractual outcomes (a non-p-integral constant
// term, a refuted congruence) rather than programming errors.

// Reduction mod p^m was asked of a rational whose denominator is divisible
// by p.  Signals a non-p-integral input, e.g. B_k/2k with (p-1) | k.
struct NonInvertibleDenominator : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two series (or a series and a scalar) live over different coefficient
// domains and no implicit promotion is performed.
struct DomainMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A comparison or operator was requested beyond the guaranteed precision of
// its inputs.
struct InsufficientPrecision : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A basis was requested at a precision too small to hold its echelon block.
struct PrecisionTooLow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A q-expansion failed to be the expansion of a modular form of the stated
// weight (trailing coefficients disagree with the forced candidate).
struct NotModularOfThisWeight : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A divisibility hypothesis such as (p-1) | k was violated.
struct DivisibilityViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The weight filtration was asked of a series that vanishes mod p.
struct NotNormalized : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A linear system that is guaranteed solvable turned out not to be; always a
// bug or a precision failure, never a mathematical outcome.
struct NoSolution : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace thetapm
