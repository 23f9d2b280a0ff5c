#pragma once

#include <optional>
#include <string>
#include <vector>

#include "thetapm/thetapm.hpp"

namespace thetapm {

// One verified congruence or claim instance.  The serialized form is
//   {"check": name, "params": {...}, "status": "pass"|"fail"|
//    "hypothesis_failure", "details": {...}}
// with all coefficient-like values rendered as decimal strings.
struct CheckReport {
  std::string check;
  std::string params_json;
  std::string status;
  std::string details_json;
};

std::string to_json(const CheckReport& report);

// Grid overrides; every check has its own default grid and applies whichever
// fields are set.  Grids are deterministic, so identical options produce
// byte-identical reports.
struct VerifyOptions {
  std::optional<std::vector<long>> primes;
  std::optional<std::vector<int>> exponents;
  std::optional<std::vector<std::string>> forms;
  std::optional<std::vector<long>> ells;
};

// The registered check names, in the canonical reporting order.
const std::vector<std::string>& check_names();

// Runs one named check over its (possibly overridden) grid.  Unknown names
// raise std::invalid_argument.
std::vector<CheckReport> run_check(const std::string& name, const VerifyOptions& options);

// Runs every registered check, in order.
std::vector<CheckReport> run_all_checks(const VerifyOptions& options);

}  // namespace thetapm
