#include "thetapm/registry.hpp"

#include <vector>

#include "thetapm/eisenstein.hpp"

namespace thetapm {

namespace {

struct Factor {
  QSeries series;
  long weight;
  bool classical;
};

long parse_weight(const std::string& name, const std::string& text) {
  try {
    size_t used = 0;
    const long k = std::stol(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    if (k < 4 || k % 2 != 0) {
      throw std::invalid_argument("weight must be an even integer >= 4");
    }
    return k;
  } catch (const std::exception&) {
    throw std::invalid_argument("registry: bad weight in form name '" + name + "'");
  }
}

Factor resolve_factor(const std::string& token, long precision) {
  const Ring q = Ring::rationals();
  if (token == "delta") return {delta_series(precision, q), 12, true};
  if (token == "e4") return {eisenstein_e(4, precision, q), 4, true};
  if (token == "e6") return {eisenstein_e(6, precision, q), 6, true};
  if (token == "g2") return {g2_series(precision, q), 2, false};
  if (token.rfind("gk:", 0) == 0) {
    const long k = parse_weight(token, token.substr(3));
    return {eisenstein_g(k, precision, q), k, true};
  }
  if (token.rfind("ek:", 0) == 0) {
    const long k = parse_weight(token, token.substr(3));
    return {eisenstein_e(k, precision, q), k, true};
  }
  throw std::invalid_argument("registry: unknown form name '" + token + "'");
}

std::vector<std::string> split_product(const std::string& name) {
  std::vector<std::string> tokens;
  size_t start = 0;
  while (true) {
    const size_t pos = name.find('*', start);
    tokens.push_back(name.substr(start, pos == std::string::npos ? pos : pos - start));
    if (tokens.back().empty()) {
      throw std::invalid_argument("registry: empty factor in '" + name + "'");
    }
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return tokens;
}

}  // namespace

NamedSeries resolve_named_series(const std::string& name, long precision) {
  if (precision < 1) throw std::invalid_argument("registry: precision must be >= 1");
  const auto tokens = split_product(name);
  Factor acc = resolve_factor(tokens.front(), precision);
  for (size_t i = 1; i < tokens.size(); ++i) {
    Factor next = resolve_factor(tokens[i], precision);
    acc.series = mul(acc.series, next.series);
    acc.weight += next.weight;
    acc.classical = acc.classical && next.classical;
  }
  return NamedSeries{std::move(acc.series), acc.weight, acc.classical};
}

Form resolve_form(const std::string& name) {
  // Enough coefficients to pin the coordinates and cross-check the tail.
  NamedSeries probe = resolve_named_series(name, 1);
  if (!probe.classical) {
    throw std::invalid_argument("registry: '" + name + "' is not a classical form of fixed weight");
  }
  const long n = 2 * default_precision(probe.weight);
  NamedSeries named = resolve_named_series(name, n);
  return express(named.series, named.weight);
}

}  // namespace thetapm
