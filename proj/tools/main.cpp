// thetapm — expansions, congruence checks, and weight filtrations for level-1
// modular forms modulo prime powers p^m (p >= 5).
//
// Subcommands:
//   expand      print a named q-expansion (G_k, E_k, G_2, delta, G_k*, theta f)
//   verify      run a named identity check (or "all") and emit a JSON report
//   filtration  compute the weight filtration of a named form mod p^m
//
// Exit codes: 0 all checks passed; 1 a congruence failed; 2 usage, precision,
// or domain errors.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "thetapm/checks.hpp"
#include "thetapm/eisenstein.hpp"
#include "thetapm/registry.hpp"

namespace {

using Json = nlohmann::ordered_json;
using namespace thetapm;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
  return buf;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file " + out_path);
    out << text << "\n";
  }
}

// TOML-style key=value configuration: keys p, m, f, ell with comma-separated
// values pin the verification grid.
void apply_config(const std::string& path, VerifyOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\"");
      const auto b = s.find_last_not_of(" \t\"");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    std::stringstream values(trim(line.substr(eq + 1)));
    std::string item;
    std::vector<std::string> list;
    while (std::getline(values, item, ',')) list.push_back(trim(item));
    if (key == "p") {
      options.primes.emplace();
      for (const auto& v : list) options.primes->push_back(std::stol(v));
    } else if (key == "m") {
      options.exponents.emplace();
      for (const auto& v : list) options.exponents->push_back(std::stoi(v));
    } else if (key == "f") {
      options.forms = list;
    } else if (key == "ell") {
      options.ells.emplace();
      for (const auto& v : list) options.ells->push_back(std::stol(v));
    } else if (!key.empty()) {
      throw std::runtime_error("config: unknown key '" + key + "'");
    }
  }
}

std::string render_series_text(const QSeries& series) {
  std::ostringstream out;
  out << "# ring " << series.ring().name();
  if (series.ring().is_modular()) {
    out << " (p = " << series.ring().modulus().p()
        << ", m = " << series.ring().modulus().exponent() << ")";
  }
  out << ", precision " << series.precision() << "\n";
  for (long n = 0; n < series.precision(); ++n) {
    const Rational& c = series.coeff(n);
    out << "q^" << n << ": " << c.get_num().get_str();
    if (c.get_den() != 1) out << "/" << c.get_den().get_str();
    out << "\n";
  }
  std::string text = out.str();
  text.pop_back();
  return text;
}

struct CommonArgs {
  long p = 0;
  int m = 0;
  long k = 0;
  int t = 1;
  long precision = 0;
  std::string format = "json";
  std::string f;
  std::string series;
  std::string config;
  std::string out;
  bool reproducible = false;
};

int cmd_expand(const CommonArgs& args) {
  const long precision = args.precision > 0 ? args.precision : 10;
  QSeries series = [&]() -> QSeries {
    const Ring ring = args.p > 0 ? Ring::mod(PrimePowerModulus(args.p, std::max(args.m, 1)))
                                 : Ring::rationals();
    std::string name = args.series;
    if (name == "Gstar" || name == "gstar") {
      if (args.p <= 0) throw CLI::ValidationError("expand", "--series Gstar requires --p");
      return g_star(args.k > 0 ? args.k : 2, args.p, args.t, precision);
    }
    if (name == "theta") {
      if (args.f.empty() || args.p <= 0 || args.m <= 0) {
        throw CLI::ValidationError("expand", "--series theta requires --f, --p and --m");
      }
      const Form base = resolve_form(args.f);
      const ThetaResult result = theta_pm(base, args.p, args.m, precision);
      return result.output.q_expansion(precision);
    }
    if (name == "G2") name = "g2";
    if (name == "E2" || name == "e2") {
      QSeries g2 = g2_series(precision, Ring::rationals());
      QSeries e2 = scale(Rational(-24), g2);
      return ring.is_modular() ? reduce_series(e2, ring.modulus()) : e2;
    }
    if (name.rfind("Gk:", 0) == 0) name = "gk:" + name.substr(3);
    if (name.rfind("Ek:", 0) == 0) name = "ek:" + name.substr(3);
    QSeries exact = resolve_named_series(name, precision).series;
    return ring.is_modular() ? reduce_series(exact, ring.modulus()) : exact;
  }();
  emit(args.format == "text" ? render_series_text(series) : to_json(series), args.out);
  return kExitPass;
}

int cmd_verify(const std::string& check, const CommonArgs& args) {
  VerifyOptions options;
  if (!args.config.empty()) apply_config(args.config, options);
  if (args.p > 0) options.primes = std::vector<long>{args.p};
  if (args.m > 0) options.exponents = std::vector<int>{args.m};
  if (!args.f.empty()) options.forms = std::vector<std::string>{args.f};

  const std::vector<CheckReport> reports =
      check == "all" ? run_all_checks(options) : run_check(check, options);

  long passed = 0, failed = 0, hypothesis = 0;
  Json report_array = Json::array();
  for (const auto& r : reports) {
    report_array.push_back(Json::parse(to_json(r)));
    if (r.status == "pass") ++passed;
    else if (r.status == "hypothesis_failure") ++hypothesis;
    else ++failed;
  }

  Json j;
  j["command"] = "verify";
  j["check"] = check;
  j["reports"] = std::move(report_array);
  j["summary"] = Json{{"total", reports.size()},
                      {"passed", passed},
                      {"failed", failed},
                      {"hypothesis_failures", hypothesis}};
  if (!args.reproducible) j["timestamp"] = iso_timestamp();

  if (args.format == "text") {
    std::ostringstream out;
    for (const auto& r : reports) {
      out << (r.status == "pass" ? "[PASS] " : r.status == "fail" ? "[FAIL] " : "[HYP ] ")
          << r.check << " " << r.params_json << "\n";
    }
    out << passed << "/" << reports.size() << " passed";
    emit(out.str(), args.out);
  } else {
    emit(j.dump(2), args.out);
  }
  return passed == static_cast<long>(reports.size()) ? kExitPass : kExitFail;
}

int cmd_filtration(const CommonArgs& args) {
  if (args.p <= 0 || args.f.empty()) {
    throw CLI::ValidationError("filtration", "requires --f and --p");
  }
  const int m = std::max(args.m, 1);
  const PrimePowerModulus mod(args.p, m);

  std::string name = args.f;
  bool theta_image = false;
  if (name.rfind("theta:", 0) == 0) {
    theta_image = true;
    name = name.substr(6);
  }

  Form base = [&]() -> Form {
    if (name.rfind("coords:", 0) == 0) {
      std::ifstream in(name.substr(7));
      if (!in) throw std::runtime_error("cannot open coordinate file");
      const auto j = Json::parse(in);
      std::vector<Rational> coords;
      for (const auto& c : j.at("coords")) {
        Rational r;
        if (r.set_str(c.get<std::string>(), 10) != 0) {
          throw std::runtime_error("bad coordinate");
        }
        r.canonicalize();
        coords.push_back(std::move(r));
      }
      return Form(j.at("weight").get<long>(), Ring::rationals(), std::move(coords));
    }
    return resolve_form(name);
  }();

  const long weight =
      base.weight() + (theta_image ? theta_weight_gain(args.p, m) : 0);
  const long depth = std::max(args.precision, 2 * default_precision(weight));
  QSeries expansion = base.q_expansion(depth);
  if (theta_image) expansion = theta_naive(expansion);

  const FiltrationReport report =
      weight_filtration(reduce_series(expansion, mod), weight, mod);
  emit(args.format == "text"
           ? "w = " + std::to_string(report.w) + " (input weight " +
                 std::to_string(report.input_weight) + " mod " + std::to_string(args.p) +
                 "^" + std::to_string(m) + ")"
           : to_json(report),
       args.out);
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Level-1 modular forms modulo prime powers: expansions, "
               "congruence verifiers, and weight filtrations"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string check_name = "all";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--p", args.p, "prime p >= 5");
    cmd->add_option("--m", args.m, "exponent m >= 1 of the modulus p^m");
    cmd->add_option("--k", args.k, "weight parameter");
    cmd->add_option("--t", args.t, "modulus exponent for G_k*");
    cmd->add_option("--precision", args.precision, "number of q-expansion coefficients");
    cmd->add_option("--format", args.format, "output format: json or text")
        ->check(CLI::IsMember({"json", "text"}));
    cmd->add_option("--f", args.f, "named form (delta, e4, e6, gk:<k>, ek:<k>, a*b, theta:<name>)");
    cmd->add_option("--out", args.out, "write the report to a file instead of stdout");
    cmd->add_option("--config", args.config, "key=value file pinning the verification grid");
    cmd->add_flag("--reproducible", args.reproducible, "suppress the timestamp field");
  };

  CLI::App* expand = app.add_subcommand("expand", "print a q-expansion");
  expand->add_option("--series", args.series,
                     "series name: G2, E2, Gstar, theta, delta, e4, e6, gk:<k>, ek:<k>, products")
      ->required();
  add_common(expand);

  CLI::App* verify = app.add_subcommand("verify", "run an identity check");
  verify->add_option("check", check_name, "check name or 'all'");
  add_common(verify);

  CLI::App* filtration = app.add_subcommand("filtration", "weight filtration mod p^m");
  add_common(filtration);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (expand->parsed()) return cmd_expand(args);
    if (verify->parsed()) return cmd_verify(check_name, args);
    if (filtration->parsed()) return cmd_filtration(args);
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
