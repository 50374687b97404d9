// tra: command-line front end to libtra.
//
// Exit codes: 0 every checked property holds, 1 a property fails (the
// report carries the witness), 2 usage or input error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tra/tra.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitHolds = 0;
constexpr int kExitFails = 1;
constexpr int kExitUsage = 2;

struct CarrierDeleter {
  void operator()(tra_carrier* c) const { tra_carrier_free(c); }
};
struct FormulaDeleter {
  void operator()(tra_formula* q) const { tra_formula_free(q); }
};
struct StringDeleter {
  void operator()(char* s) const { tra_string_free(s); }
};
using CarrierPtr = std::unique_ptr<tra_carrier, CarrierDeleter>;
using FormulaPtr = std::unique_ptr<tra_formula, FormulaDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

/// Input or library error that ends the run with exit code 2.
struct UsageError {
  std::string message;
};

[[noreturn]] void raise(tra_status status, const std::string& context) {
  std::string msg = context.empty() ? "" : context + ": ";
  msg += tra_last_error();
  if (msg.empty() || msg == context + ": ") msg += tra_status_name(status);
  throw UsageError{msg};
}

void check_status(tra_status status, const std::string& context = {}) {
  if (status != TRA_OK) raise(status, context);
}

Json take_json(char* raw) {
  StringPtr owned(raw);
  return Json::parse(owned.get());
}

struct CommonFlags {
  bool json = false;
  bool exhaustive = false;
  std::optional<std::uint64_t> random_trials;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_mode) {
  cmd->add_flag("--json", flags.json, "Emit the report as JSON");
  cmd->add_option("--seed", flags.seed, "Seed for sampled modes");
  cmd->add_option("--workers", flags.workers, "Worker threads")
      ->check(CLI::Range(1U, 256U));
  if (with_mode) {
    auto* ex = cmd->add_flag("--exhaustive", flags.exhaustive,
                             "Enumerate every element or assignment");
    auto* rnd = cmd->add_option("--random", flags.random_trials,
                                "Sample TRIALS seeded random cases")
                    ->check(CLI::PositiveNumber);
    ex->excludes(rnd);
  }
}

tra_options make_options(const CommonFlags& flags) {
  tra_options o;
  tra_options_init(&o);
  if (flags.random_trials) {
    o.mode = TRA_MODE_SAMPLED;
    o.trials = *flags.random_trials;
  }
  if (flags.seed) o.seed = *flags.seed;
  o.workers = flags.workers;
  if (const char* env = std::getenv("TRA_BUDGET"); env && *env) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used != std::string(env).size() || v == 0) throw std::exception();
      o.enumeration_budget = v;
    } catch (...) {
      throw UsageError{"TRA_BUDGET must be a positive integer"};
    }
  }
  return o;
}

Json options_json(const tra_options& o) {
  Json j{{"mode", o.mode == TRA_MODE_SAMPLED ? "sampled" : "exhaustive"}};
  if (o.mode == TRA_MODE_SAMPLED) j["trials"] = o.trials;
  j["seed"] = o.seed;
  j["workers"] = o.workers;
  j["budget"] = o.enumeration_budget;
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError{path + ": cannot open file"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CarrierPtr load_carrier(const std::string& path) {
  const std::string text = read_file(path);
  tra_carrier* raw = nullptr;
  if (const tra_status s = tra_carrier_from_spec(text.c_str(), &raw); s != TRA_OK) {
    if (s == TRA_ERR_PARSE) throw UsageError{path + ":" + tra_last_error()};
    raise(s, path);
  }
  return CarrierPtr(raw);
}

std::string spec_text(const tra_carrier* c) {
  char* raw = nullptr;
  check_status(tra_carrier_to_spec(c, &raw));
  StringPtr owned(raw);
  return owned.get();
}

// ---- human-readable rendering ----------------------------------------------

bool is_seq_list(const Json& j) {
  if (!j.is_array() || j.empty()) return false;
  for (const Json& e : j) {
    if (!e.is_array()) return false;
    for (const Json& v : e) {
      if (!v.is_number_unsigned()) return false;
    }
  }
  return true;
}

std::string inline_value(const Json& j) {
  if (is_seq_list(j)) {
    std::string s = "{";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) s += ", ";
      s += '(';
      for (std::size_t k = 0; k < j[i].size(); ++k) {
        if (k) s += ',';
        s += j[i][k].dump();
      }
      s += ')';
    }
    return s + "}";
  }
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

void render(const Json& j, std::ostream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (const auto& [key, value] : j.items()) {
    if (value.is_object()) {
      out << pad << key << ":\n";
      render(value, out, indent + 2);
    } else if (value.is_array() && !value.empty() && value[0].is_object()) {
      out << pad << key << ":\n";
      for (std::size_t i = 0; i < value.size(); ++i) {
        out << pad << "  [" << i << "]\n";
        render(value[i], out, indent + 4);
      }
    } else if (value.is_string() &&
               value.get<std::string>().find('\n') != std::string::npos) {
      out << pad << key << ":\n";
      std::istringstream lines(value.get<std::string>());
      for (std::string line; std::getline(lines, line);) {
        out << pad << "  | " << line << "\n";
      }
    } else {
      out << pad << key << ": " << inline_value(value) << "\n";
    }
  }
}

// ---- run reports -------------------------------------------------------------

struct Run {
  Run() = default;
  explicit Run(std::string name) : command(std::move(name)) {}

  std::string command;
  Json inputs = Json::object();
  Json result = Json::object();
  std::vector<std::string> headline;
  bool ok = true;
};

int finish(const Run& run, bool json,
           std::chrono::steady_clock::time_point start) {
  const int code = run.ok ? kExitHolds : kExitFails;
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  Json report{{"command", run.command},
              {"inputs", run.inputs},
              {"outcome", run.ok ? "pass" : "fail"},
              {"exit_code", code},
              {"result", run.result},
              {"wall_time_ms", ms}};
  if (json) {
    std::cout << report.dump(2) << "\n";
  } else {
    for (const std::string& line : run.headline) std::cout << line << "\n";
    render(report, std::cout, 0);
  }
  return code;
}

// ---- subcommands -------------------------------------------------------------

Run cmd_sigma_demo(unsigned n, bool all_pairs, const tra_options& o) {
  Run run{"sigma-demo"};
  run.inputs = {{"n", n}, {"all_perm_pairs", all_pairs}, {"options", options_json(o)}};

  int passed = 0;
  char* raw = nullptr;
  check_status(tra_counterexample(n, &o, &passed, &raw), "counterexample");
  Json counter = take_json(raw);
  run.ok = run.ok && passed;
  run.headline.push_back(std::string("counterexample: sigma ") +
                         (counter["verdict"]["outcome"] == "fails" ? "fails" : "holds") +
                         " on P(G); union = ~X: " +
                         (counter["union_is_complement"].get<bool>() ? "yes" : "no"));
  run.result["counterexample"] = std::move(counter);

  if (n <= 4) {
    check_status(tra_h_escape(n, &o, &passed, &raw), "h-escape");
    Json escape = take_json(raw);
    run.ok = run.ok && passed;
    run.headline.push_back(std::string("variety closure fails: ") +
                           (passed ? "yes" : "no"));
    run.result["h_escape"] = std::move(escape);
  }

  std::vector<uint32_t> f(n);
  std::vector<uint32_t> g(n);
  for (unsigned i = 0; i < n; ++i) {
    f[i] = (i + 1) % n;
    g[i] = (i + n - 1) % n;
  }
  int holds = 0;
  check_status(tra_sigma_small(n, 2, all_pairs ? nullptr : f.data(),
                               all_pairs ? nullptr : g.data(), &o, &holds, &raw),
               "sigma-small");
  run.ok = run.ok && holds;
  run.headline.push_back("sigma holds in A_" + std::to_string(n) + ",2: " +
                         (holds ? "yes" : "no"));
  run.result["sigma_small"] = take_json(raw);
  return run;
}

Run cmd_check(const std::string& spec_path, const std::optional<std::string>& eq,
              const std::optional<std::string>& quasi, const tra_options& o) {
  Run run{"check"};
  CarrierPtr carrier = load_carrier(spec_path);
  const std::string text = eq ? *eq : *quasi;
  if (eq && text.find("=>") != std::string::npos) {
    throw UsageError{"--eq takes a single equation; use --quasi for implications"};
  }
  tra_formula* raw_formula = nullptr;
  if (const tra_status s = tra_formula_parse(text.c_str(), &raw_formula); s != TRA_OK) {
    if (s == TRA_ERR_PARSE) throw UsageError{std::string("formula:") + tra_last_error()};
    raise(s, "formula");
  }
  FormulaPtr formula(raw_formula);
  char* printed = nullptr;
  check_status(tra_formula_print(formula.get(), &printed));
  run.inputs = {{"spec", spec_path},
                {"algebra", spec_text(carrier.get())},
                {eq ? "eq" : "quasi", StringPtr(printed).get()},
                {"options", options_json(o)}};

  int holds = 0;
  char* raw = nullptr;
  check_status(tra_check(carrier.get(), formula.get(), &o, &holds, &raw), "check");
  Json verdict = take_json(raw);
  if (verdict.contains("witness")) {
    int violated = 0;
    check_status(tra_revalidate_witness(carrier.get(), formula.get(),
                                        verdict["witness"].dump().c_str(), &violated));
    verdict["witness_revalidated"] = violated == 1;
  }
  run.ok = holds == 1;
  run.headline.push_back(std::string("verdict: ") + verdict["outcome"].get<std::string>());
  run.result = std::move(verdict);
  return run;
}

Run cmd_verify_relativization(const std::string& big_path, const std::string& sub_path,
                              const tra_options& o) {
  Run run{"verify-relativization"};
  CarrierPtr big = load_carrier(big_path);
  CarrierPtr sub = load_carrier(sub_path);
  run.inputs = {{"big", big_path},
                {"big_algebra", spec_text(big.get())},
                {"sub", sub_path},
                {"sub_algebra", spec_text(sub.get())},
                {"options", options_json(o)}};
  int passed = 0;
  char* raw = nullptr;
  const tra_status s = tra_verify_relativization(big.get(), sub.get(), &o, &passed, &raw);
  if (s == TRA_ERR_NOT_PERMUTABLE) throw UsageError{"G not permutable"};
  if (s == TRA_ERR_NOT_SUBCARRIER) throw UsageError{"G is not a sub-carrier of E"};
  check_status(s, "verify-relativization");
  run.ok = passed == 1;
  run.headline.push_back(std::string("relativization homomorphism: ") +
                         (run.ok ? "PASS" : "FAIL"));
  run.result = take_json(raw);
  return run;
}

Run cmd_decompose(unsigned n, unsigned k, const tra_options& o) {
  Run run{"decompose"};
  run.inputs = {{"n", n}, {"k", k}, {"options", options_json(o)}};
  int passed = 0;
  char* raw = nullptr;
  check_status(tra_decompose(n, k, &o, &passed, &raw), "decompose");
  run.ok = passed == 1;
  Json result = take_json(raw);
  run.headline.push_back(std::string("separation: ") +
                         (result["separation"]["separated"].get<bool>() ? "PASS" : "FAIL"));
  run.result = std::move(result);
  return run;
}

Run cmd_closure(const std::string& spec_path, const tra_options& o) {
  Run run{"closure"};
  CarrierPtr carrier = load_carrier(spec_path);
  run.inputs = {{"spec", spec_path},
                {"algebra", spec_text(carrier.get())},
                {"options", options_json(o)}};
  int before = 0;
  check_status(tra_carrier_is_permutable(carrier.get(), &before));
  tra_carrier* raw_closure = nullptr;
  check_status(tra_carrier_permutable_closure(carrier.get(), &raw_closure), "closure");
  CarrierPtr closure(raw_closure);
  int after = 0;
  check_status(tra_carrier_is_permutable(closure.get(), &after));

  Json members = Json::array();
  const uint32_t n = tra_carrier_dim(closure.get());
  std::vector<uint32_t> entries(n);
  for (std::size_t p = 0; p < tra_carrier_size(closure.get()); ++p) {
    check_status(tra_carrier_member(closure.get(), p, entries.data()));
    members.push_back(entries);
  }
  run.result = {{"input_permutable", before == 1},
                {"closure", members},
                {"size", tra_carrier_size(closure.get())},
                {"permutable", after == 1 ? "yes" : "no"},
                {"spec", spec_text(closure.get())}};
  run.ok = after == 1;
  run.headline.push_back("permutable = " + std::string(after == 1 ? "yes" : "no"));
  return run;
}

Run cmd_ultraproduct(const std::vector<std::string>& specs, std::size_t index,
                     const tra_options& o) {
  Run run{"ultraproduct"};
  std::vector<CarrierPtr> owned;
  std::vector<const tra_carrier*> factors;
  Json algebras = Json::array();
  for (const std::string& path : specs) {
    owned.push_back(load_carrier(path));
    factors.push_back(owned.back().get());
    algebras.push_back(spec_text(owned.back().get()));
  }
  run.inputs = {{"specs", specs},
                {"algebras", algebras},
                {"i0", index},
                {"options", options_json(o)}};
  int passed = 0;
  char* raw = nullptr;
  check_status(tra_ultraproduct(factors.data(), factors.size(), index, &o, &passed, &raw),
               "ultraproduct");
  run.ok = passed == 1;
  run.headline.push_back(std::string("principal ultraproduct embedding: ") +
                         (run.ok ? "PASS" : "FAIL"));
  run.result = take_json(raw);
  return run;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite transposition set algebra workbench"};
  app.require_subcommand(1);

  CommonFlags flags;

  unsigned demo_n = 0;
  bool all_pairs = false;
  auto* demo = app.add_subcommand("sigma-demo",
                                  "Reproduce the sigma counterexample and its context");
  demo->add_option("--n", demo_n, "Dimension (2..6)")->required();
  demo->add_flag("--all-perm-pairs", all_pairs,
                 "Check sigma in A_n,2 for every (f, g) pair (n <= 5)");
  add_common(demo, flags, true);

  std::string spec_path;
  std::optional<std::string> eq_text;
  std::optional<std::string> quasi_text;
  auto* check = app.add_subcommand("check", "Decide an equation or quasi-equation");
  check->add_option("--spec", spec_path, "Algebra spec (.alg)")->required();
  auto* eq_opt = check->add_option("--eq", eq_text, "Equation");
  auto* quasi_opt = check->add_option("--quasi", quasi_text, "Quasi-equation");
  eq_opt->excludes(quasi_opt);
  add_common(check, flags, true);

  std::string big_path;
  std::string sub_path;
  auto* rel = app.add_subcommand("verify-relativization",
                                 "Check that x -> x & G is a homomorphism");
  rel->add_option("--big", big_path, "Source carrier E (.alg)")->required();
  rel->add_option("--sub", sub_path, "Permutable G inside E (.alg)")->required();
  add_common(rel, flags, true);

  unsigned dec_n = 0;
  unsigned dec_k = 0;
  auto* dec = app.add_subcommand("decompose",
                                 "Subdirect decomposition of P(^n k) into small algebras");
  dec->add_option("--n", dec_n, "Dimension")->required();
  dec->add_option("--k", dec_k, "Base size")->required();
  add_common(dec, flags, true);

  std::string closure_path;
  auto* clo = app.add_subcommand("closure", "Smallest permutable superset");
  clo->add_option("--spec", closure_path, "Algebra spec (.alg)")->required();
  add_common(clo, flags, false);

  std::vector<std::string> ultra_specs;
  std::size_t ultra_index = 0;
  auto* ult = app.add_subcommand("ultraproduct",
                                 "Principal ultraproduct embedding check");
  ult->add_option("--spec", ultra_specs, "Factor spec (.alg), repeatable")->required();
  ult->add_option("--i0", ultra_index, "Index of the principal ultrafilter");
  add_common(ult, flags, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    const tra_options options = make_options(flags);
    Run run;
    if (demo->parsed()) {
      if (demo_n < 2 || demo_n > 6) {
        std::cerr << "sigma-demo: --n must be between 2 and 6\n"
                  << demo->help();
        return kExitUsage;
      }
      if (all_pairs && demo_n > 5) {
        throw UsageError{"--all-perm-pairs is limited to n <= 5"};
      }
      run = cmd_sigma_demo(demo_n, all_pairs, options);
    } else if (check->parsed()) {
      if (!eq_text && !quasi_text) throw UsageError{"check needs --eq or --quasi"};
      run = cmd_check(spec_path, eq_text, quasi_text, options);
    } else if (rel->parsed()) {
      run = cmd_verify_relativization(big_path, sub_path, options);
    } else if (dec->parsed()) {
      run = cmd_decompose(dec_n, dec_k, options);
    } else if (clo->parsed()) {
      run = cmd_closure(closure_path, options);
    } else {
      run = cmd_ultraproduct(ultra_specs, ultra_index, options);
    }
    return finish(run, flags.json, start);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.message << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
