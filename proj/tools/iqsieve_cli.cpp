// iqsieve: experiment driver for the imaginary quadratic large sieve.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "iqsieve/bounds.hpp"
#include "iqsieve/experiment.hpp"
#include "iqsieve/parallel.hpp"
#include "iqsieve/sieve.hpp"
#include "iqsieve/suites.hpp"

namespace {

using namespace iqsieve;

constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// key=value lines become "--key value" tokens; keys already given as flags win.
std::vector<std::string> config_tokens(const std::string& path, const std::set<std::string>& given) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  std::vector<std::string> out;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config " + path + ":" + std::to_string(lineno) + ": expected key=value, got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    std::replace(key.begin(), key.end(), '_', '-');
    if (key.empty()) throw UsageError("config " + path + ":" + std::to_string(lineno) + ": empty key");
    if (given.count(key)) continue;
    if (key == "dyadic") {
      if (value == "true" || value == "1") out.push_back("--dyadic");
      else if (value != "false" && value != "0")
        throw UsageError("config key 'dyadic': expected true or false, got '" + value + "'");
      continue;
    }
    out.push_back("--" + key);
    out.push_back(value);
  }
  return out;
}

std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  std::set<std::string> given;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) != 0) continue;
    std::string key = a.substr(2);
    if (const auto eq = key.find('='); eq != std::string::npos) {
      if (key.substr(0, eq) == "config") path = key.substr(eq + 1);
      key.erase(eq);
    } else if (key == "config" && i + 1 < args.size()) {
      path = args[i + 1];
    }
    given.insert(key);
  }
  if (path.empty()) return args;
  auto extra = config_tokens(path, given);
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

std::vector<OKElt> read_s_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open S file '" + path + "'");
  std::vector<OKElt> out;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    std::istringstream is(line);
    long long a = 0, b = 0;
    std::string rest;
    if (!(is >> a >> b) || (is >> rest))
      throw UsageError("S file " + path + ":" + std::to_string(lineno) + ": expected two integers 'a b'");
    out.emplace_back(a, b);
  }
  return out;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + out_path + "'");
  out << text;
}

struct Options {
  std::int64_t d = -1;
  std::string family = "all";
  std::string theorem;
  int k = 1;
  std::vector<std::int64_t> q;
  std::vector<std::int64_t> n;
  double epsilon = 0.25;
  double delta = 0.5;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  int z_samples = 32;
  std::string format = "csv";
  bool dyadic = false;
  std::string out;
  std::string config;
  std::string s_file;
  std::string suite;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "key=value file; command-line flags take precedence");
  sub->add_option("--out", o.out, "write output here instead of stdout");
  sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

ExperimentConfig to_config(const Options& o) {
  ExperimentConfig c;
  c.d = o.d;
  c.family = parse_family_kind(o.family);
  if (!o.theorem.empty()) c.theorem = parse_theorem(o.theorem);
  c.k = o.k;
  c.Q_list = o.q;
  c.N_list = o.n;
  c.epsilon = o.epsilon;
  c.delta = o.delta;
  c.tol = o.tol;
  c.seed = o.seed;
  c.z_samples = o.z_samples;
  c.dyadic = o.dyadic;
  if (!o.s_file.empty()) c.custom = read_s_file(o.s_file);
  return c;
}

ModuliSet moduli_from(const Options& o) {
  if (o.s_file.empty()) throw UsageError("--s-file is required");
  if (o.q.size() != 1) throw UsageError("--q takes exactly one value here");
  if (o.n.size() != 1) throw UsageError("--n takes exactly one value here");
  return make_moduli_set(make_field(o.d), o.q.front(), read_s_file(o.s_file));
}

double custom_lambda(const ModuliSet& S, std::int64_t N, const Options& o) {
  FamilyOptions fopts;
  fopts.custom = S.elements;
  const auto family = build_fractions(S.field, FamilyKind::Custom, S.Q, 1, fopts);
  PowerOptions popts;
  popts.tol = o.tol;
  popts.seed = o.seed;
  return lambda_max(family, N, popts).value;
}

std::string table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows,
                  const std::string& format) {
  if (format == "json") {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
      nlohmann::ordered_json obj;
      for (std::size_t i = 0; i < header.size(); ++i) obj[header[i]] = row[i];
      out.push_back(obj);
    }
    return out.dump(2) + "\n";
  }
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  return os.str();
}

int run(int argc, char** argv) {
  CLI::App app{"Large-sieve verification laboratory for imaginary quadratic fields"};
  app.require_subcommand(1);
  Options o;

  auto* verify = app.add_subcommand("verify", "run a property suite");
  verify->add_option("suite", o.suite, "ring|character|residue|approx|poisson|fourier")
      ->required()
      ->check(CLI::IsMember(suite_names()));
  verify->add_option("--d", o.d, "negative squarefree d");
  verify->add_option("--seed", o.seed);
  add_common(verify, o);

  auto* sieve = app.add_subcommand("sieve", "lambda_max sweep over the Q x N grid");
  sieve->add_option("--d", o.d);
  sieve->add_option("--family", o.family, "all|power|square|prime|custom");
  sieve->add_option("--theorem", o.theorem, "huxley|power|square|prime (default: by family)");
  sieve->add_option("--k", o.k);
  sieve->add_option("--q", o.q)->delimiter(',')->required();
  sieve->add_option("--n", o.n)->delimiter(',');
  sieve->add_option("--epsilon", o.epsilon);
  sieve->add_option("--delta", o.delta);
  sieve->add_option("--tol", o.tol);
  sieve->add_option("--seed", o.seed);
  sieve->add_flag("--dyadic", o.dyadic, "keep only Q/2 < N(q) <= Q");
  sieve->add_option("--s-file", o.s_file, "moduli for --family custom, one 'a b' per line");
  add_common(sieve, o);

  auto* bounds = app.add_subcommand("bounds", "evaluate right-hand sides only");
  bounds->add_option("--theorem", o.theorem)->required();
  bounds->add_option("--k", o.k);
  bounds->add_option("--q", o.q)->delimiter(',')->required();
  bounds->add_option("--n", o.n)->delimiter(',');
  bounds->add_option("--epsilon", o.epsilon);
  bounds->add_option("--delta", o.delta);
  add_common(bounds, o);

  auto* th2 = app.add_subcommand("theorem2", "nested bound for a set S of moduli");
  auto* th3 = app.add_subcommand("theorem3", "hypothesis constant X for a set S of moduli");
  for (auto* sub : {th2, th3}) {
    sub->add_option("--d", o.d);
    sub->add_option("--s-file", o.s_file)->required();
    sub->add_option("--q", o.q)->delimiter(',')->required();
    sub->add_option("--n", o.n)->delimiter(',')->required();
    sub->add_option("--tol", o.tol);
    sub->add_option("--seed", o.seed);
    add_common(sub, o);
  }
  th2->add_option("--z-samples", o.z_samples);
  th3->add_option("--epsilon", o.epsilon);

  std::vector<std::string> args = expand_config(argc, argv);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  const unsigned threads = thread_count();

  if (*verify) {
    const SuiteReport rep = run_suite(o.suite, make_field(o.d), o.seed);
    if (o.format == "json") {
      nlohmann::ordered_json j;
      j["suite"] = rep.suite;
      j["d"] = rep.d;
      j["passed"] = rep.passed();
      j["checks"] = nlohmann::ordered_json::array();
      for (const auto& c : rep.checks)
        j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"measured", c.measured}, {"limit", c.limit},
                               {"informational", c.informational}});
      emit(j.dump(2) + "\n", o.out);
    } else {
      emit(rep.text(), o.out);
    }
    return rep.passed() ? 0 : kExitVerifyFailed;
  }
  if (*sieve) {
    ExperimentConfig c = to_config(o);
    if (c.family == FamilyKind::Custom && c.custom.empty()) throw UsageError("--family custom needs --s-file");
    const auto rows = run_sieve(c, threads);
    emit(o.format == "json" ? sieve_json(rows) : sieve_csv(rows), o.out);
    return 0;
  }
  if (*bounds) {
    const auto rows = run_bounds(to_config(o));
    emit(o.format == "json" ? bounds_json(rows) : bounds_csv(rows), o.out);
    return 0;
  }
  if (*th2) {
    const ModuliSet S = moduli_from(o);
    const std::int64_t N = o.n.front();
    Theorem2Options topts;
    topts.z_samples = o.z_samples;
    topts.threads = threads;
    const Theorem2Result t2 = theorem2_rhs(S, N, topts);
    const double lam = custom_lambda(S, N, o);
    emit(table({"d", "Q", "N", "S", "z_samples", "inner", "rhs", "lambda_max", "ratio"},
               {{std::to_string(o.d), std::to_string(S.Q), std::to_string(N), std::to_string(S.elements.size()),
                 std::to_string(o.z_samples), format_number(t2.inner), format_number(t2.value), format_number(lam),
                 format_number(lam / t2.value)}},
               o.format),
         o.out);
    return 0;
  }
  if (*th3) {
    const ModuliSet S = moduli_from(o);
    const std::int64_t N = o.n.front();
    const XResult x = verify_X(S, N);
    const double rhs = theorem3_rhs(S, N, x.X, o.epsilon);
    const double lam = custom_lambda(S, N, o);
    emit(table({"d", "Q", "N", "S", "X", "rhs", "lambda_max", "ratio"},
               {{std::to_string(o.d), std::to_string(S.Q), std::to_string(N), std::to_string(S.elements.size()),
                 format_number(x.X), format_number(rhs), format_number(lam), format_number(lam / rhs)}},
               o.format),
         o.out);
    return 0;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitVerifyFailed;
  }
}
