#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "iqsieve/experiment.hpp"
#include "iqsieve/parallel.hpp"

using namespace iqsieve;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run_cli(const std::string& args) {
  const char* cli = std::getenv("IQSIEVE_CLI");
  REQUIRE(cli != nullptr);
  const std::string cmd = std::string(cli) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

std::filesystem::path temp_file(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST_CASE("sweep grid and CSV") {
  ExperimentConfig c;
  c.d = -3;
  c.family = FamilyKind::All;
  c.Q_list = {1, 4};
  c.N_list = {4, 9};
  const auto rows = run_sieve(c, 1);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].Q == 1);
  CHECK(rows[0].N == 4);
  CHECK(rows[1].N == 9);
  CHECK(rows[2].Q == 4);
  CHECK(rows[0].lambda_max == doctest::Approx(6.0 * static_cast<double>(rows[0].M)).epsilon(1e-9));
  for (const auto& r : rows) CHECK(r.ratio == doctest::Approx(r.lambda_max / r.rhs));

  const std::string csv = sieve_csv(rows);
  const auto lines = split(csv, '\n');
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "d,family,k,Q,N,F,M,lambda_max,rhs,ratio,iterations,seed");
  for (std::size_t i = 1; i < lines.size(); ++i) CHECK(split(lines[i], ',').size() == 12);
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(144) == "144");

  CHECK(sieve_csv(run_sieve(c, 1)) == csv);
  CHECK(sieve_csv(run_sieve(c, 3)) == csv);

  const auto j = nlohmann::json::parse(sieve_json(rows));
  CHECK(j.size() == 4);
  CHECK(j[3]["F"] == rows[3].F);
}

TEST_CASE("prime sweep ties N to Q") {
  ExperimentConfig c;
  c.family = FamilyKind::Prime;
  c.Q_list = {16};
  const auto rows = run_sieve(c, 1);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].N == 4);
  c.Q_list = {8};
  CHECK_THROWS_AS(run_sieve(c, 1), std::invalid_argument);
}

TEST_CASE("bounds table") {
  ExperimentConfig c;
  c.theorem = Theorem::Square;
  c.Q_list = {4};
  c.N_list = {16};
  c.epsilon = 0;
  const auto rows = run_bounds(c);
  REQUIRE(rows.size() == 1);
  CHECK(bounds_csv(rows) == "theorem,k,Q,N,epsilon,delta,rhs\nsquare,2,4,16,0,0.5,144\n");
}

TEST_CASE("thread count") {
  setenv("IQSIEVE_THREADS", "3", 1);
  CHECK(thread_count() == 3);
  setenv("IQSIEVE_THREADS", "zero", 1);
  CHECK_THROWS(thread_count());
  unsetenv("IQSIEVE_THREADS");
  CHECK(thread_count() >= 1);
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) ++hits[i];
  }, 7);
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
}

TEST_CASE("command line") {
  const auto s = run_cli("sieve --d -1 --family power --k 2 --q 1 --n 4");
  CHECK(s.code == 0);
  const auto lines = split(s.out, '\n');
  REQUIRE(lines.size() == 2);
  const auto f = split(lines[1], ',');
  CHECK(f[5] == "4");
  CHECK(std::stod(f[7]) == 4 * std::stod(f[6]));

  const auto b = run_cli("bounds --theorem square --q 4 --n 16 --epsilon 0");
  CHECK(b.code == 0);
  CHECK(b.out == "theorem,k,Q,N,epsilon,delta,rhs\nsquare,2,4,16,0,0.5,144\n");

  CHECK(run_cli("verify ring --d -2").code == 0);
  CHECK(run_cli("verify nonsense").code == 2);
  CHECK(run_cli("sieve --q 4").code == 2);
  CHECK(run_cli("sieve --d -4 --q 2 --n 4").code == 2);
  CHECK(run_cli("sieve --family prime --q 8").code == 2);
  CHECK(run_cli("bounds --theorem huxley --q 2,x --n 4").code == 2);

  const auto out = temp_file("iqsieve_test_out.csv");
  CHECK(run_cli("sieve --d -3 --q 2,3 --n 4 --out " + out.string()).code == 0);
  std::ifstream in(out);
  std::stringstream file;
  file << in.rdbuf();
  CHECK(file.str() == run_cli("sieve --d -3 --q 2,3 --n 4").out);

  const auto json = run_cli("sieve --d -3 --q 2 --n 4 --format json");
  CHECK(json.code == 0);
  CHECK(nlohmann::json::parse(json.out)[0]["d"] == -3);

  const auto cfg = temp_file("iqsieve_test.cfg");
  std::ofstream(cfg) << "# sweep\nd=-7\nfamily=square\nq=4\nn=16\n";
  const auto from_file = run_cli("sieve --config " + cfg.string());
  CHECK(from_file.code == 0);
  CHECK(from_file.out == run_cli("sieve --d -7 --family square --q 4 --n 16").out);
  CHECK(run_cli("sieve --config " + cfg.string() + " --n 9").out == run_cli("sieve --d -7 --family square --q 4 --n 9").out);
  std::ofstream(cfg) << "d -7\n";
  CHECK(run_cli("sieve --config " + cfg.string()).code == 2);

  const auto sfile = temp_file("iqsieve_test_s.txt");
  std::ofstream(sfile) << "# squares\n1 0\n0 2\n-3 4\n";
  const auto t2 = run_cli("theorem2 --d -1 --s-file " + sfile.string() + " --q 25 --n 16");
  CHECK(t2.code == 0);
  CHECK(split(t2.out, '\n')[0] == "d,Q,N,S,z_samples,inner,rhs,lambda_max,ratio");
  const auto t3 = run_cli("theorem3 --d -1 --s-file " + sfile.string() + " --q 25 --n 16");
  CHECK(t3.code == 0);
  CHECK(split(t3.out, '\n')[0] == "d,Q,N,S,X,rhs,lambda_max,ratio");
  CHECK(run_cli("theorem3 --d -1 --s-file " + sfile.string() + " --q 4 --n 16").code == 2);

  std::filesystem::remove(out);
  std::filesystem::remove(cfg);
  std::filesystem::remove(sfile);
}
