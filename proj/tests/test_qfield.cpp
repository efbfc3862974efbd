#include <doctest.h>

#include <random>
#include <stdexcept>

#include "iqsieve/qfield.hpp"
#include "oracles.hpp"

using namespace iqsieve;

TEST_CASE("field construction") {
  const Field g = make_field(-1);
  CHECK(g.disc == -4);
  CHECK(g.omega_case == OmegaCase::SqrtD);
  CHECK(g.units.size() == 4);

  const Field e = make_field(-3);
  CHECK(e.disc == -3);
  CHECK(e.omega_case == OmegaCase::HalfPlus);
  CHECK(e.units.size() == 6);

  CHECK_FALSE(make_field(-5).class_number_one);
  CHECK(oracle::class_number(-20) == 2);
  for (std::int64_t d : {-1, -2, -3, -7, -11, -19, -43, -67, -163}) CHECK(make_field(d).class_number_one);
  for (std::int64_t d : {-5, -6, -10, -15, -23}) CHECK(make_field(d).class_number_one == (oracle::class_number(oracle::disc(d)) == 1));

  CHECK_THROWS_AS(make_field(-4), std::invalid_argument);
  CHECK_THROWS_AS(make_field(0), std::invalid_argument);
  CHECK_THROWS_AS(make_field(5), std::invalid_argument);
}

TEST_CASE("multiplication and conjugation") {
  const Field e = make_field(-3);
  CHECK(mul(e, {0, 1}, {0, 1}) == OKElt(-1, 1));
  const Field g = make_field(-1);
  CHECK(mul(g, {1, 1}, {1, -1}) == OKElt(2, 0));
  CHECK(conj(make_field(-7), {2, 1}) == OKElt(3, -1));
  CHECK(pow(g, {1, 1}, 2) == OKElt(0, 2));
  CHECK(pow(g, {1, 1}, 0) == OKElt(1, 0));
}

TEST_CASE("norm and trace") {
  const Field g = make_field(-1);
  CHECK(norm(g, {1, 1}) == 2);
  CHECK(trace(g, {1, 1}) == 2);
  const Field e = make_field(-3);
  CHECK(norm(e, {0, 1}) == 1);
  CHECK(trace(e, {0, 1}) == 1);
  for (std::int64_t d : {-1, -2, -3, -7, -11}) {
    const Field f = make_field(d);
    CHECK(norm(f, {}) == 0);
    CHECK(trace(f, {}) == 0);
  }
}

TEST_CASE("arithmetic agrees with complex embedding") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> c(-1000, 1000);
  for (std::int64_t d : {-1, -2, -3, -7, -43, -163}) {
    const Field f = make_field(d);
    for (int i = 0; i < 300; ++i) {
      const OKElt x{c(rng), c(rng)}, y{c(rng), c(rng)};
      const auto p = oracle::embed(d, x) * oracle::embed(d, y);
      const auto got = oracle::embed(d, mul(f, x, y));
      CHECK(std::abs(p - got) <= 1e-9 * std::abs(p) + 1e-9);
      CHECK(std::abs(oracle::embed(d, conj(f, x)) - std::conj(oracle::embed(d, x))) < 1e-9);
      CHECK(to_i64(norm(f, x)) == oracle::norm(d, to_i64(x.a), to_i64(x.b)));
      CHECK(norm(f, mul(f, x, y)) == norm(f, x) * norm(f, y));
    }
  }
}

TEST_CASE("big coordinates stay exact") {
  const Field f = make_field(-163);
  const OKElt x{Integer("123456789012345678901"), Integer("-98765432109876543210")};
  const OKElt p = pow(f, x, 5);
  CHECK(norm(f, p) == norm(f, x) * norm(f, x) * norm(f, x) * norm(f, x) * norm(f, x));
  CHECK_THROWS_AS(norm_i64(f, p), std::overflow_error);
}

TEST_CASE("enumeration by norm") {
  const Field g = make_field(-1);
  const auto v = enumerate_by_norm(g, 2, false);
  REQUIRE(v.size() == 8);
  CHECK(std::count_if(v.begin(), v.end(), [&](const OKElt& x) { return norm(g, x) == 1; }) == 4);
  CHECK(enumerate_by_norm(make_field(-3), 1, false).size() == 6);
  const auto z = enumerate_by_norm(g, 0, true);
  REQUIRE(z.size() == 1);
  CHECK(z[0].is_zero());

  for (std::int64_t d : {-1, -2, -3, -7, -11, -19, -43}) {
    const Field f = make_field(d);
    const auto got = enumerate_by_norm(f, 200, true);
    const auto want = oracle::box_scan(d, 200, true);
    CHECK(got.size() == want.size());
    for (std::size_t i = 1; i < got.size(); ++i) {
      const auto a = norm_i64(f, got[i - 1]), b = norm_i64(f, got[i]);
      CHECK((a < b || (a == b && coord_less(got[i - 1], got[i]))));
    }
    std::size_t shell_total = 0;
    for (std::int64_t n = 0; n <= 200; ++n) shell_total += norm_shell(f, n).size();
    CHECK(shell_total == want.size());
  }
}

TEST_CASE("unit detection") {
  for (std::int64_t d : {-1, -2, -3, -7}) {
    const Field f = make_field(d);
    for (const auto& u : f.units) CHECK(is_unit(f, u));
    CHECK_FALSE(is_unit(f, {2, 0}));
    CHECK(enumerate_by_norm(f, 1, false).size() == f.units.size());
  }
}
