#include <doctest.h>

#include <random>
#include <set>

#include "iqsieve/residue.hpp"
#include "oracles.hpp"

using namespace iqsieve;

namespace {

// x = y mod m via exact division of the difference.
bool congruent(const Field& f, const OKElt& x, const OKElt& y, const OKElt& m) {
  return exact_divide(f, x - y, m).has_value();
}

bool prime_by_trial(const Field& f, const OKElt& p) {
  const auto n = norm_i64(f, p);
  if (n <= 1) return false;
  for (const auto& t : enumerate_by_norm(f, n - 1, false))
    if (!is_unit(f, t) && exact_divide(f, p, t)) return false;
  return true;
}

}  // namespace

TEST_CASE("residue system sizes") {
  const Field g = make_field(-1);
  CHECK(residue_system(g, {1, 1}).reps.size() == 2);
  CHECK(residue_system(g, {2, 0}).reps.size() == 4);
  CHECK(residue_system(make_field(-3), {0, 1}).reps.size() == 1);
}

TEST_CASE("residue systems are complete and irredundant") {
  for (std::int64_t d : {-1, -2, -3, -7, -5}) {
    const Field f = make_field(d);
    for (const auto& m : enumerate_by_norm(f, 25, false)) {
      const auto rs = residue_system(f, m);
      REQUIRE(static_cast<std::int64_t>(rs.reps.size()) == norm_i64(f, m));
      for (std::size_t i = 0; i < rs.reps.size(); ++i)
        for (std::size_t j = i + 1; j < rs.reps.size(); ++j) CHECK_FALSE(congruent(f, rs.reps[i], rs.reps[j], m));
    }
  }
}

TEST_CASE("reduction") {
  const Field g = make_field(-1);
  const auto rs = residue_system(g, {2, 0});
  CHECK(reduce(OKElt{}, rs).is_zero());
  CHECK(reduce(OKElt{3, 5}, rs) == OKElt(1, 1));
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::int64_t> c(-50, 50);
  for (std::int64_t d : {-1, -3, -7, -6}) {
    const Field f = make_field(d);
    const OKElt m{4, 3};
    const auto rs = residue_system(f, m);
    for (int i = 0; i < 200; ++i) {
      const OKElt& rep = rs.reps[rng() % rs.reps.size()];
      const OKElt s{c(rng), c(rng)};
      CHECK(reduce(rep + mul(f, s, m), rs) == rep);
    }
  }
}

TEST_CASE("coprimality") {
  const Field g = make_field(-1);
  CHECK_FALSE(is_coprime(g, {1, 1}, {2, 0}));
  CHECK(is_coprime(g, {3, 0}, {1, 1}));
  for (std::int64_t d : {-1, -5, -7}) {
    const Field f = make_field(d);
    for (const auto& m : enumerate_by_norm(f, 10, false)) CHECK(is_coprime(f, {1, 0}, m));
  }
  // In Z[sqrt(-5)], 2 and 1 + sqrt(-5) share the non-principal ideal (2, 1 + sqrt(-5)).
  CHECK_FALSE(is_coprime(make_field(-5), {2, 0}, {1, 1}));
}

TEST_CASE("totient") {
  const Field g = make_field(-1);
  CHECK(totient(g, pow(g, {1, 1}, 2)) == 2);
  CHECK(totient(g, {0, 1}) == 1);
  CHECK(totient(g, {3, 0}) == 8);
  for (std::int64_t d : {-1, -3, -7}) {
    const Field f = make_field(d);
    for (const auto& m : enumerate_by_norm(f, 30, false)) {
      const auto rs = residue_system(f, m);
      std::int64_t direct = 0;
      for (const auto& r : rs.reps) {
        bool unit_mod = false;
        for (const auto& s : rs.reps)
          if (congruent(f, mul(f, r, s), {1, 0}, m)) unit_mod = true;
        direct += unit_mod;
      }
      CHECK(totient(f, m) == direct);
    }
  }
}

TEST_CASE("divisors") {
  const Field g = make_field(-1);
  const auto dv = divisors(g, {2, 0});
  CHECK(dv.size() == 12);
  std::set<std::int64_t> norms;
  for (const auto& t : dv) norms.insert(norm_i64(g, t));
  CHECK(norms == std::set<std::int64_t>{1, 2, 4});
  CHECK(divisors(g, {0, 1}).size() == 4);

  const Field s = make_field(-7);
  const auto d7 = divisors(s, {0, 1});
  CHECK(d7.size() == 4);
  for (const auto& t : d7) CHECK(divides(s, t, {0, 1}));

  for (std::int64_t d : {-1, -2, -3, -7, -11}) {
    const Field f = make_field(d);
    for (const auto& r : enumerate_by_norm(f, 30, false)) {
      std::size_t brute = 0;
      for (const auto& t : enumerate_by_norm(f, norm_i64(f, r), false)) brute += exact_divide(f, r, t).has_value();
      CHECK(divisors(f, r).size() == brute);
    }
  }
}

TEST_CASE("prime elements") {
  const Field g = make_field(-1);
  CHECK(primes_up_to_norm(g, 5).size() == 12);
  CHECK(primes_up_to_norm(g, 8).size() == 12);
  const auto e = primes_up_to_norm(make_field(-3), 3);
  CHECK(e.size() == 6);
  for (const auto& p : e) CHECK(norm_i64(make_field(-3), p) == 3);

  for (std::int64_t d : {-1, -2, -3, -7, -11, -19}) {
    const Field f = make_field(d);
    const auto got = primes_up_to_norm(f, 60);
    std::size_t brute = 0;
    for (const auto& x : enumerate_by_norm(f, 60, false)) brute += prime_by_trial(f, x);
    CHECK(got.size() == brute);
    for (const auto& p : got) CHECK(prime_by_trial(f, p));
  }
}

TEST_CASE("kronecker symbol") {
  CHECK(kronecker_symbol(-4, 2) == 0);
  CHECK(kronecker_symbol(-4, 5) == 1);
  CHECK(kronecker_symbol(-4, 3) == -1);
  CHECK(kronecker_symbol(-7, 2) == 1);
  CHECK(kronecker_symbol(-3, 2) == -1);
  CHECK(is_rational_prime(97));
  CHECK_FALSE(is_rational_prime(91));
}
