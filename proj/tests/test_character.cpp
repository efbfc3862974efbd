#include <doctest.h>

#include <random>

#include "iqsieve/character.hpp"
#include "iqsieve/residue.hpp"
#include "oracles.hpp"

using namespace iqsieve;

TEST_CASE("phase examples") {
  const Field g = make_field(-1);
  const QPhase p = phase(g, {1, 0}, {1, 0}, {1, 1});
  CHECK(p == QPhase{1, 2});
  CHECK(std::abs(eval_character(p) - std::complex<double>(-1, 0)) < 1e-15);
  CHECK(std::abs(oracle::character(-1, oracle::embed(-1, 1, 0) / oracle::embed(-1, 1, 1)) + 1.0) < 1e-12);

  for (std::int64_t d : {-1, -2, -3, -7})
    CHECK(phase(make_field(d), {7, -3}, {2, 5}, {1, 0}) == QPhase{0, 1});

  const Field e = make_field(-3);
  CHECK(phase(e, {0, 1}, {1, 0}, {2, 0}) == QPhase{1, 2});
}

TEST_CASE("evaluation") {
  CHECK(eval_character(QPhase{0, 1}) == std::complex<double>(1, 0));
  CHECK(eval_character(QPhase{1, 2}) == std::complex<double>(-1, 0));
  CHECK(std::abs(eval_character(QPhase{1, 3}) - std::complex<double>(-0.5, std::sqrt(3.0) / 2)) < 1e-15);
  CHECK(unit_root(1, 4) == std::complex<double>(0, 1));
  CHECK(unit_root(-1, 4) == std::complex<double>(0, -1));
  CHECK_THROWS(make_phase(1, 0));
  CHECK(make_phase(-1, 3) == QPhase{2, 3});
  CHECK(make_phase(6, 4) == QPhase{1, 2});
}

TEST_CASE("complex-plane character") {
  const Field g = make_field(-1);
  CHECK(std::abs(eval_character_complex_oracle(g, 0.0) - 1.0) < 1e-15);
  CHECK(std::abs(eval_character_complex_oracle(g, 2.7) - 1.0) < 1e-15);
  CHECK(std::abs(eval_character_complex_oracle(g, {0.0, 0.5}) + 1.0) < 1e-15);
}

TEST_CASE("exact phase matches the definition on random inputs") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> c(-30, 30);
  for (std::int64_t d : {-1, -2, -3, -7, -11, -19, -43}) {
    const Field f = make_field(d);
    for (int i = 0; i < 500; ++i) {
      const OKElt n{c(rng), c(rng)}, r{c(rng), c(rng)};
      OKElt m{c(rng), c(rng)};
      if (m.is_zero()) m = {1, 0};
      const auto z = oracle::embed(d, n) * oracle::embed(d, r) / oracle::embed(d, m);
      CHECK(std::abs(eval_character(phase(f, n, r, m)) - oracle::character(d, z)) < 1e-9);
      CHECK(std::abs(eval_character_complex_oracle(f, z) - oracle::character(d, z)) < 1e-9);
    }
  }
}

TEST_CASE("orthogonality over residues") {
  for (std::int64_t d : {-1, -3, -7}) {
    const Field f = make_field(d);
    for (const auto& m : enumerate_by_norm(f, 12, false)) {
      const auto rs = residue_system(f, m);
      for (const auto& a : enumerate_by_norm(f, 20, true)) {
        std::complex<double> s = 0.0;
        for (const auto& r : rs.reps) s += eval_character(phase(f, a, r, m));
        const double want = divides(f, m, a) ? static_cast<double>(rs.reps.size()) : 0.0;
        CHECK(std::abs(s - want) < 1e-9);
      }
    }
  }
}

TEST_CASE("additivity and periodicity") {
  const Field f = make_field(-7);
  const OKElt m{3, 2};
  for (const auto& x : enumerate_by_norm(f, 10, true))
    for (const auto& y : enumerate_by_norm(f, 10, true)) {
      CHECK(phase(f, x + y, {1, 0}, m) == phase(f, x, {1, 0}, m) + phase(f, y, {1, 0}, m));
      CHECK(phase(f, x, {1, 0}, m) == phase(f, x + m, {1, 0}, m));
    }
}
