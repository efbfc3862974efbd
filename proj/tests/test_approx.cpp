#include <doctest.h>

#include <random>

#include "iqsieve/approx.hpp"
#include "oracles.hpp"

using namespace iqsieve;

namespace {

double approx_error(std::int64_t d, const Approximation& a, std::complex<double> z) {
  return std::abs(z - oracle::embed(d, a.p) / oracle::embed(d, a.q));
}

}  // namespace

TEST_CASE("N = 1 uses a unit") {
  const Field g = make_field(-1);
  const std::complex<double> z{0.3, 0.7};
  const auto a = dirichlet_approx(g, z, 1);
  CHECK(is_unit(g, a.q));
  CHECK(a.error <= 2.0);
  CHECK(a.error <= std::sqrt(0.5) + 1e-12);
  CHECK(std::abs(approx_error(-1, a, z) - a.error) < 1e-12);
}

TEST_CASE("exact fractions are recovered") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::int64_t> c(-4, 4);
  for (std::int64_t d : {-1, -2, -3, -7}) {
    const Field f = make_field(d);
    for (int i = 0; i < 50; ++i) {
      const OKElt p0{c(rng), c(rng)};
      OKElt q0{c(rng), c(rng)};
      if (q0.is_zero()) q0 = {1, 0};
      const auto z = oracle::embed(d, p0) / oracle::embed(d, q0);
      const auto N = static_cast<std::int64_t>(std::ceil(std::abs(oracle::embed(d, q0))));
      const auto a = dirichlet_approx(f, z, N);
      CHECK(norm_i64(f, a.q) <= norm_i64(f, q0));
      if (norm_i64(f, a.q) == norm_i64(f, q0)) CHECK(a.error < 1e-12);
    }
  }
}

TEST_CASE("zero") {
  const Field g = make_field(-1);
  const auto a = dirichlet_approx(g, 0.0, 7);
  CHECK(a.p.is_zero());
  CHECK(is_unit(g, a.q));
  CHECK(a.error == 0.0);
}

TEST_CASE("certificate against the exhaustive oracle") {
  const Field f = make_field(-7);
  const std::complex<double> z{0.123, 0.456};
  const auto a = dirichlet_approx(f, z, 10);
  const double q_abs = std::abs(oracle::embed(-7, a.q));
  CHECK(q_abs <= 10 + 1e-12);
  CHECK(a.error * q_abs * 10 <= std::sqrt(7.0) * (1 + 1e-12));
  const auto best = best_approx_oracle(f, z, 10);
  CHECK(best.error * std::abs(oracle::embed(-7, best.q)) <= a.error * q_abs + 1e-12);
}

TEST_CASE("lemma inequality on random points") {
  const Field f = make_field(-11);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const std::complex<double> z{u(rng), u(rng)};
    const auto a = dirichlet_approx(f, z, 20);
    const double q_abs = std::abs(oracle::embed(-11, a.q));
    CHECK(q_abs > 0.0);
    CHECK(q_abs <= 20 + 1e-12);
    CHECK(approx_error(-11, a, z) <= std::sqrt(11.0) / (q_abs * 20) + 1e-12);
  }
}

TEST_CASE("nearest lattice point") {
  for (std::int64_t d : {-1, -3, -7, -19}) {
    const Field f = make_field(d);
    std::mt19937_64 rng(static_cast<std::uint64_t>(-d));
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (int i = 0; i < 200; ++i) {
      const std::complex<double> w{u(rng), u(rng)};
      const double got = std::abs(w - oracle::embed(d, nearest_lattice_point(f, w)));
      double best = 1e300;
      for (const auto& [a, b] : oracle::box_scan(d, 2000, true)) best = std::min(best, std::abs(w - oracle::embed(d, a, b)));
      CHECK(got <= best + 1e-12);
    }
  }
}

TEST_CASE("bad arguments") {
  const Field g = make_field(-1);
  CHECK_THROWS(dirichlet_approx(g, 0.5, 0));
  CHECK_THROWS(best_approx_oracle(g, 0.5, 51));
}
