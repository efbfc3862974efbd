#include "iqsieve/character.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace iqsieve {

namespace {

Integer floor_mod(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r < 0) r += m;
  return r;
}

// e(x); callers pass x in (-1/2, 1/2].
std::complex<double> turn(double x) {
  const double angle = 2.0 * std::numbers::pi * x;
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

QPhase make_phase(const Integer& num, const Integer& den) {
  if (den == 0) throw std::domain_error("phase: zero denominator");
  Integer n = num;
  Integer d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  n = floor_mod(n, d);
  if (n == 0) return {Integer(0), Integer(1)};
  const Integer g = boost::multiprecision::gcd(n, d);
  return {n / g, d / g};
}

QPhase operator+(const QPhase& x, const QPhase& y) { return make_phase(x.num * y.den + y.num * x.den, x.den * y.den); }

QPhase operator-(const QPhase& x) { return make_phase(-x.num, x.den); }

QPhase phase(const Field& field, const OKElt& n, const OKElt& r, const OKElt& m) {
  if (m.is_zero()) throw std::domain_error("phase: division by zero modulus");
  const OKElt w = mul(field, mul(field, n, r), conj(field, m));
  return make_phase(w.b, norm(field, m));
}

std::complex<double> unit_root(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw std::domain_error("unit_root: non-positive denominator");
  std::int64_t n = num % den;
  if (n < 0) n += den;
  // Exact values at multiples of a quarter turn.
  if (n == 0) return {1.0, 0.0};
  if (2 * static_cast<__int128>(n) == den) return {-1.0, 0.0};
  if (4 * static_cast<__int128>(n) == den) return {0.0, 1.0};
  if (4 * static_cast<__int128>(n) == 3 * static_cast<__int128>(den)) return {0.0, -1.0};
  // Reduce to (-1/2, 1/2] before scaling by 2 pi.
  const std::int64_t centered = 2 * static_cast<__int128>(n) > den ? n - den : n;
  return turn(static_cast<double>(centered) / static_cast<double>(den));
}

std::complex<double> eval_character(const QPhase& p) {
  if (p.den <= std::numeric_limits<std::int64_t>::max()) return unit_root(to_i64(p.num), to_i64(p.den));
  // Huge denominators: take 64 fractional bits exactly, then convert.
  const Integer scaled = (p.num << 64) / p.den;
  double x = std::ldexp(scaled.convert_to<double>(), -64);
  if (x > 0.5) x -= 1.0;
  return turn(x);
}

std::complex<double> eval_character_complex_oracle(const Field& field, std::complex<double> z) {
  const std::complex<double> sqrt_disc{0.0, field.sqrt_abs_disc()};
  const std::complex<double> w = z / sqrt_disc - std::conj(z) / sqrt_disc;
  const std::complex<double> two_pi_i{0.0, 2.0 * std::numbers::pi};
  return std::exp(two_pi_i * w);
}

}  // namespace iqsieve
