#pragma once

// The additive character e_K(z) = e(Tr(z / sqrt(D_K))) on K.
//
// For z = x + y*omega with rational x, y we have Tr(z / sqrt(D_K)) = y,
// because omega - conj(omega) = sqrt(D_K). The character of an element of K
// is therefore an exact rational phase; floating point enters only when the
// phase is turned into a complex number.

#include <complex>
#include <cstdint>

#include "iqsieve/qfield.hpp"

namespace iqsieve {

/// Rational number num/den reduced into [0, 1) with gcd(num, den) = 1.
struct QPhase {
  Integer num{0};
  Integer den{1};

  friend bool operator==(const QPhase& x, const QPhase& y) { return x.num == y.num && x.den == y.den; }
  friend bool operator!=(const QPhase& x, const QPhase& y) { return !(x == y); }
};

/// Reduces num/den mod 1. Throws std::domain_error on den == 0.
QPhase make_phase(const Integer& num, const Integer& den);

QPhase operator+(const QPhase& x, const QPhase& y);
QPhase operator-(const QPhase& x);

/// Phase of e_K(n * r / m): the omega-coordinate of n r conj(m) divided by N(m), mod 1.
QPhase phase(const Field& field, const OKElt& n, const OKElt& r, const OKElt& m);

std::complex<double> eval_character(const QPhase& p);

/// e(num / den) for 64-bit num, den > 0. Quarter turns are exact.
std::complex<double> unit_root(std::int64_t num, std::int64_t den);

/// exp(2 pi i (z / sqrt(D_K) - conj(z) / sqrt(D_K))) evaluated directly in complex floating point.
std::complex<double> eval_character_complex_oracle(const Field& field, std::complex<double> z);

}  // namespace iqsieve
