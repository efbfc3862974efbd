#pragma once

// Exact arithmetic in the ring of integers O_K of an imaginary quadratic
// field K = Q(sqrt(d)), written in the integral basis (1, omega).

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace iqsieve {

using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                              boost::multiprecision::et_off>;

enum class OmegaCase {
  HalfPlus,  // d = 1 mod 4, omega = (1 + sqrt(d)) / 2
  SqrtD,     // d = 2, 3 mod 4, omega = sqrt(d)
};

/// Element a + b*omega of O_K.
struct OKElt {
  Integer a{0};
  Integer b{0};

  OKElt() = default;
  OKElt(Integer a_, Integer b_) : a(std::move(a_)), b(std::move(b_)) {}
  OKElt(std::int64_t a_, std::int64_t b_) : a(a_), b(b_) {}

  bool is_zero() const { return a == 0 && b == 0; }

  friend bool operator==(const OKElt& x, const OKElt& y) { return x.a == y.a && x.b == y.b; }
  friend bool operator!=(const OKElt& x, const OKElt& y) { return !(x == y); }
};

// Lexicographic (a, b). Used as the tie-breaker inside norm shells.
bool coord_less(const OKElt& x, const OKElt& y);

struct Field {
  std::int64_t d = -1;
  std::int64_t disc = -4;
  OmegaCase omega_case = OmegaCase::SqrtD;
  std::vector<OKElt> units;
  bool class_number_one = true;

  /// omega^2 = omega_linear * omega + omega_const.
  std::int64_t omega_linear() const { return omega_case == OmegaCase::HalfPlus ? 1 : 0; }
  std::int64_t omega_const() const { return omega_case == OmegaCase::HalfPlus ? (d - 1) / 4 : d; }
  std::complex<double> omega() const;
  double sqrt_abs_disc() const;
  std::string name() const;
};

Field make_field(std::int64_t d);

bool is_squarefree(std::int64_t n);

OKElt operator+(const OKElt& x, const OKElt& y);
OKElt operator-(const OKElt& x, const OKElt& y);
OKElt operator-(const OKElt& x);
OKElt scale(const OKElt& x, const Integer& c);

OKElt mul(const Field& field, const OKElt& x, const OKElt& y);
OKElt conj(const Field& field, const OKElt& x);
OKElt pow(const Field& field, const OKElt& x, unsigned k);

Integer norm(const Field& field, const OKElt& x);
Integer trace(const Field& field, const OKElt& x);

struct NormTrace {
  Integer norm;
  Integer trace;
};
NormTrace norm_trace(const Field& field, const OKElt& x);

/// Norm as a 64-bit value; throws std::overflow_error if it does not fit.
std::int64_t norm_i64(const Field& field, const OKElt& x);

bool is_unit(const Field& field, const OKElt& x);

std::complex<double> to_complex(const Field& field, const OKElt& x);

/// All elements with norm <= bound, sorted by (norm, a, b).
std::vector<OKElt> enumerate_by_norm(const Field& field, std::int64_t bound, bool include_zero);

/// Elements of norm exactly `value`, sorted by (a, b).
std::vector<OKElt> norm_shell(const Field& field, std::int64_t value);

std::int64_t to_i64(const Integer& x);

std::string to_string(const OKElt& x);

}  // namespace iqsieve
