#include "iqsieve/qfield.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace iqsieve {

namespace {

constexpr std::array<std::int64_t, 9> kHeegner{-1, -2, -3, -7, -11, -19, -43, -67, -163};

std::int64_t isqrt(std::int64_t n) {
  if (n <= 0) return 0;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (static_cast<__int128>(r) * r > n) --r;
  while (static_cast<__int128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::int64_t floor_div2(std::int64_t x) { return x >= 0 ? x / 2 : -((-x + 1) / 2); }
std::int64_t ceil_div2(std::int64_t x) { return -floor_div2(-x); }

struct SmallElt {
  std::int64_t a;
  std::int64_t b;
  std::int64_t norm;
};

// Visits every (a, b) with norm <= bound via the completed square
// (2a + L b)^2 + |D| b^2 <= 4 * bound, all in exact integer arithmetic.
template <typename Visit>
void for_each_in_ellipse(const Field& field, std::int64_t bound, Visit&& visit) {
  if (bound < 0) return;
  const std::int64_t L = field.omega_linear();
  const std::int64_t absD = -field.disc;
  const std::int64_t C = -field.omega_const();
  const __int128 four_b = static_cast<__int128>(4) * bound;
  if (four_b > std::numeric_limits<std::int64_t>::max()) throw std::overflow_error("enumeration bound too large");
  const std::int64_t b_max = isqrt(static_cast<std::int64_t>(four_b / absD));
  for (std::int64_t b = -b_max; b <= b_max; ++b) {
    const __int128 rest = four_b - static_cast<__int128>(absD) * b * b;
    if (rest < 0) continue;
    const std::int64_t s = isqrt(static_cast<std::int64_t>(rest));
    const std::int64_t a_lo = ceil_div2(-s - L * b);
    const std::int64_t a_hi = floor_div2(s - L * b);
    for (std::int64_t a = a_lo; a <= a_hi; ++a) {
      const std::int64_t n = a * a + L * a * b + C * b * b;
      if (n <= bound) visit(SmallElt{a, b, n});
    }
  }
}

}  // namespace

bool coord_less(const OKElt& x, const OKElt& y) {
  if (x.a != y.a) return x.a < y.a;
  return x.b < y.b;
}

std::complex<double> Field::omega() const {
  const double s = std::sqrt(static_cast<double>(-d));
  if (omega_case == OmegaCase::HalfPlus) return {0.5, 0.5 * s};
  return {0.0, s};
}

double Field::sqrt_abs_disc() const { return std::sqrt(static_cast<double>(-disc)); }

std::string Field::name() const { return "Q(sqrt(" + std::to_string(d) + "))"; }

bool is_squarefree(std::int64_t n) {
  n = n < 0 ? -n : n;
  if (n == 0) return false;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % (p * p) == 0) return false;
    if (n % p == 0) n /= p;
  }
  return true;
}

Field make_field(std::int64_t d) {
  if (d >= 0) throw std::invalid_argument("make_field: d must be negative (got " + std::to_string(d) + ")");
  if (!is_squarefree(d)) throw std::invalid_argument("make_field: d must be squarefree (got " + std::to_string(d) + ")");
  Field f;
  f.d = d;
  const std::int64_t r = ((d % 4) + 4) % 4;
  if (r == 1) {
    f.omega_case = OmegaCase::HalfPlus;
    f.disc = d;
  } else {
    f.omega_case = OmegaCase::SqrtD;
    f.disc = 4 * d;
  }
  f.class_number_one = std::find(kHeegner.begin(), kHeegner.end(), d) != kHeegner.end();
  f.units = enumerate_by_norm(f, 1, false);
  return f;
}

OKElt operator+(const OKElt& x, const OKElt& y) { return {x.a + y.a, x.b + y.b}; }
OKElt operator-(const OKElt& x, const OKElt& y) { return {x.a - y.a, x.b - y.b}; }
OKElt operator-(const OKElt& x) { return {-x.a, -x.b}; }
OKElt scale(const OKElt& x, const Integer& c) { return {x.a * c, x.b * c}; }

OKElt mul(const Field& field, const OKElt& x, const OKElt& y) {
  const Integer bb = x.b * y.b;
  Integer a = x.a * y.a + bb * field.omega_const();
  Integer b = x.a * y.b + x.b * y.a + bb * field.omega_linear();
  return {std::move(a), std::move(b)};
}

OKElt conj(const Field& field, const OKElt& x) {
  // conj(omega) = Tr(omega) - omega
  return {x.a + x.b * field.omega_linear(), -x.b};
}

OKElt pow(const Field& field, const OKElt& x, unsigned k) {
  OKElt result{1, 0};
  OKElt base = x;
  while (k > 0) {
    if (k & 1u) result = mul(field, result, base);
    k >>= 1;
    if (k > 0) base = mul(field, base, base);
  }
  return result;
}

Integer norm(const Field& field, const OKElt& x) {
  return x.a * x.a + x.a * x.b * field.omega_linear() - x.b * x.b * field.omega_const();
}

Integer trace(const Field& field, const OKElt& x) { return 2 * x.a + x.b * field.omega_linear(); }

NormTrace norm_trace(const Field& field, const OKElt& x) { return {norm(field, x), trace(field, x)}; }

std::int64_t to_i64(const Integer& x) {
  if (x > std::numeric_limits<std::int64_t>::max() || x < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("integer does not fit in 64 bits: " + x.str());
  return x.convert_to<std::int64_t>();
}

std::int64_t norm_i64(const Field& field, const OKElt& x) { return to_i64(norm(field, x)); }

bool is_unit(const Field& field, const OKElt& x) { return norm(field, x) == 1; }

std::complex<double> to_complex(const Field& field, const OKElt& x) {
  return x.a.convert_to<double>() + x.b.convert_to<double>() * field.omega();
}

std::vector<OKElt> enumerate_by_norm(const Field& field, std::int64_t bound, bool include_zero) {
  std::vector<SmallElt> raw;
  for_each_in_ellipse(field, bound, [&](const SmallElt& e) {
    if (e.norm == 0 && !include_zero) return;
    raw.push_back(e);
  });
  std::sort(raw.begin(), raw.end(), [](const SmallElt& x, const SmallElt& y) {
    if (x.norm != y.norm) return x.norm < y.norm;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
  std::vector<OKElt> out;
  out.reserve(raw.size());
  for (const auto& e : raw) out.emplace_back(e.a, e.b);
  return out;
}

std::vector<OKElt> norm_shell(const Field& field, std::int64_t value) {
  std::vector<OKElt> out;
  if (value < 0) return out;
  const std::int64_t L = field.omega_linear();
  const std::int64_t absD = -field.disc;
  const std::int64_t four_v = 4 * value;
  const std::int64_t b_max = isqrt(four_v / absD);
  for (std::int64_t b = -b_max; b <= b_max; ++b) {
    // (2a + L b)^2 = 4 value - |D| b^2 must be a perfect square
    const std::int64_t rest = four_v - absD * b * b;
    if (rest < 0) continue;
    const std::int64_t s = isqrt(rest);
    if (s * s != rest) continue;
    for (const std::int64_t u : {-s, s}) {
      if (((u - L * b) % 2) != 0) continue;
      out.emplace_back((u - L * b) / 2, b);
      if (s == 0) break;
    }
  }
  std::sort(out.begin(), out.end(), coord_less);
  return out;
}

std::string to_string(const OKElt& x) {
  std::ostringstream os;
  os << "(" << x.a << "," << x.b << ")";
  return os.str();
}

}  // namespace iqsieve
