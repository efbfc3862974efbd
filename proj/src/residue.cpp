#include "iqsieve/residue.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace iqsieve {

namespace {

using Vec = std::array<Integer, 2>;

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Integer floor_mod(const Integer& a, const Integer& m) { return a - floor_div(a, m) * m; }

// g = s*x + t*y with g = gcd(x, y) >= 0.
void ext_gcd(const Integer& x, const Integer& y, Integer& g, Integer& s, Integer& t) {
  Integer old_r = x, r = y;
  Integer old_s = 1, s_ = 0;
  Integer old_t = 0, t_ = 1;
  while (r != 0) {
    const Integer q = old_r / r;
    Integer tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s_;
    old_s = s_;
    s_ = tmp;
    tmp = old_t - q * t_;
    old_t = t_;
    t_ = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  g = old_r;
  s = old_s;
  t = old_t;
}

}  // namespace

Hnf hermite_normal_form(std::span<const Vec> generators) {
  // Fold every generator into a pivot carrying the gcd of the second
  // coordinates; the leftovers have second coordinate 0.
  Vec pivot{0, 0};
  Integer h11 = 0;
  for (const Vec& gen : generators) {
    Vec c = gen;
    if (c[1] != 0) {
      if (pivot[1] == 0) {
        std::swap(pivot, c);
      } else {
        Integer g, s, t;
        ext_gcd(pivot[1], c[1], g, s, t);
        const Integer u = pivot[1] / g;
        const Integer v = c[1] / g;
        const Vec new_pivot{s * pivot[0] + t * c[0], s * pivot[1] + t * c[1]};
        const Vec rest{v * pivot[0] - u * c[0], v * pivot[1] - u * c[1]};
        pivot = new_pivot;
        c = rest;
      }
    }
    if (c[1] == 0 && c[0] != 0) h11 = boost::multiprecision::gcd(h11, c[0]);
  }
  if (pivot[1] == 0 || h11 == 0) throw std::invalid_argument("hermite_normal_form: lattice is not of rank 2");
  if (pivot[1] < 0) {
    pivot[0] = -pivot[0];
    pivot[1] = -pivot[1];
  }
  if (h11 < 0) h11 = -h11;
  return {h11, floor_mod(pivot[0], h11), pivot[1]};
}

Hnf ideal_lattice(const Field& field, const OKElt& m) {
  if (m.is_zero()) throw std::invalid_argument("ideal_lattice: zero modulus");
  const OKElt mw = mul(field, m, OKElt{0, 1});
  const std::array<Vec, 2> gens{Vec{m.a, m.b}, Vec{mw.a, mw.b}};
  return hermite_normal_form(gens);
}

ResidueSystem residue_system(const Field& field, const OKElt& m) {
  if (m.is_zero()) throw std::invalid_argument("residue_system: zero modulus");
  ResidueSystem rs{m, ideal_lattice(field, m), {}};
  const std::int64_t h11 = to_i64(rs.hnf.h11);
  const std::int64_t h22 = to_i64(rs.hnf.h22);
  rs.reps.reserve(static_cast<std::size_t>(h11 * h22));
  for (std::int64_t a = 0; a < h11; ++a)
    for (std::int64_t b = 0; b < h22; ++b) rs.reps.emplace_back(a, b);
  return rs;
}

OKElt reduce(const OKElt& x, const Hnf& lattice) {
  const Integer k = floor_div(x.b, lattice.h22);
  const Integer b = x.b - k * lattice.h22;
  const Integer a = floor_mod(x.a - k * lattice.h12, lattice.h11);
  return {a, b};
}

bool is_coprime(const Field& field, const OKElt& x, const OKElt& m) {
  if (x.is_zero() && m.is_zero()) throw std::invalid_argument("is_coprime: both arguments are zero");
  const OKElt w{0, 1};
  const OKElt xw = mul(field, x, w);
  const OKElt mw = mul(field, m, w);
  const std::array<Vec, 4> gens{Vec{x.a, x.b}, Vec{xw.a, xw.b}, Vec{m.a, m.b}, Vec{mw.a, mw.b}};
  return hermite_normal_form(gens).index() == 1;
}

std::vector<OKElt> coprime_residues(const Field& field, const ResidueSystem& rs) {
  std::vector<OKElt> out;
  for (const auto& r : rs.reps)
    if (is_coprime(field, r, rs.modulus)) out.push_back(r);
  return out;
}

Integer totient(const Field& field, const OKElt& m) {
  return Integer(coprime_residues(field, residue_system(field, m)).size());
}

std::optional<OKElt> exact_divide(const Field& field, const OKElt& x, const OKElt& y) {
  if (y.is_zero()) throw std::domain_error("exact_divide: division by zero");
  const Integer n = norm(field, y);
  const OKElt w = mul(field, x, conj(field, y));
  if (w.a % n != 0 || w.b % n != 0) return std::nullopt;
  return OKElt{w.a / n, w.b / n};
}

bool divides(const Field& field, const OKElt& t, const OKElt& r) { return exact_divide(field, r, t).has_value(); }

std::vector<OKElt> divisors(const Field& field, const OKElt& r) {
  if (!field.class_number_one) throw std::invalid_argument("divisors: field " + field.name() + " is not of class number one");
  if (r.is_zero()) throw std::invalid_argument("divisors: zero argument");
  const std::int64_t nr = norm_i64(field, r);
  std::vector<OKElt> out;
  for (const auto& t : enumerate_by_norm(field, nr, false)) {
    if (nr % norm_i64(field, t) != 0) continue;
    if (divides(field, t, r)) out.push_back(t);
  }
  return out;
}

bool is_rational_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

int kronecker_symbol(std::int64_t D, std::int64_t p) {
  if (!is_rational_prime(p)) throw std::invalid_argument("kronecker_symbol: p must be prime");
  if (p == 2) {
    if (D % 2 == 0) return 0;
    const std::int64_t r = ((D % 8) + 8) % 8;
    return (r == 1 || r == 7) ? 1 : -1;
  }
  std::int64_t a = ((D % p) + p) % p;
  if (a == 0) return 0;
  // Euler's criterion a^((p-1)/2) mod p.
  std::int64_t e = (p - 1) / 2;
  __int128 result = 1, base = a;
  while (e > 0) {
    if (e & 1) result = (result * base) % p;
    base = (base * base) % p;
    e >>= 1;
  }
  return result == 1 ? 1 : -1;
}

std::vector<OKElt> primes_up_to_norm(const Field& field, std::int64_t Q) {
  if (!field.class_number_one)
    throw std::invalid_argument("primes_up_to_norm: field " + field.name() + " is not of class number one");
  std::vector<OKElt> out;
  for (const auto& x : enumerate_by_norm(field, Q, false)) {
    const std::int64_t n = norm_i64(field, x);
    if (is_rational_prime(n)) {
      out.push_back(x);
      continue;
    }
    // Inert rational prime p (up to units) has norm p^2.
    const auto p = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(n))));
    if (p * p != n || !is_rational_prime(p) || kronecker_symbol(field.disc, p) != -1) continue;
    const auto unit = exact_divide(field, x, OKElt{p, 0});
    if (unit && is_unit(field, *unit)) out.push_back(x);
  }
  return out;
}

}  // namespace iqsieve
