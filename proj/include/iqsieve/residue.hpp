#pragma once

// Residue systems modulo m, ideal coprimality, totients, divisors and
// prime elements of O_K. Lattices are sub-lattices of Z^2 in the (1, omega)
// coordinates.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "iqsieve/qfield.hpp"

namespace iqsieve {

/// Hermite normal form of a full-rank sub-lattice of Z^2 with basis
/// (h11, 0), (h12, h22); 0 <= h12 < h11, h22 > 0. Index = h11 * h22.
struct Hnf {
  Integer h11{1};
  Integer h12{0};
  Integer h22{1};

  Integer index() const { return h11 * h22; }
};

/// HNF of the lattice spanned by `generators`. Throws std::invalid_argument if
/// the generators do not span a rank-2 lattice.
Hnf hermite_normal_form(std::span<const std::array<Integer, 2>> generators);

/// Lattice m * O_K, spanned by the coordinates of m and m * omega.
Hnf ideal_lattice(const Field& field, const OKElt& m);

struct ResidueSystem {
  OKElt modulus;
  Hnf hnf;
  std::vector<OKElt> reps;  // box {0 <= a < h11, 0 <= b < h22}, sorted by (a, b)
};

ResidueSystem residue_system(const Field& field, const OKElt& m);

OKElt reduce(const OKElt& x, const Hnf& lattice);
inline OKElt reduce(const OKElt& x, const ResidueSystem& rs) { return reduce(x, rs.hnf); }

/// True iff the ideal (x, m) is all of O_K. Valid in every field.
bool is_coprime(const Field& field, const OKElt& x, const OKElt& m);

/// Residues r of `rs` coprime to its modulus, in box order.
std::vector<OKElt> coprime_residues(const Field& field, const ResidueSystem& rs);

Integer totient(const Field& field, const OKElt& m);

/// x / y when it lies in O_K.
std::optional<OKElt> exact_divide(const Field& field, const OKElt& x, const OKElt& y);
bool divides(const Field& field, const OKElt& t, const OKElt& r);

/// All t with t | r, associates included, sorted by (norm, a, b). Class-number-one fields only.
std::vector<OKElt> divisors(const Field& field, const OKElt& r);

/// Kronecker symbol (D / p) for a rational prime p.
int kronecker_symbol(std::int64_t D, std::int64_t p);

bool is_rational_prime(std::int64_t n);

/// Prime elements (associates and conjugates included) with norm <= Q, sorted by (norm, a, b).
std::vector<OKElt> primes_up_to_norm(const Field& field, std::int64_t Q);

}  // namespace iqsieve
