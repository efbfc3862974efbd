#pragma once

// Right-hand sides of the large-sieve bounds, the dilated sets S_t, the
// congruence-restricted disk counts A_t(u, k, l), the nested bound for an
// arbitrary set of moduli and the hypothesis constant X.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "iqsieve/qfield.hpp"
#include "iqsieve/sieve.hpp"

namespace iqsieve {

/// A multiset S of nonzero elements with N(s) <= Q.
struct ModuliSet {
  Field field;
  std::int64_t Q = 1;
  std::vector<OKElt> elements;
};

/// Validates N(s) <= Q and s != 0 for every element.
ModuliSet make_moduli_set(const Field& field, std::int64_t Q, std::vector<OKElt> elements);

enum class Theorem { Huxley, Power, Square, Prime };

std::string to_string(Theorem theorem);
Theorem parse_theorem(const std::string& name);

struct BoundParams {
  Theorem theorem = Theorem::Huxley;
  int k = 1;
  std::int64_t Q = 1;
  std::int64_t N = 1;
  double epsilon = 0.0;
  double delta = 0.5;

  double kappa() const { return static_cast<double>(std::int64_t{1} << (k - 1)); }
};

/// floor(Q^(1 + delta) / 16), the coefficient range tied to Q for prime moduli.
std::int64_t prime_theorem_N(std::int64_t Q, double delta);

/// Throws std::invalid_argument when the theorem's preconditions fail.
double rhs_bound(const BoundParams& p);

/// {q : t q in S}, multiplicities kept.
std::vector<OKElt> make_S_t(const ModuliSet& S, const OKElt& t);

/// sup over |y| <= sqrt(Q) / |t| of #{q in S_t, |q - y| <= u, q = l mod kmod}.
std::size_t count_A_t(const Field& field, const std::vector<OKElt>& S_t, std::int64_t Q, const OKElt& t, double u,
                      const OKElt& kmod, const OKElt& l);

struct Theorem2Options {
  int z_samples = 32;
  unsigned threads = 0;
};

struct Theorem2Result {
  double value = 0.0;  // N (1 + inner)
  double inner = 0.0;  // the nested sup of sums of A_t
  OKElt r;             // maximiser
  double z_abs = 0.0;
  OKElt h;
};

/// The nested bound with the |z| continuum replaced by log-radial samples
/// (both endpoints included). Requires a class-number-one field and N >= 16.
Theorem2Result theorem2_rhs(const ModuliSet& S, std::int64_t N, const Theorem2Options& options = {});

struct XResult {
  double X = 0.0;
  OKElt t, k, l;
  double u = 0.0;
  std::size_t count = 0;
};

/// Least X with A_t(u, k, l) <= (1 + (|S_t| / N(k)) / (Q / |t|^2) u^2) X over
/// the admissible (t, k, l, u). Exact in u: A_t is a nondecreasing step
/// function whose jumps sit at minimal enclosing radii of point subsets.
XResult verify_X(const ModuliSet& S, std::int64_t N);

/// Same quantity with u restricted to `samples` equally spaced values per range.
double verify_X_sampled(const ModuliSet& S, std::int64_t N, int samples);

/// N + Q X N^epsilon (sqrt(N) + |S|).
double theorem3_rhs(const ModuliSet& S, std::int64_t N, double X, double epsilon);

/// Fractions of the family within `radius` of alpha. With all_numerators the
/// numerator runs over every a = r + m j (a point of K, not a residue class).
std::size_t count_fractions_near(const Field& field, const FractionFamily& family, std::complex<double> alpha,
                                 double radius, bool all_numerators = false);

}  // namespace iqsieve
