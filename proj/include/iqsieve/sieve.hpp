#pragma once

// Fraction families r/m, the character matrix A with entries e_K(n r / m),
// the large-sieve form T = |A a|^2, its sharp constant (the top eigenvalue of
// A^* A) and the torus spacing counts used by the R^2 large sieve.

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "iqsieve/qfield.hpp"

namespace iqsieve {

enum class FamilyKind { All, Power, Square, Prime, Custom };

std::string to_string(FamilyKind kind);
FamilyKind parse_family_kind(const std::string& name);

struct Fraction {
  OKElt base;      // q
  OKElt modulus;   // q^k
  OKElt residue;   // reduced, coprime to modulus
  std::int64_t modulus_norm = 1;
};

struct FamilyOptions {
  bool dyadic = false;        // keep only Q/2 < N(q) <= Q
  std::vector<OKElt> custom;  // the multiset S for FamilyKind::Custom
};

struct FractionFamily {
  Field field;
  FamilyKind kind = FamilyKind::All;
  int k = 1;
  std::int64_t Q = 1;
  bool dyadic = false;
  std::vector<Fraction> fractions;

  std::size_t size() const { return fractions.size(); }
  /// Rows whose modulus is a unit; each such row of A is all ones.
  std::size_t unit_rows() const;
};

FractionFamily build_fractions(const Field& field, FamilyKind kind, std::int64_t Q, int k, const FamilyOptions& options = {});

/// Exact torus point (u / den, v / den) with 0 <= u, v < den.
struct TorusPoint {
  std::int64_t u = 0;
  std::int64_t v = 0;
  std::int64_t den = 1;

  Eigen::Vector2d to_vector() const {
    return {static_cast<double>(u) / static_cast<double>(den), static_cast<double>(v) / static_cast<double>(den)};
  }
  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;
};

/// e_K(n r / m) = e((s, t) . P) for n = s + t omega, where P = (y, x + y Tr(omega))
/// and r / m = x + y omega.
TorusPoint embed_fraction_exact(const Field& field, const Fraction& fraction);
Eigen::Vector2d embed_fraction(const Field& field, const Fraction& fraction);

using Frequency = std::array<std::int64_t, 2>;

/// Coefficient sequence (a_n) over N(n) <= N in canonical order.
struct CoeffSeq {
  std::int64_t N = 0;
  std::vector<OKElt> support;
  Eigen::VectorXcd values;
};

CoeffSeq make_coeffs(const Field& field, std::int64_t N);
std::vector<Frequency> frequencies(const std::vector<OKElt>& support);

/// Character matrix A_{i,j} = e(f_j . P_i) for exact torus points P_i and
/// integer frequencies f_j, applied without storing A.
class CharacterOperator {
 public:
  CharacterOperator(std::vector<TorusPoint> points, std::vector<Frequency> freqs);

  static CharacterOperator for_family(const FractionFamily& family, std::int64_t N);

  Eigen::Index rows() const { return static_cast<Eigen::Index>(points_.size()); }
  Eigen::Index cols() const { return static_cast<Eigen::Index>(freqs_.size()); }
  const std::vector<TorusPoint>& points() const { return points_; }
  const std::vector<Frequency>& freqs() const { return freqs_; }

  std::complex<double> entry(std::size_t row, const Frequency& f) const;

  /// A v; rows are independent so the result does not depend on `threads`.
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v, unsigned threads = 0) const;
  /// A^* w, one output entry per column, summed in row order.
  Eigen::VectorXcd apply_adjoint(const Eigen::VectorXcd& w, unsigned threads = 0) const;
  /// Column-wise versions; each entry is evaluated once per call.
  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& v, unsigned threads = 0) const;
  Eigen::MatrixXcd apply_adjoint(const Eigen::MatrixXcd& w, unsigned threads = 0) const;
  /// sum_i e(delta . P_i) in row order.
  std::complex<double> exponential_sum(const Frequency& delta) const;

 private:
  std::vector<TorusPoint> points_;
  std::vector<Frequency> freqs_;
  std::vector<std::vector<std::complex<double>>> tables_;
  std::vector<int> table_of_row_;  // -1: evaluate directly
};

enum class GramMode {
  Auto,             // DifferenceTable when the dimension is at most 2048
  DifferenceTable,  // (A^* A)_{jl} = sum_i e((f_l - f_j) . P_i), tabulated once
  Streaming,        // A^* (A v) on every call
};

/// The Hermitian positive semidefinite action v -> A^* A v.
class GramOperator {
 public:
  explicit GramOperator(CharacterOperator a, GramMode mode = GramMode::Auto, unsigned threads = 0);

  Eigen::Index dim() const { return a_.cols(); }
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& v) const;
  const CharacterOperator& character() const { return a_; }
  bool tabulated() const { return tabulated_; }

 private:
  CharacterOperator a_;
  unsigned threads_;
  bool tabulated_ = false;
  Eigen::MatrixXcd gram_;
};

struct PowerOptions {
  double tol = 1e-9;
  std::uint64_t seed = 1;
  int max_iter = 200000;
  int restarts = 2;
  int block = 8;
};

struct LambdaResult {
  double value = 0.0;
  int iterations = 0;  // of the run that produced `value`
  bool converged = false;
};

/// Block power iteration (subspace iteration with Rayleigh-Ritz on `block`
/// vectors) from seeded random starts; the largest top Ritz value over the
/// initial run and `restarts` restarts.
LambdaResult lambda_max(const GramOperator& gram, const PowerOptions& options = {});

double quadratic_form(const FractionFamily& family, const CoeffSeq& coeffs);
Eigen::VectorXcd apply_gram(const FractionFamily& family, std::int64_t N, const Eigen::VectorXcd& v);
LambdaResult lambda_max(const FractionFamily& family, std::int64_t N, const PowerOptions& options = {});

// Torus spacing counts. Distances are min over integer shifts.

double torus_distance(const Eigen::Vector2d& x, const Eigen::Vector2d& y);

struct NeighbourCount {
  double N;  // radius sqrt(2) / sqrt(N)
};
struct DiskCount {
  double delta;  // radius sqrt(delta), 0 < delta <= 1/2
};
using TorusCountMode = std::variant<NeighbourCount, DiskCount>;

/// F: max over i of #{j : dist(x_j, x_i) <= sqrt(2 / N)}.
std::size_t torus_neighbour_max(std::span<const Eigen::Vector2d> points, double N);
/// K_0(delta): sup over centres alpha of #{r : dist(x_r, alpha) <= sqrt(delta)}, exact.
std::size_t torus_disk_max(std::span<const Eigen::Vector2d> points, double delta);
std::size_t torus_counts(std::span<const Eigen::Vector2d> points, const TorusCountMode& mode);

}  // namespace iqsieve
