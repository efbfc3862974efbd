#pragma once

// Gaussian weights on O_K, numerical Fourier transforms over C, the two
// Poisson summation identities, the closed-form transform of the product
// weight g, and the Weyl sums S_k with their first differencing step.

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "iqsieve/qfield.hpp"

namespace iqsieve {

enum class WeightKind {
  Phi1Gauss,  // Psi_1(z) = exp(-pi N(z))
  Psi2,       // Psi_2(z) = exp(-(pi / kappa) N(z)^(1/k)), kappa = 2^(k-1)
};

struct WeightSpec {
  WeightKind kind = WeightKind::Phi1Gauss;
  int k = 1;

  double kappa() const { return static_cast<double>(std::int64_t{1} << (k - 1)); }
};

/// The weight as a function of N(z).
double weight(const WeightSpec& spec, double norm_value);

using ComplexFn = std::function<std::complex<double>(std::complex<double>)>;

struct QuadOptions {
  double tol = 1e-12;    // relative to the L1 norm of the integrand
  int max_depth = 15;
  double radius = 0.0;   // |fn| < 1e-14 outside this disk; <= 0 probes for it
};

struct QuadResult {
  std::complex<double> value;
  double error = 0.0;
  bool converged = true;
};

/// integral over R^2 of fn(x + y omega) e_K(-z (x + y omega)) dx dy, by
/// nested adaptive Gauss-Kronrod over a disk outside which fn is negligible.
QuadResult fourier_numeric_oracle(const Field& field, const ComplexFn& fn, std::complex<double> z, const QuadOptions& options = {});

/// e_K(w) for complex w: exp(2 pi i * 2 Im(w) / sqrt|D_K|).
std::complex<double> character_of_complex(const Field& field, std::complex<double> w);

/// W~_K(t) for W(x) = exp(-pi x), by quadrature.
double w_tilde(const Field& field, double t, double tol = 1e-13);

/// Memoised w_tilde for one field; not thread-safe.
class WTildeCache {
 public:
  explicit WTildeCache(Field field, double tol = 1e-13) : field_(std::move(field)), tol_(tol) {}
  double operator()(double t);
  std::size_t size() const { return values_.size(); }

 private:
  Field field_;
  double tol_;
  std::map<double, double> values_;
};

struct PoissonOptions {
  double threshold = 1e-17;  // truncate terms below this size
  double quad_tol = 1e-13;
  WTildeCache* cache = nullptr;  // must belong to the same field
};

struct PoissonCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  std::size_t lhs_terms = 0;
  std::size_t rhs_terms = 0;

  double error() const { return std::abs(lhs - rhs); }
};

/// Both sides of the residue-class Poisson formula with W(x) = exp(-pi x):
/// sum over m = r mod n of W(N(m)/X) against
/// (X/N(n)) sum_k W~_K(sqrt(N(k) X / N(n))) e_K(k r / n).
PoissonCheck poisson_identity_check(const Field& field, double X, const OKElt& n_mod, const OKElt& r,
                                    const PoissonOptions& options = {});

/// Both sides of sum_x e_K(b x) f(x / sqrt(Q)) = Q sum_{y in -b + O_K} f~(sqrt(Q) y)
/// for f(w) = exp(-pi N(w)) and b = beta / den in K.
PoissonCheck poisson_shift_check(const Field& field, const OKElt& beta, std::int64_t den, double Q,
                                 const PoissonOptions& options = {});

/// g(w) = prod over u in {0,1}^(k-1) of Psi_2((w + u.alpha / sqrt(Q0))^k).
double g_weight(const Field& field, std::complex<double> w, const std::vector<OKElt>& alpha, double Q0, int k);

/// sum_u N(u.alpha) - N(sum_u u.alpha) / kappa, exactly.
double alpha_combination(const Field& field, const std::vector<OKElt>& alpha);

enum class FourierVariant {
  Derived,    // Gaussian factor exp(-4 pi N(z) / |D_K|)
  AsPrinted,  // Gaussian factor exp(-pi N(z) / |d|); agrees with Derived iff D_K = 4d
};

/// Closed form of the Fourier transform of g. The constant A is calibrated
/// once from a quadrature of g at z = 0, alpha = 0.
class GaussianTransform {
 public:
  explicit GaussianTransform(const Field& field);

  double A() const { return A_; }
  std::complex<double> operator()(std::complex<double> z, const std::vector<OKElt>& alpha, double Q0, int k,
                                  FourierVariant variant = FourierVariant::Derived) const;

 private:
  Field field_;
  double A_ = 0.0;
};

std::complex<double> g_fourier_analytic(const Field& field, std::complex<double> z, const std::vector<OKElt>& alpha,
                                        double Q0, int k, FourierVariant variant = FourierVariant::Derived);

/// Quadrature of g's transform at z.
QuadResult g_fourier_numeric(const Field& field, std::complex<double> z, const std::vector<OKElt>& alpha, double Q0, int k);

/// S_k(q1, r1, j) = sum_q2 Psi_2(q2^k / Q0^(k/2)) e_K(j r1 q2^k / q1^k), terms
/// with weight below `threshold` dropped.
std::complex<double> weyl_sum(const Field& field, const OKElt& q1, const OKElt& r1, const OKElt& j, int k, double Q0,
                              double threshold = 1e-16);

/// S_{k-1}(q1, r1, j, alpha1): the weighted sum of e_K(j r1 ((alpha1 + q)^k - q^k) / q1^k).
std::complex<double> weyl_difference_sum(const Field& field, const OKElt& q1, const OKElt& r1, const OKElt& j, int k,
                                         double Q0, const OKElt& alpha1, double threshold = 1e-16);

struct WeylCheck {
  double square = 0.0;           // |S_k|^2
  std::complex<double> expanded;  // sum over all alpha1 of S_{k-1}(alpha1)
  double envelope = 0.0;         // sum over N(alpha1) <= Q0^(1+eps) of |S_{k-1}(alpha1)|
  double tail = 0.0;             // sum over N(alpha1) > Q0^(1+eps) of |S_{k-1}(alpha1)|
};

/// Expands |S_k|^2 over alpha1 = q2 - q.
WeylCheck weyl_difference_check(const Field& field, const OKElt& q1, const OKElt& r1, const OKElt& j, int k, double Q0,
                                double epsilon, double threshold = 1e-16);

}  // namespace iqsieve
