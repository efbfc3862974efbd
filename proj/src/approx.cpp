#include "iqsieve/approx.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace iqsieve {

namespace {

// Absolute slack on |z q - p| for boundary cases decided in floating point.
constexpr double kBoundarySlack = 1e-13;

Approximation make_result(const Field& field, std::complex<double> z, std::int64_t N, const OKElt& p, const OKElt& q) {
  const std::complex<double> qc = to_complex(field, q);
  const double abs_q = std::abs(qc);
  Approximation out{p, q, std::abs(z - to_complex(field, p) / qc), field.sqrt_abs_disc() / (abs_q * static_cast<double>(N))};
  return out;
}

}  // namespace

OKElt nearest_lattice_point(const Field& field, std::complex<double> w) {
  const std::complex<double> omega = field.omega();
  const double y = w.imag() / omega.imag();
  const double x = w.real() - y * omega.real();
  const auto x0 = static_cast<std::int64_t>(std::floor(x));
  const auto y0 = static_cast<std::int64_t>(std::floor(y));
  // A 4x4 window around the containing cell covers the skewed-basis corner cases.
  OKElt best;
  double best_dist = std::numeric_limits<double>::infinity();
  std::int64_t best_norm = 0;
  for (std::int64_t b = y0 - 1; b <= y0 + 2; ++b) {
    for (std::int64_t a = x0 - 1; a <= x0 + 2; ++a) {
      const OKElt cand{a, b};
      const double dist = std::norm(w - to_complex(field, cand));
      const std::int64_t n = norm_i64(field, cand);
      const bool better = dist < best_dist ||
                          (dist == best_dist && (n < best_norm || (n == best_norm && coord_less(cand, best))));
      if (better) {
        best = cand;
        best_dist = dist;
        best_norm = n;
      }
    }
  }
  return best;
}

Approximation dirichlet_approx(const Field& field, std::complex<double> z, std::int64_t N) {
  if (N < 1) throw std::invalid_argument("dirichlet_approx: N must be >= 1");
  const double target = field.sqrt_abs_disc() / static_cast<double>(N);
  for (std::int64_t v = 1; v <= N * N; ++v) {
    for (const auto& q : norm_shell(field, v)) {
      const std::complex<double> zq = z * to_complex(field, q);
      const OKElt p = nearest_lattice_point(field, zq);
      if (std::abs(zq - to_complex(field, p)) <= target + kBoundarySlack) return make_result(field, z, N, p, q);
    }
  }
  throw std::logic_error("dirichlet_approx: no approximation found for N = " + std::to_string(N));
}

Approximation best_approx_oracle(const Field& field, std::complex<double> z, std::int64_t N) {
  if (N < 1) throw std::invalid_argument("best_approx_oracle: N must be >= 1");
  if (N > 50) throw std::invalid_argument("best_approx_oracle: N = " + std::to_string(N) + " exceeds the cost guard 50");
  OKElt best_p, best_q;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : enumerate_by_norm(field, N * N, false)) {
    const std::complex<double> zq = z * to_complex(field, q);
    const OKElt p = nearest_lattice_point(field, zq);
    const double scaled = std::abs(zq - to_complex(field, p));
    if (scaled < best) {
      best = scaled;
      best_p = p;
      best_q = q;
    }
  }
  return make_result(field, z, N, best_p, best_q);
}

}  // namespace iqsieve
