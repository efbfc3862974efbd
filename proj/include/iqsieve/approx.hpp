#pragma once

// Dirichlet approximation in C by ratios p/q of elements of O_K:
// for every z and N >= 1 there are p, q with 0 < |q| <= N and
// |z - p/q| <= sqrt(|D_K|) / (|q| N).

#include <complex>
#include <cstdint>

#include "iqsieve/qfield.hpp"

namespace iqsieve {

struct Approximation {
  OKElt p;
  OKElt q;
  double error = 0.0;  // |z - p/q|
  double bound = 0.0;  // sqrt(|D_K|) / (|q| N)
};

/// Nearest point of O_K to w (ties broken by (norm, a, b)).
OKElt nearest_lattice_point(const Field& field, std::complex<double> w);

/// First q in (norm, a, b) order with |q| <= N whose nearest p meets the bound.
Approximation dirichlet_approx(const Field& field, std::complex<double> z, std::int64_t N);

/// Exhaustive minimiser of |z q - p| over 0 < |q| <= N. Requires N <= 50.
Approximation best_approx_oracle(const Field& field, std::complex<double> z, std::int64_t N);

}  // namespace iqsieve
