#pragma once

// Brute-force reference computations. None of these call into the library's
// arithmetic beyond plain data types, so agreement is an independent check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "iqsieve/qfield.hpp"
#include "iqsieve/sieve.hpp"

namespace oracle {

using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

inline std::int64_t disc(std::int64_t d) { return ((d % 4) + 4) % 4 == 1 ? d : 4 * d; }

inline cd omega(std::int64_t d) {
  return ((d % 4) + 4) % 4 == 1 ? cd(0.5, std::sqrt(static_cast<double>(-d)) / 2) : cd(0.0, std::sqrt(static_cast<double>(-d)));
}

inline cd embed(std::int64_t d, std::int64_t a, std::int64_t b) { return static_cast<double>(a) + static_cast<double>(b) * omega(d); }

inline cd embed(std::int64_t d, const iqsieve::OKElt& x) { return embed(d, iqsieve::to_i64(x.a), iqsieve::to_i64(x.b)); }

// e(Tr(z / sqrt(D))) straight from the definition.
inline cd character(std::int64_t d, cd z) {
  const cd sqrtD(0.0, std::sqrt(static_cast<double>(-disc(d))));
  const cd tr = z / sqrtD + std::conj(z / sqrtD);
  return std::exp(cd(0.0, 2.0 * pi * tr.real()));
}

inline std::int64_t norm(std::int64_t d, std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(std::llround(std::norm(embed(d, a, b))));
}

// Every element with norm <= bound, found by scanning a generous box.
inline std::vector<std::pair<std::int64_t, std::int64_t>> box_scan(std::int64_t d, std::int64_t bound, bool include_zero) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  const auto R = static_cast<std::int64_t>(std::ceil(2.0 * std::sqrt(static_cast<double>(bound)) + 2));
  for (std::int64_t a = -R; a <= R; ++a)
    for (std::int64_t b = -R; b <= R; ++b) {
      if (!include_zero && a == 0 && b == 0) continue;
      if (norm(d, a, b) <= bound) out.emplace_back(a, b);
    }
  return out;
}

// Reduced primitive forms (a, b, c), b^2 - 4ac = D.
inline int class_number(std::int64_t D) {
  int h = 0;
  for (std::int64_t a = 1; a * a <= -D; ++a)
    for (std::int64_t b = -a + 1; b <= a; ++b) {
      if ((b * b - D) % (4 * a)) continue;
      const std::int64_t c = (b * b - D) / (4 * a);
      if (c < a || (c == a && b < 0)) continue;
      if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
      ++h;
    }
  return h;
}

// A_{i,j} = e_K(n_j r_i / m_i) via complex division.
inline Eigen::MatrixXcd dense_character_matrix(const iqsieve::FractionFamily& family, const std::vector<iqsieve::OKElt>& support) {
  const std::int64_t d = family.field.d;
  Eigen::MatrixXcd A(static_cast<Eigen::Index>(family.size()), static_cast<Eigen::Index>(support.size()));
  for (std::size_t i = 0; i < family.size(); ++i) {
    const cd x = embed(d, family.fractions[i].residue) / embed(d, family.fractions[i].modulus);
    for (std::size_t j = 0; j < support.size(); ++j)
      A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = character(d, embed(d, support[j]) * x);
  }
  return A;
}

inline double dense_lambda_max(const Eigen::MatrixXcd& A) {
  const Eigen::MatrixXcd G = A.adjoint() * A;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

inline double torus_dist(const Eigen::Vector2d& x, const Eigen::Vector2d& y) {
  double best = 1e300;
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j) best = std::min(best, (x - y - Eigen::Vector2d(i, j)).norm());
  return best;
}

inline std::size_t count_near(const std::vector<Eigen::Vector2d>& pts, const Eigen::Vector2d& c, double r) {
  std::size_t n = 0;
  for (const auto& p : pts) n += torus_dist(p, c) <= r + 1e-12;
  return n;
}

// Lower bound from a grid of centres plus the points themselves; upper bound
// from the same grid with the radius grown by half a cell diagonal.
struct Bracket {
  std::size_t lower = 0, upper = 0;
};

inline Bracket torus_disk_grid(const std::vector<Eigen::Vector2d>& pts, double delta, int cells = 400) {
  const double r = std::sqrt(delta);
  const double h = 1.0 / cells;
  Bracket out;
  for (int i = 0; i < cells; ++i)
    for (int j = 0; j < cells; ++j) {
      const Eigen::Vector2d c((i + 0.5) * h, (j + 0.5) * h);
      out.lower = std::max(out.lower, count_near(pts, c, r));
      out.upper = std::max(out.upper, count_near(pts, c, r + h * std::sqrt(0.5)));
    }
  for (const auto& p : pts) out.lower = std::max(out.lower, count_near(pts, p, r));
  return out;
}

// Closed form of the transform of exp(-pi N(w)) under e_K: (2/sqrt|D|) exp(-4 pi N(z) / |D|).
inline double gaussian_transform(std::int64_t d, cd z) {
  const double D = static_cast<double>(-disc(d));
  return 2.0 / std::sqrt(D) * std::exp(-4.0 * pi * std::norm(z) / D);
}

}  // namespace oracle
