#include "iqsieve/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "iqsieve/character.hpp"
#include "iqsieve/residue.hpp"

namespace iqsieve {

namespace {

using boost::math::quadrature::gauss_kronrod;
constexpr double kPi = std::numbers::pi;
constexpr double kNegligible = 1e-14;
// exp(-pi R^2) < 1e-17 for the unit Gaussian.
constexpr double kGaussRadius = 3.6;

double probe_radius(const ComplexFn& fn) {
  constexpr int kDirections = 128;
  double r = 0.25, last_significant = 0.0;
  for (int i = 0; i < 80; ++i, r *= 1.25) {
    double mx = 0.0;
    for (int j = 0; j < kDirections; ++j) {
      const double th = 2.0 * kPi * j / kDirections;
      mx = std::max(mx, std::abs(fn(std::polar(r, th))));
    }
    if (mx >= kNegligible) last_significant = r;
  }
  if (last_significant == 0.0 && std::abs(fn(0.0)) < kNegligible) return 0.25;
  return std::max(0.25, last_significant * 1.25);
}

// Bisection on 61-point Gauss-Kronrod panels against an absolute error budget.
// A panel is also accepted once its error is down to roundoff in its own L1
// norm, or within `floor` per unit length (the noise of an integrand that is
// itself computed numerically).
template <class F>
auto adaptive_gk(F& f, double a, double b, double abs_tol, double floor, double max_width, int depth, double& err)
    -> decltype(f(a)) {
  const double m = 0.5 * (a + b);
  if (b - a > max_width && depth > 0)
    return adaptive_gk(f, a, m, abs_tol / 2, floor, max_width, depth - 1, err) +
           adaptive_gk(f, m, b, abs_tol / 2, floor, max_width, depth - 1, err);
  double e = 0.0, l1 = 0.0;
  const auto v = gauss_kronrod<double, 61>::integrate(f, a, b, 0, 0.0, &e, &l1);
  if (e <= abs_tol || e <= floor * (b - a) || e <= 100 * std::numeric_limits<double>::epsilon() * l1 || depth <= 0) {
    err += e;
    return v;
  }
  return adaptive_gk(f, a, m, abs_tol / 2, floor, max_width, depth - 1, err) +
         adaptive_gk(f, m, b, abs_tol / 2, floor, max_width, depth - 1, err);
}

std::vector<OKElt> lattice_points_in_disk(const Field& field, std::complex<double> c, double radius) {
  const std::complex<double> om = field.omega();
  std::vector<OKElt> out;
  const auto b_lo = static_cast<std::int64_t>(std::ceil((c.imag() - radius) / om.imag()));
  const auto b_hi = static_cast<std::int64_t>(std::floor((c.imag() + radius) / om.imag()));
  for (std::int64_t b = b_lo; b <= b_hi; ++b) {
    const double dy = b * om.imag() - c.imag();
    const double half = std::sqrt(std::max(0.0, radius * radius - dy * dy));
    const double base = c.real() - b * om.real();
    for (auto a = static_cast<std::int64_t>(std::ceil(base - half)); a <= static_cast<std::int64_t>(std::floor(base + half)); ++a)
      out.emplace_back(a, b);
  }
  std::sort(out.begin(), out.end(), [&](const OKElt& x, const OKElt& y) {
    const auto nx = norm_i64(field, x), ny = norm_i64(field, y);
    return nx != ny ? nx < ny : coord_less(x, y);
  });
  return out;
}

std::complex<double> gauss(std::complex<double> w) { return std::exp(-kPi * std::norm(w)); }

std::complex<double> to_c(const Field& field, const OKElt& x) { return to_complex(field, x); }

void check_g_args(const std::vector<OKElt>& alpha, double Q0, int k) {
  if (k < 2 || k > 20) throw std::invalid_argument("g: k must lie in [2, 20]");
  if (alpha.size() != static_cast<std::size_t>(k - 1)) throw std::invalid_argument("g: alpha must have k - 1 entries");
  if (!(Q0 > 0.0)) throw std::invalid_argument("g: Q0 must be positive");
}

double truncation_norm(double kappa, double Q0, double threshold) {
  return kappa * Q0 * std::log(1.0 / threshold) / kPi;
}

}  // namespace

double weight(const WeightSpec& spec, double norm_value) {
  switch (spec.kind) {
    case WeightKind::Phi1Gauss:
      return std::exp(-kPi * norm_value);
    case WeightKind::Psi2:
      return std::exp(-(kPi / spec.kappa()) * std::pow(norm_value, 1.0 / spec.k));
  }
  return 0.0;
}

std::complex<double> character_of_complex(const Field& field, std::complex<double> w) {
  double x = 2.0 * w.imag() / field.sqrt_abs_disc();
  x -= std::round(x);
  return std::polar(1.0, 2.0 * kPi * x);
}

QuadResult fourier_numeric_oracle(const Field& field, const ComplexFn& fn, std::complex<double> z, const QuadOptions& options) {
  const double R = options.radius > 0.0 ? options.radius : probe_radius(fn);
  const std::complex<double> om = field.omega();
  const double y_max = R / om.imag();
  auto chord = [&](double y) {
    const double half = std::sqrt(std::max(0.0, R * R - y * om.imag() * y * om.imag()));
    return std::pair{half, y * om.real()};
  };

  // Tolerances are absolute against the integral of |fn|; cancellation makes
  // the transform itself arbitrarily small.
  double scale = 0.0;
  {
    auto row = [&](double y) {
      const auto [half, shift] = chord(y);
      if (half == 0.0) return 0.0;
      auto f = [&](double x) { return std::abs(fn({x + shift, y * om.imag()})); };
      return gauss_kronrod<double, 61>::integrate(f, -half - shift, half - shift, 8, 1e-6);
    };
    scale = gauss_kronrod<double, 61>::integrate(row, -y_max, y_max, 8, 1e-6);
  }
  const double outer_tol = std::max(options.tol * scale, 1e-300);
  const double inner_tol = outer_tol / (20.0 * y_max);
  // A panel spans at most a few periods of the character, so Gauss and Kronrod cannot alias together.
  const double cycles_per_unit = 2.0 * std::abs(z) * std::abs(om) / field.sqrt_abs_disc();
  const double max_width = 4.0 / (1.0 + cycles_per_unit);

  bool inner_ok = true;
  auto inner = [&](double y) {
    const auto [half, shift] = chord(y);
    if (half == 0.0) return std::complex<double>(0.0);
    auto f = [&](double x) {
      const std::complex<double> w(x + shift, y * om.imag());
      return fn(w) * character_of_complex(field, -z * w);
    };
    double err = 0.0;
    const auto v = adaptive_gk(f, -half - shift, half - shift, inner_tol, 0.0, max_width, options.max_depth, err);
    if (err > 1e-9 && err > inner_tol * 1e3) inner_ok = false;
    return v;
  };
  QuadResult out;
  out.value = adaptive_gk(inner, -y_max, y_max, outer_tol, 10.0 * inner_tol, max_width / om.imag(), options.max_depth, out.error);
  out.converged = inner_ok && out.error <= 1e-8;
  return out;
}

double w_tilde(const Field& field, double t, double tol) {
  QuadOptions opts;
  opts.tol = tol;
  opts.radius = kGaussRadius;
  const auto r = fourier_numeric_oracle(field, gauss, t, opts);
  if (!r.converged) throw std::runtime_error("w_tilde: quadrature did not converge at t = " + std::to_string(t));
  return r.value.real();
}

double WTildeCache::operator()(double t) {
  auto it = values_.find(t);
  if (it == values_.end()) it = values_.emplace(t, w_tilde(field_, t, tol_)).first;
  return it->second;
}

PoissonCheck poisson_identity_check(const Field& field, double X, const OKElt& n_mod, const OKElt& r, const PoissonOptions& options) {
  if (n_mod.is_zero()) throw std::invalid_argument("poisson_identity_check: zero modulus");
  if (!(X > 0.0)) throw std::invalid_argument("poisson_identity_check: X must be positive");
  PoissonCheck out;
  const Hnf lattice = ideal_lattice(field, n_mod);
  const OKElt target = reduce(r, lattice);
  const auto lhs_bound = static_cast<std::int64_t>(std::ceil(X * std::log(1.0 / options.threshold) / kPi));
  for (const auto& m : enumerate_by_norm(field, lhs_bound, true)) {
    if (reduce(m, lattice) != target) continue;
    out.lhs += std::exp(-kPi * static_cast<double>(norm_i64(field, m)) / X);
    ++out.lhs_terms;
  }

  const auto nn = static_cast<double>(norm_i64(field, n_mod));
  // The quadrature bottoms out near 1e-16, so stop after a run of shells below that floor.
  constexpr double kFloor = 1e-14;
  double w0 = 0.0;
  double rhs = 0.0;
  int quiet = 0;
  for (std::int64_t v = 0; v < 10'000'000 && quiet < 3; ++v) {
    const auto shell = norm_shell(field, v);
    if (shell.empty()) continue;
    const double t = std::sqrt(static_cast<double>(v) * X / nn);
    const double wt = options.cache ? (*options.cache)(t) : w_tilde(field, t, options.quad_tol);
    if (v == 0) w0 = std::abs(wt);
    if (v > 0 && (std::abs(wt) < options.threshold || std::abs(wt) < kFloor * w0)) {
      ++quiet;
      continue;
    }
    quiet = 0;
    double chars = 0.0;
    for (const auto& k : shell) chars += eval_character(phase(field, k, r, n_mod)).real();
    rhs += wt * chars;
    out.rhs_terms += shell.size();
  }
  out.rhs = X / nn * rhs;
  return out;
}

PoissonCheck poisson_shift_check(const Field& field, const OKElt& beta, std::int64_t den, double Q, const PoissonOptions& options) {
  if (den < 1) throw std::invalid_argument("poisson_shift_check: denominator must be >= 1");
  if (!(Q > 0.0)) throw std::invalid_argument("poisson_shift_check: Q must be positive");
  PoissonCheck out;
  const OKElt den_elt{den, 0};
  const double log_thr = std::log(1.0 / options.threshold);
  std::complex<double> lhs = 0.0;
  const auto lhs_bound = static_cast<std::int64_t>(std::ceil(Q * log_thr / kPi));
  for (const auto& x : enumerate_by_norm(field, lhs_bound, true)) {
    lhs += eval_character(phase(field, x, beta, den_elt)) * std::exp(-kPi * static_cast<double>(norm_i64(field, x)) / Q);
    ++out.lhs_terms;
  }

  // f~(w) ~ exp(-4 pi N(w) / |D|); keep sqrt(Q) |y| within the matching radius.
  const double b_c = 1.0 / static_cast<double>(den);
  const std::complex<double> b = to_c(field, beta) * b_c;
  const double rho = std::sqrt(static_cast<double>(-field.disc) * log_thr / (4.0 * kPi * Q));
  QuadOptions opts;
  opts.tol = options.quad_tol;
  opts.radius = kGaussRadius;
  std::complex<double> rhs = 0.0;
  for (const auto& j : lattice_points_in_disk(field, b, rho)) {
    const std::complex<double> y = to_c(field, j) - b;
    const auto f = fourier_numeric_oracle(field, gauss, std::sqrt(Q) * y, opts);
    if (!f.converged) throw std::runtime_error("poisson_shift_check: quadrature did not converge");
    rhs += f.value;
    ++out.rhs_terms;
  }
  out.lhs = lhs.real();
  out.rhs = Q * rhs.real();
  return out;
}

double g_weight(const Field& field, std::complex<double> w, const std::vector<OKElt>& alpha, double Q0, int k) {
  check_g_args(alpha, Q0, k);
  const WeightSpec psi2{WeightKind::Psi2, k};
  const std::size_t vars = alpha.size();
  double out = 1.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << vars); ++mask) {
    std::complex<double> shift = 0.0;
    for (std::size_t v = 0; v < vars; ++v)
      if (mask >> v & 1u) shift += to_c(field, alpha[v]);
    const std::complex<double> arg = std::pow(w + shift / std::sqrt(Q0), k);
    out *= weight(psi2, std::norm(arg));
  }
  return out;
}

double alpha_combination(const Field& field, const std::vector<OKElt>& alpha) {
  const std::size_t vars = alpha.size();
  const std::uint64_t kappa = std::uint64_t{1} << vars;
  Integer sum_norms = 0;
  OKElt total;
  for (std::uint64_t mask = 0; mask < kappa; ++mask) {
    OKElt s;
    for (std::size_t v = 0; v < vars; ++v)
      if (mask >> v & 1u) s = s + alpha[v];
    sum_norms += norm(field, s);
    total = total + s;
  }
  // kappa * (sum N(u.alpha)) - N(sum u.alpha), then divide by kappa.
  const Integer scaled = sum_norms * Integer(kappa) - norm(field, total);
  return scaled.convert_to<double>() / static_cast<double>(kappa);
}

GaussianTransform::GaussianTransform(const Field& field) : field_(field) {
  QuadOptions opts;
  opts.tol = 1e-13;
  opts.radius = kGaussRadius;
  A_ = fourier_numeric_oracle(field_, gauss, 0.0, opts).value.real();
}

std::complex<double> GaussianTransform::operator()(std::complex<double> z, const std::vector<OKElt>& alpha, double Q0, int k,
                                                   FourierVariant variant) const {
  check_g_args(alpha, Q0, k);
  const double kappa = static_cast<double>(std::int64_t{1} << (k - 1));
  const double C = std::exp(-kPi / (kappa * Q0) * alpha_combination(field_, alpha));
  std::complex<double> sum_alpha = 0.0;
  for (const auto& a : alpha) sum_alpha += to_c(field_, a);
  const std::complex<double> chi = character_of_complex(field_, sum_alpha * z / (2.0 * std::sqrt(Q0)));
  const double nz = std::norm(z);
  const double decay = variant == FourierVariant::Derived
                           ? std::exp(-4.0 * kPi * nz / static_cast<double>(-field_.disc))
                           : std::exp(-kPi * nz / static_cast<double>(-field_.d));
  return A_ * C * chi * decay;
}

std::complex<double> g_fourier_analytic(const Field& field, std::complex<double> z, const std::vector<OKElt>& alpha,
                                        double Q0, int k, FourierVariant variant) {
  return GaussianTransform(field)(z, alpha, Q0, k, variant);
}

QuadResult g_fourier_numeric(const Field& field, std::complex<double> z, const std::vector<OKElt>& alpha, double Q0, int k) {
  check_g_args(alpha, Q0, k);
  return fourier_numeric_oracle(field, [&](std::complex<double> w) { return std::complex<double>(g_weight(field, w, alpha, Q0, k)); }, z);
}

std::complex<double> weyl_sum(const Field& field, const OKElt& q1, const OKElt& r1, const OKElt& j, int k, double Q0,
                              double threshold) {
  if (q1.is_zero()) throw std::invalid_argument("weyl_sum: q1 must be nonzero");
  if (k < 1) throw std::invalid_argument("weyl_sum: k must be >= 1");
  if (!is_coprime(field, r1, q1)) throw std::invalid_argument("weyl_sum: r1 must be coprime to q1");
  const WeightSpec psi2{WeightKind::Psi2, k};
  const OKElt m = pow(field, q1, static_cast<unsigned>(k));
  const auto bound = static_cast<std::int64_t>(std::floor(truncation_norm(psi2.kappa(), Q0, threshold)));
  std::complex<double> acc = 0.0;
  for (const auto& q2 : enumerate_by_norm(field, bound, true)) {
    const double w = weight(psi2, std::pow(static_cast<double>(norm_i64(field, q2)) / Q0, k));
    const OKElt n = mul(field, j, pow(field, q2, static_cast<unsigned>(k)));
    acc += w * eval_character(phase(field, n, r1, m));
  }
  return acc;
}

std::complex<double> weyl_difference_sum(const Field& field, const OKElt& q1, const OKElt& r1, const OKElt& j, int k,
                                         double Q0, const OKElt& alpha1, double threshold) {
  if (q1.is_zero()) throw std::invalid_argument("weyl_difference_sum: q1 must be nonzero");
  if (k < 1) throw std::invalid_argument("weyl_difference_sum: k must be >= 1");
  const WeightSpec psi2{WeightKind::Psi2, k};
  const auto uk = static_cast<unsigned>(k);
  const OKElt m = pow(field, q1, uk);
  const auto bound = static_cast<std::int64_t>(std::floor(truncation_norm(psi2.kappa(), Q0, threshold)));
  std::complex<double> acc = 0.0;
  for (const auto& q : enumerate_by_norm(field, bound, true)) {
    const OKElt shifted = alpha1 + q;
    const std::int64_t ns = norm_i64(field, shifted);
    // Same truncation as weyl_sum on both factors, so the expansion of |S_k|^2 is exact.
    if (ns > bound) continue;
    const double w = weight(psi2, std::pow(static_cast<double>(norm_i64(field, q)) / Q0, k)) *
                     weight(psi2, std::pow(static_cast<double>(ns) / Q0, k));
    const OKElt diff = pow(field, shifted, uk) - pow(field, q, uk);
    acc += w * eval_character(phase(field, mul(field, j, diff), r1, m));
  }
  return acc;
}

WeylCheck weyl_difference_check(const Field& field, const OKElt& q1, const OKElt& r1, const OKElt& j, int k, double Q0,
                                double epsilon, double threshold) {
  WeylCheck out;
  out.square = std::norm(weyl_sum(field, q1, r1, j, k, Q0, threshold));
  const WeightSpec psi2{WeightKind::Psi2, k};
  const double bound = truncation_norm(psi2.kappa(), Q0, threshold);
  const double near = std::pow(Q0, 1.0 + epsilon);
  for (const auto& a1 : enumerate_by_norm(field, static_cast<std::int64_t>(std::floor(4.0 * bound)), true)) {
    const auto s = weyl_difference_sum(field, q1, r1, j, k, Q0, a1, threshold);
    out.expanded += s;
    if (static_cast<double>(norm_i64(field, a1)) <= near)
      out.envelope += std::abs(s);
    else
      out.tail += std::abs(s);
  }
  return out;
}

}  // namespace iqsieve
