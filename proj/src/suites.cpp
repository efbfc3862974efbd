#include "iqsieve/suites.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <numeric>
#include <stdexcept>

#include "iqsieve/analytic.hpp"
#include "iqsieve/approx.hpp"
#include "iqsieve/character.hpp"
#include "iqsieve/experiment.hpp"
#include "iqsieve/residue.hpp"

namespace iqsieve {

namespace {

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(gen() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * std::ldexp(static_cast<double>(gen() >> 11), -53); }
  OKElt elt(std::int64_t bound) { return {range(-bound, bound), range(-bound, bound)}; }
  OKElt nonzero(std::int64_t bound) {
    for (;;)
      if (auto x = elt(bound); !x.is_zero()) return x;
  }
};

CheckResult at_most(std::string name, double measured, double limit) {
  return {std::move(name), measured <= limit, measured, limit, false};
}

SuiteReport ring_suite(const Field& field, std::uint64_t seed) {
  SuiteReport rep{"ring", field.d, {}};
  Rng rng(seed);
  double mult_fail = 0, conj_fail = 0;
  for (int i = 0; i < 10000; ++i) {
    const OKElt x = rng.elt(1'000'000), y = rng.elt(1'000'000);
    if (norm(field, mul(field, x, y)) != norm(field, x) * norm(field, y)) ++mult_fail;
    const OKElt xc = conj(field, x);
    const NormTrace nt = norm_trace(field, x);
    if (conj(field, xc) != x || mul(field, x, xc) != OKElt{nt.norm, 0} || x + xc != OKElt{nt.trace, 0}) ++conj_fail;
  }
  rep.checks.push_back(at_most("norm_multiplicative_failures", mult_fail, 0));
  rep.checks.push_back(at_most("conjugation_identity_failures", conj_fail, 0));

  constexpr std::int64_t kBound = 300;
  std::int64_t brute = 0;
  const std::int64_t reach = 2 * static_cast<std::int64_t>(std::sqrt(static_cast<double>(kBound))) + 2;
  for (std::int64_t a = -reach; a <= reach; ++a)
    for (std::int64_t b = -reach; b <= reach; ++b)
      if (norm_i64(field, OKElt{a, b}) <= kBound) ++brute;
  const auto listed = static_cast<std::int64_t>(enumerate_by_norm(field, kBound, true).size());
  rep.checks.push_back(at_most("enumeration_count_mismatch", std::abs(static_cast<double>(listed - brute)), 0));

  const bool h1 = class_number_by_forms(field.disc) == 1;
  rep.checks.push_back(at_most("class_number_flag_mismatch", h1 != field.class_number_one ? 1 : 0, 0));
  const std::size_t expected_units = field.d == -1 ? 4 : (field.d == -3 ? 6 : 2);
  rep.checks.push_back(
      at_most("unit_count_mismatch", std::abs(static_cast<double>(field.units.size()) - static_cast<double>(expected_units)), 0));
  return rep;
}

SuiteReport character_suite(const Field& field, std::uint64_t seed) {
  SuiteReport rep{"character", field.d, {}};
  Rng rng(seed);
  double worst = 0.0;
  const auto as = enumerate_by_norm(field, 60, true);
  for (const auto& m : enumerate_by_norm(field, 30, false)) {
    const auto rs = residue_system(field, m);
    const double nm = static_cast<double>(norm_i64(field, m));
    for (const auto& a : as) {
      std::complex<double> sum = 0.0;
      for (const auto& r : rs.reps) sum += eval_character(phase(field, a, r, m));
      const double expected = divides(field, m, a) ? nm : 0.0;
      worst = std::max(worst, std::abs(sum - expected));
    }
  }
  rep.checks.push_back(at_most("orthogonality_residual", worst, 1e-9));

  double oracle = 0.0, exact_fail = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const OKElt n = rng.elt(50), r = rng.elt(50);
    OKElt m;
    do m = rng.nonzero(700);
    while (norm_i64(field, m) > 1'000'000);
    const std::complex<double> z = to_complex(field, mul(field, n, r)) / to_complex(field, m);
    oracle = std::max(oracle, std::abs(eval_character(phase(field, n, r, m)) - eval_character_complex_oracle(field, z)));
    const OKElt n2 = rng.elt(50), s = rng.elt(20);
    if (phase(field, n + n2, r, m) != phase(field, n, r, m) + phase(field, n2, r, m)) ++exact_fail;
    if (phase(field, n, r + mul(field, s, m), m) != phase(field, n, r, m)) ++exact_fail;
  }
  rep.checks.push_back(at_most("complex_oracle_deviation", oracle, 1e-10));
  rep.checks.push_back(at_most("additivity_and_periodicity_failures", exact_fail, 0));
  return rep;
}

SuiteReport residue_suite(const Field& field, std::uint64_t seed) {
  SuiteReport rep{"residue", field.d, {}};
  Rng rng(seed);
  double count_fail = 0;
  for (const auto& m : enumerate_by_norm(field, 50, false)) {
    const auto rs = residue_system(field, m);
    if (static_cast<std::int64_t>(rs.reps.size()) != norm_i64(field, m)) ++count_fail;
    for (int i = 0; i < 20; ++i) {
      const OKElt x = rng.elt(1000);
      const OKElt rx = reduce(x, rs);
      if (reduce(rx, rs) != rx || !divides(field, m, x - rx) ||
          std::find(rs.reps.begin(), rs.reps.end(), rx) == rs.reps.end())
        ++count_fail;
    }
  }
  rep.checks.push_back(at_most("residue_system_failures", count_fail, 0));

  const auto small = enumerate_by_norm(field, 10, false);
  double tot_fail = 0;
  int tested = 0;
  for (int i = 0; i < 2000 && tested < 200; ++i) {
    const OKElt& a = small[static_cast<std::size_t>(rng.range(0, static_cast<std::int64_t>(small.size()) - 1))];
    const OKElt& b = small[static_cast<std::size_t>(rng.range(0, static_cast<std::int64_t>(small.size()) - 1))];
    if (!is_coprime(field, a, b)) continue;
    ++tested;
    if (totient(field, mul(field, a, b)) != totient(field, a) * totient(field, b)) ++tot_fail;
  }
  rep.checks.push_back(at_most("totient_multiplicativity_failures", tot_fail, 0));

  if (field.class_number_one) {
    double prime_fail = 0, div_fail = 0;
    for (const auto& p : primes_up_to_norm(field, 50)) {
      const std::int64_t np = norm_i64(field, p);
      for (const auto& t : divisors(field, p)) {
        const std::int64_t nt = norm_i64(field, t);
        if (nt > 1 && nt < np) ++prime_fail;
      }
    }
    for (const auto& r : enumerate_by_norm(field, 50, false))
      if (divisors(field, r).size() % field.units.size() != 0) ++div_fail;
    rep.checks.push_back(at_most("prime_with_proper_divisor", prime_fail, 0));
    rep.checks.push_back(at_most("divisor_count_not_unit_multiple", div_fail, 0));
  }
  return rep;
}

SuiteReport approx_suite(const Field& field, std::uint64_t seed) {
  SuiteReport rep{"approx", field.d, {}};
  Rng rng(seed);
  double fail = 0, oracle_fail = 0;
  const double root = field.sqrt_abs_disc();
  for (int i = 0; i < 2000; ++i) {
    const std::complex<double> z{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const std::int64_t N = rng.range(1, 25);
    const Approximation a = dirichlet_approx(field, z, N);
    const double abs_q = std::abs(to_complex(field, a.q));
    if (a.q.is_zero() || norm_i64(field, a.q) > N * N) ++fail;
    if (a.error > root / (abs_q * static_cast<double>(N)) + 1e-12) ++fail;
    if (i < 200) {
      const Approximation b = best_approx_oracle(field, z, std::min<std::int64_t>(N, 20));
      const double scaled = b.error * std::abs(to_complex(field, b.q));
      if (scaled > root / static_cast<double>(std::min<std::int64_t>(N, 20)) + 1e-12) ++oracle_fail;
    }
  }
  rep.checks.push_back(at_most("dirichlet_certificate_failures", fail, 0));
  rep.checks.push_back(at_most("exhaustive_oracle_failures", oracle_fail, 0));
  return rep;
}

SuiteReport poisson_suite(const Field& field, std::uint64_t seed) {
  SuiteReport rep{"poisson", field.d, {}};
  Rng rng(seed);
  WTildeCache cache(field);
  PoissonOptions opts;
  opts.cache = &cache;
  double worst = 0.0;
  for (double X : {0.5, 1.0, 5.0})
    for (const auto& n : enumerate_by_norm(field, 9, false))
      for (const auto& r : residue_system(field, n).reps) worst = std::max(worst, poisson_identity_check(field, X, n, r, opts).error());
  rep.checks.push_back(at_most("residue_class_identity_error", worst, 1e-8));

  double shift_worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    const OKElt beta = rng.elt(5);
    const std::int64_t den = rng.range(2, 6);
    for (double Q : {1.0, 4.0}) shift_worst = std::max(shift_worst, poisson_shift_check(field, beta, den, Q, opts).error());
  }
  rep.checks.push_back(at_most("shifted_lattice_identity_error", shift_worst, 1e-8));

  // Least-squares slope of log|W~| against log t where the transform is well resolved.
  const double s = field.sqrt_abs_disc();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  constexpr int kPoints = 8;
  for (int i = 0; i < kPoints; ++i) {
    const double t = s * (0.5 + 0.75 * i / (kPoints - 1));
    const double x = std::log(t), y = std::log(std::abs(w_tilde(field, t)));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (kPoints * sxy - sx * sy) / (kPoints * sxx - sx * sx);
  rep.checks.push_back(at_most("transform_decay_exponent", slope, -3.0 + 0.1));
  return rep;
}

SuiteReport fourier_suite(const Field& field, std::uint64_t seed) {
  SuiteReport rep{"fourier", field.d, {}};
  Rng rng(seed);
  const GaussianTransform transform(field);
  double derived = 0.0, printed = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int k = 2 + i % 2;
    std::vector<OKElt> alpha;
    for (int v = 0; v < k - 1; ++v) alpha.push_back(rng.elt(2));
    const double Q0 = rng.uniform(1.0, 4.0);
    const std::complex<double> z{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const auto numeric = g_fourier_numeric(field, z, alpha, Q0, k);
    derived = std::max(derived, std::abs(transform(z, alpha, Q0, k) - numeric.value));
    printed = std::max(printed, std::abs(transform(z, alpha, Q0, k, FourierVariant::AsPrinted) - numeric.value));
  }
  rep.checks.push_back(at_most("closed_form_vs_quadrature", derived, 1e-6));
  CheckResult info = at_most("as_printed_gaussian_factor_vs_quadrature", printed, 1e-6);
  info.informational = true;
  rep.checks.push_back(info);

  double negative = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<OKElt> alpha(static_cast<std::size_t>(rng.range(1, 3)));
    for (auto& a : alpha) a = rng.elt(20);
    if (alpha_combination(field, alpha) < 0.0) ++negative;
  }
  rep.checks.push_back(at_most("negative_alpha_combinations", negative, 0));
  return rep;
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed || c.informational; });
}

std::string SuiteReport::text() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    const char* tag = c.informational ? (c.passed ? "INFO" : "WARN") : (c.passed ? "PASS" : "FAIL");
    os << tag << ' ' << suite << '/' << c.name << " d=" << d << " measured=" << format_number(c.measured)
       << " limit=" << format_number(c.limit) << '\n';
  }
  os << "suite " << suite << " d=" << d << ": " << (passed() ? "PASS" : "FAIL") << '\n';
  return os.str();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"ring", "character", "residue", "approx", "poisson", "fourier"};
  return names;
}

SuiteReport run_suite(const std::string& name, const Field& field, std::uint64_t seed) {
  if (name == "ring") return ring_suite(field, seed);
  if (name == "character") return character_suite(field, seed);
  if (name == "residue") return residue_suite(field, seed);
  if (name == "approx") return approx_suite(field, seed);
  if (name == "poisson") return poisson_suite(field, seed);
  if (name == "fourier") return fourier_suite(field, seed);
  throw std::invalid_argument("unknown suite '" + name + "'");
}

std::int64_t class_number_by_forms(std::int64_t D) {
  if (D >= 0) throw std::invalid_argument("class_number_by_forms: D must be negative");
  std::int64_t h = 0;
  const std::int64_t absD = -D;
  for (std::int64_t a = 1; 3 * a * a <= absD; ++a)
    for (std::int64_t b = -a + 1; b <= a; ++b) {
      const std::int64_t num = b * b - D;
      if (num % (4 * a) != 0) continue;
      const std::int64_t c = num / (4 * a);
      if (c < a) continue;
      if (c == a && b < 0) continue;
      if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
      ++h;
    }
  return h;
}

}  // namespace iqsieve
