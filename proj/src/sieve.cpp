#include "iqsieve/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <utility>

#include "iqsieve/character.hpp"
#include "iqsieve/parallel.hpp"
#include "iqsieve/residue.hpp"

namespace iqsieve {

namespace {

constexpr std::int64_t kMaxTableDen = 1 << 16;
constexpr Eigen::Index kMaxTabulatedDim = 2048;
constexpr double kCountSlack = 1e-9;

std::int64_t mod_pos(__int128 x, std::int64_t m) {
  auto r = static_cast<std::int64_t>(x % m);
  return r < 0 ? r + m : r;
}

bool fraction_less(const Fraction& x, const Fraction& y) {
  if (x.modulus_norm != y.modulus_norm) return x.modulus_norm < y.modulus_norm;
  if (x.modulus != y.modulus) return coord_less(x.modulus, y.modulus);
  return coord_less(x.residue, y.residue);
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double uniform_pm1(std::mt19937_64& rng) { return 2.0 * std::ldexp(static_cast<double>(rng() >> 11), -53) - 1.0; }

}  // namespace

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::All: return "all";
    case FamilyKind::Power: return "power";
    case FamilyKind::Square: return "square";
    case FamilyKind::Prime: return "prime";
    case FamilyKind::Custom: return "custom";
  }
  return "?";
}

FamilyKind parse_family_kind(const std::string& name) {
  if (name == "all") return FamilyKind::All;
  if (name == "power") return FamilyKind::Power;
  if (name == "square") return FamilyKind::Square;
  if (name == "prime") return FamilyKind::Prime;
  if (name == "custom") return FamilyKind::Custom;
  throw std::invalid_argument("unknown family '" + name + "' (expected all|power|square|prime|custom)");
}

std::size_t FractionFamily::unit_rows() const {
  return static_cast<std::size_t>(
      std::count_if(fractions.begin(), fractions.end(), [](const Fraction& f) { return f.modulus_norm == 1; }));
}

FractionFamily build_fractions(const Field& field, FamilyKind kind, std::int64_t Q, int k, const FamilyOptions& options) {
  if (Q < 1) throw std::invalid_argument("build_fractions: Q must be >= 1");
  if (k < 1) throw std::invalid_argument("build_fractions: k must be >= 1");
  FractionFamily family{field, kind, k, Q, options.dyadic, {}};
  std::vector<OKElt> bases;
  switch (kind) {
    case FamilyKind::All:
      family.k = 1;
      bases = enumerate_by_norm(field, Q, false);
      break;
    case FamilyKind::Power:
      bases = enumerate_by_norm(field, Q, false);
      break;
    case FamilyKind::Square:
      family.k = 2;
      bases = enumerate_by_norm(field, Q, false);
      break;
    case FamilyKind::Prime:
      if (!field.class_number_one)
        throw std::invalid_argument("build_fractions: prime moduli need a class-number-one field, " + field.name() + " is not");
      family.k = 1;
      bases = primes_up_to_norm(field, Q);
      break;
    case FamilyKind::Custom:
      for (const auto& q : options.custom) {
        if (q.is_zero()) throw std::invalid_argument("build_fractions: custom moduli must be nonzero");
        if (norm(field, q) > Q)
          throw std::invalid_argument("build_fractions: custom modulus " + to_string(q) + " has norm above Q = " + std::to_string(Q));
      }
      bases = options.custom;
      break;
  }

  std::map<std::pair<Integer, Integer>, std::vector<OKElt>> residues_by_modulus;
  for (const auto& q : bases) {
    const std::int64_t nq = norm_i64(field, q);
    if (options.dyadic && 2 * nq <= Q) continue;
    const OKElt m = pow(field, q, static_cast<unsigned>(family.k));
    const std::int64_t nm = norm_i64(field, m);
    auto [it, inserted] = residues_by_modulus.try_emplace({m.a, m.b});
    if (inserted) it->second = coprime_residues(field, residue_system(field, m));
    for (const auto& r : it->second) family.fractions.push_back(Fraction{q, m, r, nm});
  }
  std::stable_sort(family.fractions.begin(), family.fractions.end(), fraction_less);
  return family;
}

TorusPoint embed_fraction_exact(const Field& field, const Fraction& fraction) {
  // r / m = r conj(m) / N(m) = (X + Y omega) / N(m)
  const OKElt w = mul(field, fraction.residue, conj(field, fraction.modulus));
  const std::int64_t den = fraction.modulus_norm;
  const Integer dI(den);
  Integer u = w.b % dI;
  if (u < 0) u += dI;
  Integer v = (w.a + w.b * field.omega_linear()) % dI;
  if (v < 0) v += dI;
  return {to_i64(u), to_i64(v), den};
}

Eigen::Vector2d embed_fraction(const Field& field, const Fraction& fraction) {
  return embed_fraction_exact(field, fraction).to_vector();
}

CoeffSeq make_coeffs(const Field& field, std::int64_t N) {
  CoeffSeq c;
  c.N = N;
  c.support = enumerate_by_norm(field, N, true);
  c.values = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(c.support.size()));
  return c;
}

std::vector<Frequency> frequencies(const std::vector<OKElt>& support) {
  std::vector<Frequency> out;
  out.reserve(support.size());
  for (const auto& n : support) out.push_back({to_i64(n.a), to_i64(n.b)});
  return out;
}

// ---------------------------------------------------------------------------
// CharacterOperator

CharacterOperator::CharacterOperator(std::vector<TorusPoint> points, std::vector<Frequency> freqs)
    : points_(std::move(points)), freqs_(std::move(freqs)) {
  std::map<std::int64_t, int> table_index;
  table_of_row_.reserve(points_.size());
  for (const auto& p : points_) {
    if (p.den <= 0) throw std::invalid_argument("CharacterOperator: non-positive denominator");
    if (p.den > kMaxTableDen) {
      table_of_row_.push_back(-1);
      continue;
    }
    auto [it, inserted] = table_index.try_emplace(p.den, static_cast<int>(tables_.size()));
    if (inserted) {
      std::vector<std::complex<double>> t(static_cast<std::size_t>(p.den));
      for (std::int64_t j = 0; j < p.den; ++j) t[static_cast<std::size_t>(j)] = unit_root(j, p.den);
      tables_.push_back(std::move(t));
    }
    table_of_row_.push_back(it->second);
  }
}

CharacterOperator CharacterOperator::for_family(const FractionFamily& family, std::int64_t N) {
  std::vector<TorusPoint> pts;
  pts.reserve(family.size());
  for (const auto& f : family.fractions) pts.push_back(embed_fraction_exact(family.field, f));
  return CharacterOperator(std::move(pts), frequencies(enumerate_by_norm(family.field, N, true)));
}

std::complex<double> CharacterOperator::entry(std::size_t row, const Frequency& f) const {
  const TorusPoint& p = points_[row];
  const std::int64_t idx = mod_pos(static_cast<__int128>(f[0]) * p.u + static_cast<__int128>(f[1]) * p.v, p.den);
  const int t = table_of_row_[row];
  return t >= 0 ? tables_[static_cast<std::size_t>(t)][static_cast<std::size_t>(idx)] : unit_root(idx, p.den);
}

Eigen::MatrixXcd CharacterOperator::apply(const Eigen::MatrixXcd& v, unsigned threads) const {
  if (v.rows() != cols()) throw std::invalid_argument("CharacterOperator::apply: dimension mismatch");
  const Eigen::Index b = v.cols();
  Eigen::MatrixXcd out(rows(), b);
  parallel_for(
      points_.size(),
      [&](std::size_t begin, std::size_t end) {
        Eigen::RowVectorXcd acc(b);
        for (std::size_t i = begin; i < end; ++i) {
          acc.setZero();
          for (std::size_t j = 0; j < freqs_.size(); ++j) acc += entry(i, freqs_[j]) * v.row(static_cast<Eigen::Index>(j));
          out.row(static_cast<Eigen::Index>(i)) = acc;
        }
      },
      threads);
  return out;
}

Eigen::MatrixXcd CharacterOperator::apply_adjoint(const Eigen::MatrixXcd& w, unsigned threads) const {
  if (w.rows() != rows()) throw std::invalid_argument("CharacterOperator::apply_adjoint: dimension mismatch");
  const Eigen::Index b = w.cols();
  Eigen::MatrixXcd out(cols(), b);
  parallel_for(
      freqs_.size(),
      [&](std::size_t begin, std::size_t end) {
        Eigen::RowVectorXcd acc(b);
        for (std::size_t j = begin; j < end; ++j) {
          acc.setZero();
          for (std::size_t i = 0; i < points_.size(); ++i)
            acc += std::conj(entry(i, freqs_[j])) * w.row(static_cast<Eigen::Index>(i));
          out.row(static_cast<Eigen::Index>(j)) = acc;
        }
      },
      threads);
  return out;
}

Eigen::VectorXcd CharacterOperator::apply(const Eigen::VectorXcd& v, unsigned threads) const {
  return apply(Eigen::MatrixXcd(v), threads).col(0);
}

Eigen::VectorXcd CharacterOperator::apply_adjoint(const Eigen::VectorXcd& w, unsigned threads) const {
  return apply_adjoint(Eigen::MatrixXcd(w), threads).col(0);
}

std::complex<double> CharacterOperator::exponential_sum(const Frequency& delta) const {
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) acc += entry(i, delta);
  return acc;
}

// ---------------------------------------------------------------------------
// GramOperator

GramOperator::GramOperator(CharacterOperator a, GramMode mode, unsigned threads) : a_(std::move(a)), threads_(threads) {
  const Eigen::Index M = a_.cols();
  tabulated_ = mode == GramMode::DifferenceTable || (mode == GramMode::Auto && M <= kMaxTabulatedDim);
  if (!tabulated_) return;

  const auto& f = a_.freqs();
  std::int64_t s_lo = 0, s_hi = 0, t_lo = 0, t_hi = 0;
  for (const auto& x : f) {
    s_lo = std::min(s_lo, x[0]);
    s_hi = std::max(s_hi, x[0]);
    t_lo = std::min(t_lo, x[1]);
    t_hi = std::max(t_hi, x[1]);
  }
  // Differences f_l - f_j live in [-(hi - lo), hi - lo] per coordinate.
  const std::int64_t ws = s_hi - s_lo, wt = t_hi - t_lo;
  const std::int64_t width = 2 * wt + 1;
  auto slot = [&](std::int64_t ds, std::int64_t dt) { return static_cast<std::size_t>((ds + ws) * width + (dt + wt)); };

  std::vector<int> slot_index(static_cast<std::size_t>((2 * ws + 1) * width), -1);
  std::vector<Frequency> deltas;
  for (const auto& x : f)
    for (const auto& y : f) {
      const std::size_t s = slot(y[0] - x[0], y[1] - x[1]);
      if (slot_index[s] < 0) {
        slot_index[s] = static_cast<int>(deltas.size());
        deltas.push_back({y[0] - x[0], y[1] - x[1]});
      }
    }

  std::vector<std::complex<double>> sums(deltas.size());
  parallel_for(
      deltas.size(),
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) sums[i] = a_.exponential_sum(deltas[i]);
      },
      threads_);

  gram_.resize(M, M);
  for (Eigen::Index j = 0; j < M; ++j)
    for (Eigen::Index l = 0; l < M; ++l) {
      const auto& x = f[static_cast<std::size_t>(j)];
      const auto& y = f[static_cast<std::size_t>(l)];
      gram_(j, l) = sums[static_cast<std::size_t>(slot_index[slot(y[0] - x[0], y[1] - x[1])])];
    }
}

Eigen::MatrixXcd GramOperator::apply(const Eigen::MatrixXcd& v) const {
  if (v.rows() != dim()) throw std::invalid_argument("GramOperator::apply: dimension mismatch");
  if (tabulated_) return gram_ * v;
  return a_.apply_adjoint(a_.apply(v, threads_), threads_);
}

Eigen::VectorXcd GramOperator::apply(const Eigen::VectorXcd& v) const { return apply(Eigen::MatrixXcd(v)).col(0); }

LambdaResult lambda_max(const GramOperator& gram, const PowerOptions& options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("lambda_max: tol must be positive");
  if (options.block < 1) throw std::invalid_argument("lambda_max: block must be positive");
  const Eigen::Index M = gram.dim();
  if (M == 0) return {0.0, 0, true};
  const Eigen::Index b = std::min<Eigen::Index>(M, options.block);
  LambdaResult best{-1.0, 0, false};
  std::uint64_t state = options.seed;
  for (int run = 0; run <= options.restarts; ++run) {
    std::mt19937_64 rng(splitmix64(state));
    Eigen::MatrixXcd v(M, b);
    for (Eigen::Index c = 0; c < b; ++c)
      for (Eigen::Index i = 0; i < M; ++i) v(i, c) = {uniform_pm1(rng), uniform_pm1(rng)};
    v = Eigen::HouseholderQR<Eigen::MatrixXcd>(v).householderQ() * Eigen::MatrixXcd::Identity(M, b);
    double lambda = 0.0;
    LambdaResult r{0.0, 0, false};
    for (int it = 1; it <= options.max_iter; ++it) {
      const Eigen::MatrixXcd w = gram.apply(v);
      Eigen::MatrixXcd h = v.adjoint() * w;
      h = (0.5 * (h + h.adjoint())).eval();
      const double next = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h, Eigen::EigenvaluesOnly).eigenvalues()[b - 1];
      r.iterations = it;
      const bool done = (it > 1 && std::abs(next - lambda) <= options.tol * std::abs(next)) || next == 0.0;
      lambda = next;
      if (done) {
        r.converged = true;
        break;
      }
      v = Eigen::HouseholderQR<Eigen::MatrixXcd>(w).householderQ() * Eigen::MatrixXcd::Identity(M, b);
    }
    r.value = lambda;
    if (r.value > best.value) best = r;
  }
  return best;
}

double quadratic_form(const FractionFamily& family, const CoeffSeq& coeffs) {
  if (static_cast<std::size_t>(coeffs.values.size()) != coeffs.support.size())
    throw std::invalid_argument("quadratic_form: coefficient vector does not match its support");
  std::vector<TorusPoint> pts;
  pts.reserve(family.size());
  for (const auto& f : family.fractions) pts.push_back(embed_fraction_exact(family.field, f));
  const CharacterOperator a(std::move(pts), frequencies(coeffs.support));
  return a.apply(coeffs.values).squaredNorm();
}

Eigen::VectorXcd apply_gram(const FractionFamily& family, std::int64_t N, const Eigen::VectorXcd& v) {
  const CharacterOperator a = CharacterOperator::for_family(family, N);
  if (v.size() != a.cols())
    throw std::invalid_argument("apply_gram: vector has dimension " + std::to_string(v.size()) + ", expected " +
                                std::to_string(a.cols()));
  return a.apply_adjoint(a.apply(v));
}

LambdaResult lambda_max(const FractionFamily& family, std::int64_t N, const PowerOptions& options) {
  return lambda_max(GramOperator(CharacterOperator::for_family(family, N)), options);
}

// ---------------------------------------------------------------------------
// Torus counts

double torus_distance(const Eigen::Vector2d& x, const Eigen::Vector2d& y) {
  Eigen::Vector2d d = x - y;
  for (int c = 0; c < 2; ++c) d[c] -= std::round(d[c]);
  return d.norm();
}

std::size_t torus_neighbour_max(std::span<const Eigen::Vector2d> points, double N) {
  if (points.empty()) throw std::invalid_argument("torus_counts: empty point list");
  if (!(N > 0.0)) throw std::invalid_argument("torus_counts: N must be positive");
  const double radius = std::sqrt(2.0 / N);
  std::size_t best = 0;
  for (const auto& x : points) {
    std::size_t c = 0;
    for (const auto& y : points)
      if (torus_distance(x, y) <= radius + kCountSlack) ++c;
    best = std::max(best, c);
  }
  return best;
}

std::size_t torus_disk_max(std::span<const Eigen::Vector2d> points, double delta) {
  if (points.empty()) throw std::invalid_argument("torus_counts: empty point list");
  if (!(delta > 0.0 && delta <= 0.5)) throw std::invalid_argument("torus_counts: delta must lie in (0, 1/2]");
  const double rho = std::sqrt(delta);
  auto count_at = [&](const Eigen::Vector2d& alpha) {
    std::size_t c = 0;
    for (const auto& x : points)
      if (torus_distance(x, alpha) <= rho + kCountSlack) ++c;
    return c;
  };
  // A maximising disk can be moved until a point sits at its centre or two
  // (translated) points sit on its boundary.
  std::size_t best = 0;
  for (const auto& x : points) best = std::max(best, count_at(x));
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      Eigen::Vector2d base = points[j] - points[i];
      for (int c = 0; c < 2; ++c) base[c] -= std::round(base[c]);
      for (int zx = -1; zx <= 1; ++zx)
        for (int zy = -1; zy <= 1; ++zy) {
          const Eigen::Vector2d diff = base + Eigen::Vector2d(zx, zy);
          const double dist = diff.norm();
          if (dist == 0.0 || dist > 2.0 * rho) continue;
          const Eigen::Vector2d mid = points[i] + 0.5 * diff;
          const double h = std::sqrt(std::max(0.0, rho * rho - 0.25 * dist * dist));
          const Eigen::Vector2d normal = Eigen::Vector2d(-diff[1], diff[0]) / dist;
          best = std::max(best, count_at(mid + h * normal));
          best = std::max(best, count_at(mid - h * normal));
        }
    }
  }
  return best;
}

std::size_t torus_counts(std::span<const Eigen::Vector2d> points, const TorusCountMode& mode) {
  return std::visit(
      [&](const auto& m) -> std::size_t {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, NeighbourCount>)
          return torus_neighbour_max(points, m.N);
        else
          return torus_disk_max(points, m.delta);
      },
      mode);
}

}  // namespace iqsieve
