#include "iqsieve/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "iqsieve/parallel.hpp"
#include "iqsieve/residue.hpp"

namespace iqsieve {

namespace {

constexpr double kGeomSlack = 1e-9;

using Point = std::complex<double>;

std::int64_t isqrt64(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::size_t count_in_disk(const std::vector<Point>& pts, Point c, double u) {
  std::size_t n = 0;
  for (const auto& p : pts)
    if (std::abs(p - c) <= u + kGeomSlack) ++n;
  return n;
}

// Largest number of points in a closed disk of radius u, centre unconstrained.
std::size_t max_in_disk(const std::vector<Point>& pts, double u) {
  std::size_t best = 0;
  for (const auto& p : pts) best = std::max(best, count_in_disk(pts, p, u));
  if (u <= 0.0) return best;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const Point diff = pts[j] - pts[i];
      const double dist = std::abs(diff);
      if (dist == 0.0 || dist > 2.0 * u + kGeomSlack) continue;
      const Point mid = pts[i] + 0.5 * diff;
      const double h = std::sqrt(std::max(0.0, u * u - 0.25 * dist * dist));
      const Point normal = Point(-diff.imag(), diff.real()) / dist;
      best = std::max(best, count_in_disk(pts, mid + h * normal, u));
      best = std::max(best, count_in_disk(pts, mid - h * normal, u));
    }
  return best;
}

// Radii at which max_in_disk can change: half pairwise distances and
// circumradii of triples, sorted and deduplicated.
std::vector<double> critical_radii(const std::vector<Point>& pts) {
  std::vector<double> out;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double a = std::abs(pts[j] - pts[i]);
      if (a == 0.0) continue;
      out.push_back(0.5 * a);
      for (std::size_t k = j + 1; k < pts.size(); ++k) {
        const double b = std::abs(pts[k] - pts[j]);
        const double c = std::abs(pts[k] - pts[i]);
        const Point e1 = pts[j] - pts[i], e2 = pts[k] - pts[i];
        const double cross = std::abs(e1.real() * e2.imag() - e1.imag() * e2.real());
        if (cross < 1e-12) continue;
        out.push_back(a * b * c / (2.0 * cross));
      }
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](double x, double y) { return std::abs(x - y) <= 1e-12 * y; }),
            out.end());
  return out;
}

std::vector<Point> congruent_points(const Field& field, const std::vector<OKElt>& S_t, const OKElt& kmod,
                                    const OKElt& l) {
  const Hnf lattice = ideal_lattice(field, kmod);
  const OKElt target = reduce(l, lattice);
  std::vector<Point> pts;
  for (const auto& q : S_t)
    if (reduce(q, lattice) == target) pts.push_back(to_complex(field, q));
  return pts;
}

double abs_elt(const Field& field, const OKElt& x) { return std::sqrt(static_cast<double>(norm_i64(field, x))); }

void require_class_number_one(const Field& field, const char* what) {
  if (!field.class_number_one)
    throw std::invalid_argument(std::string(what) + ": field " + field.name() + " is not of class number one");
}

}  // namespace

ModuliSet make_moduli_set(const Field& field, std::int64_t Q, std::vector<OKElt> elements) {
  if (Q < 1) throw std::invalid_argument("moduli set: Q must be >= 1");
  for (const auto& s : elements) {
    if (s.is_zero()) throw std::invalid_argument("moduli set: zero element");
    if (norm(field, s) > Q)
      throw std::invalid_argument("moduli set: element " + to_string(s) + " has norm above Q = " + std::to_string(Q));
  }
  return {field, Q, std::move(elements)};
}

std::string to_string(Theorem theorem) {
  switch (theorem) {
    case Theorem::Huxley: return "huxley";
    case Theorem::Power: return "power";
    case Theorem::Square: return "square";
    case Theorem::Prime: return "prime";
  }
  return "?";
}

Theorem parse_theorem(const std::string& name) {
  if (name == "huxley") return Theorem::Huxley;
  if (name == "power") return Theorem::Power;
  if (name == "square") return Theorem::Square;
  if (name == "prime") return Theorem::Prime;
  throw std::invalid_argument("unknown theorem '" + name + "' (expected huxley|power|square|prime)");
}

std::int64_t prime_theorem_N(std::int64_t Q, double delta) {
  return static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(Q), 1.0 + delta) / 16.0 + 1e-9));
}

double rhs_bound(const BoundParams& p) {
  if (p.Q < 1 || p.N < 1) throw std::invalid_argument("rhs_bound: Q and N must be >= 1");
  if (p.epsilon < 0.0) throw std::invalid_argument("rhs_bound: epsilon must be >= 0");
  const auto Q = static_cast<double>(p.Q);
  const auto N = static_cast<double>(p.N);
  const double eps_factor = std::pow(Q * N, p.epsilon);
  switch (p.theorem) {
    case Theorem::Huxley:
      return Q * Q + N;
    case Theorem::Power: {
      if (p.k < 1 || p.k > 30) throw std::invalid_argument("rhs_bound: power theorem needs 1 <= k <= 30");
      const double kappa = p.kappa();
      const double k = p.k;
      return eps_factor * (std::pow(Q, k + 1.0) + N * std::pow(Q, 1.0 - 1.0 / kappa) +
                           std::pow(N, 1.0 - 1.0 / kappa) * std::pow(Q, 1.0 + k / kappa));
    }
    case Theorem::Square:
      return eps_factor * (Q * Q * Q + Q * Q * std::sqrt(N) + N);
    case Theorem::Prime: {
      if (p.Q < 16) throw std::invalid_argument("rhs_bound: prime theorem needs Q >= 16, got " + std::to_string(p.Q));
      if (!(p.delta > 0.0 && p.delta < 1.0)) throw std::invalid_argument("rhs_bound: prime theorem needs 0 < delta < 1");
      const std::int64_t expected = prime_theorem_N(p.Q, p.delta);
      if (p.N != expected)
        throw std::invalid_argument("rhs_bound: prime theorem needs N = floor(Q^(1+delta)/16) = " + std::to_string(expected) +
                                    ", got " + std::to_string(p.N));
      return Q * Q * std::log(std::log(Q)) / ((1.0 - p.delta) * std::log(Q));
    }
  }
  throw std::invalid_argument("rhs_bound: unknown theorem");
}

std::vector<OKElt> make_S_t(const ModuliSet& S, const OKElt& t) {
  if (t.is_zero()) throw std::invalid_argument("make_S_t: t must be nonzero");
  std::vector<OKElt> out;
  for (const auto& s : S.elements)
    if (auto q = exact_divide(S.field, s, t)) out.push_back(*q);
  return out;
}

std::size_t count_A_t(const Field& field, const std::vector<OKElt>& S_t, std::int64_t Q, const OKElt& t, double u,
                      const OKElt& kmod, const OKElt& l) {
  if (t.is_zero() || kmod.is_zero()) throw std::invalid_argument("count_A_t: t and k must be nonzero");
  const double R = std::sqrt(static_cast<double>(Q)) / abs_elt(field, t);
  if (!(u >= 0.0) || u > R * (1.0 + 1e-12)) throw std::invalid_argument("count_A_t: u must lie in [0, sqrt(Q)/|t|]");
  if (!is_coprime(field, kmod, l)) throw std::invalid_argument("count_A_t: k and l must be coprime");
  const auto pts = congruent_points(field, S_t, kmod, l);
  // Every point lies in the centre disk, and projecting a centre onto that
  // disk moves it closer to all of them, so the constraint never binds.
  for (const auto& p : pts)
    if (std::abs(p) > R + kGeomSlack) throw std::invalid_argument("count_A_t: a point of S_t lies outside B(0, sqrt(Q)/|t|)");
  return max_in_disk(pts, u);
}

Theorem2Result theorem2_rhs(const ModuliSet& S, std::int64_t N, const Theorem2Options& options) {
  const Field& field = S.field;
  require_class_number_one(field, "theorem2_rhs");
  if (N < 16) throw std::invalid_argument("theorem2_rhs: N must be >= 16");
  if (options.z_samples < 1) throw std::invalid_argument("theorem2_rhs: z_samples must be >= 1");
  const double sqrtQ = std::sqrt(static_cast<double>(S.Q));
  const double sqrtN = std::sqrt(static_cast<double>(N));
  const double N14 = std::sqrt(sqrtN);

  std::vector<OKElt> rs;
  for (const auto& r : enumerate_by_norm(field, isqrt64(N), false)) {
    const std::int64_t nr = norm_i64(field, r);
    if (nr * nr <= N) rs.push_back(r);
  }

  std::vector<Theorem2Result> per_r(rs.size());
  parallel_for(
      rs.size(),
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t ir = begin; ir < end; ++ir) {
          const OKElt& r = rs[ir];
          Theorem2Result& best = per_r[ir];
          best.inner = -1.0;
          const double abs_r = abs_elt(field, r);
          const double z_lo = 1.0 / sqrtN;
          const double z_hi = field.sqrt_abs_disc() / (abs_r * N14);
          if (z_lo > z_hi) continue;

          struct TData {
            OKElt t, k;
            std::int64_t nt = 1;
            std::vector<OKElt> S_t;
            Hnf k_lattice;
          };
          std::vector<TData> ts;
          for (const auto& t : divisors(field, r)) {
            TData td{t, *exact_divide(field, r, t), norm_i64(field, t), make_S_t(S, t), {}};
            td.k_lattice = ideal_lattice(field, td.k);
            ts.push_back(std::move(td));
          }
          const auto hs = coprime_residues(field, residue_system(field, r));

          for (int iz = 0; iz < options.z_samples; ++iz) {
            const double z = options.z_samples == 1
                                 ? z_lo
                                 : z_lo * std::pow(z_hi / z_lo, static_cast<double>(iz) / (options.z_samples - 1));
            std::vector<double> inner(hs.size(), 0.0);
            for (const auto& td : ts) {
              if (td.S_t.empty()) continue;
              const double abs_t = std::sqrt(static_cast<double>(td.nt));
              const double u = std::min(sqrtQ / (sqrtN * z * abs_t), sqrtQ / abs_t);
              const double m_abs = 3.0 * abs_r * z * sqrtQ / abs_t;
              const auto m_norm = static_cast<std::int64_t>(std::floor(m_abs * m_abs * (1.0 + 1e-12)));
              std::vector<OKElt> ms;
              for (const auto& m : enumerate_by_norm(field, m_norm, false))
                if (is_coprime(field, m, td.k)) ms.push_back(m);
              if (ms.empty()) continue;
              std::map<std::pair<Integer, Integer>, std::size_t> a_cache;
              for (std::size_t ih = 0; ih < hs.size(); ++ih) {
                std::map<std::pair<Integer, Integer>, std::size_t> hist;
                for (const auto& m : ms) {
                  const OKElt c = reduce(mul(field, hs[ih], m), td.k_lattice);
                  ++hist[{c.a, c.b}];
                }
                double sum = 0.0;
                for (const auto& [key, mult] : hist) {
                  auto it = a_cache.find(key);
                  if (it == a_cache.end()) {
                    const OKElt l{key.first, key.second};
                    it = a_cache.emplace(key, count_A_t(field, td.S_t, S.Q, td.t, u, td.k, l)).first;
                  }
                  sum += static_cast<double>(mult * it->second);
                }
                inner[ih] += sum;
              }
            }
            for (std::size_t ih = 0; ih < hs.size(); ++ih)
              if (inner[ih] > best.inner) {
                best.inner = inner[ih];
                best.r = r;
                best.z_abs = z;
                best.h = hs[ih];
              }
          }
        }
      },
      options.threads);

  Theorem2Result out;
  for (const auto& res : per_r)
    if (res.inner > out.inner) out = res;
  out.value = static_cast<double>(N) * (1.0 + out.inner);
  return out;
}

namespace {

struct XRange {
  OKElt t, k, l;
  std::vector<Point> pts;
  double u_lo = 0.0, u_hi = 0.0;
  double c = 0.0;  // (|S_t| / N(k)) / (Q / |t|^2)
};

std::vector<XRange> x_ranges(const ModuliSet& S, std::int64_t N) {
  const Field& field = S.field;
  require_class_number_one(field, "verify_X");
  if (N < 16) throw std::invalid_argument("verify_X: N must be >= 16");
  const double sqrtQ = std::sqrt(static_cast<double>(S.Q));
  const double N14 = std::sqrt(std::sqrt(static_cast<double>(N)));
  std::vector<XRange> out;
  for (const auto& t : enumerate_by_norm(field, isqrt64(N), false)) {
    const std::int64_t nt = norm_i64(field, t);
    if (nt * nt > N) continue;
    const auto S_t = make_S_t(S, t);
    if (S_t.empty()) continue;
    const double abs_t = std::sqrt(static_cast<double>(nt));
    for (const auto& k : enumerate_by_norm(field, isqrt64(N) / nt, false)) {
      const std::int64_t nk = norm_i64(field, k);
      if ((nk * nt) * (nk * nt) > N) continue;
      const double u_lo = std::sqrt(static_cast<double>(nk)) * sqrtQ / (field.sqrt_abs_disc() * N14);
      const double u_hi = sqrtQ / abs_t;
      if (u_lo > u_hi) continue;
      const double c = (static_cast<double>(S_t.size()) / static_cast<double>(nk)) /
                       (static_cast<double>(S.Q) / static_cast<double>(nt));
      for (const auto& l : coprime_residues(field, residue_system(field, k))) {
        auto pts = congruent_points(field, S_t, k, l);
        if (pts.empty()) continue;
        out.push_back({t, k, l, std::move(pts), u_lo, u_hi, c});
      }
    }
  }
  return out;
}

}  // namespace

XResult verify_X(const ModuliSet& S, std::int64_t N) {
  XResult best;
  for (const auto& rg : x_ranges(S, N)) {
    auto consider = [&](double u, std::size_t a) {
      const double x = static_cast<double>(a) / (1.0 + rg.c * u * u);
      if (x > best.X) best = {x, rg.t, rg.k, rg.l, u, a};
    };
    std::size_t level = max_in_disk(rg.pts, rg.u_lo);
    consider(rg.u_lo, level);
    std::vector<double> radii;
    for (double r : critical_radii(rg.pts))
      if (r > rg.u_lo && r <= rg.u_hi) radii.push_back(r);
    // The count is nondecreasing in u, so only the first radius of each new
    // level can maximise the ratio; find it by bisection.
    std::size_t from = 0;
    while (from < radii.size()) {
      std::size_t lo = from, hi = radii.size();
      std::size_t found_level = level;
      while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        const std::size_t a = max_in_disk(rg.pts, radii[mid]);
        if (a > level) {
          hi = mid;
          found_level = a;
        } else {
          lo = mid + 1;
        }
      }
      if (lo == radii.size()) break;
      if (found_level == level) found_level = max_in_disk(rg.pts, radii[lo]);
      level = found_level;
      consider(radii[lo], level);
      from = lo + 1;
    }
  }
  return best;
}

double verify_X_sampled(const ModuliSet& S, std::int64_t N, int samples) {
  if (samples < 2) throw std::invalid_argument("verify_X_sampled: need at least 2 samples");
  double best = 0.0;
  for (const auto& rg : x_ranges(S, N))
    for (int i = 0; i < samples; ++i) {
      const double u = rg.u_lo + (rg.u_hi - rg.u_lo) * static_cast<double>(i) / (samples - 1);
      best = std::max(best, static_cast<double>(max_in_disk(rg.pts, u)) / (1.0 + rg.c * u * u));
    }
  return best;
}

double theorem3_rhs(const ModuliSet& S, std::int64_t N, double X, double epsilon) {
  const auto n = static_cast<double>(N);
  return n + static_cast<double>(S.Q) * X * std::pow(n, epsilon) * (std::sqrt(n) + static_cast<double>(S.elements.size()));
}

std::size_t count_fractions_near(const Field& field, const FractionFamily& family, std::complex<double> alpha,
                                 double radius, bool all_numerators) {
  if (!(radius >= 0.0)) throw std::invalid_argument("count_fractions_near: radius must be >= 0");
  using LD = long double;
  const std::complex<double> om = field.omega();
  const LD re_w = om.real(), im_w = om.imag();
  const LD rad2 = static_cast<LD>(radius) * radius;
  auto within = [&](LD dx, LD dy) { return dx * dx + dy * dy <= rad2 * (1.0L + 1e-15L) + 1e-30L; };
  std::size_t count = 0;
  for (const auto& f : family.fractions) {
    // r / m = (X + Y omega) / N(m)
    const OKElt w = mul(field, f.residue, conj(field, f.modulus));
    const auto den = static_cast<LD>(f.modulus_norm);
    const LD x = static_cast<LD>(to_i64(w.a)) / den;
    const LD y = static_cast<LD>(to_i64(w.b)) / den;
    const LD vr = x + y * re_w, vi = y * im_w;
    const LD cr = static_cast<LD>(alpha.real()) - vr, ci = static_cast<LD>(alpha.imag()) - vi;
    if (!all_numerators) {
      if (within(cr, ci)) ++count;
      continue;
    }
    // Translates j in O_K with |j - c| <= radius.
    const auto b_lo = static_cast<std::int64_t>(std::ceil((ci - radius) / im_w - 1e-12L));
    const auto b_hi = static_cast<std::int64_t>(std::floor((ci + radius) / im_w + 1e-12L));
    for (std::int64_t b = b_lo; b <= b_hi; ++b) {
      const LD dy = b * im_w - ci;
      const LD base = cr - b * re_w;
      const auto a_lo = static_cast<std::int64_t>(std::floor(base - radius)) - 1;
      const auto a_hi = static_cast<std::int64_t>(std::ceil(base + radius)) + 1;
      for (std::int64_t a = a_lo; a <= a_hi; ++a)
        if (within(static_cast<LD>(a) - base, dy)) ++count;
    }
  }
  return count;
}

}  // namespace iqsieve
