#include "iqsieve/experiment.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "iqsieve/parallel.hpp"

namespace iqsieve {

namespace {

struct Cell {
  std::int64_t Q, N;
};

std::vector<Cell> grid(const ExperimentConfig& c, Theorem theorem) {
  if (c.Q_list.empty()) throw std::invalid_argument("config: q list must be nonempty");
  std::vector<Cell> cells;
  if (c.N_list.empty()) {
    if (theorem != Theorem::Prime) throw std::invalid_argument("config: n list must be nonempty");
    for (auto Q : c.Q_list) cells.push_back({Q, prime_theorem_N(Q, c.delta)});
    return cells;
  }
  for (auto Q : c.Q_list)
    for (auto N : c.N_list) cells.push_back({Q, N});
  return cells;
}

BoundParams params_for(const ExperimentConfig& c, Theorem theorem, const Cell& cell) {
  BoundParams p;
  p.theorem = theorem;
  p.k = theorem == Theorem::Square ? 2 : (theorem == Theorem::Power ? c.k : 1);
  p.Q = cell.Q;
  p.N = cell.N;
  p.epsilon = c.epsilon;
  p.delta = c.delta;
  return p;
}

}  // namespace

Theorem default_theorem(FamilyKind family) {
  switch (family) {
    case FamilyKind::Power: return Theorem::Power;
    case FamilyKind::Square: return Theorem::Square;
    case FamilyKind::Prime: return Theorem::Prime;
    case FamilyKind::All:
    case FamilyKind::Custom: return Theorem::Huxley;
  }
  return Theorem::Huxley;
}

int family_k(FamilyKind family, int k) {
  switch (family) {
    case FamilyKind::All:
    case FamilyKind::Prime: return 1;
    case FamilyKind::Square: return 2;
    case FamilyKind::Power:
    case FamilyKind::Custom: return k;
  }
  return k;
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::vector<SieveReport> run_sieve(const ExperimentConfig& config, unsigned threads) {
  const Field field = make_field(config.d);
  const Theorem theorem = config.theorem.value_or(default_theorem(config.family));
  const auto cells = grid(config, theorem);
  const int k = family_k(config.family, config.k);
  if (k < 1) throw std::invalid_argument("config: k must be >= 1");
  for (const auto& cell : cells) {
    if (cell.Q < 1 || cell.N < 1) throw std::invalid_argument("config: Q and N must be >= 1");
    rhs_bound(params_for(config, theorem, cell));  // preconditions fail before any work
  }

  FamilyOptions fopts;
  fopts.dyadic = config.dyadic;
  fopts.custom = config.custom;
  PowerOptions popts;
  popts.tol = config.tol;
  popts.seed = config.seed;

  std::vector<SieveReport> rows(cells.size());
  parallel_for(
      cells.size(),
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          const Cell& cell = cells[i];
          const FractionFamily family = build_fractions(field, config.family, cell.Q, k, fopts);
          const GramOperator gram(CharacterOperator::for_family(family, cell.N), GramMode::Auto, 1);
          const LambdaResult lam = lambda_max(gram, popts);
          SieveReport& row = rows[i];
          row.d = config.d;
          row.family = to_string(config.family);
          row.k = k;
          row.Q = cell.Q;
          row.N = cell.N;
          row.F = family.size();
          row.M = static_cast<std::size_t>(gram.dim());
          row.lambda_max = lam.value;
          row.rhs = rhs_bound(params_for(config, theorem, cell));
          row.ratio = lam.value / row.rhs;
          row.iterations = lam.iterations;
          row.seed = config.seed;
          row.converged = lam.converged;
        }
      },
      threads == 0 ? thread_count() : threads);
  return rows;
}

std::string sieve_csv(const std::vector<SieveReport>& rows) {
  std::ostringstream os;
  os << "d,family,k,Q,N,F,M,lambda_max,rhs,ratio,iterations,seed\n";
  for (const auto& r : rows)
    os << r.d << ',' << r.family << ',' << r.k << ',' << r.Q << ',' << r.N << ',' << r.F << ',' << r.M << ','
       << format_number(r.lambda_max) << ',' << format_number(r.rhs) << ',' << format_number(r.ratio) << ','
       << r.iterations << ',' << r.seed << '\n';
  return os.str();
}

std::string sieve_json(const std::vector<SieveReport>& rows) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& r : rows)
    out.push_back({{"d", r.d},
                   {"family", r.family},
                   {"k", r.k},
                   {"Q", r.Q},
                   {"N", r.N},
                   {"F", r.F},
                   {"M", r.M},
                   {"lambda_max", r.lambda_max},
                   {"rhs", r.rhs},
                   {"ratio", r.ratio},
                   {"iterations", r.iterations},
                   {"seed", r.seed},
                   {"converged", r.converged}});
  return out.dump(2) + "\n";
}

std::vector<BoundRow> run_bounds(const ExperimentConfig& config) {
  const Theorem theorem = config.theorem.value_or(default_theorem(config.family));
  std::vector<BoundRow> rows;
  for (const auto& cell : grid(config, theorem)) {
    const BoundParams p = params_for(config, theorem, cell);
    rows.push_back({p, rhs_bound(p)});
  }
  return rows;
}

std::string bounds_csv(const std::vector<BoundRow>& rows) {
  std::ostringstream os;
  os << "theorem,k,Q,N,epsilon,delta,rhs\n";
  for (const auto& r : rows)
    os << to_string(r.params.theorem) << ',' << r.params.k << ',' << r.params.Q << ',' << r.params.N << ','
       << format_number(r.params.epsilon) << ',' << format_number(r.params.delta) << ',' << format_number(r.rhs) << '\n';
  return os.str();
}

std::string bounds_json(const std::vector<BoundRow>& rows) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& r : rows)
    out.push_back({{"theorem", to_string(r.params.theorem)},
                   {"k", r.params.k},
                   {"Q", r.params.Q},
                   {"N", r.params.N},
                   {"epsilon", r.params.epsilon},
                   {"delta", r.params.delta},
                   {"rhs", r.rhs}});
  return out.dump(2) + "\n";
}

}  // namespace iqsieve
