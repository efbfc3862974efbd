#pragma once

// Sweep driver: one SieveReport per (Q, N) cell, emitted in grid order.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iqsieve/bounds.hpp"
#include "iqsieve/sieve.hpp"

namespace iqsieve {

struct ExperimentConfig {
  std::int64_t d = -1;
  FamilyKind family = FamilyKind::All;
  std::optional<Theorem> theorem;  // defaults to the family's own bound
  int k = 1;
  std::vector<std::int64_t> Q_list;
  std::vector<std::int64_t> N_list;  // empty with the prime bound: N tied to Q
  double epsilon = 0.25;
  double delta = 0.5;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  int z_samples = 32;
  bool dyadic = false;
  std::vector<OKElt> custom;
};

struct SieveReport {
  std::int64_t d = -1;
  std::string family;
  int k = 1;
  std::int64_t Q = 1;
  std::int64_t N = 1;
  std::size_t F = 0;
  std::size_t M = 0;
  double lambda_max = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  int iterations = 0;
  std::uint64_t seed = 1;
  bool converged = true;
};

Theorem default_theorem(FamilyKind family);

/// The k actually used to build moduli for this family.
int family_k(FamilyKind family, int k);

std::vector<SieveReport> run_sieve(const ExperimentConfig& config, unsigned threads = 0);

std::string sieve_csv(const std::vector<SieveReport>& rows);
std::string sieve_json(const std::vector<SieveReport>& rows);

struct BoundRow {
  BoundParams params;
  double rhs = 0.0;
};

std::vector<BoundRow> run_bounds(const ExperimentConfig& config);

std::string bounds_csv(const std::vector<BoundRow>& rows);
std::string bounds_json(const std::vector<BoundRow>& rows);

/// "%.12g"
std::string format_number(double x);

}  // namespace iqsieve
