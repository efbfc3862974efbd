#pragma once

// Property suites behind `iqsieve verify <name>`.

#include <cstdint>
#include <string>
#include <vector>

#include "iqsieve/qfield.hpp"

namespace iqsieve {

struct CheckResult {
  std::string name;
  bool passed = true;
  double measured = 0.0;
  double limit = 0.0;
  bool informational = false;  // reported but never fails the suite
};

struct SuiteReport {
  std::string suite;
  std::int64_t d = -1;
  std::vector<CheckResult> checks;

  bool passed() const;
  std::string text() const;
};

const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite name.
SuiteReport run_suite(const std::string& name, const Field& field, std::uint64_t seed = 1);

/// Number of reduced binary quadratic forms of discriminant D < 0.
std::int64_t class_number_by_forms(std::int64_t D);

}  // namespace iqsieve
