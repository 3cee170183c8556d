#pragma once

#include <string>
#include <vector>

#include "phigamma/io.hpp"

namespace phigamma {

struct SuiteConfig {
  std::string suite;
  u64 p = 3;
  int N = 6;
  int lo = -40, hi = 160;
  u64 seed = 1;
  int trials = 50;
  int n_max = 0;  // level bound for literal-sum oracles; 0 picks N + 2
  int threads = 0;  // 0 = hardware concurrency
};

struct CheckRecord {
  std::string name;
  int trial = 0;
  json params;
  bool pass = false;
  json lhs, rhs;
  json precision;
  json witness;  // failures only
};

struct Report {
  SuiteConfig config;
  std::vector<CheckRecord> checks;  // sorted by name, then trial
  int passed = 0, failed = 0;
  double wall_ms = 0;
};

inline constexpr int kReportSchema = 1;

const std::vector<std::string>& suite_names();
void validate(const SuiteConfig& cfg);  // ConfigInvalid / UnknownSuite
Report run_suite(const SuiteConfig& cfg);
// deterministic: wall-clock time is not part of the document
json to_json(const Report& r);

}  // namespace phigamma
