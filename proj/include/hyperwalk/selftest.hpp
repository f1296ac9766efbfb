#pragma once

#include <string>
#include <vector>

#include "hyperwalk/estimators.hpp"
#include "json.hpp"

namespace hyperwalk {

/// One estimator-versus-oracle comparison.
struct OracleGap {
  std::string name;
  double estimate = 0.0;
  double oracle = 0.0;
  double gap = 0.0;  // |estimate - oracle|
  double tolerance = 0.0;
  bool passed = false;
};

/// Fast oracle cross-checks on F_rank and a few {P,Q} tilings.
std::vector<OracleGap> run_selftest(int rank, std::uint64_t seed, int threads);

nlohmann::json selftest_json(const std::vector<OracleGap>& gaps);

}  // namespace hyperwalk
