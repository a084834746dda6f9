#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "filtlab/scenario.hpp"

namespace filtlab {

enum class CheckStatus { Pass, Fail, Unknown, Skipped };

const char* to_string(CheckStatus s);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  std::string detail;  // witness or skip reason, empty on a clean pass
};

struct Report {
  std::string command;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  long timing_ms = 0;

  int n_with(CheckStatus s) const;
  bool any_fail() const { return n_with(CheckStatus::Fail) > 0; }
  void add(std::string name, CheckStatus status, std::string detail = "");

  // Sorted-key JSON; timing is reported separately from the deterministic
  // check content.
  std::string to_json() const;
  std::string to_text() const;
};

// Every identity check applicable to the scenario's data: field axioms,
// classification, compensators, decomposition variants (skipped with a
// reason when their preconditions fail), projection identities and the
// terminal-decomposition identities. `seed` drives the randomized inputs
// (test martingales, payoffs) deterministically.
Report verify_scenario(const Scenario& scenario, std::uint64_t seed);

// Generated sweep: `count` scenarios per fixture family, each derived from
// `seed`, executed on `threads` workers with deterministic per-index
// sub-seeds. Covers the same identity catalogue as verify_scenario.
Report verify_generated(std::uint64_t seed, int count, int threads);

}  // namespace filtlab
