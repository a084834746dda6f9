#pragma once

#include <map>
#include <optional>
#include <string>

#include "filtlab/random_time.hpp"

namespace filtlab {

// On-disk unit of work: a filtered space plus whatever optional structure a
// command needs (random time, named processes, a dense conditional
// distribution table, kernel data, a market block).
struct Scenario {
  FilteredSpace space;
  std::optional<RandomTime> tau;
  std::map<std::string, Process> processes;
  std::optional<CondDistField> field;
  std::optional<EDData> ed;
  std::optional<Process> market_x;
};

// JSON text with rationals as "p/q" strings and times as "0".."T" / "inf".
// Canonical form: sorted keys, two-space indent, lowest-term rationals;
// save(load(x)) is byte-identical once x is canonical. With strict mode,
// unknown keys are a ValidationError carrying a JSON-pointer-ish location.
Scenario load_scenario(const std::string& path, bool strict = true);
Scenario parse_scenario(const std::string& text, bool strict = true);
void save_scenario(const Scenario& scenario, const std::string& path);
std::string serialize_scenario(const Scenario& scenario);

}  // namespace filtlab
