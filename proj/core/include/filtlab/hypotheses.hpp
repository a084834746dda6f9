#pragma once

#include <optional>
#include <string>
#include <vector>

#include "filtlab/random_time.hpp"

namespace filtlab {

struct TripleWitness {
  int u = -1, s = -1, t = -1;  // offending slot triple
  int atom = -1;
  Rational lhs, rhs;
};

// Hypothesis (H): F_{u,s} == F_{u,t} for all u <= s < t. Returns a witness on
// failure, nullopt on PASS.
std::optional<TripleWitness> check_h(const FilteredSpace& space, const CondDistField& field);

// Hypothesis (HP): F_{u,s} F_{s,t} == F_{s,s} F_{u,t} for all u < s < t.
std::optional<TripleWitness> check_hp(const FilteredSpace& space, const CondDistField& field);

enum class TriVerdict { Pass, Fail, Unknown };

const char* to_string(TriVerdict v);

struct Factorization {
  Process k;  // nonnegative, adapted, increasing in u
  Process l;  // strictly positive martingale
};

struct SeparabilityResult {
  TriVerdict verdict = TriVerdict::Unknown;
  std::optional<Factorization> factors;  // present on Pass
  std::optional<TripleWitness> witness;  // present on Fail
  std::string note;
};

// Searches for F_{u,t} = K_u L_t over all 0 <= u <= t. The ratio search is
// exact; zeros that leave the ratios underdetermined yield Unknown rather
// than a guess.
SeparabilityResult check_complete_separability(const FilteredSpace& space,
                                               const CondDistField& field);

// Factorization restricted to v <= u <= t, anchored at the row u = v.
SeparabilityResult check_separable_at(const FilteredSpace& space, const CondDistField& field,
                                      int v);

struct EDWitness {
  std::string detail;
};

// Shape and process axioms of kernel data alone: rows are nonnegative
// martingales on [s, inf], D is adapted and increasing from D_{0-} = 0.
std::optional<EDWitness> verify_ed_intrinsic(const FilteredSpace& space, const EDData& ed);

// Extended density hypothesis: F_{u,t} = sum_{s<=u} m_{s,t} dD_s with each
// m_{s,.} a nonnegative martingale on [s, inf] and D adapted increasing with
// D_{0-} = 0. Returns a witness on failure.
std::optional<EDWitness> verify_ed(const FilteredSpace& space, const CondDistField& field,
                                   const EDData& ed);

// Sub-flag reported alongside the nonnegativity verdict: is m strictly
// positive on every (s, t >= s)?
bool ed_m_strictly_positive(const EDData& ed);

// The telescoping kernel m_{s,t} = F_{s,t} - F_{s-1,t} with unit jumps of D;
// verifies against any valid field.
EDData canonical_ed_candidate(const FilteredSpace& space, const CondDistField& field);

struct Classification {
  bool h = false;
  bool hp = false;
  bool completely_separable = false;
  bool separable_all_v = false;
  bool ed_with_candidate = false;
  bool f_infty_measurable = false;
  bool honest = false;
  bool strictly_positive_field = false;

  std::optional<TripleWitness> h_witness;
  std::optional<TripleWitness> hp_witness;
  SeparabilityResult complete_separability;
  std::vector<TriVerdict> separable_at;  // indexed by v = 1..inf_slot
  std::optional<EDWitness> ed_witness;
  int positivity_bad_u = -1, positivity_bad_t = -1;
};

// Full classification of a random time through its conditional distribution.
// The honest flag uses the HP characterization: terminal measurability plus
// hypothesis (HP).
Classification classify(const FilteredSpace& space, const RandomTime& tau);
Classification classify_field(const FilteredSpace& space, const RandomTime& tau,
                              const CondDistField& field);

}  // namespace filtlab
