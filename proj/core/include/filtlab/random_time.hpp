#pragma once

#include <optional>
#include <vector>

#include "filtlab/process.hpp"
#include "filtlab/space.hpp"

namespace filtlab {

// Random time as an atom -> slot map. The value inf_slot() encodes "never".
struct RandomTime {
  std::vector<int> value;  // per atom, in 0..T or inf_slot

  int operator[](int atom) const { return value[atom]; }
  bool is_stopping_time(const FilteredSpace& space) const;
  bool measurable_terminal(const FilteredSpace& space) const;  // constant on F_T blocks
};

// Indicator process H_t = 1_{tau <= t}; jumps at inf for atoms with tau = inf.
Process indicator_process(const FilteredSpace& space, const RandomTime& tau);
// X stopped at tau: X_{t ^ tau}.
Process stop_at(const FilteredSpace& space, const Process& x, const RandomTime& tau);

struct AzemaPair {
  Process g;  // supermartingale P(tau > t | F_t)
  Process f;  // submartingale 1 - G
};

// Azema pair of a random time. Checks the supermartingale property and the
// inclusions {tau > t} in {G_t > 0}, {tau <= t} in {F_t > 0} before returning.
AzemaPair azema(const FilteredSpace& space, const RandomTime& tau);

// Conditional distribution field F_{u,t} = P(tau <= u | F_t) over all slot
// pairs, including the terminal column and row.
class CondDistField {
 public:
  CondDistField() = default;
  CondDistField(Timeline timeline, std::vector<std::vector<RandomVariable>> table);

  const Timeline& timeline() const { return timeline_; }
  const RandomVariable& at(int u, int t) const { return table_[u][t]; }
  // Mass increment in the u-direction: F_{u,t} - F_{u-1,t} (at u = 0, F_{0,t}).
  RandomVariable mass(int u, int t) const;
  // Diagonal F_{t,t}, i.e. the Azema submartingale.
  Process diagonal() const;
  // Row u as a process in t (a martingale for genuine fields).
  Process row(int u) const;

  // Def-style validation: values in [0,1], martingale in t, increasing in u,
  // terminal row == 1. Throws FieldAxiomViolation with a witness otherwise.
  void validate(const FilteredSpace& space) const;

  // True when F_{u,t} > 0 atomwise for all 0 < u <= t (the strict-positivity
  // predicate; u = 0 is deliberately excluded).
  bool strictly_positive(int* bad_u = nullptr, int* bad_t = nullptr) const;

 private:
  Timeline timeline_;
  std::vector<std::vector<RandomVariable>> table_;  // [u][t]
};

CondDistField conditional_distribution(const FilteredSpace& space, const RandomTime& tau);

enum class EnlargementKind { Progressive, Initial };

// Partition chain of an enlarged filtration, same slot conventions as the
// base space.
struct EnlargedFiltration {
  EnlargementKind kind = EnlargementKind::Progressive;
  RandomTime tau;
  Filtration filt;

  const Partition& at(int slot) const { return filt.at(slot); }
};

// Progressive enlargement: on {tau <= t} atoms are split by the exact value
// of tau, on {tau > t} the F_t trace is kept. Initial enlargement joins
// sigma(tau) at every slot.
EnlargedFiltration progressive_enlargement(const FilteredSpace& space, const RandomTime& tau);
EnlargedFiltration initial_enlargement(const FilteredSpace& space, const RandomTime& tau);

struct AdmissibilityWitness {
  int slot = -1;
  std::string detail;
};

enum class AdmissibilitySide { Before, After };

// Trace comparison of Guo-Zeng admissibility: before tau the K_t trace on
// {tau > t} must match F_t, after tau the K_t trace on {tau <= t} must match
// the initial enlargement.
std::optional<AdmissibilityWitness> check_admissibility(const FilteredSpace& space,
                                                        const Filtration& k,
                                                        const RandomTime& tau,
                                                        AdmissibilitySide side);

// Payoff map (u, omega) -> value, one row per u slot; each row must be
// measurable w.r.t. the terminal sigma-field.
struct PayoffMap {
  std::vector<RandomVariable> rows;  // size slots()

  const RandomVariable& row(int u) const { return rows[u]; }
  // Pathwise evaluation at u = tau(omega).
  RandomVariable at_tau(const RandomTime& tau) const;
};

// Plain block averaging on the enlarged partition; the independent oracle for
// the formula-based conditional expectations below.
RandomVariable g_cond_expect_brute(const FilteredSpace& space, const EnlargedFiltration& g,
                                   const RandomVariable& x, int t);

// Conditional expectation E[U_{tau} | G_t] evaluated through the
// pseudo-honest formulas: before tau by Azema renormalization of the
// F_{.,term}-weighted payoff, after tau by the F_{t,term}-weighted formula
// evaluated pathwise at u = tau. Requires the field to satisfy HP; tau must
// be a realization of the field on this space.
RandomVariable g_cond_expect_pseudo_honest(const FilteredSpace& space, const CondDistField& field,
                                           const RandomTime& tau, const PayoffMap& payoff, int t);

// Same under the extended density hypothesis with kernel data (m, D).
struct EDData {
  // m[s] holds the martingale m_{s,t} for t = s..inf (index shifted by s).
  std::vector<std::vector<RandomVariable>> m;
  Process d;

  const RandomVariable& m_at(int s, int t) const { return m[s][t - s]; }
};

RandomVariable g_cond_expect_pseudo_initial(const FilteredSpace& space, const CondDistField& field,
                                            const EDData& ed, const RandomTime& tau,
                                            const PayoffMap& payoff, int t);

}  // namespace filtlab
