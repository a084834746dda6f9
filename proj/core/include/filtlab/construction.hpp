#pragma once

#include "filtlab/random_time.hpp"

namespace filtlab {

enum class SystemKind { Predictable, Optional };

// Multiplicative system associated with an Azema submartingale F:
// C_{s,s} = 1, C in [0,1], nonincreasing and multiplicative in t, with
// C_{s,t} measurable at t-1 (predictable kind) or t (optional kind).
struct MultiplicativeSystem {
  SystemKind kind = SystemKind::Predictable;
  // c[s][t-s] = C_{s,t} for t = s..inf.
  std::vector<std::vector<RandomVariable>> c;

  const RandomVariable& at(int s, int t) const { return c[s][t - s]; }

  // Checks C_{s,s}=1, range, monotonicity, multiplicativity and the kind's
  // measurability; throws ValidationError with the offending triple.
  void validate(const FilteredSpace& space) const;
};

// Validates 0 <= F <= 1, adapted, F_inf = 1. Used as the entry guard of the
// construction operations.
void require_azema_submartingale(const FilteredSpace& space, const Process& f);

// C_{s,t} = prod_{v=s+1..t} (1 - dA_v / pF_v) where A is the drift of F and
// pF its predictable projection. Blocks with pF_v = 0 have dA_v = 0 and the
// factor freezes at 1.
MultiplicativeSystem predictable_multiplicative_system(const FilteredSpace& space,
                                                       const Process& f);

// C_{s,t} = prod_{v=s+1..t} (1 - dAhat_v / F_v) with Ahat the dual optional
// projection of the indicator of tau_hat. tau_hat must realize F exactly.
MultiplicativeSystem optional_multiplicative_system(const FilteredSpace& space, const Process& f,
                                                    const RandomTime& tau_hat);

// Field F_{u,t} = E[F_u | F_t] for t < u, C_{u,t} F_t for t >= u. The result
// is validated before it is returned.
CondDistField field_from_system(const FilteredSpace& space, const Process& f,
                                const MultiplicativeSystem& system);

// Extension carrying a random time that realizes a prescribed conditional
// distribution: atoms are (base atom, mark u) pairs with mass
// prob(omega) * dF_{u,term}(omega); zero-mass pairs are dropped. The base
// filtration embeds blockwise.
struct ExtendedSpace {
  FilteredSpace space;
  RandomTime tau;
  std::vector<int> base_atom;  // extension atom -> base atom
  std::vector<int> mark;       // extension atom -> mark slot

  // Lifts a base-space random variable through the embedding.
  RandomVariable lift(const RandomVariable& x) const;
  Process lift(const Process& x) const;
  CondDistField lift(const CondDistField& f) const;
  EDData lift(const EDData& ed) const;
};

ExtendedSpace canonical_extension(const FilteredSpace& space, const CondDistField& field);

}  // namespace filtlab
