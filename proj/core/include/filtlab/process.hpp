#pragma once

#include <vector>

#include "filtlab/space.hpp"

namespace filtlab {

enum class ProcessKind { Raw, Adapted, Predictable, Increasing, FiniteVariation };

const char* to_string(ProcessKind kind);

// Time-indexed family of random variables over slots 0..T,inf. Increasing and
// finite-variation processes use the convention X_{0-} = 0, so the increment
// at slot 0 is X_0 itself.
struct Process {
  std::vector<RandomVariable> at;  // size timeline.slots()
  ProcessKind kind = ProcessKind::Raw;

  int slots() const { return static_cast<int>(at.size()); }
  const RandomVariable& operator[](int slot) const { return at[slot]; }
  RandomVariable& operator[](int slot) { return at[slot]; }

  // X_slot - X_{slot-1}; at slot 0 returns X_0 (the jump from X_{0-} = 0).
  RandomVariable delta(int slot) const;

  static Process zeros(const FilteredSpace& space, ProcessKind kind = ProcessKind::Adapted);
  static Process constant(const FilteredSpace& space, const Rational& c,
                          ProcessKind kind = ProcessKind::Adapted);

  friend bool operator==(const Process& a, const Process& b) { return a.at == b.at; }
};

Process operator+(const Process& a, const Process& b);
Process operator-(const Process& a, const Process& b);

// Shape/measurability checks. All are computed from values, never trusted
// from the kind tag.
bool is_adapted(const FilteredSpace& space, const Process& x, const Filtration& filt);
bool is_adapted(const FilteredSpace& space, const Process& x);
bool is_predictable(const FilteredSpace& space, const Process& x, const Filtration& filt);
bool is_predictable(const FilteredSpace& space, const Process& x);
bool is_increasing(const Process& x);

// Martingale check: E[X_u | sigma(u-1)] == X_{u-1} exactly for every step
// u = 1..inf, plus adaptedness. Throws NotAdapted when x is not adapted to
// the given filtration.
MartingaleVerdict is_martingale(const FilteredSpace& space, const Process& x, const Filtration& filt);
MartingaleVerdict is_martingale(const FilteredSpace& space, const Process& x);

// Martingale closed by its terminal value: X_t = E[X_inf | F_t].
Process martingale_from_terminal(const FilteredSpace& space, const RandomVariable& terminal);

// (X . Y)_t = sum_{0<u<=t} X_u (Y_u - Y_{u-1}). X must be predictable with
// respect to `check_filt` (defaults to the base filtration).
Process stochastic_integral(const FilteredSpace& space, const Process& x, const Process& y);
Process stochastic_integral(const FilteredSpace& space, const Process& x, const Process& y,
                            const Filtration& check_filt);

enum class DoobOrientation { Plus, Minus };  // X = M + A  /  X = M - A

struct Decomposition {
  Process martingale_part;
  Process fv_part;  // predictable, fv_part_0 = 0
  DoobOrientation orientation = DoobOrientation::Plus;
};

// Doob decomposition of an adapted process. Drift increments are
// E[dX_u | F_{u-1}]; for supermartingale input the result is reported in the
// X = M - A orientation with A increasing.
Decomposition doob_decomposition(const FilteredSpace& space, const Process& x);

// [U,V]_t = sum_{0<u<=t} dU_u dV_u.
Process square_bracket(const Process& u, const Process& v);
// <U,V>_t = sum_{0<u<=t} E[dU_u dV_u | F_{u-1}], predictable by construction.
Process angle_bracket(const FilteredSpace& space, const Process& u, const Process& v);

// Optional projection (oX)_t = E[X_t | F_t]; predictable projection
// (pX)_t = E[X_t | F_{t-1}] with (pX)_0 = E[X_0 | F_0]. Input may be raw.
Process optional_projection(const FilteredSpace& space, const Process& x);
Process predictable_projection(const FilteredSpace& space, const Process& x);

// Dual projections of a finite-variation process, increment by increment:
// d(A^o)_t = E[dA_t | F_t], d(A^p)_t = E[dA_t | F_{t-1}]. The slot-0 and
// inf increments are included; F_{0-} = F_0 and F_{inf-} = F_T.
Process dual_optional_projection(const FilteredSpace& space, const Process& a);
Process dual_predictable_projection(const FilteredSpace& space, const Process& a);

// Exhaustive check of the defining property  E[(X.A)_inf] = E[(X.A^d)_inf]
// over the basis of elementary predictable (resp. optional) integrands.
struct DualProjectionWitness {
  int slot = -1;
  std::string block;
  Rational lhs, rhs;
};
std::optional<DualProjectionWitness> verify_dual_projection(const FilteredSpace& space,
                                                            const Process& a,
                                                            const Process& dual,
                                                            bool predictable);

}  // namespace filtlab
