#pragma once

#include <cstdint>
#include <random>

#include "filtlab/construction.hpp"
#include "filtlab/hypotheses.hpp"

namespace filtlab::gen {

// All generators are deterministic functions of the engine state; fixtures
// are reproducible from a single seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  int int_in(int lo, int hi) {  // inclusive
    return std::uniform_int_distribution<int>(lo, hi)(eng_);
  }
  bool chance(int num, int den) { return int_in(1, den) <= num; }
  // Small exact rational in [lo, hi] with denominator from a short list.
  Rational rat_in(int lo, int hi);

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

struct SpaceOptions {
  int min_atoms = 3;
  int max_atoms = 8;
  int min_horizon = 2;
  int max_horizon = 4;
  bool allow_nontrivial_f0 = true;
  bool allow_coarse_terminal = true;
};

FilteredSpace space(Rng& rng, const SpaceOptions& opts = {});

// Random time with optional mass at 0 and at infinity.
RandomTime random_time(Rng& rng, const FilteredSpace& space, bool allow_zero = true,
                       bool allow_inf = true);

// Honest time: last visit of a random adapted 0/1 process, 0 when there is
// no visit.
RandomTime honest_time(Rng& rng, const FilteredSpace& space);

// Martingale closed by a random terminal value with entries in [-2, 2].
Process martingale(Rng& rng, const FilteredSpace& space);
// Bounded martingale with N_0 = 0 blockwise.
Process martingale_null_at_zero(Rng& rng, const FilteredSpace& space);

// Azema submartingale with terminal value 1. With strictly_inside, the path
// stays in (0,1) on every finite slot (the regime of the predictable
// multiplicative construction).
Process azema_submartingale(Rng& rng, const FilteredSpace& space, bool strictly_inside);

Measure equivalent_measure(Rng& rng, const FilteredSpace& space);

PayoffMap payoff(Rng& rng, const FilteredSpace& space);

// A realized scenario: a space carrying a random time together with the
// structural data it was built from.
struct Fixture {
  FilteredSpace space;
  RandomTime tau;
  CondDistField field;

  std::optional<Process> f;           // prescribed Azema submartingale
  std::optional<EDData> ed;           // kernel data, when built from one
  std::optional<Factorization> kl;    // complete separability factors
  std::optional<RandomTime> tau_hat;  // auxiliary time of the optional construction
};

// Generic space + random time.
Fixture generic_fixture(Rng& rng);
// Space + honest time.
Fixture honest_fixture(Rng& rng);
// Pseudo-honest time realized through the predictable multiplicative system
// of a strictly inside submartingale; the field is strictly positive for all
// u and tau is realized on the canonical extension.
Fixture pred_mult_fixture(Rng& rng);
// Pseudo-honest time from an optional multiplicative system; tau_hat is the
// predictable-construction realization of the same submartingale.
Fixture opt_mult_fixture(Rng& rng);
// Completely separable field F_{u,t} = K_u L_t, F_0 = 0 optional; G stays
// positive on every finite slot so the immersion measure-change applies.
Fixture separable_fixture(Rng& rng, bool f0_zero);
// Extended-density fixture with a multiplicative-hazard kernel.
Fixture ed_fixture(Rng& rng);
// Product-type time independent of the base information (hypothesis (H)).
Fixture independent_fixture(Rng& rng);

}  // namespace filtlab::gen
