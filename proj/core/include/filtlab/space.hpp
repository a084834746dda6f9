#pragma once

#include <optional>
#include <string>
#include <vector>

#include "filtlab/error.hpp"
#include "filtlab/rational.hpp"

namespace filtlab {

// Time is a row of slots 0, 1, ..., T, T+1 where the last slot is the formal
// terminal time "infinity". Consecutive integers make the discrete dictionary
// mechanical: the left limit of slot s is slot s-1, and inf-1 == T encodes
// F_{inf-} = F_T. Sigma-fields are frozen from T on, so partition lookups
// clamp at T.
struct Timeline {
  int horizon = 0;  // T

  int slots() const { return horizon + 2; }
  int inf_slot() const { return horizon + 1; }
  bool is_inf(int slot) const { return slot == inf_slot(); }
  bool valid_slot(int slot) const { return slot >= 0 && slot < slots(); }
  // Slot whose partition carries the sigma-field at `slot`.
  int sigma_slot(int slot) const { return slot > horizon ? horizon : slot; }
  std::string label(int slot) const { return is_inf(slot) ? "inf" : std::to_string(slot); }
};

// Partition of the atom set, canonical form: blocks sorted by their smallest
// atom index, atoms sorted inside each block.
class Partition {
 public:
  Partition() = default;
  static Partition trivial(int n_atoms);
  static Partition singletons(int n_atoms);
  // Builds the canonical partition grouping atoms with equal keys.
  static Partition from_keys(const std::vector<long>& keys);
  // From explicit blocks (atom indices); validates the blocks cover 0..n-1
  // exactly once.
  static Partition from_blocks(int n_atoms, const std::vector<std::vector<int>>& blocks);

  int n_atoms() const { return static_cast<int>(block_of_.size()); }
  int n_blocks() const { return static_cast<int>(blocks_.size()); }
  int block_of(int atom) const { return block_of_[atom]; }
  const std::vector<int>& block(int b) const { return blocks_[b]; }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }

  bool refines(const Partition& coarser) const;
  bool same_cell(int a, int b) const { return block_of_[a] == block_of_[b]; }
  friend bool operator==(const Partition& a, const Partition& b) { return a.block_of_ == b.block_of_ && a.blocks_ == b.blocks_; }

  // Coarsest common refinement.
  static Partition join(const Partition& a, const Partition& b);

 private:
  std::vector<int> block_of_;
  std::vector<std::vector<int>> blocks_;
};

// Refining chain of partitions indexed by slots 0..T (terminal convention:
// slots beyond T reuse the partition at T).
class Filtration {
 public:
  Filtration() = default;
  Filtration(Timeline timeline, std::vector<Partition> parts);

  const Timeline& timeline() const { return timeline_; }
  const Partition& at(int slot) const { return parts_[timeline_.sigma_slot(slot)]; }
  bool contains(const Filtration& coarser) const;

 private:
  Timeline timeline_;
  std::vector<Partition> parts_;  // size T+1
};

// A random variable is an exact value per atom. Measurability is computed
// against a partition, never declared.
struct RandomVariable {
  std::vector<Rational> values;

  static RandomVariable constant(int n_atoms, const Rational& c) {
    return RandomVariable{std::vector<Rational>(static_cast<size_t>(n_atoms), c)};
  }
  int n_atoms() const { return static_cast<int>(values.size()); }
  const Rational& operator[](int atom) const { return values[atom]; }
  Rational& operator[](int atom) { return values[atom]; }

  bool constant_on(const Partition& p) const;

  friend bool operator==(const RandomVariable& a, const RandomVariable& b) { return a.values == b.values; }
};

RandomVariable operator+(const RandomVariable& a, const RandomVariable& b);
RandomVariable operator-(const RandomVariable& a, const RandomVariable& b);
RandomVariable operator*(const RandomVariable& a, const RandomVariable& b);
RandomVariable operator*(const Rational& c, const RandomVariable& a);

// Radon-Nikodym density with respect to the base measure of a space.
struct Measure {
  std::vector<Rational> density;

  bool equivalent() const {
    for (const auto& d : density)
      if (!d.is_positive()) return false;
    return true;
  }
};

// Finite filtered probability space with exact rational probabilities.
// Invariants enforced at construction: probabilities are positive and sum to
// one, the partition chain refines, and no block has zero mass (automatic
// once every atom has positive probability).
class FilteredSpace {
 public:
  FilteredSpace() = default;

  const Timeline& timeline() const { return timeline_; }
  int horizon() const { return timeline_.horizon; }
  int n_atoms() const { return static_cast<int>(atom_names_.size()); }
  const std::vector<std::string>& atom_names() const { return atom_names_; }
  const std::string& atom_name(int atom) const { return atom_names_[atom]; }
  int atom_index(std::string_view name) const;  // -1 when absent
  const Rational& prob(int atom) const { return prob_[atom]; }
  const std::vector<Rational>& probs() const { return prob_; }
  const Filtration& filtration() const { return filtration_; }
  const Partition& partition_at(int slot) const { return filtration_.at(slot); }

  Rational block_mass(const std::vector<int>& atoms) const;
  std::string block_label(const std::vector<int>& atoms) const;

  friend FilteredSpace build_space(std::vector<std::string> atom_names,
                                   std::vector<Rational> prob,
                                   int horizon,
                                   std::vector<Partition> partitions);

 private:
  Timeline timeline_;
  std::vector<std::string> atom_names_;
  std::vector<Rational> prob_;
  Filtration filtration_;
};

FilteredSpace build_space(std::vector<std::string> atom_names,
                          std::vector<Rational> prob,
                          int horizon,
                          std::vector<Partition> partitions);

// E[X | F_slot], exact block averaging under the space's base measure.
RandomVariable cond_expect(const FilteredSpace& space, const RandomVariable& x, int slot);
// Same, but against an arbitrary partition of the space's atoms (used for
// enlarged filtrations and measure changes).
RandomVariable cond_expect_on(const FilteredSpace& space, const RandomVariable& x, const Partition& part);

Rational expectation(const FilteredSpace& space, const RandomVariable& x);

// Smallest slot whose partition makes x measurable; nullopt when x is not
// even constant on the terminal partition.
std::optional<int> measurability_level(const FilteredSpace& space, const RandomVariable& x);

// New space on the same atoms/filtration with prob' = density * prob.
// With require_equivalence, a vanishing density is a NotEquivalent error;
// otherwise zero-mass atoms are rejected by the space invariants anyway.
FilteredSpace change_measure(const FilteredSpace& space, const Measure& z, bool require_equivalence = true);

struct MartingaleWitness {
  int slot = -1;          // step being checked: E[X_slot | sigma(slot-1)] vs X_{slot-1}
  std::string block;      // offending block of the conditioning partition
  Rational lhs;           // conditional expectation of X_slot on the block
  Rational rhs;           // X_{slot-1} on the block
};

struct MartingaleVerdict {
  bool pass = false;
  std::optional<MartingaleWitness> witness;

  explicit operator bool() const { return pass; }
};

}  // namespace filtlab
