#include "filtlab/space.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace filtlab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ProbabilityNotNormalized: return "ProbabilityNotNormalized";
    case ErrorCode::PartitionNotRefining: return "PartitionNotRefining";
    case ErrorCode::ZeroProbabilityBlock: return "ZeroProbabilityBlock";
    case ErrorCode::TimeOutOfRange: return "TimeOutOfRange";
    case ErrorCode::NotEquivalent: return "NotEquivalent";
    case ErrorCode::NotAdapted: return "NotAdapted";
    case ErrorCode::NotPredictable: return "NotPredictable";
    case ErrorCode::NotFiniteVariation: return "NotFiniteVariation";
    case ErrorCode::NotIncreasing: return "NotIncreasing";
    case ErrorCode::FieldAxiomViolation: return "FieldAxiomViolation";
    case ErrorCode::HypothesisHPFails: return "HypothesisHPFails";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::EDVerificationFails: return "EDVerificationFails";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::RealizationMismatch: return "RealizationMismatch";
    case ErrorCode::NegativeMassIncrement: return "NegativeMassIncrement";
    case ErrorCode::SeparabilityPreconditionFails: return "SeparabilityPreconditionFails";
    case ErrorCode::PositivityFails: return "PositivityFails";
    case ErrorCode::FieldNotStrictlyPositive: return "FieldNotStrictlyPositive";
    case ErrorCode::NotHonest: return "NotHonest";
    case ErrorCode::NotMartingale: return "NotMartingale";
    case ErrorCode::InitialDecompositionInvalid: return "InitialDecompositionInvalid";
    case ErrorCode::DensityNotPositive: return "DensityNotPositive";
    case ErrorCode::NormalizationFails: return "NormalizationFails";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::UnknownCommand: return "UnknownCommand";
  }
  return "UnknownError";
}

// ---------------------------------------------------------------------------
// Partition

namespace {

Partition canonicalize(int n_atoms, const std::vector<int>& raw_block_of) {
  // Renumber blocks by order of first appearance, then rebuild block lists.
  std::vector<std::vector<int>> blocks;
  std::map<int, int> seen;
  for (int a = 0; a < n_atoms; ++a) {
    auto [it, fresh] = seen.emplace(raw_block_of[a], static_cast<int>(blocks.size()));
    if (fresh) blocks.emplace_back();
    blocks[it->second].push_back(a);
  }
  return Partition::from_blocks(n_atoms, blocks);
}

}  // namespace

Partition Partition::trivial(int n_atoms) {
  return from_blocks(n_atoms, {[&] {
                      std::vector<int> all(n_atoms);
                      for (int i = 0; i < n_atoms; ++i) all[i] = i;
                      return all;
                    }()});
}

Partition Partition::singletons(int n_atoms) {
  std::vector<std::vector<int>> blocks(n_atoms);
  for (int i = 0; i < n_atoms; ++i) blocks[i] = {i};
  return from_blocks(n_atoms, blocks);
}

Partition Partition::from_keys(const std::vector<long>& keys) {
  std::map<long, int> ids;
  std::vector<int> raw(keys.size());
  for (size_t a = 0; a < keys.size(); ++a) {
    auto [it, fresh] = ids.emplace(keys[a], static_cast<int>(ids.size()));
    raw[a] = it->second;
  }
  return canonicalize(static_cast<int>(keys.size()), raw);
}

Partition Partition::from_blocks(int n_atoms, const std::vector<std::vector<int>>& blocks) {
  std::vector<int> block_of(n_atoms, -1);
  std::vector<std::vector<int>> sorted_blocks = blocks;
  for (auto& b : sorted_blocks) std::sort(b.begin(), b.end());
  std::sort(sorted_blocks.begin(), sorted_blocks.end(),
            [](const auto& x, const auto& y) { return x.front() < y.front(); });
  for (size_t bi = 0; bi < sorted_blocks.size(); ++bi) {
    if (sorted_blocks[bi].empty())
      fail(ErrorCode::ValidationError, "empty partition block");
    for (int a : sorted_blocks[bi]) {
      if (a < 0 || a >= n_atoms)
        fail(ErrorCode::ValidationError, "partition refers to unknown atom index " + std::to_string(a));
      if (block_of[a] != -1)
        fail(ErrorCode::ValidationError, "atom " + std::to_string(a) + " appears in two partition blocks");
      block_of[a] = static_cast<int>(bi);
    }
  }
  for (int a = 0; a < n_atoms; ++a)
    if (block_of[a] == -1)
      fail(ErrorCode::ValidationError, "atom " + std::to_string(a) + " missing from partition");
  Partition p;
  p.block_of_ = std::move(block_of);
  p.blocks_ = std::move(sorted_blocks);
  return p;
}

bool Partition::refines(const Partition& coarser) const {
  if (n_atoms() != coarser.n_atoms()) return false;
  // Every block of *this must sit inside one block of `coarser`.
  for (const auto& b : blocks_) {
    const int target = coarser.block_of(b.front());
    for (int a : b)
      if (coarser.block_of(a) != target) return false;
  }
  return true;
}

Partition Partition::join(const Partition& a, const Partition& b) {
  std::vector<long> keys(a.n_atoms());
  for (int atom = 0; atom < a.n_atoms(); ++atom)
    keys[atom] = static_cast<long>(a.block_of(atom)) * (b.n_blocks() + 1) + b.block_of(atom);
  return from_keys(keys);
}

// ---------------------------------------------------------------------------
// Filtration

Filtration::Filtration(Timeline timeline, std::vector<Partition> parts)
    : timeline_(timeline), parts_(std::move(parts)) {
  if (static_cast<int>(parts_.size()) != timeline_.horizon + 1)
    fail(ErrorCode::ValidationError, "filtration needs horizon+1 partitions");
  for (int t = 0; t + 1 <= timeline_.horizon; ++t) {
    if (!parts_[t + 1].refines(parts_[t]))
      fail(ErrorCode::PartitionNotRefining,
           "partition at time " + std::to_string(t + 1) + " does not refine time " + std::to_string(t));
  }
}

bool Filtration::contains(const Filtration& coarser) const {
  if (timeline_.horizon != coarser.timeline_.horizon) return false;
  for (int t = 0; t <= timeline_.horizon; ++t)
    if (!parts_[t].refines(coarser.parts_[t])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// RandomVariable

bool RandomVariable::constant_on(const Partition& p) const {
  for (const auto& b : p.blocks()) {
    const Rational& v0 = values[b.front()];
    for (int a : b)
      if (values[a] != v0) return false;
  }
  return true;
}

RandomVariable operator+(const RandomVariable& a, const RandomVariable& b) {
  RandomVariable r = a;
  for (size_t i = 0; i < r.values.size(); ++i) r.values[i] += b.values[i];
  return r;
}

RandomVariable operator-(const RandomVariable& a, const RandomVariable& b) {
  RandomVariable r = a;
  for (size_t i = 0; i < r.values.size(); ++i) r.values[i] -= b.values[i];
  return r;
}

RandomVariable operator*(const RandomVariable& a, const RandomVariable& b) {
  RandomVariable r = a;
  for (size_t i = 0; i < r.values.size(); ++i) r.values[i] *= b.values[i];
  return r;
}

RandomVariable operator*(const Rational& c, const RandomVariable& a) {
  RandomVariable r = a;
  for (auto& v : r.values) v *= c;
  return r;
}

// ---------------------------------------------------------------------------
// FilteredSpace

int FilteredSpace::atom_index(std::string_view name) const {
  for (int i = 0; i < n_atoms(); ++i)
    if (atom_names_[i] == name) return i;
  return -1;
}

Rational FilteredSpace::block_mass(const std::vector<int>& atoms) const {
  Rational m;
  for (int a : atoms) m += prob_[a];
  return m;
}

std::string FilteredSpace::block_label(const std::vector<int>& atoms) const {
  std::ostringstream os;
  os << '{';
  for (size_t i = 0; i < atoms.size(); ++i) {
    if (i) os << ',';
    os << atom_names_[atoms[i]];
  }
  os << '}';
  return os.str();
}

FilteredSpace build_space(std::vector<std::string> atom_names,
                          std::vector<Rational> prob,
                          int horizon,
                          std::vector<Partition> partitions) {
  if (atom_names.empty()) fail(ErrorCode::ValidationError, "space needs at least one atom");
  if (prob.size() != atom_names.size())
    fail(ErrorCode::ValidationError, "probability vector and atom list differ in length");
  if (horizon < 0) fail(ErrorCode::TimeOutOfRange, "negative horizon");
  {
    std::vector<std::string> sorted = atom_names;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      fail(ErrorCode::ValidationError, "duplicate atom name");
  }
  Rational total;
  for (size_t i = 0; i < prob.size(); ++i) {
    // Zero-probability atoms are rejected outright so that null sets are
    // empty and every a.s. statement holds pointwise.
    if (!prob[i].is_positive())
      fail(ErrorCode::ZeroProbabilityBlock,
           "atom '" + atom_names[i] + "' has non-positive probability " + prob[i].str());
    total += prob[i];
  }
  if (total != Rational(1))
    fail(ErrorCode::ProbabilityNotNormalized, "probabilities sum to " + total.str());
  for (const auto& p : partitions)
    if (p.n_atoms() != static_cast<int>(atom_names.size()))
      fail(ErrorCode::ValidationError, "partition atom count mismatch");

  FilteredSpace s;
  s.timeline_ = Timeline{horizon};
  s.atom_names_ = std::move(atom_names);
  s.prob_ = std::move(prob);
  s.filtration_ = Filtration(s.timeline_, std::move(partitions));  // refinement checked here
  return s;
}

RandomVariable cond_expect_on(const FilteredSpace& space, const RandomVariable& x, const Partition& part) {
  if (x.n_atoms() != space.n_atoms())
    fail(ErrorCode::ShapeMismatch, "random variable has wrong atom count");
  RandomVariable out = RandomVariable::constant(space.n_atoms(), Rational());
  for (const auto& block : part.blocks()) {
    Rational mass, sum;
    for (int a : block) {
      mass += space.prob(a);
      sum += x[a] * space.prob(a);
    }
    const Rational avg = sum / mass;  // mass > 0 by space invariants
    for (int a : block) out[a] = avg;
  }
  return out;
}

RandomVariable cond_expect(const FilteredSpace& space, const RandomVariable& x, int slot) {
  if (!space.timeline().valid_slot(slot))
    fail(ErrorCode::TimeOutOfRange, "slot " + std::to_string(slot) + " outside 0.." +
                                        std::to_string(space.timeline().inf_slot()));
  return cond_expect_on(space, x, space.partition_at(slot));
}

Rational expectation(const FilteredSpace& space, const RandomVariable& x) {
  Rational sum;
  for (int a = 0; a < space.n_atoms(); ++a) sum += x[a] * space.prob(a);
  return sum;
}

std::optional<int> measurability_level(const FilteredSpace& space, const RandomVariable& x) {
  if (!x.constant_on(space.partition_at(space.horizon()))) return std::nullopt;
  // Partitions refine, so constancy is monotone in t; scan down.
  int level = space.horizon();
  for (int t = space.horizon() - 1; t >= 0; --t) {
    if (!x.constant_on(space.partition_at(t))) break;
    level = t;
  }
  return level;
}

FilteredSpace change_measure(const FilteredSpace& space, const Measure& z, bool require_equivalence) {
  if (static_cast<int>(z.density.size()) != space.n_atoms())
    fail(ErrorCode::ShapeMismatch, "density atom count mismatch");
  Rational total;
  for (int a = 0; a < space.n_atoms(); ++a) {
    if (z.density[a].is_negative())
      fail(ErrorCode::ValidationError, "negative density at atom '" + space.atom_name(a) + "'");
    if (require_equivalence && z.density[a].is_zero())
      fail(ErrorCode::NotEquivalent, "density vanishes at atom '" + space.atom_name(a) + "'");
    total += z.density[a] * space.prob(a);
  }
  if (total != Rational(1))
    fail(ErrorCode::NormalizationFails, "density integrates to " + total.str());
  std::vector<Rational> prob(space.n_atoms());
  for (int a = 0; a < space.n_atoms(); ++a) prob[a] = z.density[a] * space.prob(a);
  std::vector<Partition> parts;
  parts.reserve(space.horizon() + 1);
  for (int t = 0; t <= space.horizon(); ++t) parts.push_back(space.partition_at(t));
  return build_space(space.atom_names(), std::move(prob), space.horizon(), std::move(parts));
}

}  // namespace filtlab
