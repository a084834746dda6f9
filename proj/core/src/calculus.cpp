#include "filtlab/process.hpp"

namespace filtlab {

const char* to_string(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::Raw: return "raw";
    case ProcessKind::Adapted: return "adapted";
    case ProcessKind::Predictable: return "predictable";
    case ProcessKind::Increasing: return "increasing";
    case ProcessKind::FiniteVariation: return "finite-variation";
  }
  return "raw";
}

RandomVariable Process::delta(int slot) const {
  if (slot == 0) return at[0];
  return at[slot] - at[slot - 1];
}

Process Process::zeros(const FilteredSpace& space, ProcessKind kind) {
  Process p;
  p.kind = kind;
  p.at.assign(space.timeline().slots(), RandomVariable::constant(space.n_atoms(), Rational()));
  return p;
}

Process Process::constant(const FilteredSpace& space, const Rational& c, ProcessKind kind) {
  Process p;
  p.kind = kind;
  p.at.assign(space.timeline().slots(), RandomVariable::constant(space.n_atoms(), c));
  return p;
}

Process operator+(const Process& a, const Process& b) {
  Process r = a;
  for (int s = 0; s < r.slots(); ++s) r.at[s] = r.at[s] + b.at[s];
  return r;
}

Process operator-(const Process& a, const Process& b) {
  Process r = a;
  for (int s = 0; s < r.slots(); ++s) r.at[s] = r.at[s] - b.at[s];
  return r;
}

bool is_adapted(const FilteredSpace& space, const Process& x, const Filtration& filt) {
  if (x.slots() != space.timeline().slots()) return false;
  for (int s = 0; s < x.slots(); ++s)
    if (!x.at[s].constant_on(filt.at(s))) return false;
  return true;
}

bool is_adapted(const FilteredSpace& space, const Process& x) {
  return is_adapted(space, x, space.filtration());
}

bool is_predictable(const FilteredSpace& space, const Process& x, const Filtration& filt) {
  if (x.slots() != space.timeline().slots()) return false;
  if (!x.at[0].constant_on(filt.at(0))) return false;
  for (int s = 1; s < x.slots(); ++s)
    if (!x.at[s].constant_on(filt.at(s - 1))) return false;
  return true;
}

bool is_predictable(const FilteredSpace& space, const Process& x) {
  return is_predictable(space, x, space.filtration());
}

bool is_increasing(const Process& x) {
  // X_{0-} = 0, so the slot-0 value must already be nonnegative.
  for (const auto& v : x.at[0].values)
    if (v.is_negative()) return false;
  for (int s = 1; s < x.slots(); ++s)
    for (int a = 0; a < x.at[s].n_atoms(); ++a)
      if (x.at[s][a] < x.at[s - 1][a]) return false;
  return true;
}

MartingaleVerdict is_martingale(const FilteredSpace& space, const Process& x, const Filtration& filt) {
  if (!is_adapted(space, x, filt))
    fail(ErrorCode::NotAdapted, "process is not adapted to the given filtration");
  for (int s = 1; s < x.slots(); ++s) {
    const Partition& cond = filt.at(s - 1);
    for (const auto& block : cond.blocks()) {
      Rational mass, sum;
      for (int a : block) {
        mass += space.prob(a);
        sum += x.at[s][a] * space.prob(a);
      }
      const Rational lhs = sum / mass;
      const Rational rhs = x.at[s - 1][block.front()];
      if (lhs != rhs) {
        MartingaleVerdict v;
        v.pass = false;
        v.witness = MartingaleWitness{s, space.block_label(block), lhs, rhs};
        return v;
      }
    }
  }
  return MartingaleVerdict{true, std::nullopt};
}

MartingaleVerdict is_martingale(const FilteredSpace& space, const Process& x) {
  return is_martingale(space, x, space.filtration());
}

Process martingale_from_terminal(const FilteredSpace& space, const RandomVariable& terminal) {
  Process p = Process::zeros(space, ProcessKind::Adapted);
  for (int s = 0; s < p.slots(); ++s) p.at[s] = cond_expect(space, terminal, s);
  return p;
}

Process stochastic_integral(const FilteredSpace& space, const Process& x, const Process& y,
                            const Filtration& check_filt) {
  if (!is_predictable(space, x, check_filt))
    fail(ErrorCode::NotPredictable, "integrand is not predictable");
  Process out = Process::zeros(space, ProcessKind::Adapted);
  RandomVariable acc = RandomVariable::constant(space.n_atoms(), Rational());
  out.at[0] = acc;  // integral over (0,0] is empty
  for (int s = 1; s < out.slots(); ++s) {
    acc = acc + x.at[s] * y.delta(s);
    out.at[s] = acc;
  }
  return out;
}

Process stochastic_integral(const FilteredSpace& space, const Process& x, const Process& y) {
  return stochastic_integral(space, x, y, space.filtration());
}

Decomposition doob_decomposition(const FilteredSpace& space, const Process& x) {
  if (!is_adapted(space, x))
    fail(ErrorCode::NotAdapted, "doob decomposition needs an adapted process");
  Process drift = Process::zeros(space, ProcessKind::Predictable);
  RandomVariable acc = RandomVariable::constant(space.n_atoms(), Rational());
  bool any_positive = false, any_negative = false;
  for (int s = 1; s < x.slots(); ++s) {
    const RandomVariable inc = cond_expect(space, x.delta(s), s - 1);
    for (const auto& v : inc.values) {
      if (v.is_positive()) any_positive = true;
      if (v.is_negative()) any_negative = true;
    }
    acc = acc + inc;
    drift.at[s] = acc;
  }
  Decomposition d;
  // Supermartingale input is reported as X = M - A with A increasing.
  const bool supermartingale = any_negative && !any_positive;
  d.orientation = supermartingale ? DoobOrientation::Minus : DoobOrientation::Plus;
  if (supermartingale) {
    Process neg = Process::zeros(space, ProcessKind::Increasing);
    for (int s = 0; s < drift.slots(); ++s) neg.at[s] = Rational(-1) * drift.at[s];
    d.fv_part = std::move(neg);
    d.martingale_part = x + d.fv_part;
  } else {
    drift.kind = any_negative ? ProcessKind::FiniteVariation : ProcessKind::Increasing;
    d.fv_part = std::move(drift);
    d.martingale_part = x - d.fv_part;
  }
  return d;
}

Process square_bracket(const Process& u, const Process& v) {
  Process out;
  out.kind = ProcessKind::FiniteVariation;
  out.at.resize(u.slots());
  const int n = u.at[0].n_atoms();
  RandomVariable acc = RandomVariable::constant(n, Rational());
  out.at[0] = acc;
  for (int s = 1; s < u.slots(); ++s) {
    acc = acc + u.delta(s) * v.delta(s);
    out.at[s] = acc;
  }
  return out;
}

Process angle_bracket(const FilteredSpace& space, const Process& u, const Process& v) {
  if (!is_adapted(space, u) || !is_adapted(space, v))
    fail(ErrorCode::NotAdapted, "angle bracket needs adapted arguments");
  Process out = Process::zeros(space, ProcessKind::Predictable);
  RandomVariable acc = RandomVariable::constant(space.n_atoms(), Rational());
  out.at[0] = acc;
  for (int s = 1; s < u.slots(); ++s) {
    acc = acc + cond_expect(space, u.delta(s) * v.delta(s), s - 1);
    out.at[s] = acc;
  }
  return out;
}

Process optional_projection(const FilteredSpace& space, const Process& x) {
  Process out = Process::zeros(space, ProcessKind::Adapted);
  for (int s = 0; s < x.slots(); ++s) out.at[s] = cond_expect(space, x.at[s], s);
  return out;
}

Process predictable_projection(const FilteredSpace& space, const Process& x) {
  Process out = Process::zeros(space, ProcessKind::Predictable);
  out.at[0] = cond_expect(space, x.at[0], 0);
  for (int s = 1; s < x.slots(); ++s) out.at[s] = cond_expect(space, x.at[s], s - 1);
  return out;
}

namespace {

Process dual_projection_impl(const FilteredSpace& space, const Process& a, bool predictable) {
  Process out = Process::zeros(space, ProcessKind::FiniteVariation);
  RandomVariable acc = RandomVariable::constant(space.n_atoms(), Rational());
  for (int s = 0; s < a.slots(); ++s) {
    // Slot 0 carries the jump from A_{0-} = 0 and projects onto F_0 either way.
    const int cond_slot = (predictable && s > 0) ? s - 1 : s;
    acc = acc + cond_expect(space, a.delta(s), cond_slot);
    out.at[s] = acc;
  }
  out.kind = is_increasing(a) ? ProcessKind::Increasing : ProcessKind::FiniteVariation;
  return out;
}

}  // namespace

Process dual_optional_projection(const FilteredSpace& space, const Process& a) {
  return dual_projection_impl(space, a, false);
}

Process dual_predictable_projection(const FilteredSpace& space, const Process& a) {
  return dual_projection_impl(space, a, true);
}

std::optional<DualProjectionWitness> verify_dual_projection(const FilteredSpace& space,
                                                            const Process& a,
                                                            const Process& dual,
                                                            bool predictable) {
  // Elementary integrands X = 1_{u=s} 1_B with B a block of the conditioning
  // sigma-field span all predictable (resp. optional) integrands, so checking
  // E[X dA_s] = E[X d(dual A)_s] on this basis settles the defining property.
  for (int s = 0; s < a.slots(); ++s) {
    const int cond_slot = (predictable && s > 0) ? s - 1 : s;
    const RandomVariable da = a.delta(s);
    const RandomVariable dd = dual.delta(s);
    for (const auto& block : space.partition_at(cond_slot).blocks()) {
      Rational lhs, rhs;
      for (int atom : block) {
        lhs += da[atom] * space.prob(atom);
        rhs += dd[atom] * space.prob(atom);
      }
      if (lhs != rhs)
        return DualProjectionWitness{s, space.block_label(block), lhs, rhs};
    }
  }
  return std::nullopt;
}

}  // namespace filtlab
