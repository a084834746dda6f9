#include "filtlab/construction.hpp"

namespace filtlab {

void MultiplicativeSystem::validate(const FilteredSpace& space) const {
  const int S = space.timeline().slots();
  const Rational one(1);
  if (static_cast<int>(c.size()) != S)
    fail(ErrorCode::ShapeMismatch, "system needs one row per s slot");
  for (int s = 0; s < S; ++s) {
    if (static_cast<int>(c[s].size()) != S - s)
      fail(ErrorCode::ShapeMismatch, "system row has wrong length");
    for (int a = 0; a < space.n_atoms(); ++a)
      if (at(s, s)[a] != one) fail(ErrorCode::ValidationError, "C_{s,s} != 1");
    for (int t = s; t < S; ++t) {
      const RandomVariable& v = at(s, t);
      const int meas_slot = (kind == SystemKind::Predictable && t > s) ? t - 1 : t;
      if (!v.constant_on(space.partition_at(meas_slot)))
        fail(ErrorCode::ValidationError,
             "C_{" + std::to_string(s) + "," + std::to_string(t) + "} fails " +
                 (kind == SystemKind::Predictable ? std::string("predictable")
                                                  : std::string("optional")) +
                 " measurability");
      for (int a = 0; a < space.n_atoms(); ++a) {
        if (v[a].is_negative() || v[a] > one)
          fail(ErrorCode::ValidationError, "C outside [0,1]");
        if (t > s && v[a] > at(s, t - 1)[a])
          fail(ErrorCode::ValidationError, "C increases in t");
      }
    }
    for (int u = s; u < S; ++u)
      for (int t = u; t < S; ++t)
        for (int a = 0; a < space.n_atoms(); ++a)
          if (at(s, u)[a] * at(u, t)[a] != at(s, t)[a])
            fail(ErrorCode::ValidationError,
                 "multiplicativity fails at (" + std::to_string(s) + "," + std::to_string(u) +
                     "," + std::to_string(t) + ")");
  }
}

void require_azema_submartingale(const FilteredSpace& space, const Process& f) {
  if (f.slots() != space.timeline().slots())
    fail(ErrorCode::ShapeMismatch, "submartingale has wrong slot count");
  if (!is_adapted(space, f)) fail(ErrorCode::NotAdapted, "submartingale not adapted");
  const Rational one(1);
  for (int s = 0; s < f.slots(); ++s)
    for (int a = 0; a < space.n_atoms(); ++a)
      if (f.at[s][a].is_negative() || f.at[s][a] > one)
        fail(ErrorCode::ValidationError, "submartingale leaves [0,1]");
  for (int a = 0; a < space.n_atoms(); ++a)
    if (f.at[f.slots() - 1][a] != one)
      fail(ErrorCode::ValidationError, "terminal value of the submartingale must be 1");
  for (int s = 1; s < f.slots(); ++s) {
    const RandomVariable drift = cond_expect(space, f.delta(s), s - 1);
    for (const auto& v : drift.values)
      if (v.is_negative()) fail(ErrorCode::ValidationError, "input is not a submartingale");
  }
}

namespace {

MultiplicativeSystem system_from_factors(const FilteredSpace& space,
                                         const std::vector<RandomVariable>& factor,
                                         SystemKind kind) {
  const int S = space.timeline().slots();
  MultiplicativeSystem sys;
  sys.kind = kind;
  sys.c.resize(S);
  for (int s = 0; s < S; ++s) {
    sys.c[s].reserve(S - s);
    sys.c[s].push_back(RandomVariable::constant(space.n_atoms(), Rational(1)));
    for (int t = s + 1; t < S; ++t) sys.c[s].push_back(sys.c[s].back() * factor[t]);
  }
  sys.validate(space);
  return sys;
}

}  // namespace

MultiplicativeSystem predictable_multiplicative_system(const FilteredSpace& space,
                                                       const Process& f) {
  require_azema_submartingale(space, f);
  const int S = space.timeline().slots();
  std::vector<RandomVariable> factor(S, RandomVariable::constant(space.n_atoms(), Rational(1)));
  for (int v = 1; v < S; ++v) {
    const RandomVariable pf = cond_expect(space, f.at[v], v - 1);
    const RandomVariable da = pf - f.at[v - 1];  // drift increment of the submartingale
    for (int a = 0; a < space.n_atoms(); ++a) {
      if (pf[a].is_zero()) {
        if (!da[a].is_zero())
          fail(ErrorCode::DegenerateDenominator,
               "pF vanishes with a live drift increment at slot " + std::to_string(v));
        factor[v][a] = Rational(1);  // frozen
      } else {
        factor[v][a] = (pf[a] - da[a]) / pf[a];  // = F_{v-1} / pF_v
      }
    }
  }
  return system_from_factors(space, factor, SystemKind::Predictable);
}

MultiplicativeSystem optional_multiplicative_system(const FilteredSpace& space, const Process& f,
                                                    const RandomTime& tau_hat) {
  require_azema_submartingale(space, f);
  const AzemaPair realized = azema(space, tau_hat);
  if (!(realized.f == f))
    fail(ErrorCode::RealizationMismatch, "tau_hat does not realize the given submartingale");
  const Process a_hat = dual_optional_projection(space, indicator_process(space, tau_hat));
  const int S = space.timeline().slots();
  std::vector<RandomVariable> factor(S, RandomVariable::constant(space.n_atoms(), Rational(1)));
  for (int v = 1; v < S; ++v) {
    const RandomVariable da = a_hat.delta(v);
    for (int a = 0; a < space.n_atoms(); ++a) {
      if (f.at[v][a].is_zero()) {
        // dAhat_v = E[dH_v | F_v] <= F_v, so a vanishing F_v freezes the factor.
        if (!da[a].is_zero())
          fail(ErrorCode::DegenerateDenominator, "F vanishes with a live optional increment");
        factor[v][a] = Rational(1);
      } else {
        factor[v][a] = (f.at[v][a] - da[a]) / f.at[v][a];
      }
    }
  }
  return system_from_factors(space, factor, SystemKind::Optional);
}

CondDistField field_from_system(const FilteredSpace& space, const Process& f,
                                const MultiplicativeSystem& system) {
  require_azema_submartingale(space, f);
  const int S = space.timeline().slots();
  std::vector<std::vector<RandomVariable>> table(
      S, std::vector<RandomVariable>(S, RandomVariable::constant(space.n_atoms(), Rational())));
  for (int u = 0; u < S; ++u) {
    for (int t = 0; t < S; ++t) {
      if (t < u)
        table[u][t] = cond_expect(space, f.at[u], t);
      else
        table[u][t] = system.at(u, t) * f.at[t];
    }
  }
  CondDistField field(space.timeline(), std::move(table));
  field.validate(space);  // FieldAxiomViolation on any defect
  return field;
}

// ---------------------------------------------------------------------------
// Canonical extension

RandomVariable ExtendedSpace::lift(const RandomVariable& x) const {
  RandomVariable out = RandomVariable::constant(space.n_atoms(), Rational());
  for (int a = 0; a < space.n_atoms(); ++a) out[a] = x[base_atom[a]];
  return out;
}

Process ExtendedSpace::lift(const Process& x) const {
  Process out = x;
  for (int s = 0; s < x.slots(); ++s) out.at[s] = lift(x.at[s]);
  return out;
}

CondDistField ExtendedSpace::lift(const CondDistField& f) const {
  const int S = space.timeline().slots();
  std::vector<std::vector<RandomVariable>> table(S, std::vector<RandomVariable>(S));
  for (int u = 0; u < S; ++u)
    for (int t = 0; t < S; ++t) table[u][t] = lift(f.at(u, t));
  return CondDistField(space.timeline(), std::move(table));
}

EDData ExtendedSpace::lift(const EDData& ed) const {
  EDData out;
  out.m.resize(ed.m.size());
  for (size_t s = 0; s < ed.m.size(); ++s) {
    out.m[s].reserve(ed.m[s].size());
    for (const auto& rv : ed.m[s]) out.m[s].push_back(lift(rv));
  }
  out.d = lift(ed.d);
  return out;
}

ExtendedSpace canonical_extension(const FilteredSpace& space, const CondDistField& field) {
  field.validate(space);
  const int S = space.timeline().slots();
  const int term = S - 1;

  ExtendedSpace ext;
  std::vector<std::string> names;
  std::vector<Rational> prob;
  for (int a = 0; a < space.n_atoms(); ++a) {
    for (int u = 0; u < S; ++u) {
      const Rational mass = field.mass(u, term)[a];
      if (mass.is_negative())
        fail(ErrorCode::NegativeMassIncrement, "field decreases in u at the terminal slot");
      if (mass.is_zero()) continue;
      names.push_back(space.atom_name(a) + "@" + space.timeline().label(u));
      prob.push_back(mass * space.prob(a));
      ext.base_atom.push_back(a);
      ext.mark.push_back(u);
    }
  }
  const int n = static_cast<int>(names.size());
  std::vector<Partition> parts;
  parts.reserve(space.horizon() + 1);
  for (int t = 0; t <= space.horizon(); ++t) {
    std::vector<long> keys(n);
    for (int e = 0; e < n; ++e) keys[e] = space.partition_at(t).block_of(ext.base_atom[e]);
    parts.push_back(Partition::from_keys(keys));
  }
  ext.space = build_space(std::move(names), std::move(prob), space.horizon(), std::move(parts));
  ext.tau.value = ext.mark;

  // The construction must reproduce the prescribed conditional distribution
  // exactly; anything else is a defect worth failing loudly on.
  const CondDistField realized = conditional_distribution(ext.space, ext.tau);
  for (int u = 0; u < S; ++u)
    for (int t = 0; t < S; ++t)
      for (int e = 0; e < n; ++e)
        if (realized.at(u, t)[e] != field.at(u, t)[ext.base_atom[e]])
          fail(ErrorCode::RealizationMismatch,
               "extension fails to reproduce the field at (u,t)=(" + space.timeline().label(u) +
                   "," + space.timeline().label(t) + ")");
  return ext;
}

}  // namespace filtlab
