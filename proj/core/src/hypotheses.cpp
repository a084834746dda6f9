#include "filtlab/hypotheses.hpp"

namespace filtlab {

const char* to_string(TriVerdict v) {
  switch (v) {
    case TriVerdict::Pass: return "PASS";
    case TriVerdict::Fail: return "FAIL";
    case TriVerdict::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

std::optional<TripleWitness> check_h(const FilteredSpace& space, const CondDistField& field) {
  const int S = space.timeline().slots();
  for (int u = 0; u < S; ++u)
    for (int s = u; s < S; ++s)
      for (int t = s + 1; t < S; ++t)
        for (int a = 0; a < space.n_atoms(); ++a)
          if (field.at(u, s)[a] != field.at(u, t)[a])
            return TripleWitness{u, s, t, a, field.at(u, s)[a], field.at(u, t)[a]};
  return std::nullopt;
}

std::optional<TripleWitness> check_hp(const FilteredSpace& space, const CondDistField& field) {
  const int S = space.timeline().slots();
  for (int u = 0; u < S; ++u) {
    for (int s = u + 1; s < S; ++s) {
      for (int t = s + 1; t < S; ++t) {
        for (int a = 0; a < space.n_atoms(); ++a) {
          const Rational lhs = field.at(u, s)[a] * field.at(s, t)[a];
          const Rational rhs = field.at(s, s)[a] * field.at(u, t)[a];
          if (lhs != rhs) return TripleWitness{u, s, t, a, lhs, rhs};
        }
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Separability search

namespace {

struct LBuild {
  bool ok = true;
  bool had_free_choice = false;
  Process l;
  std::optional<TripleWitness> witness;
  std::string note;
};

// Recovers the martingale factor by chaining the forced step ratios
// L_t/L_{t-1} = F_{u,t}/F_{u,t-1} (valid whenever F_{u,t-1} > 0 on the atom).
// Atoms with no forced ratio get a free value chosen to preserve the
// martingale balance; if no positive balance exists the search is
// inconclusive.
LBuild build_l_candidate(const FilteredSpace& space, const CondDistField& field, int anchor_u) {
  LBuild out;
  const int S = space.timeline().slots();
  out.l = Process::zeros(space, ProcessKind::Adapted);
  out.l.at[0] = RandomVariable::constant(space.n_atoms(), Rational(1));

  for (int t = 1; t < S; ++t) {
    std::vector<Rational> ratio(space.n_atoms());
    std::vector<bool> forced(space.n_atoms(), false);
    for (int a = 0; a < space.n_atoms(); ++a) {
      bool have = false;
      Rational r;
      for (int u = anchor_u; u <= t - 1; ++u) {
        const Rational& prev = field.at(u, t - 1)[a];
        if (prev.is_zero()) continue;
        const Rational cand = field.at(u, t)[a] / prev;
        if (!have) {
          r = cand;
          have = true;
        } else if (cand != r) {
          out.ok = false;
          out.witness = TripleWitness{u, t - 1, t, a, cand, r};
          out.note = "inconsistent step ratios";
          return out;
        }
      }
      forced[a] = have;
      if (have) ratio[a] = r;
    }
    // Fill free atoms blockwise against the martingale balance.
    for (const auto& block : space.partition_at(t - 1).blocks()) {
      Rational forced_mass, forced_sum, free_mass;
      for (int a : block) {
        if (forced[a]) {
          forced_mass += space.prob(a);
          forced_sum += out.l.at[t - 1][a] * ratio[a] * space.prob(a);
        } else {
          free_mass += space.prob(a);
        }
      }
      if (free_mass.is_zero()) continue;
      out.had_free_choice = true;
      Rational target;
      for (int a : block) target += out.l.at[t - 1][a] * space.prob(a);
      const Rational balance = target - forced_sum;
      if (!balance.is_positive()) {
        out.ok = false;
        out.note = "no positive martingale extension on a degenerate block";
        return out;
      }
      const Rational fill = balance / free_mass;
      for (int a : block)
        if (!forced[a]) {
          forced[a] = true;
          ratio[a] = fill / out.l.at[t - 1][a];
        }
    }
    for (int a = 0; a < space.n_atoms(); ++a) out.l.at[t][a] = out.l.at[t - 1][a] * ratio[a];
    if (!out.l.at[t].constant_on(space.partition_at(t))) {
      out.ok = false;
      out.note = "recovered martingale factor is not adapted";
      return out;
    }
  }
  return out;
}

SeparabilityResult separability_search(const FilteredSpace& space, const CondDistField& field,
                                       int v) {
  SeparabilityResult res;
  const int S = space.timeline().slots();
  LBuild built = build_l_candidate(space, field, v);
  if (!built.ok) {
    // Step ratios are forced by the field wherever two live rows coexist, so
    // a ratio contradiction rules out every factorization; a dead balance
    // only means this search path failed.
    res.verdict = built.witness ? TriVerdict::Fail : TriVerdict::Unknown;
    res.witness = built.witness;
    res.note = built.note;
    return res;
  }

  Factorization fac;
  fac.l = built.l;
  for (int t = 0; t < S; ++t)
    for (int a = 0; a < space.n_atoms(); ++a)
      if (!fac.l.at[t][a].is_positive()) {
        res.verdict = TriVerdict::Unknown;
        res.note = "martingale factor not strictly positive";
        return res;
      }
  fac.k = Process::zeros(space, ProcessKind::Increasing);
  for (int u = v; u < S; ++u)
    for (int a = 0; a < space.n_atoms(); ++a)
      fac.k.at[u][a] = field.at(u, u)[a] / fac.l.at[u][a];

  // Verify the product, adaptedness and monotonicity exactly.
  for (int u = v; u < S; ++u) {
    if (!fac.k.at[u].constant_on(space.partition_at(u))) {
      res.verdict = built.had_free_choice ? TriVerdict::Unknown : TriVerdict::Fail;
      res.note = "increasing factor not adapted";
      return res;
    }
    for (int a = 0; a < space.n_atoms(); ++a) {
      if (fac.k.at[u][a].is_negative() ||
          (u > v && fac.k.at[u][a] < fac.k.at[u - 1][a])) {
        res.verdict = built.had_free_choice ? TriVerdict::Unknown : TriVerdict::Fail;
        res.note = "increasing factor fails monotonicity";
        return res;
      }
    }
    for (int t = u; t < S; ++t) {
      for (int a = 0; a < space.n_atoms(); ++a) {
        const Rational prod = fac.k.at[u][a] * fac.l.at[t][a];
        if (prod != field.at(u, t)[a]) {
          res.verdict = built.had_free_choice ? TriVerdict::Unknown : TriVerdict::Fail;
          res.witness = TripleWitness{u, t, t, a, prod, field.at(u, t)[a]};
          res.note = "factorization product mismatch";
          return res;
        }
      }
    }
  }
  res.verdict = TriVerdict::Pass;
  res.factors = std::move(fac);
  return res;
}

}  // namespace

SeparabilityResult check_complete_separability(const FilteredSpace& space,
                                               const CondDistField& field) {
  return separability_search(space, field, 0);
}

SeparabilityResult check_separable_at(const FilteredSpace& space, const CondDistField& field,
                                      int v) {
  if (v < 0 || v >= space.timeline().slots())
    fail(ErrorCode::TimeOutOfRange, "separability anchor out of range");
  return separability_search(space, field, v);
}

// ---------------------------------------------------------------------------
// Extended density hypothesis

std::optional<EDWitness> verify_ed_intrinsic(const FilteredSpace& space, const EDData& ed) {
  const int S = space.timeline().slots();
  if (static_cast<int>(ed.m.size()) != S) return EDWitness{"kernel needs one row per s slot"};
  for (int s = 0; s < S; ++s)
    if (static_cast<int>(ed.m[s].size()) != S - s)
      return EDWitness{"kernel row s=" + std::to_string(s) + " has wrong length"};
  if (ed.d.slots() != S) return EDWitness{"D has wrong slot count"};
  if (!is_adapted(space, ed.d)) return EDWitness{"D is not adapted"};
  if (!is_increasing(ed.d)) return EDWitness{"D is not increasing from D_{0-} = 0"};

  for (int s = 0; s < S; ++s) {
    for (int t = s; t < S; ++t) {
      const RandomVariable& m = ed.m_at(s, t);
      if (!m.constant_on(space.partition_at(t)))
        return EDWitness{"m_{" + std::to_string(s) + "," + std::to_string(t) + "} not adapted"};
      for (int a = 0; a < space.n_atoms(); ++a)
        if (m[a].is_negative())
          return EDWitness{"m_{" + std::to_string(s) + "," + std::to_string(t) + "} negative"};
    }
    for (int t = s + 1; t < S; ++t) {
      const RandomVariable step = cond_expect(space, ed.m_at(s, t), t - 1);
      for (int a = 0; a < space.n_atoms(); ++a)
        if (step[a] != ed.m_at(s, t - 1)[a])
          return EDWitness{"m_{" + std::to_string(s) + ",.} fails the martingale property at t=" +
                           std::to_string(t)};
    }
  }
  return std::nullopt;
}

std::optional<EDWitness> verify_ed(const FilteredSpace& space, const CondDistField& field,
                                   const EDData& ed) {
  if (auto w = verify_ed_intrinsic(space, ed)) return w;
  const int S = space.timeline().slots();
  for (int u = 0; u < S; ++u) {
    for (int t = u; t < S; ++t) {
      RandomVariable sum = RandomVariable::constant(space.n_atoms(), Rational());
      for (int s = 0; s <= u; ++s) sum = sum + ed.m_at(s, t) * ed.d.delta(s);
      for (int a = 0; a < space.n_atoms(); ++a)
        if (sum[a] != field.at(u, t)[a])
          return EDWitness{"integral representation fails at (u,t)=(" +
                           space.timeline().label(u) + "," + space.timeline().label(t) +
                           "), atom " + space.atom_name(a) + ": " + sum[a].str() + " vs " +
                           field.at(u, t)[a].str()};
    }
  }
  return std::nullopt;
}

bool ed_m_strictly_positive(const EDData& ed) {
  for (const auto& row : ed.m)
    for (const auto& rv : row)
      for (const auto& v : rv.values)
        if (!v.is_positive()) return false;
  return true;
}

EDData canonical_ed_candidate(const FilteredSpace& space, const CondDistField& field) {
  const int S = space.timeline().slots();
  EDData ed;
  ed.m.resize(S);
  for (int s = 0; s < S; ++s) {
    ed.m[s].reserve(S - s);
    for (int t = s; t < S; ++t) ed.m[s].push_back(field.mass(s, t));
  }
  ed.d = Process::zeros(space, ProcessKind::Increasing);
  for (int s = 0; s < S; ++s)
    ed.d.at[s] = RandomVariable::constant(space.n_atoms(), Rational(s + 1));
  return ed;
}

// ---------------------------------------------------------------------------
// Classification

Classification classify_field(const FilteredSpace& space, const RandomTime& tau,
                              const CondDistField& field) {
  Classification c;
  c.h_witness = check_h(space, field);
  c.h = !c.h_witness.has_value();
  c.hp_witness = check_hp(space, field);
  c.hp = !c.hp_witness.has_value();
  c.complete_separability = check_complete_separability(space, field);
  c.completely_separable = c.complete_separability.verdict == TriVerdict::Pass;
  c.separable_at.clear();
  bool all_v = true;
  for (int v = 1; v < space.timeline().slots(); ++v) {
    const auto r = check_separable_at(space, field, v);
    c.separable_at.push_back(r.verdict);
    if (r.verdict != TriVerdict::Pass) all_v = false;
  }
  c.separable_all_v = all_v;
  const EDData candidate = canonical_ed_candidate(space, field);
  c.ed_witness = verify_ed(space, field, candidate);
  c.ed_with_candidate = !c.ed_witness.has_value();
  c.f_infty_measurable = tau.measurable_terminal(space);
  c.honest = c.f_infty_measurable && c.hp;
  c.strictly_positive_field = field.strictly_positive(&c.positivity_bad_u, &c.positivity_bad_t);
  return c;
}

Classification classify(const FilteredSpace& space, const RandomTime& tau) {
  return classify_field(space, tau, conditional_distribution(space, tau));
}

}  // namespace filtlab
