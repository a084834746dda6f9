#include "filtlab/random_time.hpp"

#include "filtlab/hypotheses.hpp"

namespace filtlab {

bool RandomTime::is_stopping_time(const FilteredSpace& space) const {
  // {tau <= t} must be a union of F_t blocks, i.e. 1_{tau<=t} is F_t-measurable.
  for (int t = 0; t <= space.horizon(); ++t) {
    const Partition& p = space.partition_at(t);
    for (const auto& block : p.blocks()) {
      const bool in = value[block.front()] <= t;
      for (int a : block)
        if ((value[a] <= t) != in) return false;
    }
  }
  return true;
}

bool RandomTime::measurable_terminal(const FilteredSpace& space) const {
  const Partition& p = space.partition_at(space.horizon());
  for (const auto& block : p.blocks())
    for (int a : block)
      if (value[a] != value[block.front()]) return false;
  return true;
}

Process indicator_process(const FilteredSpace& space, const RandomTime& tau) {
  Process h = Process::zeros(space, ProcessKind::Increasing);
  for (int s = 0; s < h.slots(); ++s)
    for (int a = 0; a < space.n_atoms(); ++a)
      h.at[s][a] = Rational(tau[a] <= s ? 1 : 0);
  return h;
}

Process stop_at(const FilteredSpace& space, const Process& x, const RandomTime& tau) {
  Process out = x;
  for (int s = 0; s < x.slots(); ++s)
    for (int a = 0; a < space.n_atoms(); ++a)
      out.at[s][a] = x.at[std::min(s, tau[a])][a];
  return out;
}

AzemaPair azema(const FilteredSpace& space, const RandomTime& tau) {
  AzemaPair pair;
  pair.g = Process::zeros(space, ProcessKind::Adapted);
  pair.f = Process::zeros(space, ProcessKind::Adapted);
  for (int s = 0; s < pair.g.slots(); ++s) {
    RandomVariable ind = RandomVariable::constant(space.n_atoms(), Rational());
    for (int a = 0; a < space.n_atoms(); ++a) ind[a] = Rational(tau[a] > s ? 1 : 0);
    pair.g.at[s] = cond_expect(space, ind, s);
    pair.f.at[s] = RandomVariable::constant(space.n_atoms(), Rational(1)) - pair.g.at[s];
  }
  // Supermartingale sanity and the pathwise inclusions {tau>t} in {G_t>0},
  // {tau<=t} in {F_t>0}. Both are theorems here; violation means a bug.
  for (int s = 1; s < pair.g.slots(); ++s) {
    const RandomVariable drift = cond_expect(space, pair.g.delta(s), s - 1);
    for (const auto& v : drift.values)
      if (v.is_positive()) fail(ErrorCode::ValidationError, "azema supermartingale check failed");
  }
  for (int s = 0; s < pair.g.slots(); ++s) {
    for (int a = 0; a < space.n_atoms(); ++a) {
      if (tau[a] > s && !pair.g.at[s][a].is_positive())
        fail(ErrorCode::ValidationError, "G vanishes on {tau > t}");
      if (tau[a] <= s && !pair.f.at[s][a].is_positive())
        fail(ErrorCode::ValidationError, "F vanishes on {tau <= t}");
    }
  }
  return pair;
}

// ---------------------------------------------------------------------------
// CondDistField

CondDistField::CondDistField(Timeline timeline, std::vector<std::vector<RandomVariable>> table)
    : timeline_(timeline), table_(std::move(table)) {
  if (static_cast<int>(table_.size()) != timeline_.slots())
    fail(ErrorCode::ShapeMismatch, "field needs one row per u slot");
  for (const auto& row : table_)
    if (static_cast<int>(row.size()) != timeline_.slots())
      fail(ErrorCode::ShapeMismatch, "field needs one column per t slot");
}

RandomVariable CondDistField::mass(int u, int t) const {
  if (u == 0) return table_[0][t];
  return table_[u][t] - table_[u - 1][t];
}

Process CondDistField::diagonal() const {
  Process p;
  p.kind = ProcessKind::Adapted;
  p.at.resize(timeline_.slots());
  for (int s = 0; s < timeline_.slots(); ++s) p.at[s] = table_[s][s];
  return p;
}

Process CondDistField::row(int u) const {
  Process p;
  p.kind = ProcessKind::Adapted;
  p.at = table_[u];
  return p;
}

void CondDistField::validate(const FilteredSpace& space) const {
  const int S = timeline_.slots();
  const Rational one(1);
  for (int u = 0; u < S; ++u) {
    for (int t = 0; t < S; ++t) {
      const RandomVariable& v = table_[u][t];
      if (!v.constant_on(space.partition_at(t)))
        fail(ErrorCode::FieldAxiomViolation,
             "F_{" + timeline_.label(u) + "," + timeline_.label(t) + "} is not F_t-measurable");
      for (int a = 0; a < space.n_atoms(); ++a) {
        if (v[a].is_negative() || v[a] > one)
          fail(ErrorCode::FieldAxiomViolation,
               "F_{" + timeline_.label(u) + "," + timeline_.label(t) + "} = " + v[a].str() +
                   " outside [0,1] at atom " + space.atom_name(a));
      }
      if (u > 0) {
        for (int a = 0; a < space.n_atoms(); ++a)
          if (table_[u][t][a] < table_[u - 1][t][a])
            fail(ErrorCode::FieldAxiomViolation,
                 "field not increasing in u at (u,t)=(" + timeline_.label(u) + "," +
                     timeline_.label(t) + "), atom " + space.atom_name(a));
      }
    }
    const auto verdict = is_martingale(space, row(u));
    if (!verdict.pass)
      fail(ErrorCode::FieldAxiomViolation,
           "row u=" + timeline_.label(u) + " is not a martingale (step " +
               std::to_string(verdict.witness->slot) + ", block " + verdict.witness->block + ")");
  }
  for (int t = 0; t < S; ++t)
    for (int a = 0; a < space.n_atoms(); ++a)
      if (table_[S - 1][t][a] != one)
        fail(ErrorCode::FieldAxiomViolation, "terminal row is not identically 1");
}

bool CondDistField::strictly_positive(int* bad_u, int* bad_t) const {
  for (int u = 1; u < timeline_.slots(); ++u) {
    for (int t = u; t < timeline_.slots(); ++t) {
      for (const auto& v : table_[u][t].values) {
        if (!v.is_positive()) {
          if (bad_u) *bad_u = u;
          if (bad_t) *bad_t = t;
          return false;
        }
      }
    }
  }
  return true;
}

CondDistField conditional_distribution(const FilteredSpace& space, const RandomTime& tau) {
  const int S = space.timeline().slots();
  std::vector<std::vector<RandomVariable>> table(S);
  for (int u = 0; u < S; ++u) {
    RandomVariable ind = RandomVariable::constant(space.n_atoms(), Rational());
    for (int a = 0; a < space.n_atoms(); ++a) ind[a] = Rational(tau[a] <= u ? 1 : 0);
    table[u].resize(S);
    for (int t = 0; t < S; ++t) table[u][t] = cond_expect(space, ind, t);
  }
  CondDistField field(space.timeline(), std::move(table));
  field.validate(space);
  return field;
}

// ---------------------------------------------------------------------------
// Enlargements

namespace {

Filtration enlargement_chain(const FilteredSpace& space, const RandomTime& tau, bool progressive) {
  std::vector<Partition> parts;
  parts.reserve(space.horizon() + 1);
  const int never = space.n_atoms() > 0 ? space.timeline().inf_slot() + 1 : 0;
  for (int t = 0; t <= space.horizon(); ++t) {
    const Partition& base = space.partition_at(t);
    std::vector<long> keys(space.n_atoms());
    for (int a = 0; a < space.n_atoms(); ++a) {
      // Progressive: reveal tau exactly once it has occurred, otherwise only
      // the fact {tau > t}. Initial: reveal tau at every slot.
      const long mark = (!progressive || tau[a] <= t) ? tau[a] : never;
      keys[a] = static_cast<long>(base.block_of(a)) * (never + 2) + mark;
    }
    parts.push_back(Partition::from_keys(keys));
  }
  return Filtration(space.timeline(), std::move(parts));
}

}  // namespace

EnlargedFiltration progressive_enlargement(const FilteredSpace& space, const RandomTime& tau) {
  EnlargedFiltration g{EnlargementKind::Progressive, tau,
                       enlargement_chain(space, tau, true)};
  return g;
}

EnlargedFiltration initial_enlargement(const FilteredSpace& space, const RandomTime& tau) {
  EnlargedFiltration g{EnlargementKind::Initial, tau,
                       enlargement_chain(space, tau, false)};
  return g;
}

// ---------------------------------------------------------------------------
// Admissibility

namespace {

// Compares the trace partitions of two sigma-fields on the event set `mask`.
// Equal traces = the two partitions restricted to mask-atoms have identical
// cells.
bool traces_match(const Partition& a, const Partition& b, const std::vector<bool>& mask,
                  int n_atoms, std::string* detail) {
  for (int x = 0; x < n_atoms; ++x) {
    if (!mask[x]) continue;
    for (int y = x + 1; y < n_atoms; ++y) {
      if (!mask[y]) continue;
      if (a.same_cell(x, y) != b.same_cell(x, y)) {
        if (detail) *detail = "atoms " + std::to_string(x) + "," + std::to_string(y) +
                              " separated by one trace only";
        return false;
      }
    }
  }
  return true;
}

}  // namespace

std::optional<AdmissibilityWitness> check_admissibility(const FilteredSpace& space,
                                                        const Filtration& k,
                                                        const RandomTime& tau,
                                                        AdmissibilitySide side) {
  if (!k.contains(space.filtration()))
    fail(ErrorCode::ValidationError, "K does not contain the base filtration");
  const EnlargedFiltration g_star = initial_enlargement(space, tau);
  for (int t = 0; t <= space.horizon(); ++t) {
    std::vector<bool> mask(space.n_atoms());
    for (int a = 0; a < space.n_atoms(); ++a)
      mask[a] = (side == AdmissibilitySide::Before) ? (tau[a] > t) : (tau[a] <= t);
    const Partition& reference =
        (side == AdmissibilitySide::Before) ? space.partition_at(t) : g_star.at(t);
    std::string detail;
    if (!traces_match(k.at(t), reference, mask, space.n_atoms(), &detail))
      return AdmissibilityWitness{t, detail};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Conditional expectations under the progressive enlargement

RandomVariable PayoffMap::at_tau(const RandomTime& tau) const {
  RandomVariable out = RandomVariable::constant(rows[0].n_atoms(), Rational());
  for (int a = 0; a < out.n_atoms(); ++a) out[a] = rows[tau[a]][a];
  return out;
}

RandomVariable g_cond_expect_brute(const FilteredSpace& space, const EnlargedFiltration& g,
                                   const RandomVariable& x, int t) {
  if (!space.timeline().valid_slot(t))
    fail(ErrorCode::TimeOutOfRange, "slot out of range");
  return cond_expect_on(space, x, g.at(t));
}

namespace {

void require_payoff_shape(const FilteredSpace& space, const PayoffMap& payoff) {
  if (static_cast<int>(payoff.rows.size()) != space.timeline().slots())
    fail(ErrorCode::ShapeMismatch, "payoff map needs one row per u slot");
  const Partition& terminal = space.partition_at(space.horizon());
  for (const auto& row : payoff.rows)
    if (!row.constant_on(terminal))
      fail(ErrorCode::NotAdapted, "payoff row is not measurable at the terminal sigma-field");
}

}  // namespace

RandomVariable g_cond_expect_pseudo_honest(const FilteredSpace& space, const CondDistField& field,
                                           const RandomTime& tau, const PayoffMap& payoff, int t) {
  if (auto w = check_hp(space, field))
    fail(ErrorCode::HypothesisHPFails,
         "HP fails at (u,s,t)=(" + std::to_string(w->u) + "," + std::to_string(w->s) + "," +
             std::to_string(w->t) + ")");
  require_payoff_shape(space, payoff);
  const int S = space.timeline().slots();
  const int term = S - 1;
  const Rational zero;

  // Before tau: G_t^{-1} E[ sum_{v>t} U_v dF_{v,term} | F_t ].
  RandomVariable weighted = RandomVariable::constant(space.n_atoms(), zero);
  for (int v = t + 1; v < S; ++v) weighted = weighted + payoff.row(v) * field.mass(v, term);
  const RandomVariable num_before = cond_expect(space, weighted, t);
  const RandomVariable one = RandomVariable::constant(space.n_atoms(), Rational(1));
  const RandomVariable g_t = one - field.at(t, t);

  // After tau: F_t^{-1} E[ F_{t,term} U_u | F_t ], evaluated pathwise at
  // u = tau. Denominators vanish only off the events where each branch is
  // read, hence the 0/0 guard.
  std::vector<RandomVariable> after(static_cast<size_t>(t) + 1);
  for (int u = 0; u <= t; ++u)
    after[u] = cond_expect(space, field.at(t, term) * payoff.row(u), t);
  const RandomVariable& f_t = field.at(t, t);

  RandomVariable out = RandomVariable::constant(space.n_atoms(), zero);
  for (int a = 0; a < space.n_atoms(); ++a) {
    if (tau[a] > t) {
      out[a] = ratio_or_zero(num_before[a], g_t[a]);
    } else {
      out[a] = ratio_or_zero(after[tau[a]][a], f_t[a]);
    }
  }
  return out;
}

RandomVariable g_cond_expect_pseudo_initial(const FilteredSpace& space, const CondDistField& field,
                                            const EDData& ed, const RandomTime& tau,
                                            const PayoffMap& payoff, int t) {
  if (auto w = verify_ed(space, field, ed))
    fail(ErrorCode::EDVerificationFails, w->detail);
  require_payoff_shape(space, payoff);
  const int S = space.timeline().slots();
  const int term = S - 1;
  const Rational zero;

  RandomVariable weighted = RandomVariable::constant(space.n_atoms(), zero);
  for (int v = t + 1; v < S; ++v) weighted = weighted + payoff.row(v) * field.mass(v, term);
  const RandomVariable num_before = cond_expect(space, weighted, t);
  const RandomVariable one = RandomVariable::constant(space.n_atoms(), Rational(1));
  const RandomVariable g_t = one - field.at(t, t);

  // After tau: m_{u,t}^{-1} E[ m_{u,term} U_u | F_t ] at u = tau.
  std::vector<RandomVariable> after(static_cast<size_t>(t) + 1);
  for (int u = 0; u <= t; ++u)
    after[u] = cond_expect(space, ed.m_at(u, term) * payoff.row(u), t);

  RandomVariable out = RandomVariable::constant(space.n_atoms(), zero);
  for (int a = 0; a < space.n_atoms(); ++a) {
    if (tau[a] > t) {
      out[a] = ratio_or_zero(num_before[a], g_t[a]);
    } else {
      out[a] = ratio_or_zero(after[tau[a]][a], ed.m_at(tau[a], t)[a]);
    }
  }
  return out;
}

}  // namespace filtlab
