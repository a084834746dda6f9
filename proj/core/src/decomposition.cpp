#include "filtlab/decomposition.hpp"

#include "filtlab/construction.hpp"

namespace filtlab {

const char* to_string(DecompositionVariant v) {
  switch (v) {
    case DecompositionVariant::StoppedPredictable: return "stopped_predictable";
    case DecompositionVariant::StoppedOptional: return "stopped_optional";
    case DecompositionVariant::PseudoHonest: return "pseudo_honest";
    case DecompositionVariant::PredMult: return "pred_mult";
    case DecompositionVariant::OptMult: return "opt_mult";
    case DecompositionVariant::PseudoInitial: return "pseudo_initial";
    case DecompositionVariant::Separable: return "separable";
    case DecompositionVariant::HonestClassic: return "honest_classic";
    case DecompositionVariant::HonestBarM: return "honest_barM";
    case DecompositionVariant::ViaInitial: return "via_initial";
  }
  return "?";
}

TauKit make_tau_kit(const FilteredSpace& space, const RandomTime& tau) {
  TauKit kit;
  kit.tau = tau;
  kit.g = progressive_enlargement(space, tau);
  const AzemaPair az = azema(space, tau);
  kit.gproc = az.g;
  kit.fproc = az.f;
  kit.h = indicator_process(space, tau);
  kit.hp = dual_predictable_projection(space, kit.h);
  kit.ho = dual_optional_projection(space, kit.h);
  const Decomposition doob = doob_decomposition(space, kit.gproc);
  kit.m = doob.martingale_part;
  kit.a = doob.fv_part;
  const int term = space.timeline().inf_slot();
  kit.mbar = martingale_from_terminal(space, kit.ho.at[term]);
  kit.mtilde = martingale_from_terminal(space, kit.hp.at[term]);
  return kit;
}

Process compensator_f(const FilteredSpace& space, const RandomTime& tau) {
  return dual_predictable_projection(space, indicator_process(space, tau));
}

Process compensator_g_jeulin_yor(const FilteredSpace& space, const RandomTime& tau) {
  const TauKit kit = make_tau_kit(space, tau);
  Process out = Process::zeros(space, ProcessKind::Increasing);
  for (int t = 1; t < out.slots(); ++t) {
    out.at[t] = out.at[t - 1];
    const RandomVariable dhp = kit.hp.delta(t);
    for (int a = 0; a < space.n_atoms(); ++a) {
      if (tau[a] < t) continue;  // integral over (0, t ^ tau]
      // {tau >= t} sits inside {G_{t-1} > 0}, so this division is safe.
      out.at[t][a] += dhp[a] / kit.gproc.at[t - 1][a];
    }
  }
  return out;
}

SeparableCompensators compensator_separable(const FilteredSpace& space, const RandomTime& tau,
                                            const Process& k, const Process& l) {
  if (!is_predictable(space, k))
    fail(ErrorCode::SeparabilityPreconditionFails, "increasing factor K must be predictable");
  if (!is_increasing(k))
    fail(ErrorCode::SeparabilityPreconditionFails, "K must be increasing");
  SeparableCompensators out;
  out.f_compensator = Process::zeros(space, ProcessKind::Increasing);
  out.g_compensator = Process::zeros(space, ProcessKind::Increasing);
  const Rational one(1);
  for (int t = 1; t < k.slots(); ++t) {
    out.f_compensator.at[t] = out.f_compensator.at[t - 1];
    out.g_compensator.at[t] = out.g_compensator.at[t - 1];
    const RandomVariable dk = k.delta(t);
    for (int a = 0; a < space.n_atoms(); ++a) {
      const Rational da = l.at[t - 1][a] * dk[a];
      out.f_compensator.at[t][a] += da;
      if (tau[a] >= t) {
        const Rational g_prev = one - l.at[t - 1][a] * k.at[t - 1][a];
        if (g_prev.is_zero())
          fail(ErrorCode::DegenerateDenominator, "1 - L_{u-}K_{u-} vanishes before tau");
        out.g_compensator.at[t][a] += da / g_prev;
      }
    }
  }
  return out;
}

Process compensator_pseudo_initial(const FilteredSpace& space, const EDData& ed) {
  if (auto w = verify_ed_intrinsic(space, ed)) fail(ErrorCode::EDVerificationFails, w->detail);
  const int S = space.timeline().slots();
  // Diagonal kernel m_t = m_{t,t} and its Doob split m = N + P.
  Process diag = Process::zeros(space, ProcessKind::Adapted);
  for (int t = 0; t < S; ++t) diag.at[t] = ed.m_at(t, t);
  const Decomposition doob = doob_decomposition(space, diag);
  const Process& n = doob.martingale_part;
  const Process dp = dual_predictable_projection(space, ed.d);
  const Process pm = predictable_projection(space, diag);

  Process out = Process::zeros(space, ProcessKind::Increasing);
  // Slot 0 carries the {tau = 0} mass: pm_0 dD^p_0 = m_{0,0} dD_0.
  out.at[0] = pm.at[0] * dp.delta(0);
  for (int t = 1; t < S; ++t) {
    const RandomVariable dd = ed.d.delta(t) - dp.delta(t);
    const RandomVariable cov = cond_expect(space, n.delta(t) * dd, t - 1);
    out.at[t] = out.at[t - 1] + cov + pm.at[t] * dp.delta(t);
  }
  return out;
}

Process kernel_defect_process(const FilteredSpace& space, const EDData& ed) {
  const int S = space.timeline().slots();
  Process out = Process::zeros(space, ProcessKind::Adapted);
  for (int t = 0; t < S; ++t) {
    RandomVariable sum = RandomVariable::constant(space.n_atoms(), Rational());
    for (int u = 0; u <= t; ++u)
      sum = sum + (ed.m_at(u, t) - ed.m_at(u, u)) * ed.d.delta(u);
    out.at[t] = sum;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Drift assembly

namespace {

void require_martingale_input(const FilteredSpace& space, const Process& u) {
  const auto verdict = is_martingale(space, u);
  if (!verdict.pass)
    fail(ErrorCode::NotMartingale,
         "input fails the martingale check at step " + std::to_string(verdict.witness->slot) +
             " on block " + verdict.witness->block);
}

// Increments of the stopped-part drift, one random variable per slot u >= 1:
// (d<U,M>_u + dUbreve^p_u) / G_{u-1} or d<U,Mbar>_u / G_{u-1}. The division
// is only evaluated on {tau >= u}; zero is stored elsewhere.
std::vector<RandomVariable> before_increments(const FilteredSpace& space, const TauKit& kit,
                                              const Process& u, bool via_mbar) {
  const int S = space.timeline().slots();
  std::vector<RandomVariable> out(S, RandomVariable::constant(space.n_atoms(), Rational()));
  for (int t = 1; t < S; ++t) {
    RandomVariable num;
    if (via_mbar) {
      num = cond_expect(space, u.delta(t) * kit.mbar.delta(t), t - 1);
    } else {
      const RandomVariable cov = cond_expect(space, u.delta(t) * kit.m.delta(t), t - 1);
      const RandomVariable jump = cond_expect(space, u.delta(t) * kit.h.delta(t), t - 1);
      num = cov + jump;
    }
    for (int a = 0; a < space.n_atoms(); ++a) {
      if (kit.tau[a] >= t)
        out[t][a] = num[a] / kit.gproc.at[t - 1][a];
    }
  }
  return out;
}

// after[s][t] = the after-tau drift increment at slot t for atoms with
// tau = s (only read for t > s). `sign` carries the variant's orientation.
using AfterTable = std::vector<std::vector<RandomVariable>>;

Process assemble_drift(const FilteredSpace& space, const TauKit& kit,
                       const std::vector<RandomVariable>& before, const AfterTable* after,
                       int sign) {
  const int S = space.timeline().slots();
  Process drift = Process::zeros(space, ProcessKind::FiniteVariation);
  for (int t = 1; t < S; ++t) {
    drift.at[t] = drift.at[t - 1];
    for (int a = 0; a < space.n_atoms(); ++a) {
      if (kit.tau[a] >= t) {
        drift.at[t][a] += before[t][a];
      } else if (after) {
        const Rational inc = (*after)[kit.tau[a]][t][a];
        drift.at[t][a] += (sign >= 0) ? inc : -inc;
      }
    }
  }
  // G-predictability of the drift is structural; a violation is a bug.
  if (!is_predictable(space, drift, kit.g.filt))
    fail(ErrorCode::ValidationError, "assembled drift is not G-predictable");
  return drift;
}

GDecomposition finish(DecompositionVariant variant, Process input, Process drift) {
  GDecomposition d;
  d.variant = variant;
  d.martingale_part = input - drift;
  d.input = std::move(input);
  d.drift = std::move(drift);
  return d;
}

// Bracket-over-weight table: after[s][t] = d<U, W_s>_t / W_{s,t-1} with the
// guarded 0/0; W_s is the weight process of the variant (field row, kernel
// row, L, Mhat...).
AfterTable ratio_after_table(const FilteredSpace& space, const Process& u,
                             const std::vector<Process>& weights) {
  const int S = space.timeline().slots();
  AfterTable after(weights.size());
  for (size_t s = 0; s < weights.size(); ++s) {
    after[s].assign(S, RandomVariable::constant(space.n_atoms(), Rational()));
    for (int t = static_cast<int>(s) + 1; t < S; ++t) {
      const RandomVariable cov = cond_expect(space, u.delta(t) * weights[s].delta(t), t - 1);
      for (int a = 0; a < space.n_atoms(); ++a)
        after[s][t][a] = ratio_or_zero(cov[a], weights[s].at[t - 1][a]);
    }
  }
  return after;
}

}  // namespace

GDecomposition decompose_stopped(const FilteredSpace& space, const RandomTime& tau,
                                 const Process& u, DecompositionVariant variant) {
  if (variant != DecompositionVariant::StoppedPredictable &&
      variant != DecompositionVariant::StoppedOptional)
    fail(ErrorCode::ValidationError, "decompose_stopped expects a stopped variant");
  require_martingale_input(space, u);
  const TauKit kit = make_tau_kit(space, tau);
  const bool via_mbar = variant == DecompositionVariant::StoppedOptional;
  const auto before = before_increments(space, kit, u, via_mbar);
  Process drift = assemble_drift(space, kit, before, nullptr, +1);
  return finish(variant, stop_at(space, u, tau), std::move(drift));
}

GDecomposition decompose_pseudo_honest(const FilteredSpace& space, const CondDistField& field,
                                       const RandomTime& tau, const Process& u,
                                       PseudoHonestBlocks* blocks) {
  if (auto w = check_hp(space, field))
    fail(ErrorCode::HypothesisHPFails,
         "HP fails at (" + std::to_string(w->u) + "," + std::to_string(w->s) + "," +
             std::to_string(w->t) + ")");
  int bu = -1, bt = -1;
  if (!field.strictly_positive(&bu, &bt))
    fail(ErrorCode::FieldNotStrictlyPositive,
         "field vanishes at (u,t)=(" + std::to_string(bu) + "," + std::to_string(bt) + ")");
  require_martingale_input(space, u);

  const TauKit kit = make_tau_kit(space, tau);
  const int S = space.timeline().slots();
  std::vector<Process> rows(S);
  for (int s = 0; s < S; ++s) rows[s] = field.row(s);
  const AfterTable after = ratio_after_table(space, u, rows);
  const auto before = before_increments(space, kit, u, false);
  Process drift = assemble_drift(space, kit, before, &after, +1);

  if (blocks) {
    // Building blocks in the unfolded shape: here Btilde carries only the
    // bracket term (the jump of U at tau stays explicit), which keeps the
    // diagonal Uhat_{t,t} = U_{t-1} - Btilde_t predictable.
    blocks->u_tilde = u;
    RandomVariable acc = RandomVariable::constant(space.n_atoms(), Rational());
    std::vector<RandomVariable> btilde(S, acc);
    for (int t = 1; t < S; ++t) {
      const RandomVariable cov = cond_expect(space, u.delta(t) * kit.m.delta(t), t - 1);
      for (int a = 0; a < space.n_atoms(); ++a)
        acc[a] += ratio_or_zero(cov[a], kit.gproc.at[t - 1][a]);
      btilde[t] = acc;
    }
    for (int t = 0; t < S; ++t) blocks->u_tilde.at[t] = u.at[t] - btilde[t];
    blocks->u_hat.assign(S, {});
    for (int s = 0; s < S; ++s) {
      // A row whose terminal column vanishes identically carries no mass of
      // tau and is never read; the constant continuation is the one
      // representation that satisfies the block conditions verbatim.
      bool no_mass = true;
      for (int a = 0; a < space.n_atoms(); ++a)
        if (!field.at(s, S - 1)[a].is_zero()) no_mass = false;
      RandomVariable z = RandomVariable::constant(space.n_atoms(), Rational());
      for (int t = s; t < S; ++t) {
        if (no_mass) {
          RandomVariable diag = u.at[s] - btilde[s];
          if (s > 0) diag = diag - u.delta(s);
          blocks->u_hat[s].push_back(std::move(diag));
          continue;
        }
        if (t > s) z = z + after[s][t];
        RandomVariable v = u.at[t] - btilde[s] - z;
        if (s > 0) v = v - u.delta(s);
        blocks->u_hat[s].push_back(std::move(v));
      }
    }
  }
  return finish(DecompositionVariant::PseudoHonest, u, std::move(drift));
}

GDecomposition decompose_pred_mult(const FilteredSpace& space, const Process& f,
                                   const RandomTime& tau, const Process& u) {
  for (int t = 0; t < f.slots(); ++t)
    for (int a = 0; a < space.n_atoms(); ++a)
      if (!f.at[t][a].is_positive())
        fail(ErrorCode::PositivityFails, "predictable construction needs F > 0 at every slot");
  require_martingale_input(space, u);
  const MultiplicativeSystem system = predictable_multiplicative_system(space, f);
  const CondDistField field = field_from_system(space, f, system);
  const CondDistField realized = conditional_distribution(space, tau);
  for (int s = 0; s < space.timeline().slots(); ++s)
    for (int t = 0; t < space.timeline().slots(); ++t)
      if (!(realized.at(s, t) == field.at(s, t)))
        fail(ErrorCode::RealizationMismatch, "tau does not realize the constructed field");

  const TauKit kit = make_tau_kit(space, tau);
  const int S = space.timeline().slots();
  // After tau the drift runs against the raw Doob martingale of G over the
  // predictable projection of F: d<U,M>_u / pF_u, with a minus sign.
  AfterTable after(S);
  std::vector<RandomVariable> inc(S, RandomVariable::constant(space.n_atoms(), Rational()));
  for (int t = 1; t < S; ++t) {
    const RandomVariable cov = cond_expect(space, u.delta(t) * kit.m.delta(t), t - 1);
    const RandomVariable pf = cond_expect(space, f.at[t], t - 1);
    for (int a = 0; a < space.n_atoms(); ++a) inc[t][a] = cov[a] / pf[a];  // pF >= F_{t-1} > 0
  }
  for (int s = 0; s < S; ++s) after[s] = inc;
  const auto before = before_increments(space, kit, u, false);
  Process drift = assemble_drift(space, kit, before, &after, -1);
  return finish(DecompositionVariant::PredMult, u, std::move(drift));
}

GDecomposition decompose_opt_mult(const FilteredSpace& space, const Process& f,
                                  const RandomTime& tau_hat, const RandomTime& tau,
                                  const Process& u) {
  require_martingale_input(space, u);
  const MultiplicativeSystem system = optional_multiplicative_system(space, f, tau_hat);
  const CondDistField field = field_from_system(space, f, system);
  const CondDistField realized = conditional_distribution(space, tau);
  for (int s = 0; s < space.timeline().slots(); ++s)
    for (int t = 0; t < space.timeline().slots(); ++t)
      if (!(realized.at(s, t) == field.at(s, t)))
        fail(ErrorCode::RealizationMismatch, "tau does not realize the optional field");
  int bu = -1, bt = -1;
  if (!field.strictly_positive(&bu, &bt))
    fail(ErrorCode::PositivityFails, "optional-construction field vanishes at (u,t)=(" +
                                         std::to_string(bu) + "," + std::to_string(bt) + ")");

  const TauKit kit = make_tau_kit(space, tau);
  // Auxiliary optional decomposition G = Mhat - Ahat of the realizing time.
  const Process a_hat =
      dual_optional_projection(space, indicator_process(space, tau_hat));
  const Process m_hat =
      martingale_from_terminal(space, a_hat.at[space.timeline().inf_slot()]);

  const int S = space.timeline().slots();
  AfterTable after(S);
  std::vector<RandomVariable> inc(S, RandomVariable::constant(space.n_atoms(), Rational()));
  for (int t = 1; t < S; ++t) {
    const RandomVariable cov = cond_expect(space, u.delta(t) * m_hat.delta(t), t - 1);
    for (int a = 0; a < space.n_atoms(); ++a)
      inc[t][a] = ratio_or_zero(cov[a], f.at[t - 1][a]);
  }
  for (int s = 0; s < S; ++s) after[s] = inc;
  const auto before = before_increments(space, kit, u, true);
  Process drift = assemble_drift(space, kit, before, &after, -1);
  return finish(DecompositionVariant::OptMult, u, std::move(drift));
}

GDecomposition decompose_pseudo_initial(const FilteredSpace& space, const EDData& ed,
                                        const RandomTime& tau, const Process& u) {
  const CondDistField field = conditional_distribution(space, tau);
  if (auto w = verify_ed(space, field, ed)) fail(ErrorCode::EDVerificationFails, w->detail);
  require_martingale_input(space, u);

  const TauKit kit = make_tau_kit(space, tau);
  const int S = space.timeline().slots();
  std::vector<Process> kernels(S);
  for (int s = 0; s < S; ++s) {
    kernels[s] = Process::zeros(space, ProcessKind::Adapted);
    for (int t = 0; t < S; ++t)
      kernels[s].at[t] = (t >= s) ? ed.m_at(s, t) : cond_expect(space, ed.m_at(s, s), t);
  }
  const AfterTable after = ratio_after_table(space, u, kernels);
  const auto before = before_increments(space, kit, u, false);
  Process drift = assemble_drift(space, kit, before, &after, +1);
  return finish(DecompositionVariant::PseudoInitial, u, std::move(drift));
}

GDecomposition decompose_separable(const FilteredSpace& space, const Process& k, const Process& l,
                                   const RandomTime& tau, const Process& u) {
  const CondDistField field = conditional_distribution(space, tau);
  const int S = space.timeline().slots();
  for (int t = 0; t < S; ++t)
    for (int a = 0; a < space.n_atoms(); ++a)
      if (!l.at[t][a].is_positive())
        fail(ErrorCode::SeparabilityPreconditionFails, "martingale factor must be positive");
  for (int s = 0; s < S; ++s)
    for (int t = s; t < S; ++t)
      for (int a = 0; a < space.n_atoms(); ++a)
        if (k.at[s][a] * l.at[t][a] != field.at(s, t)[a])
          fail(ErrorCode::SeparabilityPreconditionFails,
               "K_u L_t does not match the conditional distribution of tau");
  require_martingale_input(space, u);

  const TauKit kit = make_tau_kit(space, tau);
  AfterTable after(S);
  std::vector<RandomVariable> inc(S, RandomVariable::constant(space.n_atoms(), Rational()));
  for (int t = 1; t < S; ++t) {
    const RandomVariable cov = cond_expect(space, u.delta(t) * l.delta(t), t - 1);
    for (int a = 0; a < space.n_atoms(); ++a) inc[t][a] = cov[a] / l.at[t - 1][a];
  }
  for (int s = 0; s < S; ++s) after[s] = inc;
  const auto before = before_increments(space, kit, u, false);
  Process drift = assemble_drift(space, kit, before, &after, +1);
  return finish(DecompositionVariant::Separable, u, std::move(drift));
}

GDecomposition decompose_honest(const FilteredSpace& space, const RandomTime& tau,
                                const Process& u, DecompositionVariant variant) {
  if (variant != DecompositionVariant::HonestClassic &&
      variant != DecompositionVariant::HonestBarM)
    fail(ErrorCode::ValidationError, "decompose_honest expects an honest variant");
  const CondDistField field = conditional_distribution(space, tau);
  if (!tau.measurable_terminal(space))
    fail(ErrorCode::NotHonest, "tau is not measurable at the terminal sigma-field");
  if (auto w = check_hp(space, field))
    fail(ErrorCode::NotHonest, "tau fails the HP characterization of honest times");
  require_martingale_input(space, u);

  const TauKit kit = make_tau_kit(space, tau);
  const bool via_mbar = variant == DecompositionVariant::HonestBarM;
  const int S = space.timeline().slots();
  AfterTable after(S);
  std::vector<RandomVariable> inc(S, RandomVariable::constant(space.n_atoms(), Rational()));
  for (int t = 1; t < S; ++t) {
    RandomVariable num;
    if (via_mbar) {
      num = cond_expect(space, u.delta(t) * kit.mbar.delta(t), t - 1);
    } else {
      const RandomVariable cov = cond_expect(space, u.delta(t) * kit.m.delta(t), t - 1);
      const RandomVariable jump = cond_expect(space, u.delta(t) * kit.h.delta(t), t - 1);
      num = cov + jump;
    }
    for (int a = 0; a < space.n_atoms(); ++a) {
      // Only read on {tau < t}, where F_{t-1} > 0 holds pathwise.
      if (kit.fproc.at[t - 1][a].is_positive())
        inc[t][a] = num[a] / kit.fproc.at[t - 1][a];
    }
  }
  for (int s = 0; s < S; ++s) after[s] = inc;
  const auto before = before_increments(space, kit, u, via_mbar);
  Process drift = assemble_drift(space, kit, before, &after, -1);
  return finish(variant, u, std::move(drift));
}

GDecomposition decompose_via_initial(const FilteredSpace& space, const RandomTime& tau,
                                     const Process& u, const Process& b) {
  require_martingale_input(space, u);
  const EnlargedFiltration g_star = initial_enlargement(space, tau);
  if (!is_predictable(space, b, g_star.filt))
    fail(ErrorCode::InitialDecompositionInvalid, "B is not predictable for the initial enlargement");
  MartingaleVerdict check;
  try {
    check = is_martingale(space, u - b, g_star.filt);
  } catch (const Error&) {
    fail(ErrorCode::InitialDecompositionInvalid, "U - B is not adapted to the initial enlargement");
  }
  if (!check.pass)
    fail(ErrorCode::InitialDecompositionInvalid,
         "U - B fails the initial-enlargement martingale check at step " +
             std::to_string(check.witness->slot) + " on block " + check.witness->block);

  const TauKit kit = make_tau_kit(space, tau);
  const int S = space.timeline().slots();
  AfterTable after(S);
  std::vector<RandomVariable> inc(S, RandomVariable::constant(space.n_atoms(), Rational()));
  for (int t = 1; t < S; ++t) inc[t] = b.delta(t);
  for (int s = 0; s < S; ++s) after[s] = inc;
  const auto before = before_increments(space, kit, u, false);
  Process drift = assemble_drift(space, kit, before, &after, +1);
  return finish(DecompositionVariant::ViaInitial, u, std::move(drift));
}

Process g_star_drift(const FilteredSpace& space, const RandomTime& tau, const Process& u) {
  require_martingale_input(space, u);
  const CondDistField field = conditional_distribution(space, tau);
  const int S = space.timeline().slots();
  Process drift = Process::zeros(space, ProcessKind::FiniteVariation);
  // Mass kernels mu_{s,.} = F_{s,.} - F_{s-1,.}; on {tau = s} the drift
  // regresses U on the kernel row from time zero on.
  std::vector<Process> mu(S);
  for (int s = 0; s < S; ++s) {
    mu[s] = Process::zeros(space, ProcessKind::Adapted);
    for (int t = 0; t < S; ++t) mu[s].at[t] = field.mass(s, t);
  }
  for (int t = 1; t < S; ++t) {
    drift.at[t] = drift.at[t - 1];
    std::vector<RandomVariable> inc(S);
    for (int s = 0; s < S; ++s) {
      const RandomVariable cov = cond_expect(space, u.delta(t) * mu[s].delta(t), t - 1);
      inc[s] = RandomVariable::constant(space.n_atoms(), Rational());
      for (int a = 0; a < space.n_atoms(); ++a)
        inc[s][a] = ratio_or_zero(cov[a], mu[s].at[t - 1][a]);
    }
    for (int a = 0; a < space.n_atoms(); ++a) drift.at[t][a] += inc[tau[a]][a];
  }
  return drift;
}

// ---------------------------------------------------------------------------
// Building blocks

BuildingBlockReport verify_building_blocks(const FilteredSpace& space, const CondDistField& field,
                                           const RandomTime& tau, const Process& u_tilde,
                                           const UhatMap& u_hat, BlockCondition condition,
                                           const Process* l, const EDData* ed) {
  BuildingBlockReport report;
  const int S = space.timeline().slots();
  const AzemaPair az = azema(space, tau);

  // Diagonal predictability.
  report.diagonal_predictable = u_hat.at(0, 0).constant_on(space.partition_at(0));
  for (int t = 1; t < S && report.diagonal_predictable; ++t)
    report.diagonal_predictable = u_hat.at(t, t).constant_on(space.partition_at(t - 1));

  // Condition (i): W_t = Utilde_t G_t + sum_{0<v<=t} Uhat_{v,v} dF_v.
  {
    Process w = Process::zeros(space, ProcessKind::Adapted);
    RandomVariable acc = RandomVariable::constant(space.n_atoms(), Rational());
    for (int t = 0; t < S; ++t) {
      if (t > 0) acc = acc + u_hat.at(t, t) * az.f.delta(t);
      w.at[t] = u_tilde.at[t] * az.g.at[t] + acc;
    }
    if (!is_adapted(space, w)) {
      report.condition_i = false;
      report.witness_i = MartingaleWitness{-1, "W not adapted", Rational(), Rational()};
    } else {
      const auto verdict = is_martingale(space, w);
      report.condition_i = verdict.pass;
      report.witness_i = verdict.witness;
    }
  }

  // Condition (ii): weighted defect processes are martingales.
  report.condition_ii = true;
  auto check_weighted = [&](int u, int s, const Process& weight) {
    const int start = std::max(u, s);
    RandomVariable prev = weight.at[start] * (u_hat.at(u, start) - u_hat.at(u, u));
    for (int t = start + 1; t < S; ++t) {
      const RandomVariable cur = weight.at[t] * (u_hat.at(u, t) - u_hat.at(u, u));
      const RandomVariable step = cond_expect(space, cur - prev, t - 1);
      for (int a = 0; a < space.n_atoms(); ++a) {
        if (!step[a].is_zero()) {
          report.condition_ii = false;
          report.witness_ii = TripleWitness{u, s, t, a, step[a], Rational()};
          return false;
        }
      }
      prev = cur;
    }
    return true;
  };
  switch (condition) {
    case BlockCondition::Field: {
      for (int u = 0; u < S && report.condition_ii; ++u)
        for (int s = 0; s < S && report.condition_ii; ++s)
          check_weighted(u, s, field.row(s));
      break;
    }
    case BlockCondition::SeparableL: {
      if (!l) fail(ErrorCode::ValidationError, "separable condition needs L");
      for (int u = 0; u < S && report.condition_ii; ++u) check_weighted(u, u, *l);
      break;
    }
    case BlockCondition::EDKernel: {
      if (!ed) fail(ErrorCode::ValidationError, "kernel condition needs (m, D)");
      for (int u = 0; u < S && report.condition_ii; ++u) {
        Process kernel = Process::zeros(space, ProcessKind::Adapted);
        for (int t = 0; t < S; ++t)
          kernel.at[t] = (t >= u) ? ed->m_at(u, t) : cond_expect(space, ed->m_at(u, u), t);
        check_weighted(u, u, kernel);
      }
      break;
    }
  }

  // Conclusion, verified independently on the enlarged partition.
  {
    const EnlargedFiltration g = progressive_enlargement(space, tau);
    Process mhat = Process::zeros(space, ProcessKind::Adapted);
    for (int t = 0; t < S; ++t)
      for (int a = 0; a < space.n_atoms(); ++a)
        mhat.at[t][a] = (tau[a] > t) ? u_tilde.at[t][a] : u_hat.at(tau[a], t)[a];
    try {
      const auto verdict = is_martingale(space, mhat, g.filt);
      report.conclusion = verdict.pass;
      report.witness_conclusion = verdict.witness;
    } catch (const Error&) {
      report.conclusion = false;
      report.witness_conclusion =
          MartingaleWitness{-1, "Mhat not G-adapted", Rational(), Rational()};
    }
  }
  return report;
}

}  // namespace filtlab
