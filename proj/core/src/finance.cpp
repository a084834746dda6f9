#include "filtlab/finance.hpp"

namespace filtlab {

Process immersion_density(const FilteredSpace& space, const CondDistField& field,
                          const RandomTime& tau) {
  const auto sep = check_complete_separability(space, field);
  if (sep.verdict != TriVerdict::Pass)
    fail(ErrorCode::SeparabilityPreconditionFails,
         std::string("complete separability ") +
             (sep.verdict == TriVerdict::Fail ? "fails" : "could not be certified") +
             (sep.note.empty() ? "" : (": " + sep.note)));
  for (int a = 0; a < space.n_atoms(); ++a)
    if (!field.at(0, 0)[a].is_zero())
      fail(ErrorCode::SeparabilityPreconditionFails, "the field must carry no mass at zero");
  // Positivity where division happens: all ratios run over rows u >= 1, and
  // the diagonal renormalizer must be a predictable unit there.
  int bu = -1, bt = -1;
  if (!field.strictly_positive(&bu, &bt))
    fail(ErrorCode::DegenerateDenominator,
         "field vanishes at (u,t)=(" + std::to_string(bu) + "," + std::to_string(bt) +
             "); the density ratios are undefined");
  // The survival probability must stay alive on every finite slot, otherwise
  // the renormalized branch degenerates exactly where E[Z_t | F_t] = 1 would
  // have to be assumed rather than derived.
  for (int t = 0; t <= space.horizon(); ++t)
    for (int a = 0; a < space.n_atoms(); ++a)
      if (field.at(t, t)[a] == Rational(1))
        fail(ErrorCode::DegenerateDenominator,
             "survival vanishes at slot " + std::to_string(t) + ", atom " + space.atom_name(a));

  const int S = space.timeline().slots();
  const Rational one(1);
  Process z = Process::zeros(space, ProcessKind::Adapted);
  // The density is the published formula on the finite slots; the formal
  // terminal slot closes flat (the measure lives on the sigma-field at T).
  for (int t = 0; t < S - 1; ++t) {
    // sum_{u<=t} Zhat_{u,t} dF_{u,t}, with vanishing mass killing the 0/0.
    RandomVariable absorbed = RandomVariable::constant(space.n_atoms(), Rational());
    for (int u = 1; u <= t; ++u) {
      const RandomVariable& denom = field.at(u, t);
      const RandomVariable num = field.at(u, u) * field.mass(u, t);
      for (int a = 0; a < space.n_atoms(); ++a) absorbed[a] += ratio_or_zero(num[a], denom[a]);
    }
    const RandomVariable& f_t = field.at(t, t);
    for (int a = 0; a < space.n_atoms(); ++a) {
      if (tau[a] > t) {
        const Rational g = one - f_t[a];
        if (g.is_zero()) fail(ErrorCode::DegenerateDenominator, "G vanishes on {tau > t}");
        z.at[t][a] = (one - absorbed[a]) / g;
      } else {
        const Rational& denom = field.at(tau[a], t)[a];
        if (denom.is_zero())
          fail(ErrorCode::DegenerateDenominator, "F_{tau,t} vanishes on {tau <= t}");
        z.at[t][a] = field.at(tau[a], tau[a])[a] / denom;
      }
    }
  }
  z.at[S - 1] = z.at[S - 2];
  const EnlargedFiltration g = progressive_enlargement(space, tau);
  const auto verdict = is_martingale(space, z, g.filt);
  if (!verdict.pass)
    fail(ErrorCode::ValidationError,
         "immersion density fails the G-martingale check at step " +
             std::to_string(verdict.witness->slot));
  return z;
}

ImmersionMeasureResult immersion_measure(const FilteredSpace& space, const CondDistField& field,
                                         const RandomTime& tau) {
  const Process z = immersion_density(space, field, tau);
  const int T = space.horizon();
  const Rational one(1);
  for (int t = 0; t <= T; ++t) {
    for (int a = 0; a < space.n_atoms(); ++a)
      if (!z.at[t][a].is_positive())
        fail(ErrorCode::DensityNotPositive,
             "Z vanishes at slot " + std::to_string(t) + ", atom " + space.atom_name(a));
    const RandomVariable norm = cond_expect(space, z.at[t], t);
    for (int a = 0; a < space.n_atoms(); ++a)
      if (norm[a] != one)
        fail(ErrorCode::NormalizationFails,
             "E[Z_t | F_t] = " + norm[a].str() + " at slot " + std::to_string(t));
  }

  ImmersionMeasureResult out;
  out.pbar.density.assign(space.n_atoms(), Rational());
  for (int a = 0; a < space.n_atoms(); ++a) out.pbar.density[a] = z.at[T][a];
  const FilteredSpace changed = change_measure(space, out.pbar);

  // (H) for the finite slots under the new measure, plus agreement with the
  // base measure on the base filtration.
  out.xdee_holds = true;
  for (int u = 0; u <= T && out.xdee_holds; ++u) {
    RandomVariable ind = RandomVariable::constant(space.n_atoms(), Rational());
    for (int a = 0; a < space.n_atoms(); ++a) ind[a] = Rational(tau[a] <= u ? 1 : 0);
    const RandomVariable diag = cond_expect(changed, ind, u);
    for (int t = u; t <= T && out.xdee_holds; ++t) {
      const RandomVariable other = cond_expect(changed, ind, t);
      for (int a = 0; a < space.n_atoms(); ++a) {
        if (other[a] != diag[a]) {
          out.xdee_holds = false;
          out.detail = "Fbar_{" + std::to_string(u) + "," + std::to_string(u) + "} != Fbar_{" +
                       std::to_string(u) + "," + std::to_string(t) + "} at atom " +
                       space.atom_name(a);
          break;
        }
      }
    }
  }
  out.coincides_on_f = true;
  for (int t = 0; t <= T && out.coincides_on_f; ++t) {
    for (const auto& block : space.partition_at(t).blocks()) {
      if (changed.block_mass(block) != space.block_mass(block)) {
        out.coincides_on_f = false;
        out.detail = "block mass changes on " + space.block_label(block);
        break;
      }
    }
  }
  return out;
}

Measure project_measure(const FilteredSpace& space, const Measure& q_tilde,
                        const Measure& target) {
  if (!q_tilde.equivalent() || !target.equivalent())
    fail(ErrorCode::NotEquivalent, "projection needs equivalent measures");
  const FilteredSpace under_qt = change_measure(space, q_tilde);
  RandomVariable rho = RandomVariable::constant(space.n_atoms(), Rational());
  for (int a = 0; a < space.n_atoms(); ++a)
    rho[a] = target.density[a] / q_tilde.density[a];
  const RandomVariable eta = cond_expect(under_qt, rho, space.horizon());
  Measure q;
  q.density.assign(space.n_atoms(), Rational());
  for (int a = 0; a < space.n_atoms(); ++a) q.density[a] = eta[a] * q_tilde.density[a];
  return q;
}

namespace {

bool hypothesis_h_under(const FilteredSpace& space, const Measure& q, const RandomTime& tau) {
  const FilteredSpace changed = change_measure(space, q);
  const CondDistField field = conditional_distribution(changed, tau);
  return !check_h(changed, field).has_value();
}

}  // namespace

ProjectionReport verify_projection(const FilteredSpace& space, const RandomTime& tau,
                                   const Measure& q_tilde, const Measure& target,
                                   const Measure& q) {
  ProjectionReport rep;
  const FilteredSpace under_qt = change_measure(space, q_tilde);
  const EnlargedFiltration g = progressive_enlargement(space, tau);

  // eta_t = E_{q_tilde}[eta_inf | G_t] must be F-adapted.
  RandomVariable eta_inf = RandomVariable::constant(space.n_atoms(), Rational());
  for (int a = 0; a < space.n_atoms(); ++a)
    eta_inf[a] = q.density[a] / q_tilde.density[a];
  rep.density_adapted = true;
  for (int t = 0; t <= space.horizon(); ++t) {
    const RandomVariable eta_t = cond_expect_on(under_qt, eta_inf, g.at(t));
    if (!eta_t.constant_on(space.partition_at(t))) {
      rep.density_adapted = false;
      break;
    }
  }

  const FilteredSpace under_q = change_measure(space, q);
  const FilteredSpace under_target = change_measure(space, target);
  rep.coincides_on_f = true;
  for (const auto& block : space.partition_at(space.horizon()).blocks())
    if (under_q.block_mass(block) != under_target.block_mass(block)) {
      rep.coincides_on_f = false;
      break;
    }

  rep.immersion_under_q = hypothesis_h_under(space, q, tau);

  // Exhaustive transfer check over the basis of terminal block indicators:
  // every (target, F)-martingale is spanned by them.
  rep.transfers_martingales = true;
  for (const auto& block : space.partition_at(space.horizon()).blocks()) {
    RandomVariable ind = RandomVariable::constant(space.n_atoms(), Rational());
    for (int a : block) ind[a] = Rational(1);
    const Process xt = martingale_from_terminal(under_target, ind);
    const auto verdict = is_martingale(under_q, xt, g.filt);
    if (!verdict.pass) {
      rep.transfers_martingales = false;
      break;
    }
  }
  return rep;
}

MartingaleMeasureReport check_martingale_measure(const FilteredSpace& space, const Process& x,
                                                 const Measure& q,
                                                 const EnlargedFiltration& enlargement) {
  if (!q.equivalent()) fail(ErrorCode::NotEquivalent, "Q must be an equivalent measure");
  const FilteredSpace under_q = change_measure(space, q);
  MartingaleMeasureReport rep;
  rep.x_under_f = is_martingale(under_q, x);
  rep.immersion_under_q = hypothesis_h_under(space, q, enlargement.tau);
  rep.x_under_k = is_martingale(under_q, x, enlargement.filt);
  return rep;
}

MarketScenario make_market_scenario(const FilteredSpace& space, const Process& x,
                                    const RandomTime& tau, const CondDistField& field) {
  if (!is_adapted(space, x)) fail(ErrorCode::NotAdapted, "price process must be adapted");
  MarketScenario ms;
  ms.x = x;
  ms.tau = tau;
  ms.field = field;
  const Decomposition doob = doob_decomposition(space, x);
  ms.u = doob.martingale_part;
  Process drift = doob.fv_part;
  if (doob.orientation == DoobOrientation::Minus) {
    for (int s = 0; s < drift.slots(); ++s) drift.at[s] = Rational(-1) * drift.at[s];
  }
  const Process bracket = angle_bracket(space, ms.u, ms.u);
  ms.phi = Process::zeros(space, ProcessKind::Predictable);
  for (int t = 1; t < x.slots(); ++t) {
    const RandomVariable db = drift.delta(t);
    const RandomVariable dq = bracket.delta(t);
    for (int a = 0; a < space.n_atoms(); ++a) {
      if (dq[a].is_zero()) {
        if (!db[a].is_zero())
          fail(ErrorCode::ValidationError,
               "drift increment without bracket mass at slot " + std::to_string(t));
        continue;
      }
      ms.phi.at[t][a] = db[a] / dq[a];
    }
  }
  return ms;
}

InformationDriftResult information_drift(const FilteredSpace& space, const MarketScenario& market,
                                         const EDData& ed) {
  if (auto w = verify_ed(space, market.field, ed)) fail(ErrorCode::EDVerificationFails, w->detail);
  const Process& u = market.u;
  const auto mart = is_martingale(space, u);
  if (!mart.pass) fail(ErrorCode::NotMartingale, "market martingale part fails its own check");

  const TauKit kit = make_tau_kit(space, market.tau);
  const int S = space.timeline().slots();
  const Process uu = angle_bracket(space, u, u);

  InformationDriftResult out;
  // eta regresses Mbar on U; the jump compensation of the stopped part is
  // folded in because d<U,Mbar> = d<U,M> + dUbreve^p holds exactly.
  out.eta = Process::zeros(space, ProcessKind::Predictable);
  for (int t = 1; t < S; ++t) {
    const RandomVariable cov = cond_expect(space, u.delta(t) * kit.mbar.delta(t), t - 1);
    const RandomVariable dq = uu.delta(t);
    for (int a = 0; a < space.n_atoms(); ++a)
      out.eta.at[t][a] = ratio_or_zero(cov[a], dq[a]);
  }
  out.kw_residual = kit.mbar - stochastic_integral(space, out.eta, u);

  // xi_{s,.} regresses the kernel rows on U.
  std::vector<Process> kernels(S);
  std::vector<std::vector<RandomVariable>> xi(S);
  for (int s = 0; s < S; ++s) {
    kernels[s] = Process::zeros(space, ProcessKind::Adapted);
    for (int t = 0; t < S; ++t)
      kernels[s].at[t] = (t >= s) ? ed.m_at(s, t) : cond_expect(space, ed.m_at(s, s), t);
    xi[s].assign(S, RandomVariable::constant(space.n_atoms(), Rational()));
    for (int t = s + 1; t < S; ++t) {
      const RandomVariable cov = cond_expect(space, u.delta(t) * kernels[s].delta(t), t - 1);
      const RandomVariable dq = uu.delta(t);
      for (int a = 0; a < space.n_atoms(); ++a) xi[s][t][a] = ratio_or_zero(cov[a], dq[a]);
    }
  }

  out.psi = Process::zeros(space, ProcessKind::Raw);
  Process drift = Process::zeros(space, ProcessKind::FiniteVariation);
  for (int t = 1; t < S; ++t) {
    drift.at[t] = drift.at[t - 1];
    for (int a = 0; a < space.n_atoms(); ++a) {
      Rational psi;
      if (kit.tau[a] >= t) {
        psi = out.eta.at[t][a] / kit.gproc.at[t - 1][a];
      } else {
        const int s = kit.tau[a];
        psi = ratio_or_zero(xi[s][t][a], kernels[s].at[t - 1][a]);
      }
      out.psi.at[t][a] = psi;
      drift.at[t][a] += psi * uu.delta(t)[a];
    }
  }
  if (!is_predictable(space, out.psi, kit.g.filt))
    fail(ErrorCode::ValidationError, "information drift density is not G-predictable");

  out.decomposition.variant = DecompositionVariant::PseudoInitial;
  out.decomposition.input = u;
  out.decomposition.drift = std::move(drift);
  out.decomposition.martingale_part = u - out.decomposition.drift;
  return out;
}

}  // namespace filtlab
