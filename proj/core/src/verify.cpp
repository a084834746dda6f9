#include "filtlab/verify.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <json.hpp>

#include "filtlab/finance.hpp"
#include "filtlab/generators.hpp"
#include "filtlab/runner.hpp"

namespace filtlab {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::Unknown: return "UNKNOWN";
    case CheckStatus::Skipped: return "SKIPPED";
  }
  return "?";
}

int Report::n_with(CheckStatus s) const {
  int n = 0;
  for (const auto& c : checks)
    if (c.status == s) ++n;
  return n;
}

void Report::add(std::string name, CheckStatus status, std::string detail) {
  checks.push_back(CheckResult{std::move(name), status, std::move(detail)});
}

std::string Report::to_json() const {
  nlohmann::json root;
  root["command"] = command;
  root["seed"] = seed;
  nlohmann::json jc = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json item;
    item["name"] = c.name;
    item["verdict"] = to_string(c.status);
    item["detail"] = c.detail;
    jc.push_back(std::move(item));
  }
  root["checks"] = std::move(jc);
  root["summary"] = {{"pass", n_with(CheckStatus::Pass)},
                     {"fail", n_with(CheckStatus::Fail)},
                     {"unknown", n_with(CheckStatus::Unknown)},
                     {"skipped", n_with(CheckStatus::Skipped)}};
  root["timing_ms"] = timing_ms;
  return root.dump(2) + "\n";
}

std::string Report::to_text() const {
  std::ostringstream os;
  os << "# " << command << " (seed " << seed << ")\n";
  for (const auto& c : checks) {
    os << "[" << to_string(c.status) << "] " << c.name;
    if (!c.detail.empty()) os << " -- " << c.detail;
    os << "\n";
  }
  os << "pass " << n_with(CheckStatus::Pass) << ", fail " << n_with(CheckStatus::Fail)
     << ", unknown " << n_with(CheckStatus::Unknown) << ", skipped "
     << n_with(CheckStatus::Skipped) << " (" << timing_ms << " ms)\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Check catalogue

namespace {

bool equal_process(const Process& a, const Process& b) {
  if (a.slots() != b.slots()) return false;
  for (int s = 0; s < a.slots(); ++s)
    if (!(a.at[s] == b.at[s])) return false;
  return true;
}

// Precondition-style errors downgrade a check to SKIPPED; anything else is a
// FAIL with the error text.
bool is_precondition_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::HypothesisHPFails:
    case ErrorCode::FieldNotStrictlyPositive:
    case ErrorCode::SeparabilityPreconditionFails:
    case ErrorCode::EDVerificationFails:
    case ErrorCode::PositivityFails:
    case ErrorCode::NotHonest:
    case ErrorCode::DensityNotPositive:
    case ErrorCode::NormalizationFails:
      return true;
    default:
      return false;
  }
}

struct CheckContext {
  const FilteredSpace& space;
  const RandomTime& tau;
  const CondDistField& field;
  gen::Rng& rng;
  Report& report;

  // Optional structure attached by fixtures or scenario files.
  const EDData* ed = nullptr;
  const Factorization* kl = nullptr;
  const Process* f = nullptr;            // prescribed submartingale
  const RandomTime* tau_hat = nullptr;   // auxiliary optional-construction time
  const Process* given_u = nullptr;      // test martingale from the file
  const Process* market_x = nullptr;
};

void run_check(CheckContext& ctx, const std::string& name,
               const std::function<void(std::string&)>& body,
               ErrorCode extra_skip = ErrorCode::ValidationError) {
  std::string detail;
  try {
    body(detail);
    ctx.report.add(name, CheckStatus::Pass, detail);
  } catch (const Error& e) {
    if (is_precondition_code(e.code()) ||
        (extra_skip != ErrorCode::ValidationError && e.code() == extra_skip))
      ctx.report.add(name, CheckStatus::Skipped, e.what());
    else
      ctx.report.add(name, CheckStatus::Fail, e.what());
  } catch (const std::exception& e) {
    ctx.report.add(name, CheckStatus::Fail, e.what());
  }
}

void expect(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::ValidationError, what);
}

void expect_martingale(const FilteredSpace& space, const Process& x, const Filtration& filt,
                       const std::string& what) {
  const auto verdict = is_martingale(space, x, filt);
  if (!verdict.pass)
    fail(ErrorCode::ValidationError,
         what + " fails at step " + std::to_string(verdict.witness->slot) + " on block " +
             verdict.witness->block + " (" + verdict.witness->lhs.str() + " vs " +
             verdict.witness->rhs.str() + ")");
}

Process test_martingale(CheckContext& ctx) {
  if (ctx.given_u) return *ctx.given_u;
  return gen::martingale(ctx.rng, ctx.space);
}

void all_checks(CheckContext& ctx) {
  const FilteredSpace& space = ctx.space;
  const RandomTime& tau = ctx.tau;
  const int S = space.timeline().slots();
  const int term = S - 1;

  run_check(ctx, "field-axioms", [&](std::string&) { ctx.field.validate(space); });

  run_check(ctx, "classification", [&](std::string& detail) {
    const Classification c = classify_field(space, tau, ctx.field);
    std::ostringstream os;
    os << "H=" << (c.h ? "yes" : "no") << " HP=" << (c.hp ? "yes" : "no")
       << " completely_separable=" << to_string(c.complete_separability.verdict)
       << " honest=" << (c.honest ? "yes" : "no")
       << " strictly_positive=" << (c.strictly_positive_field ? "yes" : "no");
    detail = os.str();
    expect(c.ed_with_candidate, "telescoping kernel candidate failed on a valid field");
    if (c.h) expect(c.hp, "implication H => HP broke");
    if (c.completely_separable) expect(c.hp, "implication separable => HP broke");
    expect(c.honest == (c.f_infty_measurable && c.hp), "honest characterization broke");
  });

  run_check(ctx, "enlargement-traces", [&](std::string&) {
    const EnlargedFiltration g = progressive_enlargement(space, tau);
    expect(tau.is_stopping_time(space) ||
               [&] {
                 // tau must become a stopping time of its own enlargement.
                 for (int t = 0; t <= space.horizon(); ++t) {
                   const Partition& p = g.at(t);
                   for (const auto& block : p.blocks()) {
                     const bool in = tau[block.front()] <= t;
                     for (int a : block)
                       if ((tau[a] <= t) != in) return false;
                   }
                 }
                 return true;
               }(),
           "tau is not a stopping time of the progressive enlargement");
    expect(!check_admissibility(space, g.filt, tau, AdmissibilitySide::Before).has_value(),
           "progressive enlargement is not admissible before tau");
    expect(!check_admissibility(space, g.filt, tau, AdmissibilitySide::After).has_value(),
           "progressive enlargement is not admissible after tau");
    // Minimality against the independent join construction.
    for (int t = 0; t <= space.horizon(); ++t) {
      std::vector<long> keys(space.n_atoms());
      for (int a = 0; a < space.n_atoms(); ++a) {
        const long mark = tau[a] <= t ? tau[a] : (space.timeline().inf_slot() + 1);
        keys[a] = static_cast<long>(space.partition_at(t).block_of(a)) *
                      (space.timeline().inf_slot() + 3) +
                  mark;
      }
      expect(Partition::from_keys(keys) == g.at(t), "join construction disagrees at t=" +
                                                        std::to_string(t));
    }
  });

  run_check(ctx, "jeulin-yor", [&](std::string&) {
    const Process h = indicator_process(space, tau);
    const Process hpg = compensator_g_jeulin_yor(space, tau);
    const EnlargedFiltration g = progressive_enlargement(space, tau);
    expect_martingale(space, h - hpg, g.filt, "H - H^{p,G}");
  });

  run_check(ctx, "terminal-decompositions", [&](std::string&) {
    const TauKit kit = make_tau_kit(space, tau);
    for (int t = 0; t < S; ++t)
      for (int a = 0; a < space.n_atoms(); ++a) {
        expect(kit.gproc.at[t][a] == kit.mbar.at[t][a] - kit.ho.at[t][a],
               "G != Mbar - H^o at slot " + std::to_string(t));
        expect(kit.gproc.at[t][a] == kit.mtilde.at[t][a] - kit.hp.at[t][a],
               "G != Mtilde - H^p at slot " + std::to_string(t));
      }
    // The Doob drift of G and the compensator of H share all increments
    // after time zero; slot 0 carries the {tau = 0} mass only on H^p.
    for (int t = 1; t < S; ++t)
      for (int a = 0; a < space.n_atoms(); ++a)
        expect(kit.hp.delta(t)[a] == kit.a.delta(t)[a],
               "dH^p != dA at slot " + std::to_string(t));
    expect(kit.hp.at[0] == ctx.field.at(0, 0), "H^p_0 != F_{0,0}");
  });

  run_check(ctx, "dual-projection-property", [&](std::string&) {
    const Process h = indicator_process(space, tau);
    const Process ho = dual_optional_projection(space, h);
    const Process hp = dual_predictable_projection(space, h);
    if (auto w = verify_dual_projection(space, h, ho, false))
      fail(ErrorCode::ValidationError, "optional dual projection fails at slot " +
                                           std::to_string(w->slot) + " block " + w->block);
    if (auto w = verify_dual_projection(space, h, hp, true))
      fail(ErrorCode::ValidationError, "predictable dual projection fails at slot " +
                                           std::to_string(w->slot) + " block " + w->block);
  });

  run_check(ctx, "compensator-coherence", [&](std::string&) {
    const EDData ed = ctx.ed ? *ctx.ed : canonical_ed_candidate(space, ctx.field);
    if (auto w = verify_ed(space, ctx.field, ed)) fail(ErrorCode::EDVerificationFails, w->detail);
    const Process via_kernel = compensator_pseudo_initial(space, ed);
    const Process hp = compensator_f(space, tau);
    expect(equal_process(via_kernel, hp), "kernel compensator differs from dual projection");
    expect_martingale(space, kernel_defect_process(space, ed), space.filtration(),
                      "kernel defect process");
  });

  const Process u = test_martingale(ctx);
  const EnlargedFiltration g = progressive_enlargement(space, tau);

  run_check(ctx, "stopped-decomposition", [&](std::string&) {
    const GDecomposition pred =
        decompose_stopped(space, tau, u, DecompositionVariant::StoppedPredictable);
    const GDecomposition opt =
        decompose_stopped(space, tau, u, DecompositionVariant::StoppedOptional);
    expect_martingale(space, pred.martingale_part, g.filt, "stopped predictable variant");
    expect_martingale(space, opt.martingale_part, g.filt, "stopped optional variant");
    expect(equal_process(pred.drift, opt.drift), "the two stopped drifts differ");
  });

  run_check(ctx, "jump-compensation", [&](std::string&) {
    // Lemma-style check: dU_tau 1_{tau<=t} minus its Jeulin-Yor compensation
    // is a G-martingale.
    const TauKit kit = make_tau_kit(space, tau);
    Process breve = Process::zeros(space, ProcessKind::FiniteVariation);
    for (int t = 0; t < S; ++t)
      for (int a = 0; a < space.n_atoms(); ++a)
        if (tau[a] >= 1 && tau[a] <= t) breve.at[t][a] = u.delta(tau[a])[a];
    Process comp = Process::zeros(space, ProcessKind::FiniteVariation);
    for (int t = 1; t < S; ++t) {
      comp.at[t] = comp.at[t - 1];
      const RandomVariable num = cond_expect(space, u.delta(t) * kit.h.delta(t), t - 1);
      for (int a = 0; a < space.n_atoms(); ++a)
        if (tau[a] >= t) comp.at[t][a] += num[a] / kit.gproc.at[t - 1][a];
    }
    expect_martingale(space, breve - comp, g.filt, "jump compensation");
  });

  run_check(ctx, "initial-enlargement-drift", [&](std::string&) {
    const Process b = g_star_drift(space, tau, u);
    const GDecomposition d = decompose_via_initial(space, tau, u, b);
    expect_martingale(space, d.martingale_part, g.filt, "via-initial variant");
  });

  run_check(ctx, "pseudo-initial-decomposition", [&](std::string&) {
    const EDData ed = ctx.ed ? *ctx.ed : canonical_ed_candidate(space, ctx.field);
    const GDecomposition d = decompose_pseudo_initial(space, ed, tau, u);
    expect_martingale(space, d.martingale_part, g.filt, "pseudo-initial variant");
    const Process b = g_star_drift(space, tau, u);
    const GDecomposition via = decompose_via_initial(space, tau, u, b);
    expect(equal_process(d.drift, via.drift),
           "pseudo-initial and via-initial drifts disagree");
  });

  run_check(ctx, "pseudo-honest-decomposition", [&](std::string& detail) {
    PseudoHonestBlocks blocks;
    const GDecomposition d = decompose_pseudo_honest(space, ctx.field, tau, u, &blocks);
    expect_martingale(space, d.martingale_part, g.filt, "pseudo-honest variant");
    // Round trip through the building-block verifier. The all-pairs block
    // conditions assume every row is positive or carries no mass at all; a
    // mass-at-zero row vanishing on part of the space sits outside them
    // (the decomposition above is still exact).
    bool row0_mixed = false;
    {
      bool any_zero = false, any_pos = false;
      for (int a = 0; a < space.n_atoms(); ++a) {
        if (ctx.field.at(0, S - 1)[a].is_zero()) any_zero = true;
        else any_pos = true;
      }
      row0_mixed = any_zero && any_pos;
    }
    if (!row0_mixed) {
      UhatMap map;
      map.rows = blocks.u_hat;
      const auto report = verify_building_blocks(space, ctx.field, tau, blocks.u_tilde, map,
                                                 BlockCondition::Field);
      expect(report.diagonal_predictable, "building blocks: diagonal not predictable");
      expect(report.condition_i, "building blocks: condition (i) fails");
      expect(report.condition_ii, "building blocks: condition (ii) fails");
      expect(report.conclusion, "building blocks: conclusion fails");
    } else {
      detail = "block round trip not applicable (mixed mass at zero)";
    }
    // Cross-variant uniqueness against the kernel route.
    const EDData ed = ctx.ed ? *ctx.ed : canonical_ed_candidate(space, ctx.field);
    const GDecomposition k = decompose_pseudo_initial(space, ed, tau, u);
    expect(equal_process(d.drift, k.drift), "pseudo-honest and kernel drifts disagree");
  });

  run_check(ctx, "honest-decomposition", [&](std::string&) {
    const GDecomposition classic =
        decompose_honest(space, tau, u, DecompositionVariant::HonestClassic);
    const GDecomposition barm = decompose_honest(space, tau, u, DecompositionVariant::HonestBarM);
    expect_martingale(space, classic.martingale_part, g.filt, "honest classic variant");
    expect_martingale(space, barm.martingale_part, g.filt, "honest optional variant");
    expect(equal_process(classic.drift, barm.drift), "honest after-tau sums disagree");
  });

  run_check(ctx, "g-cond-expect-oracle", [&](std::string&) {
    const EnlargedFiltration gg = progressive_enlargement(space, tau);
    const PayoffMap pay = gen::payoff(ctx.rng, space);
    const RandomVariable target = pay.at_tau(tau);
    const EDData ed = ctx.ed ? *ctx.ed : canonical_ed_candidate(space, ctx.field);
    const bool hp_ok = !check_hp(space, ctx.field).has_value();
    for (int t = 0; t < S; ++t) {
      const RandomVariable brute = g_cond_expect_brute(space, gg, target, t);
      const RandomVariable viakernel =
          g_cond_expect_pseudo_initial(space, ctx.field, ed, tau, pay, t);
      expect(viakernel == brute, "kernel formula disagrees with the oracle at t=" +
                                     space.timeline().label(t));
      if (hp_ok) {
        const RandomVariable viafield =
            g_cond_expect_pseudo_honest(space, ctx.field, tau, pay, t);
        expect(viafield == brute, "renormalization formula disagrees with the oracle at t=" +
                                      space.timeline().label(t));
      }
    }
  });

  run_check(ctx, "after-tau-trace", [&](std::string&) {
    // On {tau <= t}, conditioning on G_t and on the initial enlargement agree.
    const EnlargedFiltration gg = progressive_enlargement(space, tau);
    const EnlargedFiltration gs = initial_enlargement(space, tau);
    RandomVariable x = RandomVariable::constant(space.n_atoms(), Rational());
    for (int a = 0; a < space.n_atoms(); ++a) x[a] = ctx.rng.rat_in(-2, 2);
    for (int t = 0; t < S; ++t) {
      RandomVariable cut = x;
      for (int a = 0; a < space.n_atoms(); ++a)
        if (tau[a] > t) cut[a] = Rational();
      const RandomVariable via_g = cond_expect_on(space, cut, gg.at(t));
      const RandomVariable via_gs = cond_expect_on(space, cut, gs.at(t));
      for (int a = 0; a < space.n_atoms(); ++a)
        if (tau[a] <= t)
          expect(via_g[a] == via_gs[a], "trace conditioning differs at t=" +
                                            space.timeline().label(t));
    }
  });

  run_check(ctx, "terminal-value-identities", [&](std::string&) {
    const TauKit kit = make_tau_kit(space, tau);
    for (int i = 0; i < 3; ++i) {
      const Process n = gen::martingale_null_at_zero(ctx.rng, space);
      Rational at_tau, before_tau;
      for (int a = 0; a < space.n_atoms(); ++a) {
        at_tau += n.at[tau[a]][a] * space.prob(a);
        if (tau[a] >= 1) before_tau += n.at[tau[a] - 1][a] * space.prob(a);
      }
      const Rational opt = expectation(space, angle_bracket(space, n, kit.mbar).at[term]);
      const Rational pre = expectation(space, angle_bracket(space, n, kit.mtilde).at[term]);
      expect(at_tau == opt, "E[N_tau] != E[<N,Mbar>_inf]");
      expect(before_tau == pre, "E[N_{tau-}] != E[<N,Mtilde>_inf]");
    }
  });

  {
    SeparabilityResult sep;
    if (ctx.kl) {
      sep.verdict = TriVerdict::Pass;
      sep.factors = *ctx.kl;
    } else {
      sep = check_complete_separability(space, ctx.field);
    }
    if (sep.verdict == TriVerdict::Unknown) {
      ctx.report.add("separability", CheckStatus::Unknown,
                     sep.note.empty() ? "ratio search inconclusive" : sep.note);
    } else if (sep.verdict == TriVerdict::Fail) {
      ctx.report.add("separability", CheckStatus::Pass, "not completely separable");
    } else {
      run_check(ctx, "separability", [&](std::string& detail) {
        const Process& k = sep.factors->k;
        const Process& l = sep.factors->l;
        for (int s = 0; s < S; ++s)
          for (int t = s; t < S; ++t)
            for (int a = 0; a < space.n_atoms(); ++a)
              expect(k.at[s][a] * l.at[t][a] == ctx.field.at(s, t)[a],
                     "factorization does not reproduce the field");
        if (is_predictable(space, k)) {
          const SeparableCompensators comp = compensator_separable(space, tau, k, l);
          const Process hp = compensator_f(space, tau);
          for (int t = 1; t < S; ++t)
            for (int a = 0; a < space.n_atoms(); ++a)
              expect(comp.f_compensator.delta(t)[a] == hp.delta(t)[a],
                     "separable compensator differs from the dual projection");
          expect(equal_process(comp.g_compensator, compensator_g_jeulin_yor(space, tau)),
                 "separable enlarged compensator differs from the Jeulin-Yor form");
        }
        const GDecomposition d = decompose_separable(space, k, l, tau, u);
        expect_martingale(space, d.martingale_part, g.filt, "separable variant");
        detail = "factors verified";
      });
    }
  }

  run_check(ctx, "immersion-measure", [&](std::string&) {
    const ImmersionMeasureResult res = immersion_measure(space, ctx.field, tau);
    expect(res.xdee_holds, "diagonal invariance fails under the new measure: " + res.detail);
    expect(res.coincides_on_f, "the new measure moves the base filtration: " + res.detail);
    // Transfer: base-measure martingales stay enlarged martingales under the
    // new measure. The terminal block indicators span all of them.
    const FilteredSpace changed = change_measure(space, res.pbar);
    for (const auto& block : space.partition_at(space.horizon()).blocks()) {
      RandomVariable ind = RandomVariable::constant(space.n_atoms(), Rational());
      for (int a : block) ind[a] = Rational(1);
      const Process mart = martingale_from_terminal(space, ind);
      expect_martingale(changed, mart, g.filt, "martingale transfer under the new measure");
    }
  }, ErrorCode::DegenerateDenominator);

  if (ctx.f) {
    run_check(ctx, "multiplicative-round-trip", [&](std::string&) {
      const MultiplicativeSystem system = predictable_multiplicative_system(space, *ctx.f);
      const CondDistField field = field_from_system(space, *ctx.f, system);
      if (auto w = check_hp(space, field))
        fail(ErrorCode::ValidationError, "constructed field fails HP");
      const ExtendedSpace ext = canonical_extension(space, field);
      // canonical_extension already verifies the realized field matches; the
      // diagonal is the prescribed submartingale by construction.
      for (int t = 0; t < S; ++t)
        for (int e = 0; e < ext.space.n_atoms(); ++e)
          expect(field.at(t, t)[ext.base_atom[e]] == ctx.f->at[t][ext.base_atom[e]],
                 "extension diagonal mismatch");
    });
  }

  if (ctx.f && ctx.tau_hat) {
    run_check(ctx, "opt-mult-decomposition", [&](std::string&) {
      const GDecomposition d = decompose_opt_mult(space, *ctx.f, *ctx.tau_hat, tau, u);
      expect_martingale(space, d.martingale_part, g.filt, "optional-construction variant");
    });
  }
  if (ctx.f && !ctx.tau_hat) {
    run_check(ctx, "pred-mult-decomposition", [&](std::string&) {
      const GDecomposition d = decompose_pred_mult(space, *ctx.f, tau, u);
      expect_martingale(space, d.martingale_part, g.filt, "predictable-construction variant");
      const GDecomposition ph = decompose_pseudo_honest(space, ctx.field, tau, u);
      expect(equal_process(d.drift, ph.drift),
             "predictable-construction drift differs from the general drift");
    });
  }

  run_check(ctx, "information-drift", [&](std::string&) {
    const EDData ed = ctx.ed ? *ctx.ed : canonical_ed_candidate(space, ctx.field);
    Process x;
    if (ctx.market_x) {
      x = *ctx.market_x;
    } else {
      // Synthesize a market: X = U + (phi . <U,U>) with predictable phi.
      Process phi = Process::zeros(space, ProcessKind::Predictable);
      for (int t = 1; t < S; ++t)
        for (const auto& block : space.partition_at(t - 1).blocks()) {
          const Rational v = ctx.rng.rat_in(-1, 1);
          for (int a : block) phi.at[t][a] = v;
        }
      const Process bracket = angle_bracket(space, u, u);
      x = u + stochastic_integral(space, phi, bracket);
    }
    const MarketScenario market = make_market_scenario(space, x, tau, ctx.field);
    const InformationDriftResult res = information_drift(space, market, ed);
    expect_martingale(space, res.decomposition.martingale_part, g.filt,
                      "information-drift decomposition");
    const Process ortho = angle_bracket(space, market.u, res.kw_residual);
    for (int t = 0; t < S; ++t)
      for (int a = 0; a < space.n_atoms(); ++a)
        expect(ortho.at[t][a].is_zero(), "regression residual is not orthogonal");
    const GDecomposition k = decompose_pseudo_initial(space, ed, tau, market.u);
    expect(equal_process(res.decomposition.drift, k.drift),
           "information drift disagrees with the kernel decomposition");
  });
}

}  // namespace

Report verify_scenario(const Scenario& scenario, std::uint64_t seed) {
  Report report;
  report.command = "verify";
  report.seed = seed;
  gen::Rng rng(seed);

  if (!scenario.tau && !scenario.field) {
    report.add("scenario", CheckStatus::Skipped, "no random time or field to verify");
    return report;
  }

  FilteredSpace space = scenario.space;
  RandomTime tau;
  CondDistField field;
  if (scenario.tau) {
    tau = *scenario.tau;
    field = conditional_distribution(space, tau);
    if (scenario.field) {
      const int S = space.timeline().slots();
      bool same = true;
      for (int u = 0; u < S && same; ++u)
        for (int t = 0; t < S && same; ++t)
          if (!(scenario.field->at(u, t) == field.at(u, t))) same = false;
      report.add("field-matches-tau", same ? CheckStatus::Pass : CheckStatus::Fail,
                 same ? "" : "supplied field differs from the conditional distribution of tau");
      if (!same) return report;
    }
  } else {
    // Field without a time: realize it on the canonical extension first.
    const ExtendedSpace ext = canonical_extension(space, *scenario.field);
    space = ext.space;
    tau = ext.tau;
    field = ext.lift(*scenario.field);
    report.add("realized-on-extension", CheckStatus::Pass,
               std::to_string(space.n_atoms()) + " extension atoms");
  }

  CheckContext ctx{space, tau, field, rng, report};
  if (scenario.ed) ctx.ed = &*scenario.ed;
  const Process* given_u = nullptr;
  if (auto it = scenario.processes.find("U"); it != scenario.processes.end())
    given_u = &it->second;
  ctx.given_u = given_u;
  const Process* given_f = nullptr;
  if (auto it = scenario.processes.find("F"); it != scenario.processes.end())
    given_f = &it->second;
  ctx.f = given_f;
  if (scenario.market_x) ctx.market_x = &*scenario.market_x;
  all_checks(ctx);
  return report;
}

Report verify_generated(std::uint64_t seed, int count, int threads) {
  struct Family {
    const char* name;
    std::function<gen::Fixture(gen::Rng&)> make;
  };
  const std::vector<Family> families = {
      {"generic", [](gen::Rng& r) { return gen::generic_fixture(r); }},
      {"honest", [](gen::Rng& r) { return gen::honest_fixture(r); }},
      {"pred-mult", [](gen::Rng& r) { return gen::pred_mult_fixture(r); }},
      {"opt-mult", [](gen::Rng& r) { return gen::opt_mult_fixture(r); }},
      {"separable", [](gen::Rng& r) { return gen::separable_fixture(r, true); }},
      {"ed", [](gen::Rng& r) { return gen::ed_fixture(r); }},
      {"independent", [](gen::Rng& r) { return gen::independent_fixture(r); }},
  };

  const int jobs = static_cast<int>(families.size()) * count;
  std::vector<std::vector<CheckResult>> results(jobs);
  parallel_for(jobs, threads, [&](int i) {
    const int family = i / count;
    const int index = i % count;
    gen::Rng rng(seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(i) + 1);
    Report local;
    const gen::Fixture fx = families[family].make(rng);
    CheckContext ctx{fx.space, fx.tau, fx.field, rng, local};
    if (fx.ed) ctx.ed = &*fx.ed;
    if (fx.kl) ctx.kl = &*fx.kl;
    if (fx.f) ctx.f = &*fx.f;
    if (fx.tau_hat) ctx.tau_hat = &*fx.tau_hat;
    all_checks(ctx);
    for (auto& c : local.checks) {
      c.name = std::string(families[family].name) + "/" + c.name;
      if (c.status == CheckStatus::Fail)
        c.detail = "scenario " + std::to_string(index) + ": " + c.detail;
    }
    results[i] = std::move(local.checks);
  });

  // Aggregate per family/check, keeping the first failure witness.
  Report report;
  report.command = "verify-all";
  report.seed = seed;
  std::map<std::string, std::array<int, 4>> counts;
  std::map<std::string, std::string> first_fail;
  std::vector<std::string> order;
  for (const auto& chunk : results) {
    for (const auto& c : chunk) {
      auto [it, fresh] = counts.emplace(c.name, std::array<int, 4>{0, 0, 0, 0});
      if (fresh) order.push_back(c.name);
      ++(it->second[static_cast<int>(c.status)]);
      if (c.status == CheckStatus::Fail && !first_fail.count(c.name)) first_fail[c.name] = c.detail;
    }
  }
  for (const auto& name : order) {
    const auto& n = counts[name];
    const int fails = n[static_cast<int>(CheckStatus::Fail)];
    std::ostringstream detail;
    detail << n[0] << " pass";
    if (fails) detail << ", " << fails << " fail: " << first_fail[name];
    if (n[2]) detail << ", " << n[2] << " unknown";
    if (n[3]) detail << ", " << n[3] << " skipped";
    report.add(name, fails ? CheckStatus::Fail : CheckStatus::Pass, detail.str());
  }
  return report;
}

}  // namespace filtlab
