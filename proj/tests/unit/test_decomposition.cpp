#include <doctest.h>

#include <filtlab/decomposition.hpp>
#include <filtlab/generators.hpp>

#include "fixtures.hpp"

using namespace filtlab;
using namespace testfx;

namespace {

void check_g_martingale(const FilteredSpace& sp, const RandomTime& tau, const Process& x) {
  const EnlargedFiltration g = progressive_enlargement(sp, tau);
  const auto verdict = is_martingale(sp, x, g.filt);
  CHECK(verdict.pass);
  if (!verdict.pass && verdict.witness)
    MESSAGE("witness at step ", verdict.witness->slot, " block ", verdict.witness->block);
}

bool same_process(const Process& a, const Process& b) {
  for (int s = 0; s < a.slots(); ++s)
    if (!(a.at[s] == b.at[s])) return false;
  return true;
}

}  // namespace

TEST_CASE("F-compensator of the indicator") {
  const FilteredSpace s1 = s1_space();
  const RandomTime tau = s1_tau();
  const Process hp = compensator_f(s1, tau);
  CHECK(hp.delta(1) == rv4("1/4", "1/4", "1/4", "1/4"));
  CHECK(hp.delta(2) == rv4("1/2", "1/2", "1/2", "1/2"));
  CHECK(hp.delta(3) == rv4("0", "0", "0", "1"));

  SUBCASE("stopping times are their own compensators") {
    RandomTime st;
    st.value = {1, 1, 2, 2};
    const Process h = indicator_process(s1, st);
    CHECK(same_process(compensator_f(s1, st), dual_predictable_projection(s1, h)));
    // A predictable-in-the-strong-sense deterministic time: H^p = H.
    RandomTime det;
    det.value = {2, 2, 2, 2};
    CHECK(same_process(compensator_f(s1, det), indicator_process(s1, det)));
  }
  SUBCASE("a time at infinity is compensated at the terminal slot only") {
    RandomTime never;
    never.value = {3, 3, 3, 3};
    const Process c = compensator_f(s1, never);
    for (int t = 0; t <= 2; ++t)
      for (int a = 0; a < 4; ++a) CHECK(c.at[t][a].is_zero());
    CHECK(c.at[3] == rv4("1", "1", "1", "1"));
  }
}

TEST_CASE("Jeulin-Yor compensator") {
  const FilteredSpace s1 = s1_space();
  const RandomTime tau = s1_tau();
  const Process hpg = compensator_g_jeulin_yor(s1, tau);
  CHECK(hpg.at[1] == rv4("1/4", "1/4", "1/4", "1/4"));
  CHECK(hpg.at[2][1] == Rational(5, 4));
  CHECK(hpg.at[2][0] == Rational(1, 4));
  CHECK(hpg.at[2][2] == Rational(3, 4));
  CHECK(hpg.at[3][3] == Rational(7, 4));
  check_g_martingale(s1, tau, indicator_process(s1, tau) - hpg);

  SUBCASE("exact martingale property on random times") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      gen::Rng rng(seed * 5);
      const FilteredSpace sp = gen::space(rng);
      const RandomTime t2 = gen::random_time(rng, sp);
      check_g_martingale(sp, t2, indicator_process(sp, t2) - compensator_g_jeulin_yor(sp, t2));
    }
  }
  SUBCASE("stopping times: the compensator is H^p stopped at tau") {
    const FilteredSpace s1b = s1_space();
    RandomTime st;
    st.value = {1, 1, 2, 2};
    const Process hp = compensator_f(s1b, st);
    const Process jy = compensator_g_jeulin_yor(s1b, st);
    CHECK(same_process(jy, stop_at(s1b, hp, st)));
  }
}

TEST_CASE("stopped decomposition and its uniqueness identity") {
  const FilteredSpace s1 = s1_space();
  const RandomTime tau = s1_tau();
  const TauKit kit = make_tau_kit(s1, tau);

  SUBCASE("S1 with U = M: bracket and jump terms cancel at the first step") {
    const Process mm = angle_bracket(s1, kit.m, kit.m);
    CHECK(mm.at[1] == rv4("1/16", "1/16", "1/16", "1/16"));
    const GDecomposition d =
        decompose_stopped(s1, tau, kit.m, DecompositionVariant::StoppedPredictable);
    // The jump compensator contributes -1/16 at the first step, so the full
    // drift starts flat; the martingale check is the binding contract.
    for (int a = 0; a < 4; ++a) CHECK(d.drift.at[1][a].is_zero());
    check_g_martingale(s1, tau, d.martingale_part);
  }
  SUBCASE("both variants agree exactly (uniqueness of the canonical drift)") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      gen::Rng rng(seed * 9 + 2);
      const FilteredSpace sp = gen::space(rng);
      const RandomTime t2 = gen::random_time(rng, sp);
      const Process u = gen::martingale(rng, sp);
      const GDecomposition pred =
          decompose_stopped(sp, t2, u, DecompositionVariant::StoppedPredictable);
      const GDecomposition opt =
          decompose_stopped(sp, t2, u, DecompositionVariant::StoppedOptional);
      check_g_martingale(sp, t2, pred.martingale_part);
      check_g_martingale(sp, t2, opt.martingale_part);
      CHECK(same_process(pred.drift, opt.drift));
      // Increment-level form of the same identity:
      // d<U,Mbar> = d<U,M> + dUbreve^p.
      const TauKit k2 = make_tau_kit(sp, t2);
      for (int t = 1; t < sp.timeline().slots(); ++t) {
        const RandomVariable lhs = cond_expect(sp, u.delta(t) * k2.mbar.delta(t), t - 1);
        const RandomVariable rhs =
            cond_expect(sp, u.delta(t) * k2.m.delta(t), t - 1) +
            cond_expect(sp, u.delta(t) * k2.h.delta(t), t - 1);
        CHECK(lhs == rhs);
      }
    }
  }
  SUBCASE("non-martingale input is rejected") {
    const AzemaPair az = azema(s1, tau);
    CHECK_THROWS_WITH_AS(
        decompose_stopped(s1, tau, az.f, DecompositionVariant::StoppedPredictable),
        doctest::Contains("NotMartingale"), Error);
  }
  SUBCASE("under immersion the stopped drift vanishes") {
    gen::Rng rng(15);
    const gen::Fixture fx = gen::independent_fixture(rng);
    const Process u = gen::martingale(rng, fx.space);
    const GDecomposition d =
        decompose_stopped(fx.space, fx.tau, u, DecompositionVariant::StoppedOptional);
    for (int t = 0; t < d.drift.slots(); ++t)
      for (int a = 0; a < fx.space.n_atoms(); ++a) CHECK(d.drift.at[t][a].is_zero());
  }
}

TEST_CASE("pseudo-honest decomposition") {
  SUBCASE("multiplicative fixtures pass and match the kernel route") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      gen::Rng rng(seed * 6 + 1);
      const gen::Fixture fx = gen::pred_mult_fixture(rng);
      const Process u = gen::martingale(rng, fx.space);
      PseudoHonestBlocks blocks;
      const GDecomposition d = decompose_pseudo_honest(fx.space, fx.field, fx.tau, u, &blocks);
      check_g_martingale(fx.space, fx.tau, d.martingale_part);

      UhatMap map;
      map.rows = blocks.u_hat;
      const auto rep = verify_building_blocks(fx.space, fx.field, fx.tau, blocks.u_tilde, map,
                                              BlockCondition::Field);
      CHECK(rep.pass());

      const EDData ed = canonical_ed_candidate(fx.space, fx.field);
      const GDecomposition k = decompose_pseudo_initial(fx.space, ed, fx.tau, u);
      CHECK(same_process(d.drift, k.drift));
    }
  }
  SUBCASE("the HP and positivity preconditions are separate refusals") {
    const FilteredSpace s1 = s1_space();
    gen::Rng rng(3);
    const Process u = gen::martingale(rng, s1);
    RandomTime zero_mass;
    zero_mass.value = {0, 1, 2, 3};  // fails HP on S1
    const CondDistField field = conditional_distribution(s1, zero_mass);
    CHECK_THROWS_WITH_AS(decompose_pseudo_honest(s1, field, zero_mass, u),
                         doctest::Contains("HypothesisHPFails"), Error);
    // The reference time is honest (HP holds) but its field has zeros.
    const RandomTime tau = s1_tau();
    const CondDistField field2 = conditional_distribution(s1, tau);
    CHECK_THROWS_WITH_AS(decompose_pseudo_honest(s1, field2, tau, u),
                         doctest::Contains("FieldNotStrictlyPositive"), Error);
  }
  SUBCASE("under (H) the after-tau term vanishes") {
    gen::Rng rng(19);
    const gen::Fixture fx = gen::independent_fixture(rng);
    int bu, bt;
    if (!fx.field.strictly_positive(&bu, &bt)) return;  // needs mass everywhere
    const Process u = gen::martingale(rng, fx.space);
    const GDecomposition d = decompose_pseudo_honest(fx.space, fx.field, fx.tau, u);
    const GDecomposition st =
        decompose_stopped(fx.space, fx.tau, u, DecompositionVariant::StoppedPredictable);
    CHECK(same_process(d.drift, st.drift));
  }
}

TEST_CASE("construction-specific decompositions") {
  SUBCASE("predictable construction equals the general drift") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      gen::Rng rng(seed * 12 + 5);
      const gen::Fixture fx = gen::pred_mult_fixture(rng);
      REQUIRE(fx.f.has_value());
      const Process u = gen::martingale(rng, fx.space);
      const GDecomposition pm = decompose_pred_mult(fx.space, *fx.f, fx.tau, u);
      check_g_martingale(fx.space, fx.tau, pm.martingale_part);
      const GDecomposition ph = decompose_pseudo_honest(fx.space, fx.field, fx.tau, u);
      CHECK(same_process(pm.drift, ph.drift));
    }
  }
  SUBCASE("optional construction passes the martingale check") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      gen::Rng rng(seed * 14 + 3);
      const gen::Fixture fx = gen::opt_mult_fixture(rng);
      REQUIRE(fx.f.has_value());
      REQUIRE(fx.tau_hat.has_value());
      const Process u = gen::martingale(rng, fx.space);
      const GDecomposition d = decompose_opt_mult(fx.space, *fx.f, *fx.tau_hat, fx.tau, u);
      check_g_martingale(fx.space, fx.tau, d.martingale_part);
    }
  }
  SUBCASE("drift-free submartingales: the after-tau weight is the left limit") {
    // When F has no drift on the finite slots, pF_u = F_{u-1} there and the
    // predictable-construction drift takes the classical left-limit form.
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      gen::Rng rng(seed * 51 + 2);
      gen::SpaceOptions opts;
      opts.max_atoms = 5;
      opts.max_horizon = 3;
      const FilteredSpace base = gen::space(rng, opts);
      RandomVariable x = RandomVariable::constant(base.n_atoms(), Rational());
      for (const auto& block : base.partition_at(base.horizon()).blocks()) {
        const Rational v = Rational(rng.int_in(1, 7), 8);  // inside (0,1)
        for (int a : block) x[a] = v;
      }
      Process f = martingale_from_terminal(base, x);
      f.at[base.timeline().inf_slot()] = RandomVariable::constant(base.n_atoms(), Rational(1));
      const MultiplicativeSystem system = predictable_multiplicative_system(base, f);
      const CondDistField field = field_from_system(base, f, system);
      const ExtendedSpace ext = canonical_extension(base, field);
      const Process f_lift = ext.lift(f);
      for (int u2 = 1; u2 <= ext.space.horizon(); ++u2)
        CHECK(cond_expect(ext.space, f_lift.at[u2], u2 - 1) == f_lift.at[u2 - 1]);

      const Process u = gen::martingale(rng, ext.space);
      const GDecomposition pm = decompose_pred_mult(ext.space, f_lift, ext.tau, u);
      const TauKit kit = make_tau_kit(ext.space, ext.tau);
      // Reassemble the drift with F_{u-1} in place of pF_u on finite slots.
      Process expected = Process::zeros(ext.space, ProcessKind::FiniteVariation);
      const int S = ext.space.timeline().slots();
      for (int t = 1; t < S; ++t) {
        expected.at[t] = expected.at[t - 1];
        const RandomVariable cov = cond_expect(ext.space, u.delta(t) * kit.m.delta(t), t - 1);
        const RandomVariable jump = cond_expect(ext.space, u.delta(t) * kit.h.delta(t), t - 1);
        const RandomVariable pf = cond_expect(ext.space, f_lift.at[t], t - 1);
        for (int a = 0; a < ext.space.n_atoms(); ++a) {
          if (ext.tau[a] >= t)
            expected.at[t][a] += (cov[a] + jump[a]) / kit.gproc.at[t - 1][a];
          else if (t <= ext.space.horizon())
            expected.at[t][a] -= cov[a] / f_lift.at[t - 1][a];
          else
            expected.at[t][a] -= cov[a] / pf[a];
        }
      }
      CHECK(same_process(pm.drift, expected));
    }
  }
  SUBCASE("separable variant equals the general drift on factorized fixtures") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      gen::Rng rng(seed * 18 + 7);
      const gen::Fixture fx = gen::separable_fixture(rng, false);
      REQUIRE(fx.kl.has_value());
      const Process u = gen::martingale(rng, fx.space);
      const GDecomposition sep = decompose_separable(fx.space, fx.kl->k, fx.kl->l, fx.tau, u);
      check_g_martingale(fx.space, fx.tau, sep.martingale_part);
      int bu, bt;
      if (fx.field.strictly_positive(&bu, &bt)) {
        const GDecomposition ph = decompose_pseudo_honest(fx.space, fx.field, fx.tau, u);
        CHECK(same_process(sep.drift, ph.drift));
      }
      // A factorized kernel (m = L, D = K) routes through the kernel engine
      // to the same canonical drift.
      const int S = fx.space.timeline().slots();
      EDData ed;
      ed.m.resize(S);
      for (int s = 0; s < S; ++s)
        for (int t = s; t < S; ++t) ed.m[s].push_back(fx.kl->l.at[t]);
      ed.d = fx.kl->k;
      const GDecomposition ker = decompose_pseudo_initial(fx.space, ed, fx.tau, u);
      CHECK(same_process(sep.drift, ker.drift));
    }
  }
}

TEST_CASE("honest decomposition") {
  SUBCASE("last-visit fixtures: both variants pass and agree after tau") {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
      gen::Rng rng(seed * 8 + 3);
      const gen::Fixture fx = gen::honest_fixture(rng);
      const Process u = gen::martingale(rng, fx.space);
      const GDecomposition classic =
          decompose_honest(fx.space, fx.tau, u, DecompositionVariant::HonestClassic);
      const GDecomposition barm =
          decompose_honest(fx.space, fx.tau, u, DecompositionVariant::HonestBarM);
      check_g_martingale(fx.space, fx.tau, classic.martingale_part);
      check_g_martingale(fx.space, fx.tau, barm.martingale_part);
      CHECK(same_process(classic.drift, barm.drift));
    }
  }
  SUBCASE("stopping times decompose with both variants agreeing") {
    const FilteredSpace s1 = s1_space();
    RandomTime st;
    st.value = {1, 1, 2, 2};
    gen::Rng rng(7);
    const Process u = gen::martingale(rng, s1);
    const GDecomposition classic =
        decompose_honest(s1, st, u, DecompositionVariant::HonestClassic);
    const GDecomposition barm = decompose_honest(s1, st, u, DecompositionVariant::HonestBarM);
    check_g_martingale(s1, st, classic.martingale_part);
    CHECK(same_process(classic.drift, barm.drift));
  }
  SUBCASE("non-honest input is refused") {
    gen::Rng rng(6);
    const gen::Fixture fx = gen::pred_mult_fixture(rng);
    const Process u = gen::martingale(rng, fx.space);
    if (!fx.tau.measurable_terminal(fx.space)) {
      CHECK_THROWS_WITH_AS(
          decompose_honest(fx.space, fx.tau, u, DecompositionVariant::HonestClassic),
          doctest::Contains("NotHonest"), Error);
    }
  }
}

TEST_CASE("via-initial decomposition") {
  SUBCASE("the canonical initial drift works for any random time") {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
      gen::Rng rng(seed * 10 + 9);
      const FilteredSpace sp = gen::space(rng);
      const RandomTime tau = gen::random_time(rng, sp);
      const Process u = gen::martingale(rng, sp);
      const Process b = g_star_drift(sp, tau, u);
      const EnlargedFiltration gs = initial_enlargement(sp, tau);
      CHECK(is_martingale(sp, u - b, gs.filt).pass);
      const GDecomposition d = decompose_via_initial(sp, tau, u, b);
      check_g_martingale(sp, tau, d.martingale_part);
    }
  }
  SUBCASE("agreement with the kernel decomposition on ED fixtures") {
    gen::Rng rng(44);
    const gen::Fixture fx = gen::ed_fixture(rng);
    const Process u = gen::martingale(rng, fx.space);
    const Process b = g_star_drift(fx.space, fx.tau, u);
    const GDecomposition via = decompose_via_initial(fx.space, fx.tau, u, b);
    const GDecomposition ker = decompose_pseudo_initial(fx.space, *fx.ed, fx.tau, u);
    CHECK(same_process(via.drift, ker.drift));
    check_g_martingale(fx.space, fx.tau, ker.martingale_part);
  }
  SUBCASE("under immersion, B = 0 leaves the stopped drift only") {
    gen::Rng rng(46);
    const gen::Fixture fx = gen::independent_fixture(rng);
    const Process u = gen::martingale(rng, fx.space);
    const Process zero = Process::zeros(fx.space, ProcessKind::FiniteVariation);
    const GDecomposition via = decompose_via_initial(fx.space, fx.tau, u, zero);
    const GDecomposition stp =
        decompose_stopped(fx.space, fx.tau, u, DecompositionVariant::StoppedPredictable);
    CHECK(same_process(via.drift, stp.drift));
    check_g_martingale(fx.space, fx.tau, via.martingale_part);
  }
  SUBCASE("a wrong B is rejected with a witness") {
    gen::Rng rng(45);
    const FilteredSpace sp = gen::space(rng);
    const RandomTime tau = gen::random_time(rng, sp);
    const Process u = gen::martingale(rng, sp);
    Process b = Process::zeros(sp, ProcessKind::FiniteVariation);
    for (int t = 1; t < b.slots(); ++t)
      b.at[t] = RandomVariable::constant(sp.n_atoms(), Rational(t, 3));
    const bool u_already_gstar_martingale = [&] {
      const EnlargedFiltration gs = initial_enlargement(sp, tau);
      return is_martingale(sp, u - b, gs.filt).pass;
    }();
    if (!u_already_gstar_martingale)
      CHECK_THROWS_WITH_AS(decompose_via_initial(sp, tau, u, b),
                           doctest::Contains("InitialDecompositionInvalid"), Error);
  }
}

TEST_CASE("kernel compensator identities") {
  SUBCASE("dres equals the dual projection; the defect process is a martingale") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      gen::Rng rng(seed * 21);
      const gen::Fixture fx = gen::ed_fixture(rng);
      const Process via_kernel = compensator_pseudo_initial(fx.space, *fx.ed);
      const Process hp = compensator_f(fx.space, fx.tau);
      CHECK(same_process(via_kernel, hp));
      CHECK(is_martingale(fx.space, kernel_defect_process(fx.space, fx.ed.value())).pass);
    }
  }
  SUBCASE("predictable clock: the compensator is the projected kernel against D") {
    gen::Rng rng(52);
    const gen::Fixture fx = gen::separable_fixture(rng, false);
    // m = L, D = K with K predictable: dH^p = pm dD.
    const int S = fx.space.timeline().slots();
    EDData ed;
    ed.m.resize(S);
    for (int s = 0; s < S; ++s)
      for (int t = s; t < S; ++t) ed.m[s].push_back(fx.kl->l.at[t]);
    ed.d = fx.kl->k;
    REQUIRE(is_predictable(fx.space, ed.d));
    const Process comp = compensator_pseudo_initial(fx.space, ed);
    const Process pm = predictable_projection(fx.space, fx.kl->l);
    Process expected = Process::zeros(fx.space, ProcessKind::Increasing);
    expected.at[0] = pm.at[0] * ed.d.delta(0);
    for (int t = 1; t < S; ++t)
      expected.at[t] = expected.at[t - 1] + pm.at[t] * ed.d.delta(t);
    CHECK(same_process(comp, expected));
  }
}

TEST_CASE("terminal-value identities for bounded martingales") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    gen::Rng rng(seed * 23 + 11);
    const FilteredSpace sp = gen::space(rng);
    const RandomTime tau = gen::random_time(rng, sp);
    const TauKit kit = make_tau_kit(sp, tau);
    const int term = sp.timeline().inf_slot();
    for (int i = 0; i < 5; ++i) {
      const Process n = gen::martingale_null_at_zero(rng, sp);
      Rational at_tau, before_tau;
      for (int a = 0; a < sp.n_atoms(); ++a) {
        at_tau += n.at[tau[a]][a] * sp.prob(a);
        if (tau[a] >= 1) before_tau += n.at[tau[a] - 1][a] * sp.prob(a);
      }
      CHECK(at_tau == expectation(sp, angle_bracket(sp, n, kit.mbar).at[term]));
      CHECK(before_tau == expectation(sp, angle_bracket(sp, n, kit.mtilde).at[term]));
    }
  }
}

TEST_CASE("desk-scale envelope: 64 atoms, horizon 6") {
  gen::Rng rng(314159);
  gen::SpaceOptions opts;
  opts.min_atoms = opts.max_atoms = 64;
  opts.min_horizon = opts.max_horizon = 6;
  const FilteredSpace sp = gen::space(rng, opts);
  const RandomTime tau = gen::random_time(rng, sp);
  const EnlargedFiltration g = progressive_enlargement(sp, tau);
  check_g_martingale(sp, tau, indicator_process(sp, tau) - compensator_g_jeulin_yor(sp, tau));
  const Process u = gen::martingale(rng, sp);
  const GDecomposition d =
      decompose_stopped(sp, tau, u, DecompositionVariant::StoppedOptional);
  check_g_martingale(sp, tau, d.martingale_part);
  const EDData ed = canonical_ed_candidate(sp, conditional_distribution(sp, tau));
  const GDecomposition k = decompose_pseudo_initial(sp, ed, tau, u);
  check_g_martingale(sp, tau, k.martingale_part);
}

TEST_CASE("building-block verifier rejects corrupted data") {
  gen::Rng rng(61);
  const gen::Fixture fx = gen::pred_mult_fixture(rng);
  const Process u = gen::martingale(rng, fx.space);
  PseudoHonestBlocks blocks;
  (void)decompose_pseudo_honest(fx.space, fx.field, fx.tau, u, &blocks);
  UhatMap map;
  map.rows = blocks.u_hat;

  SUBCASE("constant-in-t maps satisfy condition (ii) trivially") {
    UhatMap flat;
    const int S = fx.space.timeline().slots();
    flat.rows.resize(S);
    for (int s = 0; s < S; ++s)
      for (int t = s; t < S; ++t) flat.rows[s].push_back(map.rows[s][0]);
    const auto rep = verify_building_blocks(fx.space, fx.field, fx.tau, blocks.u_tilde, flat,
                                            BlockCondition::Field);
    CHECK(rep.condition_ii);
  }
  SUBCASE("a corrupted row is caught with a witness") {
    UhatMap bad = map;
    const int S = fx.space.timeline().slots();
    if (S >= 3 && bad.rows[1].size() >= 2) {
      for (auto& v : bad.rows[1][1].values) v += Rational(1, 5);
      const auto rep = verify_building_blocks(fx.space, fx.field, fx.tau, blocks.u_tilde, bad,
                                              BlockCondition::Field);
      CHECK_FALSE(rep.pass());
    }
  }
  SUBCASE("the separable and kernel replacements accept the same blocks") {
    const auto sep = check_complete_separability(fx.space, fx.field);
    if (sep.verdict == TriVerdict::Pass) {
      const auto rep = verify_building_blocks(fx.space, fx.field, fx.tau, blocks.u_tilde, map,
                                              BlockCondition::SeparableL, &sep.factors->l);
      CHECK(rep.pass());
    }
    const EDData ed = canonical_ed_candidate(fx.space, fx.field);
    const auto rep2 = verify_building_blocks(fx.space, fx.field, fx.tau, blocks.u_tilde, map,
                                             BlockCondition::EDKernel, nullptr, &ed);
    CHECK(rep2.pass());
  }
}
