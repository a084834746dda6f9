#include <doctest.h>

#include <filtlab/finance.hpp>
#include <filtlab/generators.hpp>

#include "fixtures.hpp"

using namespace filtlab;
using namespace testfx;

TEST_CASE("immersion density") {
  SUBCASE("under (H) the density is identically one") {
    gen::Rng rng(2);
    const gen::Fixture fx = gen::independent_fixture(rng);
    const bool f0_zero = [&] {
      for (int a = 0; a < fx.space.n_atoms(); ++a)
        if (!fx.field.at(0, 0)[a].is_zero()) return false;
      return true;
    }();
    if (!f0_zero) return;
    const Process z = immersion_density(fx.space, fx.field, fx.tau);
    for (int t = 0; t < z.slots(); ++t)
      for (int a = 0; a < fx.space.n_atoms(); ++a) CHECK(z.at[t][a] == Rational(1));
  }
  SUBCASE("separable fixtures give an exact density martingale") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      gen::Rng rng(seed * 7);
      const gen::Fixture fx = gen::separable_fixture(rng, true);
      const Process z = immersion_density(fx.space, fx.field, fx.tau);
      // is_martingale under G was already enforced inside; spot-check E[Z]=1.
      CHECK(expectation(fx.space, z.at[fx.space.horizon()]) == Rational(1));
    }
  }
  SUBCASE("the trace identity behind the measure change") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      gen::Rng rng(seed * 11 + 4);
      const gen::Fixture fx = gen::pred_mult_fixture(rng);
      // F_{s,t} E[X_tau 1_{tau<=s} | F_s] = F_{s,s} E[X_tau 1_{tau<=s} | F_t]
      // for adapted X and any pseudo-honest tau.
      Process x = Process::zeros(fx.space, ProcessKind::Adapted);
      for (int t = 0; t < x.slots(); ++t)
        x.at[t] = cond_expect(fx.space, gen::martingale(rng, fx.space).at[t], t);
      const int S = fx.space.timeline().slots();
      for (int s = 0; s < S; ++s) {
        RandomVariable cut = RandomVariable::constant(fx.space.n_atoms(), Rational());
        for (int a = 0; a < fx.space.n_atoms(); ++a)
          if (fx.tau[a] <= s) cut[a] = x.at[fx.tau[a]][a];
        const RandomVariable at_s = cond_expect(fx.space, cut, s);
        for (int t = s; t < S; ++t) {
          const RandomVariable at_t = cond_expect(fx.space, cut, t);
          for (int a = 0; a < fx.space.n_atoms(); ++a)
            CHECK(fx.field.at(s, t)[a] * at_s[a] == fx.field.at(s, s)[a] * at_t[a]);
        }
      }
    }
  }
  SUBCASE("honest fields are refused at the separability gate") {
    gen::Rng rng(9);
    for (int i = 0; i < 10; ++i) {
      const gen::Fixture fx = gen::honest_fixture(rng);
      bool constant_tau = true;
      for (int a = 1; a < fx.space.n_atoms(); ++a)
        if (fx.tau[a] != fx.tau[0]) constant_tau = false;
      if (constant_tau) continue;
      CHECK_THROWS_AS(immersion_density(fx.space, fx.field, fx.tau), Error);
    }
  }
}

TEST_CASE("immersion measure change") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    gen::Rng rng(seed * 13 + 1);
    const gen::Fixture fx = gen::separable_fixture(rng, true);
    const ImmersionMeasureResult res = immersion_measure(fx.space, fx.field, fx.tau);
    CHECK(res.xdee_holds);
    CHECK(res.coincides_on_f);
  }

  SUBCASE("already-immersed fixtures keep the identity density") {
    int found = 0;
    for (std::uint64_t seed = 1; seed <= 30 && found < 3; ++seed) {
      gen::Rng rng(seed * 3 + 2);
      const gen::Fixture fx = gen::independent_fixture(rng);
      bool f0_zero = true;
      for (int a = 0; a < fx.space.n_atoms(); ++a)
        if (!fx.field.at(0, 0)[a].is_zero()) f0_zero = false;
      if (!f0_zero) continue;
      ++found;
      const ImmersionMeasureResult res = immersion_measure(fx.space, fx.field, fx.tau);
      for (int a = 0; a < fx.space.n_atoms(); ++a)
        CHECK(res.pbar.density[a] == Rational(1));
      CHECK(res.xdee_holds);
    }
    CHECK(found > 0);
  }
}

TEST_CASE("measure projection") {
  SUBCASE("projecting the target onto itself is the identity") {
    gen::Rng rng(3);
    const gen::Fixture fx = gen::independent_fixture(rng);
    const Measure p{std::vector<Rational>(fx.space.n_atoms(), Rational(1))};
    const Measure q = project_measure(fx.space, p, p);
    for (int a = 0; a < fx.space.n_atoms(); ++a) CHECK(q.density[a] == Rational(1));
  }
  SUBCASE("all four properties hold on immersed fixtures") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      gen::Rng rng(seed * 17 + 2);
      const gen::Fixture fx = gen::independent_fixture(rng);
      const Measure q_tilde{std::vector<Rational>(fx.space.n_atoms(), Rational(1))};
      const Measure target = gen::equivalent_measure(rng, fx.space);
      const Measure q = project_measure(fx.space, q_tilde, target);
      const ProjectionReport rep = verify_projection(fx.space, fx.tau, q_tilde, target, q);
      CHECK(rep.density_adapted);
      CHECK(rep.coincides_on_f);
      CHECK(rep.immersion_under_q);
      CHECK(rep.transfers_martingales);
    }
  }
  SUBCASE("an immersion measure built from a separable fixture projects too") {
    gen::Rng rng(41);
    const gen::Fixture fx = gen::separable_fixture(rng, true);
    const ImmersionMeasureResult imm = immersion_measure(fx.space, fx.field, fx.tau);
    const Measure target = gen::equivalent_measure(rng, fx.space);
    const Measure q = project_measure(fx.space, imm.pbar, target);
    const ProjectionReport rep = verify_projection(fx.space, fx.tau, imm.pbar, target, q);
    CHECK(rep.density_adapted);
    CHECK(rep.coincides_on_f);
    CHECK(rep.immersion_under_q);
    CHECK(rep.transfers_martingales);
  }
}

TEST_CASE("martingale measure check") {
  gen::Rng rng(5);
  const gen::Fixture fx = gen::independent_fixture(rng);
  const EnlargedFiltration g = progressive_enlargement(fx.space, fx.tau);
  const Process x = gen::martingale(rng, fx.space);
  const Measure p{std::vector<Rational>(fx.space.n_atoms(), Rational(1))};

  const MartingaleMeasureReport rep = check_martingale_measure(fx.space, x, p, g);
  CHECK(rep.x_under_f.pass);
  CHECK(rep.immersion_under_q);
  CHECK(rep.x_under_k.pass);

  SUBCASE("a corrupted measure yields a witness") {
    Measure bad = gen::equivalent_measure(rng, fx.space);
    const MartingaleMeasureReport rep2 = check_martingale_measure(fx.space, x, bad, g);
    if (!rep2.x_under_f.pass) {
      CHECK(rep2.x_under_f.witness.has_value());
    }
  }
}

TEST_CASE("market scenarios and the information drift") {
  SUBCASE("drift extraction checks absolute continuity against the bracket") {
    gen::Rng rng(6);
    const gen::Fixture fx = gen::ed_fixture(rng);
    const Process u = gen::martingale(rng, fx.space);
    Process x = u;
    // Add a drift increment where the bracket vanishes: rejected.
    Process bad = u;
    bool has_flat = false;
    const Process uu = angle_bracket(fx.space, u, u);
    for (int t = 1; t < u.slots() && !has_flat; ++t)
      if (uu.delta(t)[0].is_zero()) {
        for (int s = t; s < u.slots(); ++s)
          bad.at[s] = bad.at[s] + RandomVariable::constant(fx.space.n_atoms(), Rational(1));
        has_flat = true;
      }
    if (has_flat)
      CHECK_THROWS_AS(make_market_scenario(fx.space, bad, fx.tau, fx.field), Error);
    const MarketScenario ms = make_market_scenario(fx.space, x, fx.tau, fx.field);
    for (int t = 0; t < u.slots(); ++t) CHECK(ms.u.at[t] == u.at[t]);
  }
  SUBCASE("information drift removes the enlargement drift exactly") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      gen::Rng rng(seed * 19 + 3);
      const gen::Fixture fx = gen::ed_fixture(rng);
      const Process u = gen::martingale(rng, fx.space);
      Process phi = Process::zeros(fx.space, ProcessKind::Predictable);
      for (int t = 1; t < u.slots(); ++t)
        for (const auto& block : fx.space.partition_at(t - 1).blocks()) {
          const Rational c = rng.rat_in(-1, 1);
          for (int a : block) phi.at[t][a] = c;
        }
      const Process x = u + stochastic_integral(fx.space, phi, angle_bracket(fx.space, u, u));
      const MarketScenario ms = make_market_scenario(fx.space, x, fx.tau, fx.field);
      const InformationDriftResult res = information_drift(fx.space, ms, *fx.ed);

      const EnlargedFiltration g = progressive_enlargement(fx.space, fx.tau);
      CHECK(is_martingale(fx.space, res.decomposition.martingale_part, g.filt).pass);
      // psi integrates the bracket back to the canonical drift.
      const GDecomposition ker = decompose_pseudo_initial(fx.space, *fx.ed, fx.tau, ms.u);
      for (int t = 0; t < u.slots(); ++t)
        CHECK(res.decomposition.drift.at[t] == ker.drift.at[t]);
      // Residual orthogonality, both for Mbar and for the kernel rows.
      const Process ortho = angle_bracket(fx.space, ms.u, res.kw_residual);
      for (int t = 0; t < u.slots(); ++t)
        for (int a = 0; a < fx.space.n_atoms(); ++a) CHECK(ortho.at[t][a].is_zero());
    }
  }
  SUBCASE("orthogonal inputs give zero drift") {
    gen::Rng rng(8);
    const gen::Fixture fx = gen::independent_fixture(rng);
    const Process u = gen::martingale(rng, fx.space);
    const MarketScenario ms = make_market_scenario(fx.space, u, fx.tau, fx.field);
    const EDData ed = canonical_ed_candidate(fx.space, fx.field);
    const InformationDriftResult res = information_drift(fx.space, ms, ed);
    // Independence: M is deterministic, the kernel rows are deterministic,
    // every bracket against U vanishes.
    for (int t = 0; t < u.slots(); ++t)
      for (int a = 0; a < fx.space.n_atoms(); ++a)
        CHECK(res.decomposition.drift.at[t][a].is_zero());
  }
}
