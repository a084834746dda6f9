#include <doctest.h>

#include <filtlab/generators.hpp>
#include <filtlab/hypotheses.hpp>

#include "fixtures.hpp"

using namespace filtlab;
using namespace testfx;

TEST_CASE("hypothesis (H) checker") {
  const FilteredSpace s1 = s1_space();

  SUBCASE("S1's tau fails with the documented witness") {
    const CondDistField field = conditional_distribution(s1, s1_tau());
    const auto w = check_h(s1, field);
    REQUIRE(w.has_value());
    CHECK(w->u == 1);
    CHECK(w->s == 1);
    CHECK(w->t == 2);
  }
  SUBCASE("independent times are immersed") {
    gen::Rng rng(3);
    const gen::Fixture fx = gen::independent_fixture(rng);
    CHECK_FALSE(check_h(fx.space, fx.field));
  }
  SUBCASE("stopping times are immersed") {
    RandomTime st;
    st.value = {1, 1, 2, 2};
    const CondDistField field = conditional_distribution(s1, st);
    CHECK_FALSE(check_h(s1, field));
  }
}

TEST_CASE("hypothesis (HP) checker") {
  const FilteredSpace s1 = s1_space();

  SUBCASE("(H) implies (HP), separable fields satisfy (HP)") {
    gen::Rng rng(5);
    const gen::Fixture ind = gen::independent_fixture(rng);
    CHECK_FALSE(check_hp(ind.space, ind.field));
    const gen::Fixture sep = gen::separable_fixture(rng, false);
    CHECK_FALSE(check_hp(sep.space, sep.field));
  }
  SUBCASE("the reference time is pseudo-honest, in fact honest") {
    const CondDistField field = conditional_distribution(s1, s1_tau());
    CHECK_FALSE(check_hp(s1, field));
    CHECK(s1_tau().measurable_terminal(s1));
  }
  SUBCASE("a time with mass at zero on S1 fails with an explicit witness") {
    RandomTime tau;
    tau.value = {0, 1, 2, 3};
    const CondDistField field = conditional_distribution(s1, tau);
    const auto w = check_hp(s1, field);
    REQUIRE(w.has_value());
    CHECK(w->u == 0);
    CHECK(w->s == 1);
    CHECK(w->t == 2);
    CHECK(field.at(w->u, w->s)[w->atom] * field.at(w->s, w->t)[w->atom] !=
          field.at(w->s, w->s)[w->atom] * field.at(w->u, w->t)[w->atom]);
  }
  SUBCASE("on a pass, the ratio identity holds under 0/0 = 0") {
    gen::Rng rng(7);
    const gen::Fixture fx = gen::pred_mult_fixture(rng);
    REQUIRE_FALSE(check_hp(fx.space, fx.field));
    const int S = fx.space.timeline().slots();
    for (int u = 0; u < S; ++u)
      for (int s = u + 1; s < S; ++s)
        for (int t = s + 1; t < S; ++t)
          for (int a = 0; a < fx.space.n_atoms(); ++a) {
            const Rational lhs = ratio_or_zero(
                fx.field.at(u, s)[a] * fx.field.at(s, t)[a], fx.field.at(s, s)[a]);
            // {F_{s,s} = 0} sits inside {F_{u,s} = 0}, so 0/0 covers it.
            CHECK(lhs == (fx.field.at(s, s)[a].is_zero() ? Rational() : fx.field.at(u, t)[a]));
          }
  }
}

TEST_CASE("complete separability search") {
  SUBCASE("constructed factorizations are recovered") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      gen::Rng rng(seed * 11);
      const gen::Fixture fx = gen::separable_fixture(rng, seed % 2 == 0);
      const auto res = check_complete_separability(fx.space, fx.field);
      REQUIRE(res.verdict == TriVerdict::Pass);
      REQUIRE(res.factors.has_value());
      const int S = fx.space.timeline().slots();
      for (int u = 0; u < S; ++u)
        for (int t = u; t < S; ++t)
          CHECK(res.factors->k.at[u] * res.factors->l.at[t] == fx.field.at(u, t));
      CHECK(is_martingale(fx.space, res.factors->l).pass);
      CHECK(is_increasing(res.factors->k));
    }
  }
  SUBCASE("honest-time fields are rejected or undecided") {
    // Stopping times factor trivially (K = H, L = 1), so only genuine
    // honest non-stopping times are informative here.
    gen::Rng rng(4);
    int informative = 0;
    for (int i = 0; i < 20; ++i) {
      const gen::Fixture fx = gen::honest_fixture(rng);
      if (fx.tau.is_stopping_time(fx.space)) continue;
      ++informative;
      const auto res = check_complete_separability(fx.space, fx.field);
      CHECK(res.verdict != TriVerdict::Pass);
    }
    CHECK(informative > 0);
  }
  SUBCASE("single-atom spaces factor trivially") {
    const FilteredSpace tiny =
        build_space({"w"}, {Rational(1)}, 1, {Partition::trivial(1), Partition::trivial(1)});
    RandomTime tau;
    tau.value = {1};
    const auto res = check_complete_separability(tiny, conditional_distribution(tiny, tau));
    CHECK(res.verdict == TriVerdict::Pass);
  }
}

TEST_CASE("separability at a positive anchor") {
  SUBCASE("complete separability restricts to every anchor") {
    gen::Rng rng(9);
    const gen::Fixture fx = gen::separable_fixture(rng, true);
    for (int v = 1; v < fx.space.timeline().slots(); ++v)
      CHECK(check_separable_at(fx.space, fx.field, v).verdict == TriVerdict::Pass);
  }
  SUBCASE("strictly positive pseudo-honest fields are separable at all anchors") {
    gen::Rng rng(10);
    const gen::Fixture fx = gen::pred_mult_fixture(rng);
    for (int v = 1; v < fx.space.timeline().slots(); ++v)
      CHECK(check_separable_at(fx.space, fx.field, v).verdict == TriVerdict::Pass);
  }
  SUBCASE("an HP failure with no mass at zero shows up at some anchor") {
    // Contrapositive of: separable at all v > 0 and F_0 = 0 imply HP.
    int witnesses = 0;
    for (std::uint64_t seed = 1; seed <= 120; ++seed) {
      gen::Rng rng(seed);
      const gen::Fixture fx = gen::generic_fixture(rng);
      if (!check_hp(fx.space, fx.field)) continue;
      bool f0_zero = true;
      for (int a = 0; a < fx.space.n_atoms(); ++a)
        if (!fx.field.at(0, 0)[a].is_zero()) f0_zero = false;
      if (!f0_zero) continue;
      ++witnesses;
      bool some_not_pass = false;
      for (int v = 1; v < fx.space.timeline().slots(); ++v)
        if (check_separable_at(fx.space, fx.field, v).verdict != TriVerdict::Pass)
          some_not_pass = true;
      CHECK(some_not_pass);
    }
    CHECK(witnesses > 0);
  }
}

TEST_CASE("extended density verification") {
  SUBCASE("the telescoping candidate passes on every valid field") {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
      gen::Rng rng(seed);
      const gen::Fixture fx = gen::generic_fixture(rng);
      const EDData ed = canonical_ed_candidate(fx.space, fx.field);
      CHECK_FALSE(verify_ed(fx.space, fx.field, ed));
    }
  }
  SUBCASE("separable data is kernel data with m = L, D = K") {
    gen::Rng rng(21);
    const gen::Fixture fx = gen::separable_fixture(rng, false);
    REQUIRE(fx.kl.has_value());
    const int S = fx.space.timeline().slots();
    EDData ed;
    ed.m.resize(S);
    for (int s = 0; s < S; ++s)
      for (int t = s; t < S; ++t) ed.m[s].push_back(fx.kl->l.at[t]);
    ed.d = fx.kl->k;
    CHECK_FALSE(verify_ed(fx.space, fx.field, ed));
  }
  SUBCASE("hazard-built fixtures carry strictly positive kernels") {
    gen::Rng rng(22);
    const gen::Fixture fx = gen::ed_fixture(rng);
    REQUIRE(fx.ed.has_value());
    CHECK_FALSE(verify_ed(fx.space, fx.field, *fx.ed));
    CHECK(ed_m_strictly_positive(*fx.ed));
  }
  SUBCASE("a corrupted kernel is caught") {
    gen::Rng rng(23);
    const gen::Fixture fx = gen::ed_fixture(rng);
    EDData bad = *fx.ed;
    bad.m[1][0][0] += Rational(1, 7);
    CHECK(verify_ed(fx.space, fx.field, bad).has_value());
  }
}

TEST_CASE("classification") {
  SUBCASE("stopping times carry H, HP and honesty") {
    const FilteredSpace s1 = s1_space();
    RandomTime st;
    st.value = {1, 1, 2, 2};
    const Classification c = classify(s1, st);
    CHECK(c.h);
    CHECK(c.hp);
    CHECK(c.honest);
    CHECK(c.ed_with_candidate);
  }
  SUBCASE("last-visit times are honest but typically not immersed") {
    gen::Rng rng(31);
    int honest_seen = 0, h_failed = 0;
    for (int i = 0; i < 30; ++i) {
      const gen::Fixture fx = gen::honest_fixture(rng);
      const Classification c = classify_field(fx.space, fx.tau, fx.field);
      CHECK(c.honest);
      ++honest_seen;
      if (!c.h) ++h_failed;
    }
    CHECK(honest_seen == 30);
    CHECK(h_failed > 0);
  }
  SUBCASE("multiplicative pseudo-honest times: HP holds, honesty generally fails") {
    gen::Rng rng(32);
    int hp_pass = 0, honest_fail = 0;
    for (int i = 0; i < 10; ++i) {
      const gen::Fixture fx = gen::pred_mult_fixture(rng);
      const Classification c = classify_field(fx.space, fx.tau, fx.field);
      CHECK(c.hp);
      CHECK(c.strictly_positive_field);
      ++hp_pass;
      if (!c.honest) ++honest_fail;
    }
    CHECK(hp_pass == 10);
    CHECK(honest_fail > 0);
  }
  SUBCASE("implication lattice over random scenarios") {
    for (std::uint64_t seed = 100; seed < 140; ++seed) {
      gen::Rng rng(seed);
      const gen::Fixture fx = gen::generic_fixture(rng);
      const Classification c = classify_field(fx.space, fx.tau, fx.field);
      if (c.h) CHECK(c.hp);
      if (c.completely_separable) CHECK(c.hp);
      const bool f0_zero = [&] {
        for (int a = 0; a < fx.space.n_atoms(); ++a)
          if (!fx.field.at(0, 0)[a].is_zero()) return false;
        return true;
      }();
      if (c.separable_all_v && f0_zero) CHECK(c.hp);
      CHECK(c.honest == (c.f_infty_measurable && c.hp));
      CHECK(c.ed_with_candidate);
      if (c.hp && c.strictly_positive_field) {
        // Positive diagonal rows must stay positive martingales in t.
        for (int s = 1; s < fx.space.timeline().slots(); ++s)
          CHECK(is_martingale(fx.space, fx.field.row(s)).pass);
      }
    }
  }
}
