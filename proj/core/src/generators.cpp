#include "filtlab/generators.hpp"

#include <algorithm>

namespace filtlab::gen {

Rational Rng::rat_in(int lo, int hi) {
  static const int dens[] = {1, 2, 3, 4, 6, 8};
  const int d = dens[int_in(0, 5)];
  const int n = int_in(lo * d, hi * d);
  return Rational(n, d);
}

FilteredSpace space(Rng& rng, const SpaceOptions& opts) {
  const int n = rng.int_in(opts.min_atoms, opts.max_atoms);
  const int horizon = rng.int_in(opts.min_horizon, opts.max_horizon);

  std::vector<std::string> names(n);
  for (int i = 0; i < n; ++i) names[i] = "w" + std::to_string(i);
  std::vector<Rational> prob(n);
  long total = 0;
  std::vector<int> weights(n);
  for (int i = 0; i < n; ++i) {
    weights[i] = rng.int_in(1, 6);
    total += weights[i];
  }
  for (int i = 0; i < n; ++i) prob[i] = Rational(weights[i], total);

  // Build the chain from the terminal partition backwards by merging blocks.
  std::vector<Partition> parts(horizon + 1);
  Partition terminal = Partition::singletons(n);
  if (opts.allow_coarse_terminal && rng.chance(1, 4) && n >= 4) {
    std::vector<long> keys(n);
    for (int i = 0; i < n; ++i) keys[i] = rng.int_in(0, n - 2);
    terminal = Partition::from_keys(keys);
  }
  parts[horizon] = terminal;
  for (int t = horizon - 1; t >= 0; --t) {
    const Partition& finer = parts[t + 1];
    const int merges = rng.int_in(0, std::max(1, finer.n_blocks() / 2));
    std::vector<long> keys(n);
    for (int a = 0; a < n; ++a) keys[a] = finer.block_of(a);
    for (int k = 0; k < merges && finer.n_blocks() > 1; ++k) {
      const int b1 = rng.int_in(0, finer.n_blocks() - 1);
      const int b2 = rng.int_in(0, finer.n_blocks() - 1);
      const long k1 = keys[finer.block(b1).front()];
      const long k2 = keys[finer.block(b2).front()];
      for (int a = 0; a < n; ++a)
        if (keys[a] == k2) keys[a] = k1;
    }
    parts[t] = Partition::from_keys(keys);
  }
  if (!opts.allow_nontrivial_f0 || rng.chance(3, 5)) parts[0] = Partition::trivial(n);
  // Re-coarsen everything below a trivialized slot 0 is unnecessary: the
  // chain above already refines downward, and the trivial partition is
  // coarser than anything.
  return build_space(std::move(names), std::move(prob), horizon, std::move(parts));
}

RandomTime random_time(Rng& rng, const FilteredSpace& space, bool allow_zero, bool allow_inf) {
  RandomTime tau;
  tau.value.resize(space.n_atoms());
  const int lo = allow_zero ? 0 : 1;
  const int hi = allow_inf ? space.timeline().inf_slot() : space.horizon();
  for (int a = 0; a < space.n_atoms(); ++a) tau.value[a] = rng.int_in(lo, hi);
  return tau;
}

RandomTime honest_time(Rng& rng, const FilteredSpace& space) {
  // Adapted 0/1 visit process; tau = last visit, 0 when there is none.
  RandomTime tau;
  tau.value.assign(space.n_atoms(), 0);
  for (int t = 0; t <= space.horizon(); ++t) {
    const Partition& p = space.partition_at(t);
    for (const auto& block : p.blocks()) {
      if (rng.chance(2, 5)) {
        for (int a : block) tau.value[a] = t;
      }
    }
  }
  return tau;
}

Process martingale(Rng& rng, const FilteredSpace& space) {
  RandomVariable terminal = RandomVariable::constant(space.n_atoms(), Rational());
  for (const auto& block : space.partition_at(space.horizon()).blocks()) {
    const Rational v = rng.rat_in(-2, 2);
    for (int a : block) terminal[a] = v;
  }
  return martingale_from_terminal(space, terminal);
}

Process martingale_null_at_zero(Rng& rng, const FilteredSpace& space) {
  Process m = martingale(rng, space);
  const RandomVariable m0 = m.at[0];
  for (int s = 0; s < m.slots(); ++s) m.at[s] = m.at[s] - m0;
  return m;
}

Process azema_submartingale(Rng& rng, const FilteredSpace& space, bool strictly_inside) {
  // Mix of the submartingale of a random time with a deterministic ramp;
  // the ramp keeps the path strictly inside (0,1) when requested.
  const RandomTime aux = random_time(rng, space, true, true);
  const AzemaPair az = azema(space, aux);
  const int S = space.timeline().slots();
  const Rational eps(1, 2);
  const Rational one(1);
  Process f = Process::zeros(space, ProcessKind::Adapted);
  for (int s = 0; s < S; ++s) {
    Rational ramp;
    if (s == S - 1) {
      ramp = one;
    } else if (strictly_inside) {
      ramp = Rational(1 + s, 2 * S);  // strictly between 0 and 1/2
    } else {
      ramp = Rational(s, 2 * S);  // starts at exactly 0
    }
    for (int a = 0; a < space.n_atoms(); ++a)
      f.at[s][a] = (one - eps) * az.f.at[s][a] + eps * ramp;
  }
  return f;
}

Measure equivalent_measure(Rng& rng, const FilteredSpace& space) {
  std::vector<Rational> raw(space.n_atoms());
  Rational total;
  for (int a = 0; a < space.n_atoms(); ++a) {
    raw[a] = Rational(rng.int_in(1, 6));
    total += raw[a] * space.prob(a);
  }
  Measure z;
  z.density.resize(space.n_atoms());
  for (int a = 0; a < space.n_atoms(); ++a) z.density[a] = raw[a] / total;
  return z;
}

PayoffMap payoff(Rng& rng, const FilteredSpace& space) {
  PayoffMap map;
  const int S = space.timeline().slots();
  map.rows.assign(S, RandomVariable::constant(space.n_atoms(), Rational()));
  for (int u = 0; u < S; ++u) {
    for (const auto& block : space.partition_at(space.horizon()).blocks()) {
      const Rational v = rng.rat_in(-2, 2);
      for (int a : block) map.rows[u][a] = v;
    }
  }
  return map;
}

// ---------------------------------------------------------------------------
// Composite fixtures

Fixture generic_fixture(Rng& rng) {
  Fixture fx;
  fx.space = space(rng);
  fx.tau = random_time(rng, fx.space);
  fx.field = conditional_distribution(fx.space, fx.tau);
  return fx;
}

Fixture honest_fixture(Rng& rng) {
  Fixture fx;
  fx.space = space(rng);
  fx.tau = honest_time(rng, fx.space);
  fx.field = conditional_distribution(fx.space, fx.tau);
  return fx;
}

Fixture pred_mult_fixture(Rng& rng) {
  SpaceOptions opts;
  opts.max_atoms = 5;
  opts.max_horizon = 3;
  const FilteredSpace base = space(rng, opts);
  const Process f = azema_submartingale(rng, base, true);
  const MultiplicativeSystem system = predictable_multiplicative_system(base, f);
  const CondDistField field = field_from_system(base, f, system);
  const ExtendedSpace ext = canonical_extension(base, field);

  Fixture fx;
  fx.space = ext.space;
  fx.tau = ext.tau;
  fx.field = ext.lift(field);
  fx.f = ext.lift(f);
  return fx;
}

Fixture opt_mult_fixture(Rng& rng) {
  SpaceOptions opts;
  opts.min_atoms = 2;
  opts.max_atoms = 4;
  opts.min_horizon = 2;
  opts.max_horizon = 2;
  const FilteredSpace base = space(rng, opts);
  const Process f0 = azema_submartingale(rng, base, true);

  // Realize the auxiliary time through the predictable system first.
  const MultiplicativeSystem pred = predictable_multiplicative_system(base, f0);
  const CondDistField pred_field = field_from_system(base, f0, pred);
  const ExtendedSpace aux = canonical_extension(base, pred_field);
  const Process f1 = aux.lift(f0);

  // Then build the optional system on the auxiliary space and realize tau.
  const MultiplicativeSystem opt = optional_multiplicative_system(aux.space, f1, aux.tau);
  const CondDistField opt_field = field_from_system(aux.space, f1, opt);
  const ExtendedSpace fin = canonical_extension(aux.space, opt_field);

  Fixture fx;
  fx.space = fin.space;
  fx.tau = fin.tau;
  fx.field = fin.lift(opt_field);
  fx.f = fin.lift(f1);
  RandomTime tau_hat;
  tau_hat.value.resize(fin.space.n_atoms());
  for (int a = 0; a < fin.space.n_atoms(); ++a) tau_hat.value[a] = aux.tau[fin.base_atom[a]];
  fx.tau_hat = std::move(tau_hat);
  return fx;
}

Fixture separable_fixture(Rng& rng, bool f0_zero) {
  SpaceOptions opts;
  opts.max_atoms = 6;
  opts.max_horizon = 3;
  const FilteredSpace base = space(rng, opts);
  const int S = base.timeline().slots();
  const int term = S - 1;

  // Positive martingale factor bounded away from zero.
  RandomVariable lterm = RandomVariable::constant(base.n_atoms(), Rational());
  for (const auto& block : base.partition_at(base.horizon()).blocks()) {
    const Rational v = Rational(rng.int_in(2, 8), 4);  // in [1/2, 2]
    for (int a : block) lterm[a] = v;
  }
  Process l = martingale_from_terminal(base, lterm);
  Rational lmax;
  for (int s = 0; s < S; ++s)
    for (int a = 0; a < base.n_atoms(); ++a) lmax = std::max(lmax, l.at[s][a]);

  // Adapted increasing profile with the terminal slot pinned so that
  // K_term L_term = 1. Levels stay at most 7/8, which keeps the diagonal
  // K_t L_t below 1 and the supermartingale alive on every finite slot.
  Process k = Process::zeros(base, ProcessKind::Increasing);
  RandomVariable level =
      RandomVariable::constant(base.n_atoms(), f0_zero ? Rational() : Rational(1, 8));
  for (int s = 0; s < term; ++s) {
    if (s > 0) {
      for (const auto& block : base.partition_at(s).blocks()) {
        // Strict positivity from the first slot on needs a live jump at s=1.
        const Rational jump = Rational(rng.int_in(s == 1 && f0_zero ? 1 : 0, 2), 8);
        for (int a : block) level[a] += jump;
      }
    }
    for (int a = 0; a < base.n_atoms(); ++a)
      k.at[s][a] = level[a] / (Rational(2) * lmax);
  }
  for (int a = 0; a < base.n_atoms(); ++a) k.at[term][a] = Rational(1) / l.at[term][a];

  std::vector<std::vector<RandomVariable>> table(S, std::vector<RandomVariable>(S));
  for (int u = 0; u < S; ++u) {
    for (int t = 0; t < S; ++t) {
      if (t >= u) {
        table[u][t] = k.at[u] * l.at[t];
      } else {
        table[u][t] = cond_expect(base, k.at[u] * l.at[u], t);
      }
    }
  }
  CondDistField field(base.timeline(), std::move(table));
  field.validate(base);
  const ExtendedSpace ext = canonical_extension(base, field);

  Fixture fx;
  fx.space = ext.space;
  fx.tau = ext.tau;
  fx.field = ext.lift(field);
  fx.kl = Factorization{ext.lift(k), ext.lift(l)};
  return fx;
}

Fixture ed_fixture(Rng& rng) {
  SpaceOptions opts;
  opts.max_atoms = 5;
  opts.max_horizon = 3;
  const FilteredSpace base = space(rng, opts);
  const int S = base.timeline().slots();
  const int term = S - 1;

  // Multiplicative hazard: positive terminal load X and an adapted
  // increasing clock Lambda; survival decays by 1/(1 + X dLambda).
  RandomVariable load = RandomVariable::constant(base.n_atoms(), Rational());
  for (const auto& block : base.partition_at(base.horizon()).blocks()) {
    const Rational v = Rational(rng.int_in(1, 4), 2);
    for (int a : block) load[a] = v;
  }
  Process lambda = Process::zeros(base, ProcessKind::Increasing);
  RandomVariable level = RandomVariable::constant(base.n_atoms(), Rational());
  for (int s = 0; s <= base.horizon(); ++s) {
    for (const auto& block : base.partition_at(s).blocks()) {
      const Rational jump = Rational(rng.int_in(0, 2), 2);
      for (int a : block) level[a] += jump;
    }
    lambda.at[s] = level;
  }
  lambda.at[term] = level;  // the terminal jump is carried by D below

  // Survival S_u and the kernel m_{s,term}.
  std::vector<RandomVariable> survival(S, RandomVariable::constant(base.n_atoms(), Rational(1)));
  EDData ed;
  ed.m.resize(S);
  const Rational one(1);
  RandomVariable prev = RandomVariable::constant(base.n_atoms(), one);
  std::vector<RandomVariable> m_term(S, RandomVariable::constant(base.n_atoms(), Rational()));
  for (int s = 0; s <= base.horizon(); ++s) {
    RandomVariable cur = prev;
    for (int a = 0; a < base.n_atoms(); ++a) {
      const Rational dl = lambda.delta(s)[a];
      cur[a] = prev[a] / (one + load[a] * dl);
      m_term[s][a] = prev[a] * load[a] / (one + load[a] * dl);
    }
    survival[s] = cur;
    prev = cur;
  }
  m_term[term] = prev;  // remaining mass sits at infinity with dD_inf = 1

  ed.d = lambda;
  for (int a = 0; a < base.n_atoms(); ++a) ed.d.at[term][a] = lambda.at[base.horizon()][a] + one;
  for (int s = 0; s < S; ++s) {
    ed.m[s].reserve(S - s);
    for (int t = s; t < S; ++t) ed.m[s].push_back(cond_expect(base, m_term[s], t));
  }

  // Field from the kernel, then the realizing extension.
  std::vector<std::vector<RandomVariable>> table(
      S, std::vector<RandomVariable>(S, RandomVariable::constant(base.n_atoms(), Rational())));
  for (int u = 0; u < S; ++u) {
    RandomVariable fterm = RandomVariable::constant(base.n_atoms(), Rational());
    for (int s = 0; s <= u; ++s) fterm = fterm + m_term[s] * ed.d.delta(s);
    for (int t = 0; t < S; ++t) table[u][t] = cond_expect(base, fterm, t);
  }
  CondDistField field(base.timeline(), std::move(table));
  field.validate(base);
  const ExtendedSpace ext = canonical_extension(base, field);

  Fixture fx;
  fx.space = ext.space;
  fx.tau = ext.tau;
  fx.field = ext.lift(field);
  fx.ed = ext.lift(ed);
  return fx;
}

Fixture independent_fixture(Rng& rng) {
  SpaceOptions opts;
  opts.max_atoms = 6;
  opts.max_horizon = 3;
  const FilteredSpace base = space(rng, opts);
  const int S = base.timeline().slots();

  // Deterministic mark law: the field is constant in t, hence (H) holds.
  std::vector<int> weights(S);
  long total = 0;
  for (int u = 0; u < S; ++u) {
    weights[u] = rng.int_in(u == 0 ? 0 : 1, 3);
    total += weights[u];
  }
  std::vector<std::vector<RandomVariable>> table(S, std::vector<RandomVariable>(S));
  long cum = 0;
  for (int u = 0; u < S; ++u) {
    cum += weights[u];
    for (int t = 0; t < S; ++t)
      table[u][t] = RandomVariable::constant(base.n_atoms(), Rational(cum, total));
  }
  CondDistField field(base.timeline(), std::move(table));
  field.validate(base);
  const ExtendedSpace ext = canonical_extension(base, field);

  Fixture fx;
  fx.space = ext.space;
  fx.tau = ext.tau;
  fx.field = ext.lift(field);
  return fx;
}

}  // namespace filtlab::gen
