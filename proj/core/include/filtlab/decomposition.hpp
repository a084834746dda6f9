#pragma once

#include "filtlab/hypotheses.hpp"
#include "filtlab/random_time.hpp"

namespace filtlab {

enum class DecompositionVariant {
  StoppedPredictable,
  StoppedOptional,
  PseudoHonest,
  PredMult,
  OptMult,
  PseudoInitial,
  Separable,
  HonestClassic,
  HonestBarM,
  ViaInitial,
};

const char* to_string(DecompositionVariant v);

// Canonical decomposition of an F-martingale (or its stopped version) under
// the progressive enlargement: input = martingale_part + drift with the drift
// G-predictable, finite variation and null at 0.
struct GDecomposition {
  DecompositionVariant variant = DecompositionVariant::StoppedPredictable;
  Process input;
  Process drift;
  Process martingale_part;  // input - drift
};

// Bundle of processes every drift formula needs: Azema pair, indicator,
// dual projections of H, and the three associated martingales
//   M      from the Doob decomposition G = M - A,
//   Mbar_t = E[H^o_inf | F_t],
//   Mtilde_t = E[H^p_inf | F_t]  (M and Mtilde differ only by the mass of
//   {tau = 0}, which both sides of every identity share).
struct TauKit {
  RandomTime tau;
  EnlargedFiltration g;
  Process gproc, fproc;
  Process h;
  Process hp, ho;
  Process m;
  Process mbar, mtilde;
  Process a;  // increasing part of the Doob decomposition of G
};

TauKit make_tau_kit(const FilteredSpace& space, const RandomTime& tau);

// Dual predictable projection of H (the F-compensator). Carries the mass of
// {tau = 0} at slot 0; its increments from slot 1 on coincide with the
// increasing part of the Doob decomposition of G.
Process compensator_f(const FilteredSpace& space, const RandomTime& tau);

// Jeulin-Yor compensator under the progressive enlargement:
// dH^{p,G}_u = 1_{tau >= u} dH^p_u / G_{u-1}.
Process compensator_g_jeulin_yor(const FilteredSpace& space, const RandomTime& tau);

struct SeparableCompensators {
  Process f_compensator;  // dA_u = L_{u-1} dK_u
  Process g_compensator;  // sum_{u <= t^tau} L_{u-1} dK_u / (1 - L_{u-1} K_{u-1})
};

// Compensators from a complete separability factorization with K predictable.
SeparableCompensators compensator_separable(const FilteredSpace& space, const RandomTime& tau,
                                            const Process& k, const Process& l);

// F-compensator of H from extended-density data:
// dH^p_t = d<N, D - D^p>_t + pm_t dD^p_t with m = N + P the Doob split of the
// diagonal kernel. Verified against the field by the caller.
Process compensator_pseudo_initial(const FilteredSpace& space, const EDData& ed);

// The kernel defect process sum_{u<=t} (m_{u,t} - m_{u,u}) dD_u, a martingale
// for every valid kernel.
Process kernel_defect_process(const FilteredSpace& space, const EDData& ed);

// ---------------------------------------------------------------------------
// Decomposition engines. Every engine validates that the input is an
// F-martingale (NotMartingale otherwise) and returns a drift that is
// G-predictable by construction.

GDecomposition decompose_stopped(const FilteredSpace& space, const RandomTime& tau,
                                 const Process& u, DecompositionVariant variant);

struct PseudoHonestBlocks {
  Process u_tilde;                                  // U - Btilde
  std::vector<std::vector<RandomVariable>> u_hat;   // rows u, entries t = u..inf
  const RandomVariable& at(int u, int t) const { return u_hat[u][t - u]; }
};

GDecomposition decompose_pseudo_honest(const FilteredSpace& space, const CondDistField& field,
                                       const RandomTime& tau, const Process& u,
                                       PseudoHonestBlocks* blocks = nullptr);

GDecomposition decompose_pred_mult(const FilteredSpace& space, const Process& f,
                                   const RandomTime& tau, const Process& u);

GDecomposition decompose_opt_mult(const FilteredSpace& space, const Process& f,
                                  const RandomTime& tau_hat, const RandomTime& tau,
                                  const Process& u);

GDecomposition decompose_pseudo_initial(const FilteredSpace& space, const EDData& ed,
                                        const RandomTime& tau, const Process& u);

GDecomposition decompose_separable(const FilteredSpace& space, const Process& k, const Process& l,
                                   const RandomTime& tau, const Process& u);

GDecomposition decompose_honest(const FilteredSpace& space, const RandomTime& tau,
                                const Process& u, DecompositionVariant variant);

// U - B must be a martingale under the initial enlargement with B
// G*-predictable of finite variation; the G-drift keeps the Jeulin-Yor part
// before tau and the increments of B after.
GDecomposition decompose_via_initial(const FilteredSpace& space, const RandomTime& tau,
                                     const Process& u, const Process& b);

// Canonical drift of U under the initial enlargement, built from the mass
// kernel mu_{s,t} = F_{s,t} - F_{s-1,t}: on {tau = s} the increment at t is
// d<U, mu_{s,.}>_t / mu_{s,t-1}. U - g_star_drift is a G*-martingale for any
// random time.
Process g_star_drift(const FilteredSpace& space, const RandomTime& tau, const Process& u);

// ---------------------------------------------------------------------------
// Building-block verifier for G-martingales of the form
// Mhat_t = 1_{tau>t} Utilde_t + 1_{tau<=t} Uhat_{tau,t}.

struct UhatMap {
  std::vector<std::vector<RandomVariable>> rows;  // rows[u][t-u], t = u..inf
  const RandomVariable& at(int u, int t) const { return rows[u][t - u]; }
};

enum class BlockCondition { Field, SeparableL, EDKernel };

struct BuildingBlockReport {
  bool diagonal_predictable = false;
  bool condition_i = false;
  bool condition_ii = false;
  bool conclusion = false;
  std::optional<MartingaleWitness> witness_i;
  std::optional<TripleWitness> witness_ii;
  std::optional<MartingaleWitness> witness_conclusion;

  bool pass() const { return diagonal_predictable && condition_i && condition_ii && conclusion; }
};

// Checks (with exact equalities):
//   (i)  W_t = Utilde_t G_t + sum_{0<v<=t} Uhat_{v,v} dF_v is a martingale,
//   (ii) per (u,s): the weighted defect process is a martingale, where the
//        weight is F_{s,.} (Field), L (SeparableL) or m_{u,.} (EDKernel),
// then verifies the conclusion directly through the enlarged partition.
BuildingBlockReport verify_building_blocks(const FilteredSpace& space, const CondDistField& field,
                                           const RandomTime& tau, const Process& u_tilde,
                                           const UhatMap& u_hat, BlockCondition condition,
                                           const Process* l = nullptr, const EDData* ed = nullptr);

}  // namespace filtlab
