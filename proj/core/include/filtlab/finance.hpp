#pragma once

#include "filtlab/decomposition.hpp"

namespace filtlab {

// Density process turning a completely separable conditional distribution
// into an immersed one: Zhat_{u,t} = F_{u,u}/F_{u,t} after tau, and the
// G_t-normalized remainder before. Preconditions: the field factors as
// K_u L_t and carries no mass at zero. The result is checked to be a
// G-martingale before it is returned.
Process immersion_density(const FilteredSpace& space, const CondDistField& field,
                          const RandomTime& tau);

struct ImmersionMeasureResult {
  Measure pbar;                   // density on the progressive sigma-field at T
  bool xdee_holds = false;        // Fbar_{u,u} == Fbar_{u,t} for all u <= t <= T
  bool coincides_on_f = false;    // Pbar == P on every F_t block, t <= T
  std::string detail;
};

// Measure change at horizon T under which the hypothesis (H) holds for the
// finite slots. Errors: DensityNotPositive, NormalizationFails (the
// E[Z_t|F_t] = 1 precondition), plus the immersion_density preconditions.
ImmersionMeasureResult immersion_measure(const FilteredSpace& space, const CondDistField& field,
                                         const RandomTime& tau);

// Radon-Nikodym projection: from an immersing measure q_tilde and a target,
// the measure with density E_{q_tilde}[ d(target)/d(q_tilde) | F_T ] against
// q_tilde. Coincides with the target on F and preserves immersion.
Measure project_measure(const FilteredSpace& space, const Measure& q_tilde,
                        const Measure& target);

struct ProjectionReport {
  bool density_adapted = false;        // eta_t is F-adapted
  bool coincides_on_f = false;         // Q == target on F
  bool immersion_under_q = false;      // (H) holds under Q
  bool transfers_martingales = false;  // (target, F)-martingales are (Q, G)-martingales
};

ProjectionReport verify_projection(const FilteredSpace& space, const RandomTime& tau,
                                   const Measure& q_tilde, const Measure& target,
                                   const Measure& q);

struct MartingaleMeasureReport {
  MartingaleVerdict x_under_f;   // X martingale under (Q, F)?
  bool immersion_under_q = false;
  MartingaleVerdict x_under_k;   // X martingale under (Q, enlarged filtration)?
};

MartingaleMeasureReport check_martingale_measure(const FilteredSpace& space, const Process& x,
                                                 const Measure& q,
                                                 const EnlargedFiltration& enlargement);

// Market model X = U + (phi . <U,U>) with U the martingale part of the Doob
// decomposition; construction fails when the drift is not absolutely
// continuous against the bracket.
struct MarketScenario {
  Process x;
  Process u;
  Process phi;  // predictable drift density
  RandomTime tau;
  CondDistField field;
};

MarketScenario make_market_scenario(const FilteredSpace& space, const Process& x,
                                    const RandomTime& tau, const CondDistField& field);

struct InformationDriftResult {
  Process psi;             // G-predictable density against <U,U>
  GDecomposition decomposition;
  Process eta;             // regression of Mbar on U before tau
  Process kw_residual;     // Mbar - (eta . U), orthogonal to U
};

// Information drift of the progressive enlargement for a pseudo-initial
// time: psi_u = 1_{tau>=u} eta_u / G_{u-1} + 1_{tau<u} xi_{tau,u} / m_{tau,u-1}
// with eta, xi the bracket regressions on U. U - (psi . <U,U>) is an exact
// G-martingale.
InformationDriftResult information_drift(const FilteredSpace& space, const MarketScenario& market,
                                         const EDData& ed);

}  // namespace filtlab
