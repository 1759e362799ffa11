#pragma once

namespace gnep {

/// Numerical thresholds shared by every stage of the solver.
struct Tolerances {
  double feasibility = 1e-9;     // primal feasibility of LP/MILP points
  double integrality = 1e-6;     // distance to the nearest integer
  double equilibrium = 1e-5;     // x is declared an equilibrium if V(x) <= this
  double prune = 1e-5;           // node pruned if its bound exceeds this
  double regret_gap = 1e-4;      // eta_i > Phi_i + gap selects player i for a cut
  double cut_violation = 5e-6;   // minimum violation of an accepted cut
  double product = 1e-6;         // |z - x*y| above this triggers spatial branching
};

}  // namespace gnep
