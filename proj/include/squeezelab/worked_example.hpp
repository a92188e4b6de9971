#pragma once

#include "squeezelab/bogoliubov.hpp"
#include "squeezelab/hamiltonian.hpp"
#include "squeezelab/types.hpp"

namespace squeezelab::worked_example {

// Embedded two-mode reference problem with closed-form results, used by the
// golden tests and the paper-example CLI command.
//   ξ = [[45, 7i], [-7i, 45]],  η = [[36, 16i], [16i, 36]],  κ = 0.

BilinearHamiltonian hamiltonian();

// Normal-mode frequencies (30, 12).
RVec omega();

// The reference gauge of the transformation blocks:
//   u = [[7/(3√10), 3i/√10], [5i/(3√2), 1/√2]]
//   v = [[2/(3√10), 2i/√10], [2i√2/3, 0]]
// Row phases differ from diagonalize()'s convention by a per-mode unit
// factor; quantities compared against the constants below must either be
// phase-invariant or be transported into this gauge first.
BTMatrix reference_bt();

// Disentangled-form constants: ρ = (1/22)[[7, 3i],[3i, 5]],
// τ = -(1/11)[[2, i√5],[i√5, 3]], C₀ = √(3√5/11).
CMat rho();
CMat tau();
double norm_magnitude();

// Mean photon numbers of the squeezed vacuum: (14/15, 2/5).
RVec mean_photon();

// Three-factor decomposition constants:
//   D_cosh = diag(√(5/3 + 2/(3√5)), √(5/3 - 2/(3√5)))
//   D_sinh = diag(√(2/3 + 2/(3√5)), √(2/3 - 2/(3√5)))
//   r_{1,2} = ln(√(5/3 ± 2/(3√5)) + √(2/3 ± 2/(3√5)))
RVec d_cosh_diag();
RVec d_sinh_diag();
RVec r_vals();

// Entry magnitudes of the rotation factors (gauge-invariant):
//   |S| = (1/(2√3)) [[√5-1, √5+1], [√5+1, √5-1]]
//   |T| = [[√(½+1/√5), √(½-1/√5)], [√(½-1/√5), √(½+1/√5)]]
RMat s_abs();
RMat t_abs();

// Fock amplitude ⟨(2,0)|0⟩_s = C₀ · (-√2 · 7/22).
cplx fock_20_amplitude();

// Diagonal unit phases p with u_reference = diag(p) · u_other, recovered from
// the largest entry of each row. Throws if the two gauges are not related by
// a per-mode phase.
CVec gauge_phases_to_reference(const BTMatrix& other);

}  // namespace squeezelab::worked_example
