#pragma once

#include "squeezelab/hamiltonian.hpp"
#include "squeezelab/types.hpp"

namespace squeezelab {

// Blocks of the transformation [c; c†] = M [a; a†] with M = [[u, v], [v*, u*]].
// Validity means M K M† = M† K M = K for K = diag(I, -I), equivalently
// uu† - vv† = I, uvᵀ = vuᵀ, u†u - vᵀv* = I, u†v = vᵀu*.
struct BTMatrix {
    CMat u;
    CMat v;

    int n() const { return static_cast<int>(u.rows()); }

    // The full 2N x 2N matrix [[u, v], [v*, u*]].
    CMat full() const;

    static BTMatrix identity(int n);
};

// Max-norm residuals of the four block identities.
struct SymplecticResiduals {
    double r_uud1 = 0.0;  // uu† - vv† - I
    double r_uud2 = 0.0;  // uvᵀ - vuᵀ
    double r_udu1 = 0.0;  // u†u - vᵀv* - I
    double r_udu2 = 0.0;  // u†v - vᵀu*
    double max() const;
};

struct DiagonalizationResult {
    BTMatrix bt;
    RVec omega;          // normal-mode frequencies, strictly positive, descending
    CVec alpha;          // displacement absorbing the linear drive; zero for kappa = 0
    double energy_shift = 0.0;  // constant from completing the square; <= 0
};

// Normal-mode decomposition of a validated Hamiltonian. Eigenvectors of the
// positive branch are normalized to w†Kw = +1; within a degenerate frequency
// block they are K-orthonormal. Row phases of u are fixed so the largest
// magnitude entry of each row is real positive; ordering is omega descending
// with deterministic tie-breaks.
DiagonalizationResult diagonalize(const BilinearHamiltonian& h);

SymplecticResiduals check_symplectic(const BTMatrix& bt);

// M⁻¹ = K M† K, i.e. blocks (u†, -vᵀ).
BTMatrix invert_bt(const BTMatrix& bt);

// Blocks of the product m1·m2: u = u₁u₂ + v₁v₂*, v = u₁v₂ + v₁u₂*.
BTMatrix compose_bt(const BTMatrix& m1, const BTMatrix& m2);

// Left multiplication by diag(e^{i phi}) on both blocks; physics is invariant
// under this per-mode phase freedom.
BTMatrix apply_phase(const BTMatrix& bt, const RVec& phi);

}  // namespace squeezelab
