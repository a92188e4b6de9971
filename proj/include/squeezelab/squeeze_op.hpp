#pragma once

#include "squeezelab/bogoliubov.hpp"
#include "squeezelab/types.hpp"

namespace squeezelab {

// Normal-ordered factorization data of the squeeze operator
// U = C₀ · exp(-a†ᵀρa†) · exp(-a†ᵀσa - aᵀσᵀa†) · exp(aᵀτa),
// with ρ = ½u⁻¹v, τ = ½v*u⁻¹, σ = ½ ln u, C₀ = |det u|^(-1/2).
// σ is derived on demand; u itself is the stored datum since only e^{2σ} = u
// ever enters a formula and storing u avoids branch-cut artifacts.
struct DisentangledSO {
    CMat rho;               // symmetric; spectral radius of 2ρ is < 1
    CMat u_block;
    CMat tau;               // symmetric
    double norm_magnitude;  // |det u|^(-1/2), real positive by convention

    CMat sigma() const;  // ½ · principal log of u_block
};

// Generator of the exponent form U = exp(-½ [a†ᵀ aᵀ] K lnM [a; a†]):
// generator = -½ K lnM. The principal log L = lnM = -2K·generator inherits
// the conjugation structure of M: L₁₂ = L₂₁*, L₂₂ = L₁₁*, L₁₁ᵀ = -L₂₂,
// L₁₂ᵀ = L₁₂, and M†(KL)M = KL.
struct ExponentForm {
    CMat generator;
};

struct OneModeReduction {
    cplx zeta;  // U = exp(½ζ*a² - ½ζa†²)
};

struct TwoModeStandardForm {
    bool standard = false;
    double r = 0.0;
    double varphi = 0.0;
};

DisentangledSO disentangle(const BTMatrix& bt);

// Throws BranchCutError when M has an eigenvalue within 1e-8 of the closed
// negative real axis (the disentangled form remains available in that case).
ExponentForm exponent_form(const BTMatrix& bt);

// BT matrix of the operator product U₁U₂; equals compose_bt(m2, m1) because
// operator order and matrix order are reversed.
BTMatrix compose_so(const BTMatrix& m1, const BTMatrix& m2);

// One-mode ζ with the real-u phase convention applied first:
// ζ = v ln(u + |v|)/|v|, and ζ = 0 when v = 0.
OneModeReduction one_mode_reduce(const BTMatrix& bt);

// True iff u = diag(cosh r, cosh r) and v = antidiag(e^{iφ} sinh r) to 1e-10,
// as literally presented; no gauge freedom is quotiented out.
TwoModeStandardForm is_standard_two_mode(const BTMatrix& bt);

// Principal matrix logarithm used by exponent_form; exposed for tests.
// Eigendecomposition route with a Schur-based fallback for defective inputs.
CMat matrix_log(const CMat& m);

}  // namespace squeezelab
