#pragma once

#include "squeezelab/bogoliubov.hpp"
#include "squeezelab/states.hpp"
#include "squeezelab/types.hpp"

namespace squeezelab {

// Three-factor form M = M_S · M_D · M_T with M_S = [[S,0],[0,S*]],
// M_D = [[D_cosh r, D_sinh r],[D_sinh r, D_cosh r]], M_T = [[T,0],[0,T*]].
// S, T unitary; r >= 0 descending. Residual gauge after the phase
// convention: per-mode sign on rows of T (full phase where r = 0), plus a
// real-orthogonal freedom inside degenerate r groups.
struct BlochMessiahFactors {
    CMat s_rot;
    RVec r_vals;
    CMat t_rot;
    // Set when any squeeze magnitude repeats; the factors are then non-unique
    // and only the invariant-checked product is guaranteed.
    bool degenerate_singular_values = false;

    CMat d_cosh() const;
    CMat d_sinh() const;
    BTMatrix reconstruct() const;  // blocks (S D_cosh T, S D_sinh T*)
};

struct MixedBosonFrame {
    CMat t_rot;
    // Covariance of the SVS/SCS with respect to b = T a. XX block is the
    // squeezed one: diag(¼e^{-2r}); YY is diag(¼e^{+2r}); products are 1/16.
    QuadratureCovariance cov_in_frame;
};

enum class SpecialCase { MilburnMUS, OneModeLike, HermitianM, Generic };

const char* to_string(SpecialCase c);

BlochMessiahFactors bloch_messiah(const BTMatrix& bt);

MixedBosonFrame mixed_boson_frame(const BTMatrix& bt);

// Priority order: T = I (global-phase tolerant) > T diagonal > M Hermitian
// (checked on the reconstruction as u = u†, v = vᵀ) > Generic.
SpecialCase classify_special_case(const BlochMessiahFactors& factors);

}  // namespace squeezelab
