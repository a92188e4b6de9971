#pragma once

#include "squeezelab/hamiltonian.hpp"
#include "squeezelab/squeeze_op.hpp"
#include "squeezelab/states.hpp"
#include "squeezelab/types.hpp"

namespace squeezelab {

// Dense truncated Fock space with per-mode dimension `cutoff` (occupations
// 0..cutoff-1) and dim = cutoff^n_modes <= 20000. Operators are built on the
// truncated space directly: a† maps the top level of its mode to zero, so
// [a, a†] = I holds exactly on the subspace excluding that top level and
// truncation error is observable through tail mass, never hidden.
class TruncatedFockSpace {
  public:
    TruncatedFockSpace(int n_modes, int cutoff);

    int n_modes() const { return n_modes_; }
    int cutoff() const { return cutoff_; }
    long dim() const { return dim_; }

    long rank(const MultiIndex& occ) const;
    MultiIndex unrank(long index) const;

    // Dense matrix of the annihilator for one mode.
    const CMat& annihilator(int mode) const { return a_[mode]; }

  private:
    int n_modes_;
    int cutoff_;
    long dim_;
    std::vector<CMat> a_;
};

struct StateVector {
    CVec amplitudes;

    double norm() const { return amplitudes.norm(); }
    StateVector normalized() const;
};

struct GroundState {
    StateVector state;
    double energy = 0.0;
};

struct ClosedFormState {
    StateVector state;          // raw closed-form amplitudes, not renormalized
    double norm_deficit = 0.0;  // 1 - Σ|amp|², the tail mass beyond the cutoff
};

struct NumericMoments {
    RVec mean_n;
    RVec var_n;
    QuadratureCovariance cov;
};

// Assembles Σ a†ξa + aξ*a† + a†ηa† + aη*a + κᵀa + κ†a† as a dense Hermitian
// matrix. Throws SpaceTooLarge past the dense guard.
CMat build_hamiltonian(const BilinearHamiltonian& h, const TruncatedFockSpace& space);

GroundState ground_state(const CMat& hmat);

// Fock amplitudes of the descriptor over the whole truncated lattice.
// Throws TailMassTooLarge when the norm deficit exceeds tail_gate; the
// exception carries a suggested cutoff from the amplitude decay rate.
ClosedFormState build_closed_form_state(const StateDescriptor& s,
                                        const TruncatedFockSpace& space,
                                        double tail_gate = 1e-8);

NumericMoments numeric_moments(const StateVector& v, const TruncatedFockSpace& space);

// exp(gen)·v for an anti-Hermitian generator (residual above 1e-10 relative
// throws NotAntiHermitian); the exponential is Padé scaling-and-squaring.
StateVector apply_generator_exp(const CMat& gen, const StateVector& v);

// Dense matrix of the quadratic generator -½ [a†ᵀ aᵀ] K lnM [a; a†] given the
// exponent-form generator (= -½K lnM) of a BT matrix.
CMat squeeze_generator_matrix(const ExponentForm& form, const TruncatedFockSpace& space);

// Dense matrix of the displacement generator αᵀc† - α†c where c = u a + v a†.
CMat displacement_generator_matrix(const BTMatrix& bt, const CVec& alpha,
                                   const TruncatedFockSpace& space);

}  // namespace squeezelab
