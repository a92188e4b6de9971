#pragma once

#include "squeezelab/bogoliubov.hpp"
#include "squeezelab/squeeze_op.hpp"
#include "squeezelab/types.hpp"

namespace squeezelab {

enum class StateKind { Fock, Coherent, CoherentFock, SVS, SCS, SFS, SCFS };

const char* to_string(StateKind kind);

// One of the seven state families. kind and (bt, alpha, n) are kept mutually
// consistent: the baseline kinds carry an identity BT, vacuum-based kinds
// carry n = 0, and displacement-free kinds carry alpha = 0. Use the factory
// functions, which zero-fill the unused fields.
struct StateDescriptor {
    StateKind kind = StateKind::Fock;
    BTMatrix bt;
    CVec alpha;
    MultiIndex n;

    int n_modes() const { return bt.n(); }
    bool squeezed() const {
        return kind == StateKind::SVS || kind == StateKind::SCS ||
               kind == StateKind::SFS || kind == StateKind::SCFS;
    }
    bool displaced() const {
        return kind == StateKind::Coherent || kind == StateKind::CoherentFock ||
               kind == StateKind::SCS || kind == StateKind::SCFS;
    }
    bool excited() const {
        return kind == StateKind::Fock || kind == StateKind::CoherentFock ||
               kind == StateKind::SFS || kind == StateKind::SCFS;
    }
};

StateDescriptor make_fock(const MultiIndex& n);
StateDescriptor make_coherent(const CVec& alpha);
StateDescriptor make_coherent_fock(const MultiIndex& n, const CVec& alpha);
StateDescriptor make_svs(const BTMatrix& bt);
StateDescriptor make_scs(const BTMatrix& bt, const CVec& alpha);
StateDescriptor make_sfs(const BTMatrix& bt, const MultiIndex& n);
StateDescriptor make_scfs(const BTMatrix& bt, const MultiIndex& n, const CVec& alpha);

// Unsymmetrized second central moments ⟨ΔAᵢΔBⱼ⟩ of the quadratures
// X = (a+a†)/2, Y = (a-a†)/(2i), assembled as [[XX, XY], [YX, YY]].
// Hermitian as a 2N x 2N matrix; per-mode ⟨ΔXᵢ²⟩⟨ΔYᵢ²⟩ >= 1/16.
struct QuadratureCovariance {
    CMat cov;

    int n_modes() const { return static_cast<int>(cov.rows()) / 2; }
    CMat xx() const;
    CMat xy() const;
    CMat yx() const;
    CMat yy() const;
};

// Generating data exp(pᵀ·tau_form·p + pᵀ·linear) whose multi-index
// derivatives at p = 0 produce excited-state amplitudes.
struct HermiteSeries {
    CMat tau_form;
    CVec linear;
};

// Creation-operator-only reduction of a state:
//   prefactor · [Π (1/√nᵢ!) ∂^{nᵢ}_{pᵢ}] exp(pᵀ·series.tau_form·p
//       + pᵀ(series_linear_matrix·a† + series.linear))
//   · exp(linearᵀa† - a†ᵀ·quadratic·a†) |0⟩ at p = 0,
// where series_linear_matrix is u^{-T} for squeezed kinds and I otherwise.
// has_series is false for the derivative-free kinds (the p-factor is absent).
struct ReducedCoefficients {
    cplx prefactor;
    CMat quadratic;      // ρ for squeezed kinds, 0 for baselines
    CVec linear;
    bool has_series = false;
    HermiteSeries series;  // series.linear holds the a†-independent shift
    MultiIndex n;
};

// (Πᵢ nᵢ!) × [coefficient of Π pᵢ^{nᵢ} in exp(pᵀ·tau_form·p + pᵀw)], the
// iterated derivative at p = 0. Guarded at total degree 60.
cplx hermite_coefficient(const CMat& tau_form, const CVec& w, const MultiIndex& n);

QuadratureCovariance covariance(const StateDescriptor& s);
RVec mean_photon(const StateDescriptor& s);
RVec photon_variance(const StateDescriptor& s);

cplx wavefn_fock(const StateDescriptor& s, const MultiIndex& m);
cplx wavefn_coherent(const StateDescriptor& s, const CVec& beta);
cplx wavefn_coordinate(const StateDescriptor& s, const RVec& x);

ReducedCoefficients reduced_state_coefficients(const StateDescriptor& s);

// Covariance of the vacuum-based state of an arbitrary (u, v) pair with Fock
// weights n; the descriptor-facing covariance() dispatches into this. Exposed
// because frame-rotated covariances reuse it.
QuadratureCovariance covariance_from_blocks(const CMat& u, const CMat& v, const MultiIndex& n);

// All Fock amplitudes ⟨m|state⟩ for 0 <= m_i < bound_i, in row-major order
// (last mode fastest). Shares the series recurrence with wavefn_fock but fills
// the whole lattice in one pass, so it has no per-call degree guard.
std::vector<cplx> fock_lattice_amplitudes(const StateDescriptor& s, const MultiIndex& bounds);

}  // namespace squeezelab
