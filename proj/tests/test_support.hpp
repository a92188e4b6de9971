#pragma once

#include <random>

#include "squeezelab/bogoliubov.hpp"
#include "squeezelab/fock_oracle.hpp"
#include "squeezelab/hamiltonian.hpp"
#include "squeezelab/squeeze_op.hpp"
#include "squeezelab/states.hpp"
#include "squeezelab/types.hpp"

namespace squeezelab::testsupport {

inline CMat random_complex_gaussian(int rows, int cols, std::mt19937& rng) {
    std::normal_distribution<double> g;
    CMat z(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) z(i, j) = cplx(g(rng), g(rng));
    return z;
}

// Haar-uniform via QR with the R-diagonal phase absorbed into Q.
inline CMat random_unitary(int n, std::mt19937& rng) {
    CMat z = random_complex_gaussian(n, n, rng);
    Eigen::HouseholderQR<CMat> qr(z);
    CMat q = qr.householderQ();
    CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
    return q;
}

// Synthesizes a valid BT from its three-factor form: u = S D_cosh T,
// v = S D_sinh T*; the block identities hold by construction.
inline BTMatrix random_bt(int n, double r_min, double r_max, std::mt19937& rng) {
    std::uniform_real_distribution<double> u01(r_min, r_max);
    CMat s = random_unitary(n, rng);
    CMat t = random_unitary(n, rng);
    RVec r(n);
    for (int i = 0; i < n; ++i) r(i) = u01(rng);
    BTMatrix bt;
    bt.u = s * r.array().cosh().matrix().asDiagonal() * t;
    bt.v = s * r.array().sinh().matrix().asDiagonal() * t.conjugate();
    return bt;
}

// Random valid Hamiltonian: Gaussian Hermitian xi and symmetric eta, with xi
// shifted along the identity until the 2N x 2N block is positive definite
// with a margin. eta_scale steers the squeezing strength.
inline BilinearHamiltonian random_hamiltonian(int n, double eta_scale, bool with_kappa,
                                              std::mt19937& rng) {
    std::uniform_real_distribution<double> margin_dist(0.3, 1.0);
    CMat a = random_complex_gaussian(n, n, rng);
    CMat b = random_complex_gaussian(n, n, rng);
    BilinearHamiltonian h;
    h.n_modes = n;
    h.xi = 0.5 * (a + a.adjoint());
    h.eta = eta_scale * 0.5 * (b + b.transpose());
    h.kappa = CVec::Zero(n);
    if (with_kappa) h.kappa = random_complex_gaussian(n, 1, rng) * 0.5;

    Eigen::SelfAdjointEigenSolver<CMat> es(h.block_matrix(), Eigen::EigenvaluesOnly);
    double min_eig = es.eigenvalues().minCoeff();
    double shift = margin_dist(rng) - std::min(min_eig, 0.0);
    h.xi += shift * CMat::Identity(n, n);
    return h;
}

// |<a|b>| with both sides normalized.
inline double state_overlap(const StateVector& a, const StateVector& b) {
    return std::abs(a.amplitudes.dot(b.amplitudes)) / (a.norm() * b.norm());
}

inline StateVector oracle_vacuum(const TruncatedFockSpace& space) {
    StateVector v;
    v.amplitudes = CVec::Zero(space.dim());
    v.amplitudes(0) = 1.0;
    return v;
}

// U|0> through the exponent form; throws BranchCutError like exponent_form.
inline StateVector oracle_svs(const BTMatrix& bt, const TruncatedFockSpace& space) {
    CMat gen = squeeze_generator_matrix(exponent_form(bt), space);
    return apply_generator_exp(gen, oracle_vacuum(space));
}

// U|n> = prod_i (U a_i† U†)^{n_i}/sqrt(n_i!) U|0>, built with the transformed
// creation operators u*_ij a_j† + v*_ij a_j.
inline StateVector oracle_sfs(const BTMatrix& bt, const MultiIndex& n,
                              const TruncatedFockSpace& space) {
    StateVector v = oracle_svs(bt, space);
    const int modes = space.n_modes();
    for (int i = 0; i < modes; ++i) {
        CMat c_dag = CMat::Zero(space.dim(), space.dim());
        for (int j = 0; j < modes; ++j)
            c_dag += std::conj(bt.u(i, j)) * space.annihilator(j).adjoint() +
                     std::conj(bt.v(i, j)) * space.annihilator(j);
        for (int k = 0; k < n[i]; ++k)
            v.amplitudes = (c_dag * v.amplitudes) / std::sqrt(static_cast<double>(k + 1));
    }
    return v;
}

// Displacement acts last: |n; alpha>_s = exp(alpha c† - alpha* c) U|n>.
inline StateVector oracle_scfs(const BTMatrix& bt, const MultiIndex& n, const CVec& alpha,
                               const TruncatedFockSpace& space) {
    StateVector v = oracle_sfs(bt, n, space);
    CMat gen = displacement_generator_matrix(bt, alpha, space);
    return apply_generator_exp(gen, v);
}

}  // namespace squeezelab::testsupport
