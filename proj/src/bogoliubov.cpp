#include "squeezelab/bogoliubov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "squeezelab/errors.hpp"

namespace squeezelab {

namespace {

CMat k_metric(int n) {
    CMat k = CMat::Zero(2 * n, 2 * n);
    k.topLeftCorner(n, n).setIdentity();
    k.bottomRightCorner(n, n) = -CMat::Identity(n, n);
    return k;
}

// Multiplies row j of u and v by the unit phase that makes the largest
// magnitude entry of u's row real positive. First maximum wins on ties, so
// the convention is deterministic.
void fix_row_phase(CMat& u, CMat& v, int j) {
    int best = 0;
    double best_mag = std::abs(u(j, 0));
    for (int k = 1; k < u.cols(); ++k) {
        double mag = std::abs(u(j, k));
        if (mag > best_mag) {
            best_mag = mag;
            best = k;
        }
    }
    // uu† - vv† = I forces |u row|² >= 1, so the pivot is never zero.
    cplx unit = u(j, best) / best_mag;
    u.row(j) *= std::conj(unit);
    v.row(j) *= std::conj(unit);
}

}  // namespace

CMat BTMatrix::full() const {
    const int nn = n();
    CMat m(2 * nn, 2 * nn);
    m.topLeftCorner(nn, nn) = u;
    m.topRightCorner(nn, nn) = v;
    m.bottomLeftCorner(nn, nn) = v.conjugate();
    m.bottomRightCorner(nn, nn) = u.conjugate();
    return m;
}

BTMatrix BTMatrix::identity(int n) {
    return {CMat::Identity(n, n), CMat::Zero(n, n)};
}

double SymplecticResiduals::max() const {
    return std::max(std::max(r_uud1, r_uud2), std::max(r_udu1, r_udu2));
}

DiagonalizationResult diagonalize(const BilinearHamiltonian& h) {
    const int n = h.n_modes;
    CMat hb = h.block_matrix();
    hb = 0.5 * (hb + hb.adjoint());

    Eigen::LLT<CMat> llt(hb);
    if (llt.info() != Eigen::Success) {
        Eigen::SelfAdjointEigenSolver<CMat> es(hb, Eigen::EigenvaluesOnly);
        double min_eig = es.eigenvalues().minCoeff();
        throw NotPositiveDefinite(
            "block matrix is not positive definite, smallest eigenvalue " +
                format_double(min_eig),
            min_eig);
    }

    // With H = LL† the pencil HKw = λw maps to the Hermitian problem
    // (L†KL)q = λq via w = Lq/√λ; K-normalization w†Kw = q†(L†KL)q/λ = q†q
    // comes out as +1 on the positive branch for free, and degenerate blocks
    // inherit K-orthonormality from the orthonormal q.
    CMat l = llt.matrixL();
    CMat a = l.adjoint() * k_metric(n) * l;
    a = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> es(a);
    if (es.info() != Eigen::Success) throw Error("eigensolver failed to converge");

    // Sylvester: congruence to K gives exactly n negative and n positive
    // eigenvalues, ascending, so the positive branch is the upper half.
    const RVec& lam = es.eigenvalues();
    if (!(lam(n - 1) < 0.0 && lam(n) > 0.0))
        throw Error("eigenvalue signature lost, input too close to singular");

    CMat u(n, n), v(n, n);
    RVec omega(n);
    for (int j = 0; j < n; ++j) {
        int idx = n + j;
        double lambda = lam(idx);
        CVec w = (l * es.eigenvectors().col(idx)) / std::sqrt(lambda);
        // Row j of M is w†: u_{jk} = conj(w_k), v_{jk} = conj(w_{n+k}).
        u.row(j) = w.head(n).conjugate().transpose();
        v.row(j) = w.tail(n).conjugate().transpose();
        omega(j) = lambda;
    }
    for (int j = 0; j < n; ++j) fix_row_phase(u, v, j);

    // Descending frequencies; near-ties fall back to a lexicographic order of
    // the phase-invariant row magnitudes of u.
    double tie_tol = 1e-12 * std::max(1.0, omega.cwiseAbs().maxCoeff());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int p, int q) {
        if (omega(p) - omega(q) > tie_tol) return true;
        if (omega(q) - omega(p) > tie_tol) return false;
        for (int k = 0; k < n; ++k) {
            double dp = std::abs(u(p, k));
            double dq = std::abs(u(q, k));
            if (dp - dq > 1e-12) return true;
            if (dq - dp > 1e-12) return false;
        }
        return false;
    });

    DiagonalizationResult result;
    result.bt.u.resize(n, n);
    result.bt.v.resize(n, n);
    result.omega.resize(n);
    for (int j = 0; j < n; ++j) {
        result.bt.u.row(j) = u.row(order[j]);
        result.bt.v.row(j) = v.row(order[j]);
        result.omega(j) = omega(order[j]);
    }

    result.alpha = CVec::Zero(n);
    result.energy_shift = 0.0;
    if (h.kappa.size() == n && max_abs(h.kappa) > 0.0) {
        CVec z(2 * n);
        z.head(n) = h.kappa.conjugate();
        z.tail(n) = h.kappa;
        CVec y = llt.solve(z);
        result.alpha = 0.5 * y.head(n);
        // z†H⁻¹z is real for Hermitian positive definite H; the shift is
        // the constant left over after completing the square, never positive.
        result.energy_shift = -0.25 * z.dot(y).real();
    }
    return result;
}

SymplecticResiduals check_symplectic(const BTMatrix& bt) {
    const int n = bt.n();
    CMat eye = CMat::Identity(n, n);
    SymplecticResiduals r;
    r.r_uud1 = max_abs(CMat(bt.u * bt.u.adjoint() - bt.v * bt.v.adjoint() - eye));
    r.r_uud2 = max_abs(CMat(bt.u * bt.v.transpose() - bt.v * bt.u.transpose()));
    r.r_udu1 = max_abs(
        CMat(bt.u.adjoint() * bt.u - bt.v.transpose() * bt.v.conjugate() - eye));
    r.r_udu2 = max_abs(CMat(bt.u.adjoint() * bt.v - bt.v.transpose() * bt.u.conjugate()));
    return r;
}

BTMatrix invert_bt(const BTMatrix& bt) {
    return {bt.u.adjoint(), -bt.v.transpose()};
}

BTMatrix compose_bt(const BTMatrix& m1, const BTMatrix& m2) {
    if (m1.n() != m2.n()) throw DimensionMismatch("mode counts differ in compose_bt");
    return {m1.u * m2.u + m1.v * m2.v.conjugate(),
            m1.u * m2.v + m1.v * m2.u.conjugate()};
}

BTMatrix apply_phase(const BTMatrix& bt, const RVec& phi) {
    if (phi.size() != bt.n()) throw DimensionMismatch("phase vector size mismatch");
    CVec d(phi.size());
    for (int j = 0; j < phi.size(); ++j)
        d(j) = std::polar(1.0, phi(j));
    return {d.asDiagonal() * bt.u, d.asDiagonal() * bt.v};
}

}  // namespace squeezelab
