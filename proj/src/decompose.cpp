#include "squeezelab/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "squeezelab/errors.hpp"

namespace squeezelab {

namespace {

// Takagi factorization W = O D O ᵀ of a unitary symmetric W, with O real
// orthogonal and D unimodular diagonal. Unitarity plus symmetry make
// X = Re W and Y = Im W commuting real symmetric matrices, so a two-stage
// orthogonal diagonalization (X first, then Y inside each X eigenspace)
// diagonalizes both at once.
void takagi_unitary_symmetric(const CMat& w, RMat& o, CVec& d) {
    const int k = static_cast<int>(w.rows());
    RMat x = w.real();
    RMat y = w.imag();
    x = 0.5 * (x + x.transpose());
    y = 0.5 * (y + y.transpose());

    Eigen::SelfAdjointEigenSolver<RMat> esx(x);
    o = esx.eigenvectors();
    const RVec& lam = esx.eigenvalues();

    int start = 0;
    while (start < k) {
        int stop = start + 1;
        while (stop < k && std::abs(lam(stop) - lam(start)) <= 1e-8) ++stop;
        int size = stop - start;
        if (size > 1) {
            RMat yb = o.middleCols(start, size).transpose() * y * o.middleCols(start, size);
            yb = 0.5 * (yb + yb.transpose());
            Eigen::SelfAdjointEigenSolver<RMat> esy(yb);
            o.middleCols(start, size) = o.middleCols(start, size) * esy.eigenvectors();
        }
        start = stop;
    }

    CMat diag = o.transpose().cast<cplx>() * w * o.cast<cplx>();
    d.resize(k);
    for (int j = 0; j < k; ++j) {
        cplx z = diag(j, j);
        // Diagonal entries are unimodular up to roundoff; a collapsed entry
        // means the input carried no phase information, so take 1.
        d(j) = std::abs(z) > 0.5 ? z / std::abs(z) : cplx(1.0, 0.0);
    }
}

}  // namespace

const char* to_string(SpecialCase c) {
    switch (c) {
        case SpecialCase::MilburnMUS: return "milburn-mus";
        case SpecialCase::OneModeLike: return "one-mode-like";
        case SpecialCase::HermitianM: return "hermitian-m";
        case SpecialCase::Generic: return "generic";
    }
    return "unknown";
}

CMat BlochMessiahFactors::d_cosh() const {
    CVec d(r_vals.size());
    for (int i = 0; i < r_vals.size(); ++i) d(i) = std::cosh(r_vals(i));
    return CMat(d.asDiagonal());
}

CMat BlochMessiahFactors::d_sinh() const {
    CVec d(r_vals.size());
    for (int i = 0; i < r_vals.size(); ++i) d(i) = std::sinh(r_vals(i));
    return CMat(d.asDiagonal());
}

BTMatrix BlochMessiahFactors::reconstruct() const {
    return {s_rot * d_cosh() * t_rot, s_rot * d_sinh() * t_rot.conjugate()};
}

BlochMessiahFactors bloch_messiah(const BTMatrix& bt) {
    const int n = bt.n();
    CMat uu = bt.u * bt.u.adjoint();
    uu = 0.5 * (uu + uu.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> es(uu);
    if (es.info() != Eigen::Success) throw Error("eigensolver failed on uu adjoint");

    // Descending cosh²r; the singular values of u are the cosh r.
    CMat s1(n, n);
    for (int j = 0; j < n; ++j) s1.col(j) = es.eigenvectors().col(n - 1 - j);

    // sinh r is read off the rows of S₁†v rather than from cosh² - 1: the row
    // norms are accurate absolutely, so an unsqueezed mode comes out at the
    // roundoff floor instead of at sqrt(eigenvalue noise).
    CMat b = s1.adjoint() * bt.v;
    RVec sh(n), ch(n), r(n);
    for (int i = 0; i < n; ++i) {
        double s = b.row(i).norm();
        if (s <= 1e-9) s = 0.0;
        double c = std::sqrt(1.0 + s * s);
        sh(i) = s;
        ch(i) = c;
        r(i) = s == 0.0 ? 0.0 : std::log(c + s);
    }

    // Row-norm extraction can disturb descending order inside near-ties of
    // the eigenvalues; restore it explicitly.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int p, int q) { return sh(p) > sh(q); });
    {
        CMat s1p(n, n), bp(n, n);
        RVec shp(n), chp(n), rp(n);
        for (int j = 0; j < n; ++j) {
            s1p.col(j) = s1.col(order[j]);
            bp.row(j) = b.row(order[j]);
            shp(j) = sh(order[j]);
            chp(j) = ch(order[j]);
            rp(j) = r(order[j]);
        }
        s1 = s1p;
        b = bp;
        sh = shp;
        ch = chp;
        r = rp;
    }

    CMat t1 = s1.adjoint() * bt.u;
    for (int i = 0; i < n; ++i) t1.row(i) /= ch(i);
    CMat t2 = CMat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        if (sh(i) > 0.0) t2.row(i) = b.row(i) / sh(i);

    BlochMessiahFactors factors;
    factors.degenerate_singular_values = false;

    // Per group of equal squeeze magnitude, the unitary defect between the
    // u-side and v-side frames is Z with ZZᵀ = T₂T₁ᵀ restricted to the group.
    // Absorbing Z into S and T makes v = S D_sinh T* hold with the same S, T
    // as the u factorization; Z commutes with the constant diagonal inside
    // the group, so the u side is untouched.
    int start = 0;
    while (start < n) {
        int stop = start + 1;
        double s2s = sh(start) * sh(start);
        while (stop < n) {
            double s2 = sh(stop) * sh(stop);
            if (s2s - s2 > 1e-8 * std::max(1.0, s2s)) break;
            ++stop;
        }
        int size = stop - start;
        if (size > 1) factors.degenerate_singular_values = true;

        if (sh(start) > 0.0) {
            CMat w = t2.middleRows(start, size) *
                     t1.middleRows(start, size).transpose();
            w = 0.5 * (w + w.transpose());
            CMat z(size, size);
            if (size == 1) {
                cplx d = w(0, 0);
                z(0, 0) = std::sqrt(std::abs(d) > 0.5 ? d / std::abs(d) : cplx(1.0, 0.0));
            } else {
                RMat o;
                CVec d;
                takagi_unitary_symmetric(w, o, d);
                CVec half(size);
                for (int j = 0; j < size; ++j) half(j) = std::sqrt(d(j));
                z = o.cast<cplx>() * half.asDiagonal();
            }
            t1.middleRows(start, size) = z.adjoint() * t1.middleRows(start, size);
            s1.middleCols(start, size) = s1.middleCols(start, size) * z;
        }
        start = stop;
    }

    // Phase convention on the rows of T: largest entry real positive where
    // the residual freedom is a full phase (r = 0), real part positive where
    // only a sign survives (r > 0, since Z sign flips preserve ZZᵀ = W).
    for (int i = 0; i < n; ++i) {
        int pivot = 0;
        double best = std::abs(t1(i, 0));
        for (int k = 1; k < n; ++k) {
            double mag = std::abs(t1(i, k));
            if (mag > best) {
                best = mag;
                pivot = k;
            }
        }
        cplx zp = t1(i, pivot);
        if (r(i) > 0.0) {
            bool flip = zp.real() < 0.0 || (zp.real() == 0.0 && zp.imag() < 0.0);
            if (flip) {
                t1.row(i) *= -1.0;
                s1.col(i) *= -1.0;
            }
        } else {
            cplx unit = zp / std::abs(zp);
            t1.row(i) *= std::conj(unit);
            s1.col(i) *= unit;
        }
    }

    factors.s_rot = s1;
    factors.r_vals = r;
    factors.t_rot = t1;
    return factors;
}

MixedBosonFrame mixed_boson_frame(const BTMatrix& bt) {
    BlochMessiahFactors factors = bloch_messiah(bt);
    // In the frame b = T a the transformation loses its T factor, so the
    // state covariance follows from the blocks (S D_cosh, S D_sinh) alone.
    CMat ub = factors.s_rot * factors.d_cosh();
    CMat vb = factors.s_rot * factors.d_sinh();
    MixedBosonFrame frame;
    frame.t_rot = factors.t_rot;
    frame.cov_in_frame =
        covariance_from_blocks(ub, vb, MultiIndex(bt.n(), 0));
    return frame;
}

SpecialCase classify_special_case(const BlochMessiahFactors& factors) {
    const int n = static_cast<int>(factors.t_rot.rows());
    const CMat& t = factors.t_rot;
    constexpr double tol = 1e-9;

    if (std::abs(t(0, 0)) > 0.5) {
        cplx phase = t(0, 0) / std::abs(t(0, 0));
        double dev = max_abs(CMat(t - phase * CMat::Identity(n, n)));
        if (dev <= tol) return SpecialCase::MilburnMUS;
    }

    double off = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) off = std::max(off, std::abs(t(i, j)));
    if (off <= tol) return SpecialCase::OneModeLike;

    BTMatrix rec = factors.reconstruct();
    if (hermiticity_residual(rec.u) <= tol && symmetry_residual(rec.v) <= tol)
        return SpecialCase::HermitianM;

    return SpecialCase::Generic;
}

}  // namespace squeezelab
