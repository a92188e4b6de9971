#include "squeezelab/squeeze_op.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "squeezelab/errors.hpp"

namespace squeezelab {

namespace {

constexpr double kBranchCutTol = 1e-8;

// Distance from z to the closed negative real axis, the branch cut of the
// principal logarithm (the cut includes 0, where no logarithm exists at all).
double branch_cut_distance(const cplx& z) {
    if (z.real() <= 0.0) return std::abs(z.imag());
    return std::abs(z);
}

CMat k_metric(int n) {
    CMat k = CMat::Zero(2 * n, 2 * n);
    k.topLeftCorner(n, n).setIdentity();
    k.bottomRightCorner(n, n) = -CMat::Identity(n, n);
    return k;
}

}  // namespace

CMat DisentangledSO::sigma() const { return 0.5 * matrix_log(u_block); }

CMat matrix_log(const CMat& m) {
    Eigen::ComplexEigenSolver<CMat> es(m);
    if (es.info() == Eigen::Success) {
        const CMat& vecs = es.eigenvectors();
        Eigen::JacobiSVD<CMat> svd(vecs);
        double cond = svd.singularValues()(0) /
                      svd.singularValues()(svd.singularValues().size() - 1);
        if (cond < 1e8) {
            CVec logs(es.eigenvalues().size());
            for (int j = 0; j < logs.size(); ++j)
                logs(j) = std::log(es.eigenvalues()(j));
            CMat result = vecs * logs.asDiagonal() * vecs.inverse();
            // Accept the cheap route only if it actually inverts exp.
            double residual = max_abs_diff(result.exp(), m);
            if (residual <= 1e-9 * std::max(1.0, max_abs(m))) return result;
        }
    }
    // Defective or ill-conditioned eigenbasis: Schur-based logarithm.
    return m.log();
}

DisentangledSO disentangle(const BTMatrix& bt) {
    DisentangledSO d;
    d.u_block = bt.u;

    Eigen::PartialPivLU<CMat> lu(bt.u);
    // u⁻¹v and v*u⁻¹ are symmetric by the block identities; symmetrizing
    // removes the last-digit asymmetry of the solves.
    CMat rho = 0.5 * lu.solve(bt.v);
    d.rho = 0.5 * (rho + rho.transpose());

    Eigen::PartialPivLU<CMat> lut(bt.u.transpose());
    CMat tau_t = 0.5 * lut.solve(bt.v.adjoint());  // (v*u⁻¹)ᵀ = u⁻ᵀv†
    CMat tau = tau_t.transpose();
    d.tau = 0.5 * (tau + tau.transpose());

    d.norm_magnitude = 1.0 / std::sqrt(std::abs(lu.determinant()));
    return d;
}

ExponentForm exponent_form(const BTMatrix& bt) {
    CMat m = bt.full();
    Eigen::ComplexEigenSolver<CMat> es(m, false);
    if (es.info() != Eigen::Success) throw Error("eigensolver failed on BT matrix");
    for (int j = 0; j < es.eigenvalues().size(); ++j) {
        double dist = branch_cut_distance(es.eigenvalues()(j));
        if (dist < kBranchCutTol)
            throw BranchCutError(
                "BT matrix eigenvalue " + format_double(es.eigenvalues()(j).real()) +
                " + " + format_double(es.eigenvalues()(j).imag()) +
                "i lies within 1e-8 of the logarithm branch cut");
    }
    ExponentForm form;
    form.generator = -0.5 * k_metric(bt.n()) * matrix_log(m);
    return form;
}

BTMatrix compose_so(const BTMatrix& m1, const BTMatrix& m2) {
    // U₁U₂ transforms operators through M₂ first, so the matrices compose in
    // reverse order.
    return compose_bt(m2, m1);
}

OneModeReduction one_mode_reduce(const BTMatrix& bt) {
    if (bt.n() != 1) throw NotOneMode("one_mode_reduce requires exactly one mode");
    cplx u = bt.u(0, 0);
    cplx v = bt.v(0, 0);
    // Quotient out the phase freedom first: rotate u onto the positive real
    // axis (|u| >= 1 for any valid BT).
    cplx unit = u / std::abs(u);
    double ur = std::abs(u);
    cplx vr = v * std::conj(unit);

    OneModeReduction red;
    double s = std::abs(vr);
    if (s == 0.0) {
        red.zeta = 0.0;
    } else {
        // ur = cosh|ζ|, |vr| = sinh|ζ|, so |ζ| = ln(ur + |vr|).
        red.zeta = vr / s * std::log(ur + s);
    }
    return red;
}

TwoModeStandardForm is_standard_two_mode(const BTMatrix& bt) {
    if (bt.n() != 2) throw NotTwoMode("is_standard_two_mode requires exactly two modes");
    constexpr double tol = 1e-10;
    const CMat& u = bt.u;
    const CMat& v = bt.v;

    TwoModeStandardForm form;
    bool ok = std::abs(u(0, 1)) <= tol && std::abs(u(1, 0)) <= tol &&
              std::abs(u(0, 0).imag()) <= tol && std::abs(u(1, 1).imag()) <= tol &&
              u(0, 0).real() >= 1.0 - tol &&
              std::abs(u(0, 0) - u(1, 1)) <= tol &&
              std::abs(v(0, 0)) <= tol && std::abs(v(1, 1)) <= tol &&
              std::abs(v(0, 1) - v(1, 0)) <= tol;
    if (!ok) return form;

    form.standard = true;
    double c = 0.5 * (u(0, 0).real() + u(1, 1).real());
    double s = std::abs(v(0, 1));
    form.r = std::log(std::max(c + s, 1.0));
    form.varphi = s <= tol ? 0.0 : std::arg(v(0, 1));
    return form;
}

}  // namespace squeezelab
