#include "squeezelab/worked_example.hpp"

#include <cmath>

#include "squeezelab/errors.hpp"

namespace squeezelab::worked_example {

namespace {

const cplx im(0.0, 1.0);

}  // namespace

BilinearHamiltonian hamiltonian() {
    BilinearHamiltonian h;
    h.n_modes = 2;
    h.xi.resize(2, 2);
    h.xi << 45.0, 7.0 * im, -7.0 * im, 45.0;
    h.eta.resize(2, 2);
    h.eta << 36.0, 16.0 * im, 16.0 * im, 36.0;
    h.kappa = CVec::Zero(2);
    h.name = "two-mode-reference";
    return h;
}

RVec omega() {
    RVec w(2);
    w << 30.0, 12.0;
    return w;
}

BTMatrix reference_bt() {
    const double s10 = std::sqrt(10.0);
    const double s2 = std::sqrt(2.0);
    BTMatrix bt;
    bt.u.resize(2, 2);
    bt.u << 7.0 / (3.0 * s10), 3.0 * im / s10, 5.0 * im / (3.0 * s2), 1.0 / s2;
    bt.v.resize(2, 2);
    bt.v << 2.0 / (3.0 * s10), 2.0 * im / s10, 2.0 * im * s2 / 3.0, 0.0;
    return bt;
}

CMat rho() {
    CMat r(2, 2);
    r << 7.0, 3.0 * im, 3.0 * im, 5.0;
    return r / 22.0;
}

CMat tau() {
    const double s5 = std::sqrt(5.0);
    CMat t(2, 2);
    t << 2.0, im * s5, im * s5, 3.0;
    return -t / 11.0;
}

double norm_magnitude() { return std::sqrt(3.0 * std::sqrt(5.0) / 11.0); }

RVec mean_photon() {
    RVec m(2);
    m << 14.0 / 15.0, 2.0 / 5.0;
    return m;
}

RVec d_cosh_diag() {
    const double s5 = std::sqrt(5.0);
    RVec d(2);
    d << std::sqrt(5.0 / 3.0 + 2.0 / (3.0 * s5)), std::sqrt(5.0 / 3.0 - 2.0 / (3.0 * s5));
    return d;
}

RVec d_sinh_diag() {
    const double s5 = std::sqrt(5.0);
    RVec d(2);
    d << std::sqrt(2.0 / 3.0 + 2.0 / (3.0 * s5)), std::sqrt(2.0 / 3.0 - 2.0 / (3.0 * s5));
    return d;
}

RVec r_vals() {
    RVec c = d_cosh_diag();
    RVec s = d_sinh_diag();
    RVec r(2);
    r << std::log(c(0) + s(0)), std::log(c(1) + s(1));
    return r;
}

RMat s_abs() {
    const double s5 = std::sqrt(5.0);
    const double s3 = std::sqrt(3.0);
    RMat m(2, 2);
    m << s5 - 1.0, s5 + 1.0, s5 + 1.0, s5 - 1.0;
    return m / (2.0 * s3);
}

RMat t_abs() {
    const double s5 = std::sqrt(5.0);
    double big = std::sqrt(0.5 + 1.0 / s5);
    double small = std::sqrt(0.5 - 1.0 / s5);
    RMat m(2, 2);
    m << big, small, small, big;
    return m;
}

cplx fock_20_amplitude() {
    return norm_magnitude() * (-std::sqrt(2.0) * 7.0 / 22.0);
}

CVec gauge_phases_to_reference(const BTMatrix& other) {
    BTMatrix ref = reference_bt();
    if (other.n() != ref.n())
        throw DimensionMismatch("gauge transport needs a two-mode BT");
    CVec phases(ref.n());
    for (int j = 0; j < ref.n(); ++j) {
        int pivot = 0;
        double best = std::abs(ref.u(j, 0));
        for (int k = 1; k < ref.n(); ++k)
            if (std::abs(ref.u(j, k)) > best) {
                best = std::abs(ref.u(j, k));
                pivot = k;
            }
        cplx p = ref.u(j, pivot) / other.u(j, pivot);
        if (std::abs(std::abs(p) - 1.0) > 1e-8)
            throw Error("gauge transport failed: rows differ by more than a phase");
        for (int k = 0; k < ref.n(); ++k) {
            if (std::abs(ref.u(j, k) - p * other.u(j, k)) > 1e-8 ||
                std::abs(ref.v(j, k) - p * other.v(j, k)) > 1e-8)
                throw Error("gauge transport failed: rows differ by more than a phase");
        }
        phases(j) = p;
    }
    return phases;
}

}  // namespace squeezelab::worked_example
