#include "squeezelab/states.hpp"

#include <cmath>
#include <numbers>

#include "squeezelab/errors.hpp"

namespace squeezelab {

namespace {

void check_occupations(const MultiIndex& n) {
    for (int k : n)
        if (k < 0) throw ShapeError("occupation numbers must be nonnegative");
}

CMat symmetrized(const CMat& m) { return 0.5 * (m + m.transpose()); }

// Scaled Taylor table of f = exp(pᵀqp + pᵀw) over the box 0 <= m_i < dims[i]:
// entry m holds √(Πm_i!)·c(m) where f = Σ c(m)p^m. The scaling keeps every
// entry bounded for normalizable states, so the table never overflows where
// the raw coefficients would. q must be symmetric.
std::vector<cplx> scaled_taylor_box(const CMat& q, const CVec& w,
                                    const std::vector<int>& dims) {
    const int nv = static_cast<int>(dims.size());
    long total = 1;
    for (int d : dims) {
        if (d < 1) throw DimensionMismatch("lattice bounds must be positive");
        total *= d;
    }
    std::vector<long> stride(nv);
    stride[nv - 1] = 1;
    for (int i = nv - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];

    std::vector<cplx> c(total);
    std::vector<int> m(nv, 0);
    c[0] = 1.0;
    for (long idx = 1; idx < total; ++idx) {
        int k = nv - 1;
        while (m[k] + 1 == dims[k]) {
            m[k] = 0;
            --k;
        }
        ++m[k];
        // Differentiate along the first occupied axis. The recurrence
        // (m_i+1)c(m+e_i) = w_i c(m) + 2Σ_j q_ij c(m-e_j) follows from
        // ∂_i f = (w_i + 2Σ_j q_ij p_j) f; here it is rescaled by √(Πm!).
        int i = 0;
        while (m[i] == 0) ++i;
        long base = idx - stride[i];
        double rmi = std::sqrt(static_cast<double>(m[i]));
        cplx acc = w(i) * c[base] / rmi;
        for (int j = 0; j < nv; ++j) {
            int avail = (j == i) ? m[j] - 1 : m[j];
            if (avail >= 1)
                acc += 2.0 * q(i, j) * (std::sqrt(static_cast<double>(avail)) / rmi) *
                       c[base - stride[j]];
        }
        c[idx] = acc;
    }
    return c;
}

// √(Πn_i!)·c(n), the scaled series coefficient the wavefunctions consume.
cplx series_factor(const CMat& q, const CVec& w, const MultiIndex& n) {
    if (total_degree(n) > 60)
        throw DegreeTooLarge("total series degree exceeds 60");
    std::vector<int> dims(n.size());
    for (size_t i = 0; i < n.size(); ++i) dims[i] = n[i] + 1;
    return scaled_taylor_box(symmetrized(q), w, dims).back();
}

// u⁻ᵀ for squeezed kinds, identity for the baselines; multiplies a† inside
// the derivative-generating exponential.
CMat series_linear_matrix(const StateDescriptor& s) {
    if (!s.squeezed()) return CMat::Identity(s.n_modes(), s.n_modes());
    return s.bt.u.transpose().partialPivLu().inverse();
}

// Assembles the 2N-variable quadratic form of an excited state, derivative
// variables first: [[T, ½L], [½Lᵀ, -R]] with the matching linear part.
void build_big_series(const ReducedCoefficients& rc, const CMat& l, CMat& qbig,
                      CVec& wbig) {
    const int n = static_cast<int>(l.rows());
    qbig.resize(2 * n, 2 * n);
    qbig.topLeftCorner(n, n) = rc.series.tau_form;
    qbig.topRightCorner(n, n) = 0.5 * l;
    qbig.bottomLeftCorner(n, n) = 0.5 * l.transpose();
    qbig.bottomRightCorner(n, n) = -rc.quadratic;
    wbig.resize(2 * n);
    wbig.head(n) = rc.series.linear;
    wbig.tail(n) = rc.linear;
}

}  // namespace

const char* to_string(StateKind kind) {
    switch (kind) {
        case StateKind::Fock: return "fock";
        case StateKind::Coherent: return "coherent";
        case StateKind::CoherentFock: return "coherent-fock";
        case StateKind::SVS: return "svs";
        case StateKind::SCS: return "scs";
        case StateKind::SFS: return "sfs";
        case StateKind::SCFS: return "scfs";
    }
    return "unknown";
}

StateDescriptor make_fock(const MultiIndex& n) {
    check_occupations(n);
    StateDescriptor s;
    s.kind = StateKind::Fock;
    s.bt = BTMatrix::identity(static_cast<int>(n.size()));
    s.alpha = CVec::Zero(n.size());
    s.n = n;
    return s;
}

StateDescriptor make_coherent(const CVec& alpha) {
    StateDescriptor s;
    s.kind = StateKind::Coherent;
    s.bt = BTMatrix::identity(static_cast<int>(alpha.size()));
    s.alpha = alpha;
    s.n = MultiIndex(alpha.size(), 0);
    return s;
}

StateDescriptor make_coherent_fock(const MultiIndex& n, const CVec& alpha) {
    if (static_cast<int>(n.size()) != alpha.size())
        throw DimensionMismatch("n and alpha disagree on the mode count");
    check_occupations(n);
    StateDescriptor s;
    s.kind = StateKind::CoherentFock;
    s.bt = BTMatrix::identity(static_cast<int>(n.size()));
    s.alpha = alpha;
    s.n = n;
    return s;
}

namespace {

StateDescriptor make_squeezed(StateKind kind, const BTMatrix& bt, const CVec& alpha,
                              const MultiIndex& n) {
    if (bt.u.rows() != bt.u.cols() || bt.v.rows() != bt.v.cols() ||
        bt.u.rows() != bt.v.rows())
        throw DimensionMismatch("BT blocks must be square and equally sized");
    StateDescriptor s;
    s.kind = kind;
    s.bt = bt;
    s.alpha = alpha.size() == 0 ? CVec::Zero(bt.n()) : alpha;
    s.n = n.empty() ? MultiIndex(bt.n(), 0) : n;
    if (s.alpha.size() != bt.n() || static_cast<int>(s.n.size()) != bt.n())
        throw DimensionMismatch("alpha or n disagrees with the BT mode count");
    check_occupations(s.n);
    return s;
}

}  // namespace

StateDescriptor make_svs(const BTMatrix& bt) {
    return make_squeezed(StateKind::SVS, bt, CVec(), MultiIndex());
}

StateDescriptor make_scs(const BTMatrix& bt, const CVec& alpha) {
    return make_squeezed(StateKind::SCS, bt, alpha, MultiIndex());
}

StateDescriptor make_sfs(const BTMatrix& bt, const MultiIndex& n) {
    return make_squeezed(StateKind::SFS, bt, CVec(), n);
}

StateDescriptor make_scfs(const BTMatrix& bt, const MultiIndex& n, const CVec& alpha) {
    return make_squeezed(StateKind::SCFS, bt, alpha, n);
}

CMat QuadratureCovariance::xx() const {
    const int n = n_modes();
    return cov.topLeftCorner(n, n);
}
CMat QuadratureCovariance::xy() const {
    const int n = n_modes();
    return cov.topRightCorner(n, n);
}
CMat QuadratureCovariance::yx() const {
    const int n = n_modes();
    return cov.bottomLeftCorner(n, n);
}
CMat QuadratureCovariance::yy() const {
    const int n = n_modes();
    return cov.bottomRightCorner(n, n);
}

cplx hermite_coefficient(const CMat& tau_form, const CVec& w, const MultiIndex& n) {
    const int nv = static_cast<int>(n.size());
    if (tau_form.rows() != nv || tau_form.cols() != nv || w.size() != nv)
        throw DimensionMismatch("hermite_coefficient argument sizes disagree");
    check_occupations(n);
    // series_factor returns √(Πn!)·c(n); the derivative value is (Πn!)·c(n).
    cplx scaled = series_factor(tau_form, w, n);
    double root_fact = 1.0;
    for (int k : n)
        for (int t = 2; t <= k; ++t) root_fact *= std::sqrt(static_cast<double>(t));
    return root_fact * scaled;
}

QuadratureCovariance covariance_from_blocks(const CMat& u, const CMat& v,
                                            const MultiIndex& n) {
    const int nm = static_cast<int>(u.rows());
    if (static_cast<int>(n.size()) != nm)
        throw DimensionMismatch("occupation vector size disagrees with blocks");
    CVec dn(nm), dp(nm);
    for (int i = 0; i < nm; ++i) {
        dn(i) = static_cast<double>(n[i]);
        dp(i) = static_cast<double>(n[i] + 1);
    }
    const CMat umv = u - v;
    const CMat upv = u + v;
    const cplx im(0.0, 1.0);

    CMat xx = 0.25 * (umv.adjoint() * dp.asDiagonal() * umv +
                      umv.transpose() * dn.asDiagonal() * umv.conjugate());
    CMat xy = 0.25 * (im * (umv.adjoint() * dp.asDiagonal() * upv) -
                      im * (umv.transpose() * dn.asDiagonal() * upv.conjugate()));
    CMat yx = 0.25 * (im * (upv.transpose() * dn.asDiagonal() * umv.conjugate()) -
                      im * (upv.adjoint() * dp.asDiagonal() * umv));
    CMat yy = 0.25 * (upv.adjoint() * dp.asDiagonal() * upv +
                      upv.transpose() * dn.asDiagonal() * upv.conjugate());

    QuadratureCovariance out;
    out.cov.resize(2 * nm, 2 * nm);
    out.cov.topLeftCorner(nm, nm) = xx;
    out.cov.topRightCorner(nm, nm) = xy;
    out.cov.bottomLeftCorner(nm, nm) = yx;
    out.cov.bottomRightCorner(nm, nm) = yy;
    out.cov = 0.5 * (out.cov + out.cov.adjoint());
    return out;
}

QuadratureCovariance covariance(const StateDescriptor& s) {
    // Displacement shifts the means only; central moments see (u, v, n).
    return covariance_from_blocks(s.bt.u, s.bt.v, s.n);
}

namespace {

// C = uᵀα* - v†α, the displaced-frame annihilation offset entering the
// photon statistics of SCS and SCFS.
CVec displacement_offset(const StateDescriptor& s) {
    return s.bt.u.transpose() * s.alpha.conjugate() - s.bt.v.adjoint() * s.alpha;
}

}  // namespace

RVec mean_photon(const StateDescriptor& s) {
    const int nm = s.n_modes();
    CVec dn(nm), dp(nm);
    for (int i = 0; i < nm; ++i) {
        dn(i) = static_cast<double>(s.n[i]);
        dp(i) = static_cast<double>(s.n[i] + 1);
    }
    CMat a = s.bt.u.adjoint() * dn.asDiagonal() * s.bt.u +
             s.bt.v.adjoint() * dp.asDiagonal() * s.bt.v;
    RVec mean(nm);
    for (int i = 0; i < nm; ++i) mean(i) = a(i, i).real();
    if (s.displaced()) {
        CVec c = displacement_offset(s);
        for (int i = 0; i < nm; ++i) mean(i) += std::norm(c(i));
    }
    return mean;
}

RVec photon_variance(const StateDescriptor& s) {
    const int nm = s.n_modes();
    const CMat& u = s.bt.u;
    const CMat& v = s.bt.v;
    CVec dn(nm), dp(nm), d2(nm);
    for (int i = 0; i < nm; ++i) {
        dn(i) = static_cast<double>(s.n[i]);
        dp(i) = static_cast<double>(s.n[i] + 1);
        d2(i) = static_cast<double>(2 * s.n[i] + 1);
    }

    CMat udv = u.adjoint() * d2.asDiagonal() * v;       // u†D_{2n+1}v
    CMat m1 = u.adjoint() * dp.asDiagonal() * u + v.adjoint() * dn.asDiagonal() * v;
    CMat m2 = u.adjoint() * dn.asDiagonal() * u + v.adjoint() * dp.asDiagonal() * v;
    RMat a = u.cwiseAbs2();  // A_jk = |u_jk|²
    RMat b = v.cwiseAbs2();

    RVec var(nm);
    for (int i = 0; i < nm; ++i) {
        // (u†D_{2n+1}v)ᵢᵢ(v†D_{2n+1}u)ᵢᵢ is |(u†D_{2n+1}v)ᵢᵢ|².
        double value = std::norm(udv(i, i)) + (m1(i, i) * m2(i, i)).real();
        for (int j = 0; j < nm; ++j) {
            double nj = static_cast<double>(s.n[j]);
            double sum = a(j, i) + b(j, i);
            value -= nj * (nj + 1.0) * (sum * sum + 2.0 * a(j, i) * b(j, i));
        }
        var(i) = value;
    }
    if (s.displaced()) {
        CVec c = displacement_offset(s);
        CMat r = u.adjoint() * d2.asDiagonal() * u + v.adjoint() * d2.asDiagonal() * v;
        for (int i = 0; i < nm; ++i) {
            // The two cross terms are conjugates, so the total stays real.
            var(i) += r(i, i).real() * std::norm(c(i)) -
                      2.0 * (udv(i, i) * c(i) * c(i)).real();
        }
    }
    return var;
}

ReducedCoefficients reduced_state_coefficients(const StateDescriptor& s) {
    const int nm = s.n_modes();
    ReducedCoefficients rc;
    rc.n = s.n;
    rc.has_series = s.excited();
    rc.series.tau_form = CMat::Zero(nm, nm);
    rc.series.linear = CVec::Zero(nm);

    if (s.squeezed()) {
        DisentangledSO d = disentangle(s.bt);
        rc.quadratic = d.rho;
        rc.prefactor = d.norm_magnitude;
        rc.linear = CVec::Zero(nm);
        if (s.excited()) rc.series.tau_form = d.tau;
        if (s.displaced()) {
            rc.linear = s.bt.u.partialPivLu().solve(s.alpha);
            cplx quad = (s.alpha.transpose() * d.tau * s.alpha).value();
            rc.prefactor *= std::exp(-0.5 * s.alpha.squaredNorm() + quad);
            if (s.excited())
                rc.series.linear = 2.0 * (d.tau * s.alpha) - s.alpha.conjugate();
        }
    } else {
        rc.quadratic = CMat::Zero(nm, nm);
        rc.linear = s.displaced() ? CVec(s.alpha) : CVec(CVec::Zero(nm));
        rc.prefactor = std::exp(cplx(-0.5 * s.alpha.squaredNorm(), 0.0));
        if (s.displaced() && s.excited()) rc.series.linear = -s.alpha.conjugate();
    }
    return rc;
}

cplx wavefn_fock(const StateDescriptor& s, const MultiIndex& m) {
    const int nm = s.n_modes();
    if (static_cast<int>(m.size()) != nm)
        throw DimensionMismatch("Fock index size disagrees with the state");
    check_occupations(m);
    ReducedCoefficients rc = reduced_state_coefficients(s);

    if (!rc.has_series)
        return rc.prefactor * series_factor(CMat(-rc.quadratic), rc.linear, m);

    CMat l = series_linear_matrix(s);
    CMat qbig;
    CVec wbig;
    build_big_series(rc, l, qbig, wbig);
    MultiIndex nm_index = rc.n;
    nm_index.insert(nm_index.end(), m.begin(), m.end());
    return rc.prefactor * series_factor(qbig, wbig, nm_index);
}

cplx wavefn_coherent(const StateDescriptor& s, const CVec& beta) {
    if (beta.size() != s.n_modes())
        throw DimensionMismatch("beta size disagrees with the state");
    ReducedCoefficients rc = reduced_state_coefficients(s);
    CVec bc = beta.conjugate();

    // ⟨β| replaces a† by β* in the creation-only form and contributes the
    // coherent-state normalization e^{-½β†β}.
    cplx expo = (rc.linear.array() * bc.array()).sum() -
                (bc.transpose() * rc.quadratic * bc).value() -
                0.5 * beta.squaredNorm();
    cplx amp = rc.prefactor * std::exp(expo);
    if (rc.has_series) {
        CMat l = series_linear_matrix(s);
        amp *= series_factor(rc.series.tau_form, CVec(l * bc + rc.series.linear), rc.n);
    }
    return amp;
}

cplx wavefn_coordinate(const StateDescriptor& s, const RVec& x) {
    const int nm = s.n_modes();
    if (x.size() != nm) throw DimensionMismatch("coordinate size disagrees with the state");

    CMat d = s.bt.u - s.bt.v;
    Eigen::PartialPivLU<CMat> lud(d);
    double absdet = std::abs(lud.determinant());
    if (absdet < 1e-12)
        throw SingularQuadratureFrame(
            "u - v is numerically singular, coordinate frame undefined");
    CMat dinv = lud.inverse();
    CVec xc = x.cast<cplx>();

    // (u-v)⁻¹(u+v) is symmetric for a valid BT; symmetrize to clean roundoff.
    CMat g = symmetrized(dinv * (s.bt.u + s.bt.v));
    cplx expo = -(xc.transpose() * g * xc).value();
    cplx amp = std::pow(2.0 / std::numbers::pi, 0.25 * nm) / std::sqrt(absdet) *
               std::exp(expo);

    CVec dc_dinv_alpha;
    if (s.displaced()) {
        CVec dinva = dinv * s.alpha;
        dc_dinv_alpha = d.conjugate() * dinva;
        cplx e2 = 2.0 * (xc.array() * dinva.array()).sum() -
                  0.5 * s.alpha.squaredNorm() -
                  0.5 * (s.alpha.transpose() * dc_dinv_alpha).value();
        amp *= std::exp(e2);
    }
    if (s.excited()) {
        CMat qc = -0.5 * symmetrized(d.conjugate() * dinv);
        CVec lin = 2.0 * (dinv.transpose() * xc);
        if (s.displaced()) lin += -dc_dinv_alpha - s.alpha.conjugate();
        amp *= series_factor(qc, lin, s.n);
    }
    return amp;
}

std::vector<cplx> fock_lattice_amplitudes(const StateDescriptor& s,
                                          const MultiIndex& bounds) {
    const int nm = s.n_modes();
    if (static_cast<int>(bounds.size()) != nm)
        throw DimensionMismatch("bounds size disagrees with the state");
    ReducedCoefficients rc = reduced_state_coefficients(s);
    std::vector<int> mdims(bounds.begin(), bounds.end());

    if (!rc.has_series) {
        std::vector<cplx> c =
            scaled_taylor_box(symmetrized(CMat(-rc.quadratic)), rc.linear, mdims);
        for (cplx& z : c) z *= rc.prefactor;
        return c;
    }

    CMat l = series_linear_matrix(s);
    CMat qbig;
    CVec wbig;
    build_big_series(rc, l, qbig, wbig);
    std::vector<int> dims(rc.n.size());
    for (size_t i = 0; i < rc.n.size(); ++i) dims[i] = rc.n[i] + 1;
    dims.insert(dims.end(), mdims.begin(), mdims.end());

    std::vector<cplx> c = scaled_taylor_box(symmetrized(qbig), wbig, dims);
    // The amplitudes live in the slice at derivative index exactly n, which
    // is the last lattice-sized block of the row-major table.
    long lattice = 1;
    for (int b : mdims) lattice *= b;
    std::vector<cplx> out(lattice);
    long offset = static_cast<long>(c.size()) - lattice;
    for (long i = 0; i < lattice; ++i) out[i] = rc.prefactor * c[offset + i];
    return out;
}

}  // namespace squeezelab
