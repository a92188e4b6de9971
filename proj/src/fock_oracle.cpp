#include "squeezelab/fock_oracle.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "squeezelab/decompose.hpp"

namespace squeezelab {

namespace {

constexpr long kDimGuard = 20000;

}  // namespace

TruncatedFockSpace::TruncatedFockSpace(int n_modes, int cutoff)
    : n_modes_(n_modes), cutoff_(cutoff) {
    if (n_modes < 1 || cutoff < 1)
        throw DimensionMismatch("need at least one mode and one level");
    dim_ = 1;
    for (int m = 0; m < n_modes; ++m) {
        dim_ *= cutoff;
        if (dim_ > kDimGuard)
            throw SpaceTooLarge("dense dimension " + std::to_string(dim_) +
                                " exceeds the guard of " + std::to_string(kDimGuard));
    }
    a_.resize(n_modes);
    for (int m = 0; m < n_modes; ++m) {
        CMat a = CMat::Zero(dim_, dim_);
        for (long idx = 0; idx < dim_; ++idx) {
            MultiIndex occ = unrank(idx);
            if (occ[m] > 0) {
                double root = std::sqrt(static_cast<double>(occ[m]));
                occ[m] -= 1;
                a(rank(occ), idx) = root;
            }
        }
        a_[m] = std::move(a);
    }
}

long TruncatedFockSpace::rank(const MultiIndex& occ) const {
    if (static_cast<int>(occ.size()) != n_modes_)
        throw DimensionMismatch("occupation size disagrees with the space");
    long idx = 0;
    for (int m = 0; m < n_modes_; ++m) {
        if (occ[m] < 0 || occ[m] >= cutoff_)
            throw DimensionMismatch("occupation outside the truncated range");
        idx = idx * cutoff_ + occ[m];
    }
    return idx;
}

MultiIndex TruncatedFockSpace::unrank(long index) const {
    MultiIndex occ(n_modes_);
    for (int m = n_modes_ - 1; m >= 0; --m) {
        occ[m] = static_cast<int>(index % cutoff_);
        index /= cutoff_;
    }
    return occ;
}

StateVector StateVector::normalized() const {
    double n = norm();
    if (n == 0.0) return *this;
    return {amplitudes / n};
}

CMat build_hamiltonian(const BilinearHamiltonian& h, const TruncatedFockSpace& space) {
    if (h.n_modes != space.n_modes())
        throw DimensionMismatch("Hamiltonian and space disagree on the mode count");
    const long dim = space.dim();
    CMat hmat = CMat::Zero(dim, dim);
    for (int i = 0; i < h.n_modes; ++i) {
        const CMat& ai = space.annihilator(i);
        for (int j = 0; j < h.n_modes; ++j) {
            const CMat& aj = space.annihilator(j);
            if (h.xi(i, j) != 0.0) hmat += h.xi(i, j) * (ai.adjoint() * aj);
            if (h.xi(i, j) != cplx(0.0))
                hmat += std::conj(h.xi(i, j)) * (ai * aj.adjoint());
            if (h.eta(i, j) != cplx(0.0)) {
                hmat += h.eta(i, j) * (ai.adjoint() * aj.adjoint());
                hmat += std::conj(h.eta(i, j)) * (ai * aj);
            }
        }
        if (h.kappa.size() == h.n_modes && h.kappa(i) != cplx(0.0)) {
            hmat += h.kappa(i) * ai;
            hmat += std::conj(h.kappa(i)) * ai.adjoint();
        }
    }
    return hmat;
}

GroundState ground_state(const CMat& hmat) {
    Eigen::SelfAdjointEigenSolver<CMat> es(hmat);
    if (es.info() != Eigen::Success) throw Error("dense eigensolver failed");
    GroundState g;
    g.state.amplitudes = es.eigenvectors().col(0);
    g.energy = es.eigenvalues()(0);
    return g;
}

namespace {

// Estimated per-mode level needed before the amplitude tail drops below the
// gate: SVS pair amplitudes scale as tanh^k of the largest squeeze, Fock
// excitation and displacement widen the distribution additively.
int suggest_cutoff(const StateDescriptor& s, const TruncatedFockSpace& space,
                   double tail_gate) {
    int extra = total_degree(s.n) + 4;
    if (s.displaced() && s.alpha.size() > 0)
        extra += static_cast<int>(std::ceil(2.0 * s.alpha.cwiseAbs2().maxCoeff()));
    double r_max = 0.0;
    if (s.squeezed()) {
        BlochMessiahFactors factors = bloch_messiah(s.bt);
        r_max = factors.r_vals.size() > 0 ? factors.r_vals(0) : 0.0;
    }
    if (r_max > 1e-12 && tail_gate > 0.0 && tail_gate < 1.0) {
        double log_decay = 2.0 * std::log(std::tanh(r_max));
        int k = static_cast<int>(std::ceil(std::log(tail_gate) / log_decay));
        return std::max(k + extra, space.cutoff() + 1);
    }
    return space.cutoff() + extra;
}

}  // namespace

ClosedFormState build_closed_form_state(const StateDescriptor& s,
                                        const TruncatedFockSpace& space,
                                        double tail_gate) {
    if (s.n_modes() != space.n_modes())
        throw DimensionMismatch("state and space disagree on the mode count");
    MultiIndex bounds(space.n_modes(), space.cutoff());
    std::vector<cplx> amps = fock_lattice_amplitudes(s, bounds);

    ClosedFormState out;
    out.state.amplitudes.resize(space.dim());
    double norm2 = 0.0;
    for (long i = 0; i < space.dim(); ++i) {
        out.state.amplitudes(i) = amps[i];
        norm2 += std::norm(amps[i]);
    }
    out.norm_deficit = 1.0 - norm2;
    if (out.norm_deficit > tail_gate)
        throw TailMassTooLarge(
            "truncated lattice misses norm " + format_double(out.norm_deficit) +
                ", try a per-mode cutoff of about " +
                std::to_string(suggest_cutoff(s, space, tail_gate)),
            out.norm_deficit, suggest_cutoff(s, space, tail_gate));
    return out;
}

NumericMoments numeric_moments(const StateVector& v, const TruncatedFockSpace& space) {
    if (v.amplitudes.size() != space.dim())
        throw DimensionMismatch("state vector size disagrees with the space");
    const int n = space.n_modes();
    CVec psi = v.normalized().amplitudes;

    NumericMoments out;
    out.mean_n.resize(n);
    out.var_n.resize(n);
    std::vector<CVec> quad(2 * n);
    for (int m = 0; m < n; ++m) {
        const CMat& a = space.annihilator(m);
        CVec lowered = a * psi;
        CVec raised = a.adjoint() * psi;
        // N = a†a is exact on the truncated space, so the photon moments
        // carry no truncation error beyond the state's own tail.
        out.mean_n(m) = lowered.squaredNorm();
        out.var_n(m) = (a.adjoint() * lowered).squaredNorm() -
                       out.mean_n(m) * out.mean_n(m);
        quad[m] = 0.5 * (lowered + raised);
        quad[n + m] = cplx(0.0, -0.5) * (lowered - raised);
    }

    out.cov.cov.resize(2 * n, 2 * n);
    CVec means(2 * n);
    for (int k = 0; k < 2 * n; ++k) means(k) = psi.dot(quad[k]);
    for (int k = 0; k < 2 * n; ++k)
        for (int l = 0; l < 2 * n; ++l)
            out.cov.cov(k, l) = quad[k].dot(quad[l]) - std::conj(means(k)) * means(l);
    return out;
}

StateVector apply_generator_exp(const CMat& gen, const StateVector& v) {
    if (gen.rows() != gen.cols() || gen.rows() != v.amplitudes.size())
        throw DimensionMismatch("generator and state sizes disagree");
    double residual = max_abs(CMat(gen + gen.adjoint())) / std::max(1.0, max_abs(gen));
    if (residual > 1e-10)
        throw NotAntiHermitian("generator is not anti-Hermitian, residual " +
                               format_double(residual));
    CMat g = 0.5 * (gen - gen.adjoint());
    return {g.exp() * v.amplitudes};
}

CMat squeeze_generator_matrix(const ExponentForm& form, const TruncatedFockSpace& space) {
    const int n = space.n_modes();
    if (form.generator.rows() != 2 * n)
        throw DimensionMismatch("generator blocks disagree with the space");
    const CMat& g = form.generator;
    CMat op = CMat::Zero(space.dim(), space.dim());
    for (int i = 0; i < n; ++i) {
        const CMat& ai = space.annihilator(i);
        for (int j = 0; j < n; ++j) {
            const CMat& aj = space.annihilator(j);
            if (g(i, j) != cplx(0.0)) op += g(i, j) * (ai.adjoint() * aj);
            if (g(i, n + j) != cplx(0.0)) op += g(i, n + j) * (ai.adjoint() * aj.adjoint());
            if (g(n + i, j) != cplx(0.0)) op += g(n + i, j) * (ai * aj);
            if (g(n + i, n + j) != cplx(0.0)) op += g(n + i, n + j) * (ai * aj.adjoint());
        }
    }
    return op;
}

CMat displacement_generator_matrix(const BTMatrix& bt, const CVec& alpha,
                                   const TruncatedFockSpace& space) {
    const int n = space.n_modes();
    if (bt.n() != n || alpha.size() != n)
        throw DimensionMismatch("BT or alpha disagrees with the space");
    CMat op = CMat::Zero(space.dim(), space.dim());
    for (int i = 0; i < n; ++i) {
        CMat ci = CMat::Zero(space.dim(), space.dim());
        for (int j = 0; j < n; ++j) {
            const CMat& aj = space.annihilator(j);
            if (bt.u(i, j) != cplx(0.0)) ci += bt.u(i, j) * aj;
            if (bt.v(i, j) != cplx(0.0)) ci += bt.v(i, j) * aj.adjoint();
        }
        op += alpha(i) * ci.adjoint() - std::conj(alpha(i)) * ci;
    }
    return op;
}

}  // namespace squeezelab
