#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "squeezelab/errors.hpp"
#include "squeezelab/fock_oracle.hpp"
#include "squeezelab/states.hpp"
#include "squeezelab/worked_example.hpp"
#include "test_support.hpp"

using namespace squeezelab;
using namespace squeezelab::testsupport;

namespace {

double factorial(int n) { return std::tgamma(static_cast<double>(n) + 1.0); }

// One-mode transformation with real squeeze parameter r, phase theta on v.
BTMatrix one_mode_bt(double r, double theta = 0.0) {
    BTMatrix bt;
    bt.u = CMat::Constant(1, 1, cplx(std::cosh(r), 0.0));
    bt.v = CMat::Constant(1, 1, std::polar(std::sinh(r), theta));
    return bt;
}

}  // namespace

TEST_CASE("hermite_coefficient reproduces the physicists' polynomials") {
    CMat q = CMat::Constant(1, 1, cplx(-1.0, 0.0));
    for (double x : {-1.7, -0.3, 0.0, 0.4, 2.6}) {
        CVec w = CVec::Constant(1, cplx(2.0 * x, 0.0));
        for (int n = 0; n <= 6; ++n) {
            cplx c = hermite_coefficient(q, w, MultiIndex{n});
            CHECK(std::abs(c - std::hermite(unsigned(n), x)) <
                  1e-10 * std::max(1.0, std::abs(std::hermite(unsigned(n), x))));
        }
    }
}

TEST_CASE("hermite_coefficient degree guard") {
    CMat q = CMat::Constant(1, 1, cplx(-1.0, 0.0));
    CVec w = CVec::Constant(1, cplx(1.0, 0.0));
    CHECK_NOTHROW(hermite_coefficient(q, w, MultiIndex{60}));
    CHECK_THROWS_AS(hermite_coefficient(q, w, MultiIndex{61}), DegreeTooLarge);
    CHECK_THROWS_AS(
        hermite_coefficient(CMat::Zero(2, 2), CVec::Zero(2), MultiIndex{31, 30}),
        DegreeTooLarge);
}

TEST_CASE("baseline amplitudes have their textbook closed forms") {
    // Fock states are the lattice basis itself.
    auto fock = make_fock(MultiIndex{1, 2});
    CHECK(wavefn_fock(fock, MultiIndex{1, 2}) == cplx(1.0, 0.0));
    CHECK(wavefn_fock(fock, MultiIndex{2, 1}) == cplx(0.0, 0.0));
    CHECK(wavefn_fock(fock, MultiIndex{0, 0}) == cplx(0.0, 0.0));

    // Coherent amplitudes e^{-|α|²/2} α^m / √m!.
    CVec alpha(1);
    alpha << cplx(0.7, -0.4);
    auto coh = make_coherent(alpha);
    for (int m = 0; m <= 8; ++m) {
        cplx expected = std::exp(-0.5 * std::norm(alpha(0))) *
                        std::pow(alpha(0), m) / std::sqrt(factorial(m));
        CHECK(std::abs(wavefn_fock(coh, MultiIndex{m}) - expected) < 1e-14);
    }

    // Vacuum overlap of a squeezed vacuum is the normalization constant.
    auto svs = make_svs(worked_example::reference_bt());
    CHECK(std::abs(wavefn_fock(svs, MultiIndex{0, 0}) -
                   cplx(worked_example::norm_magnitude(), 0.0)) < 1e-12);
    CHECK(std::abs(wavefn_fock(svs, MultiIndex{2, 0}) -
                   worked_example::fock_20_amplitude()) < 1e-12);
    // Odd total occupation vanishes for a pure squeeze of the vacuum.
    CHECK(std::abs(wavefn_fock(svs, MultiIndex{1, 0})) < 1e-14);
    CHECK(std::abs(wavefn_fock(svs, MultiIndex{1, 2})) < 1e-14);
}

TEST_CASE("displaced Fock amplitudes match the exponential of the generator") {
    TruncatedFockSpace space(1, 24);
    CVec alpha(1);
    alpha << cplx(0.4, 0.3);
    auto s = make_coherent_fock(MultiIndex{2}, alpha);

    StateVector start = oracle_vacuum(space);
    start.amplitudes(0) = 0.0;
    start.amplitudes(space.rank(MultiIndex{2})) = 1.0;
    auto displaced = apply_generator_exp(
        displacement_generator_matrix(BTMatrix::identity(1), alpha, space), start);

    for (int m = 0; m < 12; ++m) {
        CHECK(std::abs(wavefn_fock(s, MultiIndex{m}) -
                       displaced.amplitudes(space.rank(MultiIndex{m}))) < 1e-10);
    }
}

TEST_CASE("covariance of the baseline kinds") {
    auto vac = covariance(make_fock(MultiIndex{0, 0}));
    CMat id = CMat::Identity(2, 2);
    CHECK(max_abs_diff(vac.xx(), (0.25 * id).eval()) < 1e-14);
    CHECK(max_abs_diff(vac.yy(), (0.25 * id).eval()) < 1e-14);
    CHECK(max_abs_diff(vac.xy(), (cplx(0.0, 0.25) * id).eval()) < 1e-14);
    CHECK(max_abs_diff(vac.yx(), (cplx(0.0, -0.25) * id).eval()) < 1e-14);

    // Central moments ignore the displacement entirely.
    CVec alpha(2);
    alpha << cplx(1.3, -0.2), cplx(0.0, 2.0);
    auto coh = covariance(make_coherent(alpha));
    CHECK(max_abs_diff(coh.cov, vac.cov) < 1e-14);

    auto fock = covariance(make_fock(MultiIndex{3, 1}));
    CHECK(std::abs(fock.xx()(0, 0) - cplx(7.0 / 4.0, 0.0)) < 1e-14);
    CHECK(std::abs(fock.xx()(1, 1) - cplx(3.0 / 4.0, 0.0)) < 1e-14);
    CHECK(max_abs_diff(fock.yy(), fock.xx()) < 1e-14);
    CHECK(std::abs(fock.xy()(0, 0) - cplx(0.0, 0.25)) < 1e-14);
    CHECK(std::abs(fock.xy()(0, 1)) < 1e-14);
}

TEST_CASE("covariance is Hermitian and respects the uncertainty floor") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 1 + static_cast<int>(rng() % 3);
        auto bt = random_bt(n, 0.1, 1.0, rng);
        MultiIndex occ(n, 0);
        for (auto& o : occ) o = static_cast<int>(rng() % 3);
        CVec alpha = CVec::Zero(n);
        auto s = make_scfs(bt, occ, alpha);

        auto c = covariance(s);
        CHECK(hermiticity_residual(c.cov) < 1e-12);
        for (int i = 0; i < n; ++i) {
            double prod = std::real(c.xx()(i, i)) * std::real(c.yy()(i, i));
            CHECK(prod >= 1.0 / 16.0 - 1e-12);
        }
    }
}

TEST_CASE("one-mode photon statistics match the closed-form expressions") {
    const double r = 0.62;
    auto bt = one_mode_bt(r);

    CHECK(mean_photon(make_svs(bt))(0) ==
          doctest::Approx(std::sinh(r) * std::sinh(r)).epsilon(1e-12));
    CHECK(photon_variance(make_svs(bt))(0) ==
          doctest::Approx(0.5 * std::pow(std::sinh(2.0 * r), 2)).epsilon(1e-12));

    // Squeezed one-quantum state: n cosh2r + sinh²r and its variance.
    CHECK(mean_photon(make_sfs(bt, MultiIndex{1}))(0) ==
          doctest::Approx(std::cosh(2.0 * r) + std::sinh(r) * std::sinh(r))
              .epsilon(1e-12));

    CHECK(mean_photon(make_fock(MultiIndex{4}))(0) == doctest::Approx(4.0));
    CHECK(photon_variance(make_fock(MultiIndex{4}))(0) == doctest::Approx(0.0));

    CVec alpha(1);
    alpha << cplx(0.8, -0.6);  // |α|² = 1
    CHECK(mean_photon(make_coherent(alpha))(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(photon_variance(make_coherent(alpha))(0) ==
          doctest::Approx(1.0).epsilon(1e-12));

    // Displaced Fock: mean n + |α|², variance (2n+1)|α|².
    auto cf = make_coherent_fock(MultiIndex{2}, alpha);
    CHECK(mean_photon(cf)(0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(photon_variance(cf)(0) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("reference state statistics agree with the truncated-space oracle") {
    auto s = make_svs(one_mode_bt(0.5, 1.1));
    TruncatedFockSpace space(1, 36);
    auto closed = build_closed_form_state(s, space);
    auto m = numeric_moments(closed.state.normalized(), space);

    CHECK(std::abs(m.mean_n(0) - mean_photon(s)(0)) < 1e-8);
    CHECK(std::abs(m.var_n(0) - photon_variance(s)(0)) < 1e-8);
    CHECK(max_abs_diff(m.cov.cov, covariance(s).cov) < 1e-8);

    CHECK(mean_photon(make_svs(worked_example::reference_bt()))(0) +
              mean_photon(make_svs(worked_example::reference_bt()))(1) ==
          doctest::Approx(worked_example::mean_photon().sum()).epsilon(1e-12));
}

TEST_CASE("coherent-basis amplitudes resum the Fock lattice") {
    std::mt19937 rng(32);
    auto bt = random_bt(2, 0.2, 0.5, rng);
    CVec alpha(2);
    alpha << cplx(0.3, 0.1), cplx(-0.2, 0.25);
    auto s = make_scfs(bt, MultiIndex{1, 0}, alpha);

    CVec beta(2);
    beta << cplx(0.45, -0.2), cplx(0.1, 0.5);

    const int bound = 14;
    auto amps = fock_lattice_amplitudes(s, MultiIndex{bound, bound});
    cplx sum = 0.0;
    for (int m0 = 0; m0 < bound; ++m0) {
        for (int m1 = 0; m1 < bound; ++m1) {
            cplx bra = std::pow(std::conj(beta(0)), m0) *
                       std::pow(std::conj(beta(1)), m1) /
                       std::sqrt(factorial(m0) * factorial(m1));
            sum += bra * amps[static_cast<size_t>(m0 * bound + m1)];
        }
    }
    sum *= std::exp(-0.5 * beta.squaredNorm());
    CHECK(std::abs(sum - wavefn_coherent(s, beta)) < 1e-7);
}

TEST_CASE("lattice amplitudes agree with the per-point evaluation") {
    std::mt19937 rng(33);
    auto bt = random_bt(2, 0.1, 0.6, rng);
    CVec alpha(2);
    alpha << cplx(0.2, -0.3), cplx(0.4, 0.0);
    auto s = make_scfs(bt, MultiIndex{2, 1}, alpha);

    MultiIndex bounds{5, 4};
    auto amps = fock_lattice_amplitudes(s, bounds);
    REQUIRE(amps.size() == 20);
    for (int m0 = 0; m0 < 5; ++m0)
        for (int m1 = 0; m1 < 4; ++m1)
            CHECK(std::abs(amps[static_cast<size_t>(m0 * 4 + m1)] -
                           wavefn_fock(s, MultiIndex{m0, m1})) < 1e-12);
}

TEST_CASE("coordinate wavefunctions are normalized Gaussians where known") {
    // Vacuum in this convention: <x²> = ¼, so ψ0(x) = (2/π)^{1/4} e^{-x²}.
    auto vac = make_fock(MultiIndex{0});
    for (double x : {0.0, 0.5, -1.2}) {
        RVec xv = RVec::Constant(1, x);
        cplx expected = std::pow(2.0 / std::acos(-1.0), 0.25) * std::exp(-x * x);
        CHECK(std::abs(wavefn_coordinate(vac, xv) - expected) < 1e-12);
    }

    // Trapezoid integration of |ψ|² over a wide grid; the state is L²-normalized.
    auto integrate_norm = [](const StateDescriptor& s) {
        const int points = 4001;
        const double span = 12.0;
        double total = 0.0;
        for (int i = 0; i < points; ++i) {
            double x = -span / 2.0 + span * i / (points - 1);
            double w = (i == 0 || i == points - 1) ? 0.5 : 1.0;
            total += w * std::norm(wavefn_coordinate(s, RVec::Constant(1, x)));
        }
        return total * span / (points - 1);
    };

    CHECK(integrate_norm(vac) == doctest::Approx(1.0).epsilon(1e-8));
    CVec alpha(1);
    alpha << cplx(0.9, -0.7);
    CHECK(integrate_norm(make_coherent(alpha)) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(integrate_norm(make_svs(one_mode_bt(0.8, 0.9))) ==
          doctest::Approx(1.0).epsilon(1e-8));
    CHECK(integrate_norm(make_scfs(one_mode_bt(0.5, -0.4), MultiIndex{2},
                                   CVec::Constant(1, cplx(0.3, 0.2)))) ==
          doctest::Approx(1.0).epsilon(1e-8));

    // Squeezing a quadrature shows up directly in the coordinate density.
    const double r = 0.6;
    auto squeezed = make_svs(one_mode_bt(r));
    double second_moment = 0.0;
    const int points = 4001;
    for (int i = 0; i < points; ++i) {
        double x = -6.0 + 12.0 * i / (points - 1);
        double w = (i == 0 || i == points - 1) ? 0.5 : 1.0;
        second_moment += w * x * x * std::norm(wavefn_coordinate(squeezed, RVec::Constant(1, x)));
    }
    second_moment *= 12.0 / (points - 1);
    CHECK(second_moment ==
          doctest::Approx(std::real(covariance(squeezed).xx()(0, 0))).epsilon(1e-7));
}

TEST_CASE("coordinate frame requires u - v to be invertible") {
    StateDescriptor bad = make_svs(BTMatrix::identity(1));
    bad.bt.v = bad.bt.u;  // not a valid transformation; u - v = 0 exactly
    CHECK_THROWS_AS(wavefn_coordinate(bad, RVec::Zero(1)), SingularQuadratureFrame);
}

TEST_CASE("reduced coefficients expose the creation-only structure") {
    auto svs = reduced_state_coefficients(make_svs(worked_example::reference_bt()));
    CHECK_FALSE(svs.has_series);
    CHECK(max_abs_diff(svs.quadratic, worked_example::rho()) < 1e-12);
    CHECK(std::abs(svs.prefactor - cplx(worked_example::norm_magnitude(), 0.0)) < 1e-12);
    CHECK(max_abs(svs.linear) == 0.0);

    auto sfs = reduced_state_coefficients(
        make_sfs(worked_example::reference_bt(), MultiIndex{1, 1}));
    CHECK(sfs.has_series);
    CHECK(sfs.n == MultiIndex{1, 1});

    CVec alpha(1);
    alpha << cplx(0.5, -0.1);
    auto coh = reduced_state_coefficients(make_coherent(alpha));
    CHECK_FALSE(coh.has_series);
    CHECK(max_abs(coh.quadratic) == 0.0);
    CHECK(std::abs(coh.linear(0) - alpha(0)) < 1e-15);
}

TEST_CASE("descriptor factories pin the unused fields") {
    auto f = make_fock(MultiIndex{2, 0, 1});
    CHECK(f.n_modes() == 3);
    CHECK(max_abs_diff(f.bt.u, CMat::Identity(3, 3).eval()) == 0.0);
    CHECK(max_abs(f.bt.v) == 0.0);
    CHECK(max_abs(f.alpha) == 0.0);
    CHECK_FALSE(f.squeezed());
    CHECK(f.excited());
    CHECK_FALSE(f.displaced());

    auto s = make_scs(worked_example::reference_bt(), CVec::Zero(2));
    CHECK(s.squeezed());
    CHECK(s.displaced());
    CHECK_FALSE(s.excited());
    CHECK(s.n == MultiIndex{0, 0});
}
