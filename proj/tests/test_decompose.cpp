#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "squeezelab/decompose.hpp"
#include "squeezelab/worked_example.hpp"
#include "test_support.hpp"

using namespace squeezelab;
using namespace squeezelab::testsupport;

namespace {

BTMatrix bt_from_factors(const CMat& s, const RVec& r, const CMat& t) {
    BTMatrix bt;
    bt.u = s * r.array().cosh().matrix().asDiagonal() * t;
    bt.v = s * r.array().sinh().matrix().asDiagonal() * t.conjugate();
    return bt;
}

double unitarity_residual(const CMat& q) {
    return max_abs_diff((q.adjoint() * q).eval(), CMat::Identity(q.rows(), q.cols()).eval());
}

}  // namespace

TEST_CASE("reference transformation factors to its golden three-factor form") {
    auto f = bloch_messiah(worked_example::reference_bt());
    REQUIRE(f.r_vals.size() == 2);
    CHECK_FALSE(f.degenerate_singular_values);
    CHECK((f.r_vals - worked_example::r_vals()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(max_abs_diff(f.d_cosh(),
                       CMat(worked_example::d_cosh_diag().asDiagonal())) < 1e-10);
    CHECK(max_abs_diff(f.d_sinh(),
                       CMat(worked_example::d_sinh_diag().asDiagonal())) < 1e-10);

    // Entry magnitudes of S and T are fixed even where their phases are not.
    CHECK((f.s_rot.cwiseAbs() - worked_example::s_abs()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((f.t_rot.cwiseAbs() - worked_example::t_abs()).cwiseAbs().maxCoeff() < 1e-10);

    auto rec = f.reconstruct();
    CHECK(max_abs_diff(rec.u, worked_example::reference_bt().u) < 1e-10);
    CHECK(max_abs_diff(rec.v, worked_example::reference_bt().v) < 1e-10);
    CHECK(classify_special_case(f) == SpecialCase::Generic);
}

TEST_CASE("random transformations factor and reconstruct") {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 1 + static_cast<int>(rng() % 3);
        auto bt = random_bt(n, 0.05, 1.3, rng);
        auto f = bloch_messiah(bt);

        CHECK(unitarity_residual(f.s_rot) < 1e-10);
        CHECK(unitarity_residual(f.t_rot) < 1e-10);
        for (int i = 0; i + 1 < n; ++i) CHECK(f.r_vals(i) >= f.r_vals(i + 1) - 1e-12);
        CHECK(f.r_vals(n - 1) >= -1e-12);

        // cosh r are exactly the singular values of u.
        Eigen::JacobiSVD<CMat> svd(bt.u);
        for (int i = 0; i < n; ++i)
            CHECK(std::cosh(f.r_vals(i)) ==
                  doctest::Approx(svd.singularValues()(i)).epsilon(1e-10));

        double scale = std::max(1.0, max_abs(bt.u));
        auto rec = f.reconstruct();
        CHECK(max_abs_diff(rec.u, bt.u) < 1e-10 * scale);
        CHECK(max_abs_diff(rec.v, bt.v) < 1e-10 * scale);
    }
}

TEST_CASE("degenerate squeeze magnitudes are flagged and still reconstruct") {
    std::mt19937 rng(42);
    CMat s = random_unitary(2, rng);
    CMat t = random_unitary(2, rng);
    RVec r(2);
    r << 0.5, 0.5;
    auto bt = bt_from_factors(s, r, t);

    auto f = bloch_messiah(bt);
    CHECK(f.degenerate_singular_values);
    CHECK(f.r_vals(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(f.r_vals(1) == doctest::Approx(0.5).epsilon(1e-12));
    auto rec = f.reconstruct();
    CHECK(max_abs_diff(rec.u, bt.u) < 1e-10);
    CHECK(max_abs_diff(rec.v, bt.v) < 1e-10);

    // Unsqueezed directions form one degenerate group at r = 0.
    BTMatrix passive;
    passive.u = random_unitary(3, rng);
    passive.v = CMat::Zero(3, 3);
    auto fp = bloch_messiah(passive);
    CHECK(fp.degenerate_singular_values);
    CHECK(fp.r_vals.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(max_abs_diff(fp.reconstruct().u, passive.u) < 1e-10);
    CHECK(max_abs(fp.reconstruct().v) < 1e-10);
}

TEST_CASE("special cases are classified in priority order") {
    std::mt19937 rng(43);
    RVec r(2);
    r << 0.9, 0.3;

    // T proportional to the identity: minimum-uncertainty in the original modes.
    CMat s = random_unitary(2, rng);
    CMat t_id = std::polar(1.0, 0.4) * CMat::Identity(2, 2);
    auto mus = bloch_messiah(bt_from_factors(s, r, t_id));
    CHECK(classify_special_case(mus) == SpecialCase::MilburnMUS);

    // Diagonal T: every mode is squeezed alone before mixing.
    CMat t_diag = CMat::Zero(2, 2);
    t_diag(0, 0) = std::polar(1.0, 0.7);
    t_diag(1, 1) = std::polar(1.0, -1.9);
    auto one_mode = bloch_messiah(bt_from_factors(s, r, t_diag));
    CHECK(classify_special_case(one_mode) == SpecialCase::OneModeLike);

    // T = S† makes M Hermitian: u = u†, v = vᵀ.
    auto herm = bloch_messiah(bt_from_factors(s, r, s.adjoint()));
    CHECK(hermiticity_residual(herm.reconstruct().u) < 1e-10);
    CHECK(symmetry_residual(herm.reconstruct().v) < 1e-10);
    CHECK(classify_special_case(herm) == SpecialCase::HermitianM);

    auto generic = bloch_messiah(random_bt(2, 0.2, 1.0, rng));
    CHECK(classify_special_case(generic) == SpecialCase::Generic);

    CHECK(std::string(to_string(SpecialCase::MilburnMUS)) != "");
}

TEST_CASE("the mixed-boson frame shows pure minimum-uncertainty squeezing") {
    std::mt19937 rng(44);
    for (int trial = 0; trial < 8; ++trial) {
        int n = 1 + static_cast<int>(rng() % 3);
        auto bt = random_bt(n, 0.1, 1.1, rng);
        auto frame = mixed_boson_frame(bt);
        auto f = bloch_messiah(bt);

        CHECK(unitarity_residual(frame.t_rot) < 1e-10);
        CMat xx = frame.cov_in_frame.xx();
        CMat yy = frame.cov_in_frame.yy();
        for (int i = 0; i < n; ++i) {
            CHECK(std::abs(xx(i, i) - 0.25 * std::exp(-2.0 * f.r_vals(i))) < 1e-10);
            CHECK(std::abs(yy(i, i) - 0.25 * std::exp(2.0 * f.r_vals(i))) < 1e-10);
            // Heisenberg saturates exactly in this frame.
            CHECK(std::abs(std::real(xx(i, i)) * std::real(yy(i, i)) - 1.0 / 16.0) <
                  1e-12);
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                CHECK(std::abs(xx(i, j)) < 1e-10);
                CHECK(std::abs(yy(i, j)) < 1e-10);
            }
        }
    }
}
