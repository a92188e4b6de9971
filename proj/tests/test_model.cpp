#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "squeezelab/errors.hpp"
#include "squeezelab/hamiltonian.hpp"
#include "squeezelab/worked_example.hpp"

using namespace squeezelab;

namespace {

const char* kReferenceJson = R"({
  "n_modes": 2,
  "xi": [[[45, 0], [0, 7]], [[0, -7], [45, 0]]],
  "eta": [[[36, 0], [0, 16]], [[0, 16], [36, 0]]],
  "kappa": [[0, 0], [0, 0]],
  "meta": {"name": "two-mode-reference"}
})";

const char* kReferenceToml = R"(# Two interacting modes.
n_modes = 2
xi = [
  [[45, 0], [0, 7]],
  [[0, -7], [45, 0]],
]
eta = [
  [[36, 0], [0, 16]],
  [[0, 16], [36, 0]],
]
kappa = [[0, 0], [0, 0]]

[meta]
name = "two-mode-reference"
)";

}  // namespace

TEST_CASE("json spec parses to the reference Hamiltonian") {
    auto h = parse_spec(kReferenceJson);
    CHECK(h.n_modes == 2);
    CHECK(h.name == "two-mode-reference");
    CHECK(h.xi(0, 0) == cplx(45.0, 0.0));
    CHECK(h.xi(0, 1) == cplx(0.0, 7.0));
    CHECK(h.xi(1, 0) == cplx(0.0, -7.0));
    CHECK(h.eta(0, 1) == cplx(0.0, 16.0));
    CHECK(h.kappa.isZero(0.0));

    auto reference = worked_example::hamiltonian();
    CHECK(max_abs_diff(h.xi, reference.xi) == 0.0);
    CHECK(max_abs_diff(h.eta, reference.eta) == 0.0);
}

TEST_CASE("toml spec parses to the same Hamiltonian") {
    auto from_json = parse_spec(kReferenceJson);
    auto from_toml = parse_spec(kReferenceToml);
    CHECK(max_abs_diff(from_json.xi, from_toml.xi) == 0.0);
    CHECK(max_abs_diff(from_json.eta, from_toml.eta) == 0.0);
    CHECK(from_toml.name == "two-mode-reference");
}

TEST_CASE("kappa defaults to zero when absent") {
    auto h = parse_spec(R"({"n_modes": 1, "xi": [[[2, 0]]], "eta": [[[0.5, 0]]]})");
    REQUIRE(h.kappa.size() == 1);
    CHECK(h.kappa(0) == cplx(0.0, 0.0));
}

TEST_CASE("serialization round-trips bit for bit") {
    BilinearHamiltonian h;
    h.n_modes = 2;
    h.xi.resize(2, 2);
    h.eta.resize(2, 2);
    h.kappa.resize(2);
    // Values that expose any precision loss in the 17-digit encoding.
    h.xi << cplx(1.0 / 3.0, 0.0), cplx(0.1, std::acos(-1.0)),
        cplx(0.1, -std::acos(-1.0)), cplx(std::sqrt(2.0) * 10.0, 0.0);
    h.eta << cplx(1e-17, 2e300), cplx(0.3, -0.7), cplx(0.3, -0.7), cplx(-4.0, 1e-300);
    h.kappa << cplx(0.25, -0.125), cplx(7.0, 0.0);
    h.name = "round trip \"quoted\" name";

    for (const std::string& text : {serialize_json(h), serialize_toml(h)}) {
        auto back = parse_spec_lenient(text);
        CHECK(back.n_modes == h.n_modes);
        CHECK(back.name == h.name);
        for (int i = 0; i < 2; ++i) {
            CHECK(back.kappa(i) == h.kappa(i));
            for (int j = 0; j < 2; ++j) {
                CHECK(back.xi(i, j) == h.xi(i, j));
                CHECK(back.eta(i, j) == h.eta(i, j));
            }
        }
    }
}

TEST_CASE("accepted specs validate all-pass") {
    for (const char* text : {kReferenceJson, kReferenceToml}) {
        auto report = validate(parse_spec(text));
        CHECK(report.ok);
        for (const auto& check : report.checks) CHECK(check.pass);
    }
}

TEST_CASE("malformed input raises SyntaxError") {
    CHECK_THROWS_AS(parse_spec("{\"n_modes\": 2, \"xi\": [[[1"), SyntaxError);
    CHECK_THROWS_AS(parse_spec(""), SyntaxError);
    CHECK_THROWS_AS(parse_spec("n_modes = "), SyntaxError);
    CHECK_THROWS_AS(parse_spec("{\"n_modes\": 1, \"xi\": [[[1, 0]]], "
                               "\"eta\": [[[0, 0]]], \"unknown\": 3}"),
                    SyntaxError);
    // Duplicate TOML keys and unknown tables are rejected, not merged.
    CHECK_THROWS_AS(parse_spec("n_modes = 1\nn_modes = 2\nxi = [[[1,0]]]\neta = [[[0,0]]]"),
                    SyntaxError);
    CHECK_THROWS_AS(parse_spec("[other]\nx = 1"), SyntaxError);
    CHECK_THROWS_AS(parse_spec("{\"n_modes\": 1.5, \"xi\": [[[1, 0]]], "
                               "\"eta\": [[[0, 0]]]}"),
                    SyntaxError);
}

TEST_CASE("shape violations are rejected") {
    // xi is 1x1 but n_modes says 2.
    CHECK_THROWS_AS(parse_spec("{\"n_modes\": 2, \"xi\": [[[1, 0]]], "
                               "\"eta\": [[[0, 0]]]}"),
                    ShapeError);
    // Ragged rows cannot form a matrix at all.
    CHECK_THROWS_AS(
        parse_spec("{\"n_modes\": 2, \"xi\": [[[1, 0], [0, 0]], [[0, 0]]], "
                   "\"eta\": [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]}"),
        ShapeError);
}

TEST_CASE("hermiticity and symmetry violations are rejected") {
    CHECK_THROWS_AS(parse_spec("{\"n_modes\": 2, "
                               "\"xi\": [[[1, 0], [1, 0]], [[0, 0], [1, 0]]], "
                               "\"eta\": [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]}"),
                    HermiticityError);
    CHECK_THROWS_AS(parse_spec("{\"n_modes\": 2, "
                               "\"xi\": [[[5, 0], [0, 0]], [[0, 0], [5, 0]]], "
                               "\"eta\": [[[0, 0], [1, 0]], [[2, 0], [0, 0]]]}"),
                    SymmetryError);
}

TEST_CASE("indefinite block matrix is rejected with its smallest eigenvalue") {
    // xi = I, eta = diag(2, 0): block eigenvalues include 1 - 2 = -1.
    try {
        parse_spec("{\"n_modes\": 2, "
                   "\"xi\": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]], "
                   "\"eta\": [[[2, 0], [0, 0]], [[0, 0], [0, 0]]]}");
        FAIL("expected NotPositiveDefinite");
    } catch (const NotPositiveDefinite& e) {
        CHECK(e.min_eigenvalue == doctest::Approx(-1.0).epsilon(1e-12));
    }
}

TEST_CASE("zero modes are rejected") {
    // xi = I, eta = I gives block eigenvalues {0, 0, 2, 2}.
    CHECK_THROWS_AS(parse_spec("{\"n_modes\": 1, \"xi\": [[[1, 0]]], "
                               "\"eta\": [[[1, 0]]]}"),
                    NotPositiveDefinite);
}

TEST_CASE("validate reports failures instead of throwing") {
    BilinearHamiltonian h;
    h.n_modes = 2;
    h.xi = CMat::Zero(2, 2);
    h.xi(0, 1) = 1.0;  // xi[1][0] stays 0: hermiticity residual is exactly 1
    h.eta = CMat::Zero(2, 2);
    h.kappa = CVec::Zero(2);

    auto report = validate(h);
    CHECK_FALSE(report.ok);
    bool found = false;
    for (const auto& check : report.checks) {
        if (check.name == "xi_hermitian") {
            found = true;
            CHECK_FALSE(check.pass);
            CHECK(check.residual == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    CHECK(found);

    // The lenient parse defers exactly these failures to validate().
    auto lenient = parse_spec_lenient(
        "{\"n_modes\": 2, \"xi\": [[[1, 0], [1, 0]], [[0, 0], [1, 0]]], "
        "\"eta\": [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]}");
    CHECK_FALSE(validate(lenient).ok);
}

TEST_CASE("toml accepts comments, multiline arrays, and escapes") {
    auto h = parse_spec("# leading comment\n"
                        "n_modes = 1  # trailing comment\n"
                        "xi = [\n  [[3, 0]],  # row\n]\n"
                        "eta = [[[1, 0]]]\n"
                        "[meta]\n"
                        "name = \"a \\\"b\\\" \\n c\"\n");
    CHECK(h.xi(0, 0) == cplx(3.0, 0.0));
    CHECK(h.name == "a \"b\" \n c");
}

TEST_CASE("format_double round-trips doubles through decimal") {
    for (double x : {0.1, 1.0 / 3.0, std::acos(-1.0), 1e-300, 2e300, -0.0, 42.0}) {
        CHECK(std::stod(format_double(x)) == x);
    }
}
