#pragma once

#include <string>
#include <vector>

#include "squeezelab/errors.hpp"
#include "squeezelab/types.hpp"

namespace squeezelab {

// Quadratic-plus-linear boson Hamiltonian data. xi couples a†a (Hermitian),
// eta couples a†a† (symmetric), kappa is the linear drive. The quadratic form
// is positive definite as a 2N x 2N block matrix, which is what guarantees a
// well-posed normal-mode problem downstream.
struct BilinearHamiltonian {
    int n_modes = 0;
    CMat xi;
    CMat eta;
    CVec kappa;
    std::string name;  // optional metadata, empty when absent

    // [[xi, eta], [eta*, xi*]]; Hermitian exactly when the invariants hold.
    CMat block_matrix() const;
};

struct ValidationCheck {
    std::string name;
    bool pass = false;
    double residual = 0.0;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool ok = false;
};

// Parses a Hamiltonian spec from JSON or TOML text (format sniffed from the
// first significant character). Throws SyntaxError / ShapeError /
// HermiticityError / SymmetryError / NotPositiveDefinite; a returned value
// passed every invariant.
BilinearHamiltonian parse_spec(const std::string& text);

// Syntax-only variant: enforces file well-formedness but defers the physics
// invariants to validate(), so callers can surface a full ValidationReport
// instead of the first violation.
BilinearHamiltonian parse_spec_lenient(const std::string& text);

// Non-throwing invariant audit; the overall flag is the conjunction.
ValidationReport validate(const BilinearHamiltonian& h);

// Lossless serializations: parse_spec(serialize_*(h)) reproduces every
// numeric field bit for bit.
std::string serialize_json(const BilinearHamiltonian& h);
std::string serialize_toml(const BilinearHamiltonian& h);

// 17 significant digits, enough to round-trip the exact double value.
std::string format_double(double x);

}  // namespace squeezelab
