#pragma once

#include <string>

#include "json.hpp"
#include "squeezelab/bogoliubov.hpp"
#include "squeezelab/states.hpp"
#include "squeezelab/types.hpp"

namespace squeezelab::report {

using json = nlohmann::ordered_json;

// One verification line: a named scalar claim checked against a tolerance.
struct VerifyCheck {
    std::string name;
    bool pass = false;
    double value = 0.0;      // residual, deviation, or overlap deficit
    double tolerance = 0.0;  // bound the value was compared against
    std::string detail;
};

json to_json(const VerifyCheck& c);

// Serialization helpers shared by every report section. Complex scalars
// become [re, im]; matrices become row-major nested arrays.
json complex_to_json(const cplx& z);
json cvec_to_json(const CVec& v);
json cmat_to_json(const CMat& m);
json rvec_to_json(const RVec& v);
json rmat_to_json(const RMat& m);
json bt_to_json(const BTMatrix& bt);
json covariance_to_json(const QuadratureCovariance& cov);

// Report envelope: fixed schema version plus a deterministic section order.
json make_report(const std::string& command);

// Deterministic dump. Doubles are printed with 17 significant digits so the
// exact binary value round-trips; key order is preserved as inserted.
std::string dump_json_17(const json& j, int indent = 2);

}  // namespace squeezelab::report
