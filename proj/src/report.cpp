#include "squeezelab/report.hpp"

#include <cmath>

#include "squeezelab/hamiltonian.hpp"

namespace squeezelab::report {

json to_json(const VerifyCheck& c) {
    json j;
    j["name"] = c.name;
    j["pass"] = c.pass;
    j["value"] = c.value;
    j["tolerance"] = c.tolerance;
    if (!c.detail.empty()) j["detail"] = c.detail;
    return j;
}

json complex_to_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

json cvec_to_json(const CVec& v) {
    json arr = json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back(complex_to_json(v(i)));
    return arr;
}

json cmat_to_json(const CMat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

json rvec_to_json(const RVec& v) {
    json arr = json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

json rmat_to_json(const RMat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

json bt_to_json(const BTMatrix& bt) {
    json j;
    j["u"] = cmat_to_json(bt.u);
    j["v"] = cmat_to_json(bt.v);
    return j;
}

json covariance_to_json(const QuadratureCovariance& cov) {
    json j;
    j["xx"] = cmat_to_json(cov.xx());
    j["xy"] = cmat_to_json(cov.xy());
    j["yx"] = cmat_to_json(cov.yx());
    j["yy"] = cmat_to_json(cov.yy());
    return j;
}

json make_report(const std::string& command) {
    json j;
    j["schema_version"] = 1;
    j["tool"] = "squeezelab";
    j["command"] = command;
    return j;
}

namespace {

void dump_value(const json& j, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<size_t>(indent) * depth, ' ');
    const std::string pad_in(static_cast<size_t>(indent) * (depth + 1), ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            size_t k = 0;
            for (auto it = j.begin(); it != j.end(); ++it, ++k) {
                out += pad_in + json(it.key()).dump() + ": ";
                dump_value(it.value(), out, indent, depth + 1);
                out += k + 1 < j.size() ? ",\n" : "\n";
            }
            out += pad + "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // Flat numeric arrays stay on one line; nested ones get one
            // element per line so matrices read as rows.
            bool nested = false;
            for (const auto& el : j)
                if (el.is_structured()) nested = true;
            if (!nested) {
                out += "[";
                for (size_t i = 0; i < j.size(); ++i) {
                    dump_value(j[i], out, indent, depth + 1);
                    if (i + 1 < j.size()) out += ", ";
                }
                out += "]";
                return;
            }
            out += "[\n";
            for (size_t i = 0; i < j.size(); ++i) {
                out += pad_in;
                dump_value(j[i], out, indent, depth + 1);
                out += i + 1 < j.size() ? ",\n" : "\n";
            }
            out += pad + "]";
            return;
        }
        case json::value_t::number_float: {
            double x = j.get<double>();
            // JSON has no literal for nonfinite values.
            out += std::isfinite(x) ? format_double(x) : "null";
            return;
        }
        default:
            out += j.dump();
            return;
    }
}

}  // namespace

std::string dump_json_17(const json& j, int indent) {
    std::string out;
    dump_value(j, out, indent, 0);
    out += "\n";
    return out;
}

}  // namespace squeezelab::report
