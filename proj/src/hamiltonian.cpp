#include "squeezelab/hamiltonian.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>

#include "json.hpp"

namespace squeezelab {

namespace {

constexpr double kStructureTol = 1e-12;

using ComplexMatrix = std::vector<std::vector<cplx>>;
using ComplexVector = std::vector<cplx>;

CMat to_cmat(const ComplexMatrix& rows) {
    const int r = static_cast<int>(rows.size());
    const int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
    CMat m(r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c)
            throw ShapeError("ragged matrix rows");
        for (int j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

CVec to_cvec(const ComplexVector& entries) {
    CVec v(static_cast<int>(entries.size()));
    for (int i = 0; i < v.size(); ++i) v(i) = entries[i];
    return v;
}

// ---------------------------------------------------------------- JSON side

cplx json_complex(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw SyntaxError("complex entries must be [re, im] number pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

ComplexMatrix json_matrix(const nlohmann::json& j, const char* key) {
    if (!j.is_array()) throw SyntaxError(std::string(key) + " must be an array of rows");
    ComplexMatrix rows;
    for (const auto& row : j) {
        if (!row.is_array()) throw SyntaxError(std::string(key) + " rows must be arrays");
        ComplexVector r;
        for (const auto& entry : row) r.push_back(json_complex(entry));
        rows.push_back(std::move(r));
    }
    return rows;
}

BilinearHamiltonian from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SyntaxError(std::string("JSON parse failure: ") + e.what());
    }
    if (!j.is_object()) throw SyntaxError("top level must be an object");

    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "n_modes" && key != "xi" && key != "eta" && key != "kappa" &&
            key != "meta")
            throw SyntaxError("unknown key: " + key);
    }
    if (!j.contains("n_modes") || !j["n_modes"].is_number_integer())
        throw SyntaxError("n_modes must be an integer");
    if (!j.contains("xi") || !j.contains("eta"))
        throw SyntaxError("xi and eta are required");

    BilinearHamiltonian h;
    h.n_modes = j["n_modes"].get<int>();
    h.xi = to_cmat(json_matrix(j["xi"], "xi"));
    h.eta = to_cmat(json_matrix(j["eta"], "eta"));
    if (j.contains("kappa")) {
        ComplexVector k;
        if (!j["kappa"].is_array()) throw SyntaxError("kappa must be an array");
        for (const auto& entry : j["kappa"]) k.push_back(json_complex(entry));
        h.kappa = to_cvec(k);
    }
    if (j.contains("meta")) {
        if (!j["meta"].is_object()) throw SyntaxError("meta must be a table");
        if (j["meta"].contains("name")) {
            if (!j["meta"]["name"].is_string())
                throw SyntaxError("meta.name must be a string");
            h.name = j["meta"]["name"].get<std::string>();
        }
    }
    return h;
}

// ---------------------------------------------------------------- TOML side
//
// Hand-rolled subset: top-level `key = value` pairs with numbers, basic
// strings and (nested) arrays, a single optional [meta] table, comments, and
// arrays spanning lines. That is the whole surface the serializer emits.

struct Cursor {
    const std::string& s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool at_end() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        if (pos >= s.size()) throw SyntaxError("unexpected end of value");
        return s[pos];
    }
    void expect(char c) {
        if (peek() != c)
            throw SyntaxError(std::string("expected '") + c + "' in value");
        ++pos;
    }
};

double parse_number(Cursor& cur) {
    cur.skip_ws();
    const char* start = cur.s.c_str() + cur.pos;
    char* end = nullptr;
    double x = std::strtod(start, &end);
    if (end == start) throw SyntaxError("expected a number");
    cur.pos += static_cast<size_t>(end - start);
    return x;
}

std::string parse_basic_string(Cursor& cur) {
    cur.expect('"');
    std::string out;
    while (cur.pos < cur.s.size()) {
        char c = cur.s[cur.pos++];
        if (c == '"') return out;
        if (c == '\\') {
            if (cur.pos >= cur.s.size()) break;
            char e = cur.s[cur.pos++];
            switch (e) {
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                default: throw SyntaxError("unsupported string escape");
            }
        } else {
            out += c;
        }
    }
    throw SyntaxError("unterminated string");
}

cplx parse_complex_entry(Cursor& cur) {
    cur.expect('[');
    double re = parse_number(cur);
    cur.expect(',');
    double im = parse_number(cur);
    if (cur.peek() == ',') ++cur.pos;
    cur.expect(']');
    return {re, im};
}

ComplexVector parse_complex_list(Cursor& cur) {
    cur.expect('[');
    ComplexVector out;
    while (cur.peek() != ']') {
        out.push_back(parse_complex_entry(cur));
        if (cur.peek() == ',')
            ++cur.pos;
        else
            break;
    }
    cur.expect(']');
    return out;
}

ComplexMatrix parse_complex_matrix(Cursor& cur) {
    cur.expect('[');
    ComplexMatrix out;
    while (cur.peek() != ']') {
        out.push_back(parse_complex_list(cur));
        if (cur.peek() == ',')
            ++cur.pos;
        else
            break;
    }
    cur.expect(']');
    return out;
}

void require_consumed(Cursor& cur, const std::string& key) {
    if (!cur.at_end()) throw SyntaxError("trailing content after value of " + key);
}

// Cuts a # comment, honoring quotes so names may contain '#'.
std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_string && c == '\\') {
            ++i;
            continue;
        }
        if (c == '"') in_string = !in_string;
        if (c == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

int bracket_balance(const std::string& text) {
    bool in_string = false;
    int depth = 0;
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_string && c == '\\') {
            ++i;
            continue;
        }
        if (c == '"') in_string = !in_string;
        if (in_string) continue;
        if (c == '[') ++depth;
        if (c == ']') --depth;
    }
    return depth;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

BilinearHamiltonian from_toml(const std::string& text) {
    std::map<std::string, std::string> values;  // "key" or "meta.key" -> raw value
    std::string table;

    std::istringstream stream(text);
    std::string raw;
    while (std::getline(stream, raw)) {
        std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;

        if (line.front() == '[' && line.back() == ']' && bracket_balance(line) == 0 &&
            line.find('=') == std::string::npos) {
            table = trim(line.substr(1, line.size() - 2));
            if (table != "meta") throw SyntaxError("unknown table: [" + table + "]");
            continue;
        }

        size_t eq = line.find('=');
        if (eq == std::string::npos) throw SyntaxError("expected key = value: " + line);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));

        // Arrays may span lines; keep consuming until brackets balance.
        while (bracket_balance(value) > 0) {
            if (!std::getline(stream, raw)) throw SyntaxError("unterminated array for " + key);
            value += "\n" + strip_comment(raw);
        }

        std::string full_key = table.empty() ? key : table + "." + key;
        if (values.count(full_key)) throw SyntaxError("duplicate key: " + full_key);
        values[full_key] = value;
    }

    for (const auto& [key, value] : values) {
        (void)value;
        if (key != "n_modes" && key != "xi" && key != "eta" && key != "kappa" &&
            key != "meta.name" && key != "meta.description")
            throw SyntaxError("unknown key: " + key);
    }
    if (!values.count("n_modes")) throw SyntaxError("n_modes is required");
    if (!values.count("xi") || !values.count("eta"))
        throw SyntaxError("xi and eta are required");

    BilinearHamiltonian h;
    {
        Cursor cur{values["n_modes"]};
        double x = parse_number(cur);
        require_consumed(cur, "n_modes");
        if (x != static_cast<int>(x)) throw SyntaxError("n_modes must be an integer");
        h.n_modes = static_cast<int>(x);
    }
    {
        Cursor cur{values["xi"]};
        h.xi = to_cmat(parse_complex_matrix(cur));
        require_consumed(cur, "xi");
    }
    {
        Cursor cur{values["eta"]};
        h.eta = to_cmat(parse_complex_matrix(cur));
        require_consumed(cur, "eta");
    }
    if (values.count("kappa")) {
        Cursor cur{values["kappa"]};
        h.kappa = to_cvec(parse_complex_list(cur));
        require_consumed(cur, "kappa");
    }
    if (values.count("meta.name")) {
        Cursor cur{values["meta.name"]};
        h.name = parse_basic_string(cur);
        require_consumed(cur, "meta.name");
    }
    return h;
}

double min_block_eigenvalue(const BilinearHamiltonian& h) {
    CMat block = h.block_matrix();
    // The invariants make the block Hermitian up to 1e-12; symmetrize so the
    // self-adjoint solver sees an exactly Hermitian input.
    CMat sym = 0.5 * (block + block.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void check_or_throw(const BilinearHamiltonian& h) {
    const int n = h.n_modes;
    if (n < 1) throw ShapeError("n_modes must be positive");
    if (h.xi.rows() != n || h.xi.cols() != n)
        throw ShapeError("xi must be n_modes x n_modes");
    if (h.eta.rows() != n || h.eta.cols() != n)
        throw ShapeError("eta must be n_modes x n_modes");
    if (h.kappa.size() != n) throw ShapeError("kappa must have n_modes entries");

    double hr = hermiticity_residual(h.xi);
    if (hr > kStructureTol)
        throw HermiticityError("xi is not Hermitian, residual " + format_double(hr));
    double sr = symmetry_residual(h.eta);
    if (sr > kStructureTol)
        throw SymmetryError("eta is not symmetric, residual " + format_double(sr));

    double min_eig = min_block_eigenvalue(h);
    if (!(min_eig > 0.0))
        throw NotPositiveDefinite(
            "quadratic-form block matrix is not positive definite, smallest eigenvalue " +
                format_double(min_eig),
            min_eig);
}

std::string complex_entry_str(const cplx& z) {
    return "[" + format_double(z.real()) + ", " + format_double(z.imag()) + "]";
}

std::string matrix_json_str(const CMat& m, const std::string& indent) {
    std::string out = "[\n";
    for (int i = 0; i < m.rows(); ++i) {
        out += indent + "  [";
        for (int j = 0; j < m.cols(); ++j) {
            out += complex_entry_str(m(i, j));
            if (j + 1 < m.cols()) out += ", ";
        }
        out += i + 1 < m.rows() ? "],\n" : "]\n";
    }
    out += indent + "]";
    return out;
}

std::string vector_entries_str(const CVec& v) {
    std::string out = "[";
    for (int i = 0; i < v.size(); ++i) {
        out += complex_entry_str(v(i));
        if (i + 1 < v.size()) out += ", ";
    }
    return out + "]";
}

std::string escape_string(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

CMat BilinearHamiltonian::block_matrix() const {
    const int n = n_modes;
    CMat block(2 * n, 2 * n);
    block.topLeftCorner(n, n) = xi;
    block.topRightCorner(n, n) = eta;
    block.bottomLeftCorner(n, n) = eta.conjugate();
    block.bottomRightCorner(n, n) = xi.conjugate();
    return block;
}

BilinearHamiltonian parse_spec_lenient(const std::string& text) {
    size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw SyntaxError("empty input");

    BilinearHamiltonian h =
        text[first] == '{' ? from_json(text) : from_toml(text);
    if (h.kappa.size() == 0 && h.n_modes > 0) h.kappa = CVec::Zero(h.n_modes);
    return h;
}

BilinearHamiltonian parse_spec(const std::string& text) {
    BilinearHamiltonian h = parse_spec_lenient(text);
    check_or_throw(h);
    return h;
}

ValidationReport validate(const BilinearHamiltonian& h) {
    ValidationReport report;
    auto add = [&report](const std::string& name, bool pass, double residual,
                         const std::string& detail) {
        report.checks.push_back({name, pass, residual, detail});
    };

    const int n = h.n_modes;
    bool shapes_ok = n >= 1 && h.xi.rows() == n && h.xi.cols() == n &&
                     h.eta.rows() == n && h.eta.cols() == n && h.kappa.size() == n;
    add("shape", shapes_ok, shapes_ok ? 0.0 : 1.0,
        "xi, eta are n_modes x n_modes and kappa has n_modes entries");
    if (!shapes_ok) {
        report.ok = false;
        return report;
    }

    double hr = hermiticity_residual(h.xi);
    add("xi_hermitian", hr <= kStructureTol, hr,
        "max|xi - xi adjoint| relative to max(1, max|xi|), tolerance 1e-12");
    double sr = symmetry_residual(h.eta);
    add("eta_symmetric", sr <= kStructureTol, sr,
        "max|eta - eta transpose| relative to max(1, max|eta|), tolerance 1e-12");

    double min_eig = min_block_eigenvalue(h);
    add("block_positive_definite", min_eig > 0.0, min_eig,
        "smallest eigenvalue of [[xi, eta], [eta*, xi*]] must be positive");

    report.ok = true;
    for (const auto& c : report.checks) report.ok = report.ok && c.pass;
    return report;
}

std::string serialize_json(const BilinearHamiltonian& h) {
    std::string out = "{\n";
    out += "  \"n_modes\": " + std::to_string(h.n_modes) + ",\n";
    out += "  \"xi\": " + matrix_json_str(h.xi, "  ") + ",\n";
    out += "  \"eta\": " + matrix_json_str(h.eta, "  ") + ",\n";
    out += "  \"kappa\": " + vector_entries_str(h.kappa);
    if (!h.name.empty()) {
        out += ",\n  \"meta\": {\"name\": \"" + escape_string(h.name) + "\"}";
    }
    out += "\n}\n";
    return out;
}

std::string serialize_toml(const BilinearHamiltonian& h) {
    auto toml_matrix = [](const CMat& m) {
        std::string out = "[\n";
        for (int i = 0; i < m.rows(); ++i) {
            out += "  [";
            for (int j = 0; j < m.cols(); ++j) {
                out += complex_entry_str(m(i, j));
                if (j + 1 < m.cols()) out += ", ";
            }
            out += "],\n";
        }
        return out + "]";
    };

    std::string out;
    out += "n_modes = " + std::to_string(h.n_modes) + "\n";
    out += "xi = " + toml_matrix(h.xi) + "\n";
    out += "eta = " + toml_matrix(h.eta) + "\n";
    out += "kappa = " + vector_entries_str(h.kappa) + "\n";
    if (!h.name.empty()) {
        out += "\n[meta]\nname = \"" + escape_string(h.name) + "\"\n";
    }
    return out;
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace squeezelab
