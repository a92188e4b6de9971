#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "squeezelab/bogoliubov.hpp"
#include "squeezelab/decompose.hpp"
#include "squeezelab/errors.hpp"
#include "squeezelab/fock_oracle.hpp"
#include "squeezelab/hamiltonian.hpp"
#include "squeezelab/report.hpp"
#include "squeezelab/squeeze_op.hpp"
#include "squeezelab/states.hpp"
#include "squeezelab/worked_example.hpp"

namespace {

using squeezelab::BilinearHamiltonian;
using squeezelab::BTMatrix;
using squeezelab::CMat;
using squeezelab::cplx;
using squeezelab::CVec;
using squeezelab::MultiIndex;
using squeezelab::RVec;
using squeezelab::StateDescriptor;
using json = squeezelab::report::json;

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitInput = 2;
constexpr int kExitResource = 3;

// Internal-consistency bound for residuals that are zero in exact arithmetic.
constexpr double kConsistencyTol = 1e-10;

// An input error carrying the message for standard error.
struct InputError {
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError{"cannot read file: " + path};
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// "re", "imi", or "re+imi" with optional sign on either part; the split sign
// must not belong to an exponent. A bare "i" or "±i" means ±1i.
cplx parse_complex_token(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw InputError{"empty complex number"};

    auto to_double = [](const std::string& t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        char* end = nullptr;
        double x = std::strtod(t.c_str(), &end);
        if (end != t.c_str() + t.size())
            throw InputError{"malformed number: " + t};
        return x;
    };

    if (s.back() != 'i' && s.back() != 'I') return {to_double(s), 0.0};
    s.pop_back();

    // The imaginary part starts at the last sign not preceded by e/E and not
    // leading; everything before it is the real part.
    size_t split = std::string::npos;
    for (size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string::npos) return {0.0, to_double(s)};
    return {to_double(s.substr(0, split)), to_double(s.substr(split))};
}

CVec parse_complex_list(const std::string& raw) {
    std::vector<cplx> parts;
    std::string token;
    std::istringstream stream(raw);
    while (std::getline(stream, token, ',')) parts.push_back(parse_complex_token(token));
    if (!raw.empty() && raw.back() == ',') throw InputError{"trailing comma in list: " + raw};
    CVec out(static_cast<int>(parts.size()));
    for (size_t i = 0; i < parts.size(); ++i) out(static_cast<int>(i)) = parts[i];
    return out;
}

MultiIndex parse_index_list(const std::string& raw) {
    MultiIndex out;
    std::string token;
    std::istringstream stream(raw);
    while (std::getline(stream, token, ',')) {
        char* end = nullptr;
        long x = std::strtol(token.c_str(), &end, 10);
        if (end != token.c_str() + token.size() || x < 0)
            throw InputError{"occupation numbers must be nonnegative integers: " + token};
        out.push_back(static_cast<int>(x));
    }
    return out;
}

// One axis of the coordinate grid: "min:max:count" with count >= 1.
struct GridAxis {
    double min = 0.0;
    double max = 0.0;
    int count = 0;
};

GridAxis parse_grid_axis(const std::string& raw) {
    std::vector<std::string> f;
    std::string token;
    std::istringstream stream(raw);
    while (std::getline(stream, token, ':')) f.push_back(token);
    if (f.size() != 3) throw InputError{"grid axis must be min:max:count, got: " + raw};
    auto num = [](const std::string& t) {
        char* end = nullptr;
        double x = std::strtod(t.c_str(), &end);
        if (end != t.c_str() + t.size() || t.empty())
            throw InputError{"malformed grid number: " + t};
        return x;
    };
    GridAxis axis;
    axis.min = num(f[0]);
    axis.max = num(f[1]);
    double c = num(f[2]);
    if (c < 1 || c != static_cast<int>(c))
        throw InputError{"grid count must be a positive integer: " + f[2]};
    axis.count = static_cast<int>(c);
    return axis;
}

double axis_point(const GridAxis& axis, int i) {
    if (axis.count == 1) return axis.min;
    return axis.min + (axis.max - axis.min) * i / (axis.count - 1);
}

BilinearHamiltonian load_spec(const std::string& path) {
    std::string text = read_file(path);
    BilinearHamiltonian h;
    try {
        h = squeezelab::parse_spec_lenient(text);
    } catch (const squeezelab::Error& e) {
        throw InputError{std::string(e.what())};
    }
    auto report = squeezelab::validate(h);
    if (!report.ok) {
        json out = json::object();
        out["valid"] = false;
        out["checks"] = json::array();
        for (const auto& c : report.checks) {
            json item = json::object();
            item["name"] = c.name;
            item["pass"] = c.pass;
            item["residual"] = c.residual;
            item["detail"] = c.detail;
            out["checks"].push_back(item);
        }
        std::cerr << squeezelab::report::dump_json_17(out) << "\n";
        throw InputError{"invalid Hamiltonian spec: " + path};
    }
    return h;
}

json input_echo(const BilinearHamiltonian& h, const std::string& path) {
    json echo = json::object();
    if (!path.empty()) echo["path"] = path;
    if (!h.name.empty()) echo["name"] = h.name;
    echo["n_modes"] = h.n_modes;
    echo["xi"] = squeezelab::report::cmat_to_json(h.xi);
    echo["eta"] = squeezelab::report::cmat_to_json(h.eta);
    echo["kappa"] = squeezelab::report::cvec_to_json(h.kappa);
    return echo;
}

json checks_to_json(const std::vector<squeezelab::report::VerifyCheck>& checks) {
    json arr = json::array();
    for (const auto& c : checks) arr.push_back(squeezelab::report::to_json(c));
    return arr;
}

bool all_pass(const std::vector<squeezelab::report::VerifyCheck>& checks) {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

void emit_report(const json& report, const std::string& out_path) {
    std::string text = squeezelab::report::dump_json_17(report) + "\n";
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw InputError{"cannot write file: " + out_path};
    out << text;
}

std::vector<squeezelab::report::VerifyCheck> symplectic_checks(const BTMatrix& bt) {
    auto res = squeezelab::check_symplectic(bt);
    auto mk = [](const std::string& name, double value) {
        return squeezelab::report::VerifyCheck{name, value <= kConsistencyTol, value,
                                               kConsistencyTol, "max-norm residual"};
    };
    return {mk("uu_dagger_minus_vv_dagger_minus_identity", res.r_uud1),
            mk("uv_transpose_minus_vu_transpose", res.r_uud2),
            mk("u_dagger_u_minus_v_transpose_v_conj_minus_identity", res.r_udu1),
            mk("u_dagger_v_minus_v_transpose_u_conj", res.r_udu2)};
}

json diagonalization_sections(const squeezelab::DiagonalizationResult& d) {
    json out = json::object();
    out["omega"] = squeezelab::report::rvec_to_json(d.omega);
    out["bt"] = squeezelab::report::bt_to_json(d.bt);
    out["alpha"] = squeezelab::report::cvec_to_json(d.alpha);
    out["energy_shift"] = d.energy_shift;
    out["ground_energy"] = d.omega.sum() + d.energy_shift;
    return out;
}

int cmd_diagonalize(const std::string& spec_path, const std::string& out_path) {
    auto h = load_spec(spec_path);
    auto d = squeezelab::diagonalize(h);

    json report = squeezelab::report::make_report("diagonalize");
    report["input"] = input_echo(h, spec_path);
    report.update(diagonalization_sections(d));
    auto checks = symplectic_checks(d.bt);
    report["checks"] = checks_to_json(checks);
    emit_report(report, out_path);
    return all_pass(checks) ? kExitOk : kExitVerification;
}

int cmd_squeeze_op(const std::string& spec_path, const std::string& out_path) {
    auto h = load_spec(spec_path);
    auto d = squeezelab::diagonalize(h);
    auto ds = squeezelab::disentangle(d.bt);

    json report = squeezelab::report::make_report("squeeze-op");
    report["input"] = input_echo(h, spec_path);
    report["omega"] = squeezelab::report::rvec_to_json(d.omega);
    report["bt"] = squeezelab::report::bt_to_json(d.bt);

    json dis = json::object();
    dis["rho"] = squeezelab::report::cmat_to_json(ds.rho);
    dis["sigma"] = squeezelab::report::cmat_to_json(ds.sigma());
    dis["tau"] = squeezelab::report::cmat_to_json(ds.tau);
    dis["norm_magnitude"] = ds.norm_magnitude;
    report["disentangled"] = dis;

    std::vector<squeezelab::report::VerifyCheck> checks = symplectic_checks(d.bt);
    // u·(2ρ) = v and (2τ)·u = v* pin the disentangled blocks to the BT.
    double scale = std::max(1.0, squeezelab::max_abs(d.bt.v));
    checks.push_back({"u_times_2rho_minus_v",
                      squeezelab::max_abs_diff(d.bt.u * (2.0 * ds.rho), d.bt.v) / scale <=
                          kConsistencyTol,
                      squeezelab::max_abs_diff(d.bt.u * (2.0 * ds.rho), d.bt.v) / scale,
                      kConsistencyTol, "relative max-norm residual"});
    checks.push_back({"2tau_times_u_minus_v_conj",
                      squeezelab::max_abs_diff(CMat(2.0 * ds.tau * d.bt.u),
                                               CMat(d.bt.v.conjugate())) /
                              scale <=
                          kConsistencyTol,
                      squeezelab::max_abs_diff(CMat(2.0 * ds.tau * d.bt.u),
                                               CMat(d.bt.v.conjugate())) /
                          scale,
                      kConsistencyTol, "relative max-norm residual"});

    try {
        auto form = squeezelab::exponent_form(d.bt);
        json exp_section = json::object();
        exp_section["generator"] = squeezelab::report::cmat_to_json(form.generator);
        report["exponent"] = exp_section;
    } catch (const squeezelab::BranchCutError& e) {
        // ln M does not exist on the principal branch in this phase gauge;
        // the disentangled form above is still complete.
        json note = json::object();
        note["error"] = "BranchCutError";
        note["message"] = e.what();
        report["exponent"] = note;
    }

    const int n = d.bt.n();
    if (n == 1) {
        auto red = squeezelab::one_mode_reduce(d.bt);
        json one = json::object();
        one["zeta"] = squeezelab::report::complex_to_json(red.zeta);
        report["one_mode"] = one;
    }
    if (n == 2) {
        auto two = squeezelab::is_standard_two_mode(d.bt);
        json std_form = json::object();
        std_form["standard"] = two.standard;
        if (two.standard) {
            std_form["r"] = two.r;
            std_form["varphi"] = two.varphi;
        }
        report["two_mode_standard_form"] = std_form;
    }

    report["checks"] = checks_to_json(checks);
    emit_report(report, out_path);
    return all_pass(checks) ? kExitOk : kExitVerification;
}

int cmd_decompose(const std::string& spec_path, const std::string& out_path) {
    auto h = load_spec(spec_path);
    auto d = squeezelab::diagonalize(h);
    auto bm = squeezelab::bloch_messiah(d.bt);
    auto frame = squeezelab::mixed_boson_frame(d.bt);

    json report = squeezelab::report::make_report("decompose");
    report["input"] = input_echo(h, spec_path);
    report["omega"] = squeezelab::report::rvec_to_json(d.omega);
    report["bt"] = squeezelab::report::bt_to_json(d.bt);

    json dec = json::object();
    dec["s"] = squeezelab::report::cmat_to_json(bm.s_rot);
    dec["r_vals"] = squeezelab::report::rvec_to_json(bm.r_vals);
    dec["t"] = squeezelab::report::cmat_to_json(bm.t_rot);
    dec["degenerate_singular_values"] = bm.degenerate_singular_values;
    dec["special_case"] = squeezelab::to_string(squeezelab::classify_special_case(bm));
    report["decomposition"] = dec;

    json mixed = json::object();
    mixed["t"] = squeezelab::report::cmat_to_json(frame.t_rot);
    mixed["covariance"] = squeezelab::report::covariance_to_json(frame.cov_in_frame);
    report["mixed_frame"] = mixed;

    auto rec = bm.reconstruct();
    double scale = std::max(1.0, squeezelab::max_abs(d.bt.u));
    double rec_res = std::max(squeezelab::max_abs_diff(rec.u, d.bt.u),
                              squeezelab::max_abs_diff(rec.v, d.bt.v)) /
                     scale;
    const int n = d.bt.n();
    double unit_s = squeezelab::max_abs_diff(CMat(bm.s_rot.adjoint() * bm.s_rot),
                                             CMat(CMat::Identity(n, n)));
    double unit_t = squeezelab::max_abs_diff(CMat(bm.t_rot.adjoint() * bm.t_rot),
                                             CMat(CMat::Identity(n, n)));
    bool descending = true;
    for (int i = 0; i + 1 < n; ++i)
        if (bm.r_vals(i) < bm.r_vals(i + 1) - kConsistencyTol) descending = false;

    std::vector<squeezelab::report::VerifyCheck> checks = {
        {"reconstruction", rec_res <= kConsistencyTol, rec_res, kConsistencyTol,
         "relative max-norm residual of S D_cosh T, S D_sinh T* against u, v"},
        {"s_unitary", unit_s <= kConsistencyTol, unit_s, kConsistencyTol,
         "max-norm residual of S†S - I"},
        {"t_unitary", unit_t <= kConsistencyTol, unit_t, kConsistencyTol,
         "max-norm residual of T†T - I"},
        {"r_descending", descending, descending ? 0.0 : 1.0, 0.0,
         "squeeze magnitudes sorted descending"},
    };
    report["checks"] = checks_to_json(checks);
    emit_report(report, out_path);
    return all_pass(checks) ? kExitOk : kExitVerification;
}

// Enumerates all m >= 0 with total degree <= bound, lexicographically.
void enumerate_ball(int n_modes, int bound, MultiIndex& prefix,
                    std::vector<MultiIndex>& out) {
    if (static_cast<int>(prefix.size()) == n_modes) {
        out.push_back(prefix);
        return;
    }
    for (int k = 0; k <= bound; ++k) {
        prefix.push_back(k);
        enumerate_ball(n_modes, bound - k, prefix, out);
        prefix.pop_back();
    }
}

int cmd_state(const std::string& spec_path, const std::string& kind,
              const std::string& n_raw, const std::string& alpha_raw, int fock_upto,
              const std::vector<std::string>& coherent_at, const std::string& coord_grid,
              const std::string& out_path) {
    auto h = load_spec(spec_path);
    const int n_modes = h.n_modes;

    bool has_n = !n_raw.empty();
    bool has_alpha = !alpha_raw.empty();
    MultiIndex n;
    CVec alpha;
    if (has_n) {
        n = parse_index_list(n_raw);
        if (static_cast<int>(n.size()) != n_modes)
            throw InputError{"--n must list one occupation per mode"};
    }
    if (has_alpha) {
        alpha = parse_complex_list(alpha_raw);
        if (alpha.size() != n_modes)
            throw InputError{"--alpha must list one displacement per mode"};
    }

    StateDescriptor state;
    bool needs_bt = false;
    bool needs_n = false;
    bool needs_alpha = false;
    if (kind == "fock") {
        needs_n = true;
    } else if (kind == "coherent") {
        needs_alpha = true;
    } else if (kind == "coherent-fock") {
        needs_n = needs_alpha = true;
    } else if (kind == "svs") {
        needs_bt = true;
    } else if (kind == "scs") {
        needs_bt = needs_alpha = true;
    } else if (kind == "sfs") {
        needs_bt = needs_n = true;
    } else if (kind == "scfs") {
        needs_bt = needs_n = needs_alpha = true;
    } else {
        throw InputError{"unknown state kind: " + kind};
    }
    if (needs_n && !has_n) throw InputError{"kind " + kind + " requires --n"};
    if (!needs_n && has_n) throw InputError{"kind " + kind + " does not take --n"};
    if (needs_alpha && !has_alpha) throw InputError{"kind " + kind + " requires --alpha"};
    if (!needs_alpha && has_alpha)
        throw InputError{"kind " + kind + " does not take --alpha"};

    json report = squeezelab::report::make_report("state");
    report["input"] = input_echo(h, spec_path);

    if (needs_bt) {
        auto d = squeezelab::diagonalize(h);
        report["omega"] = squeezelab::report::rvec_to_json(d.omega);
        report["bt"] = squeezelab::report::bt_to_json(d.bt);
        if (kind == "svs") state = squeezelab::make_svs(d.bt);
        if (kind == "scs") state = squeezelab::make_scs(d.bt, alpha);
        if (kind == "sfs") state = squeezelab::make_sfs(d.bt, n);
        if (kind == "scfs") state = squeezelab::make_scfs(d.bt, n, alpha);
    } else {
        if (kind == "fock") state = squeezelab::make_fock(n);
        if (kind == "coherent") state = squeezelab::make_coherent(alpha);
        if (kind == "coherent-fock") state = squeezelab::make_coherent_fock(n, alpha);
    }

    json desc = json::object();
    desc["kind"] = kind;
    if (has_n) {
        json occ = json::array();
        for (int k : n) occ.push_back(k);
        desc["n"] = occ;
    }
    if (has_alpha) desc["alpha"] = squeezelab::report::cvec_to_json(alpha);
    report["state"] = desc;

    json stats = json::object();
    stats["mean_n"] = squeezelab::report::rvec_to_json(squeezelab::mean_photon(state));
    stats["var_n"] = squeezelab::report::rvec_to_json(squeezelab::photon_variance(state));
    stats["covariance"] =
        squeezelab::report::covariance_to_json(squeezelab::covariance(state));
    report["statistics"] = stats;

    json wavefn = json::object();
    if (fock_upto >= 0) {
        if (fock_upto > 60)
            throw InputError{"--fock-upto exceeds the total-degree guard of 60"};
        std::vector<MultiIndex> ball;
        MultiIndex prefix;
        enumerate_ball(n_modes, fock_upto, prefix, ball);
        json samples = json::array();
        for (const auto& m : ball) {
            json item = json::object();
            json occ = json::array();
            for (int k : m) occ.push_back(k);
            item["n"] = occ;
            item["amplitude"] =
                squeezelab::report::complex_to_json(squeezelab::wavefn_fock(state, m));
            samples.push_back(item);
        }
        wavefn["fock"] = samples;
    }
    if (!coherent_at.empty()) {
        json samples = json::array();
        for (const auto& raw : coherent_at) {
            CVec beta = parse_complex_list(raw);
            if (beta.size() != n_modes)
                throw InputError{"--coherent-at must list one amplitude per mode"};
            json item = json::object();
            item["beta"] = squeezelab::report::cvec_to_json(beta);
            item["amplitude"] = squeezelab::report::complex_to_json(
                squeezelab::wavefn_coherent(state, beta));
            samples.push_back(item);
        }
        wavefn["coherent"] = samples;
    }
    if (!coord_grid.empty()) {
        std::vector<GridAxis> axes;
        std::string part;
        std::istringstream stream(coord_grid);
        while (std::getline(stream, part, ';')) axes.push_back(parse_grid_axis(part));
        if (static_cast<int>(axes.size()) == 1 && n_modes > 1)
            axes.assign(n_modes, axes[0]);
        if (static_cast<int>(axes.size()) != n_modes)
            throw InputError{"--coord-grid must give one axis (shared) or one per mode"};
        long total = 1;
        for (const auto& axis : axes) {
            total *= axis.count;
            if (total > 4096) throw InputError{"--coord-grid exceeds 4096 points"};
        }
        json samples = json::array();
        MultiIndex idx(n_modes, 0);
        for (long flat = 0; flat < total; ++flat) {
            RVec x(n_modes);
            for (int m = 0; m < n_modes; ++m) x(m) = axis_point(axes[m], idx[m]);
            json item = json::object();
            item["x"] = squeezelab::report::rvec_to_json(x);
            item["value"] = squeezelab::report::complex_to_json(
                squeezelab::wavefn_coordinate(state, x));
            samples.push_back(item);
            for (int m = n_modes - 1; m >= 0; --m) {
                if (++idx[m] < axes[m].count) break;
                idx[m] = 0;
            }
        }
        wavefn["coordinate"] = samples;
    }
    if (!wavefn.empty()) report["wavefunction"] = wavefn;

    emit_report(report, out_path);
    return kExitOk;
}

int cmd_verify(const std::string& spec_path, int cutoff, double tol, bool tol_overridden,
               const std::string& out_path) {
    auto h = load_spec(spec_path);
    auto d = squeezelab::diagonalize(h);

    // Closed-form ground state: the squeezed vacuum, displaced when a linear
    // drive is present. c annihilates the SVS, and the drive-completed modes
    // c + (uα + vα*) annihilate the displaced ground state.
    StateDescriptor state;
    if (h.kappa.isZero(0.0)) {
        state = squeezelab::make_svs(d.bt);
    } else {
        CVec alpha_state = -(d.bt.u * d.alpha + d.bt.v * d.alpha.conjugate());
        state = squeezelab::make_scs(d.bt, alpha_state);
    }

    squeezelab::TruncatedFockSpace space(h.n_modes, cutoff);
    constexpr double kTailGate = 1e-2;
    auto cf = squeezelab::build_closed_form_state(state, space, kTailGate);
    const double deficit = cf.norm_deficit;

    CMat hmat = squeezelab::build_hamiltonian(h, space);
    auto ground = squeezelab::ground_state(hmat);
    auto moments = squeezelab::numeric_moments(cf.state, space);

    // The oracle cannot certify beyond its own truncation floor, so unless
    // the tolerance was set explicitly each check uses
    // max(tol, floor(deficit)); the floor scales match first-order
    // perturbation by the tail mass.
    auto effective = [&](double floor) { return tol_overridden ? tol : std::max(tol, floor); };
    double energy_scale = 2.0 * h.xi.real().trace() + h.kappa.cwiseAbs().sum() +
                          std::abs(d.energy_shift);
    double tol_energy = effective(6.0 * deficit * energy_scale);
    double tol_mean = effective(6.0 * deficit * cutoff);
    double tol_var = effective(6.0 * deficit * cutoff * cutoff);
    double tol_cov = effective(6.0 * deficit * cutoff);

    double energy_pred = d.omega.sum() + d.energy_shift;
    double energy_dev = std::abs(ground.energy - energy_pred);
    cplx ov = cf.state.normalized().amplitudes.dot(ground.state.amplitudes);
    double overlap = std::abs(ov);
    constexpr double kOverlapBar = 0.9999;

    RVec mean_closed = squeezelab::mean_photon(state);
    RVec var_closed = squeezelab::photon_variance(state);
    auto cov_closed = squeezelab::covariance(state);
    double mean_dev = (mean_closed - moments.mean_n).cwiseAbs().maxCoeff();
    double var_dev = (var_closed - moments.var_n).cwiseAbs().maxCoeff();
    double cov_dev = squeezelab::max_abs_diff(cov_closed.cov, moments.cov.cov);

    std::vector<squeezelab::report::VerifyCheck> checks = {
        {"ground_energy", energy_dev <= tol_energy, energy_dev, tol_energy,
         "oracle lowest eigenvalue against sum(omega) + energy_shift"},
        {"ground_overlap", overlap >= kOverlapBar, overlap, kOverlapBar,
         "pass iff value >= tolerance; closed-form ground state against the "
         "oracle eigenvector"},
        {"mean_n", mean_dev <= tol_mean, mean_dev, tol_mean,
         "max deviation of closed-form mean photon numbers from the oracle"},
        {"var_n", var_dev <= tol_var, var_dev, tol_var,
         "max deviation of closed-form photon-number variances from the oracle"},
        {"covariance", cov_dev <= tol_cov, cov_dev, tol_cov,
         "entrywise max deviation of the quadrature covariance from the oracle"},
    };

    json report = squeezelab::report::make_report("verify");
    report["input"] = input_echo(h, spec_path);
    report.update(diagonalization_sections(d));
    json oracle = json::object();
    oracle["cutoff"] = cutoff;
    oracle["dimension"] = space.dim();
    oracle["closed_form_kind"] = squeezelab::to_string(state.kind);
    oracle["norm_deficit"] = deficit;
    oracle["tail_gate"] = kTailGate;
    oracle["tolerance_policy"] = tol_overridden ? "strict" : "adaptive";
    oracle["base_tolerance"] = tol;
    report["oracle"] = oracle;
    report["checks"] = checks_to_json(checks);
    bool ok = all_pass(checks);
    report["overall"] = ok;
    emit_report(report, out_path);
    return ok ? kExitOk : kExitVerification;
}

int cmd_paper_example(const std::string& out_path) {
    namespace we = squeezelab::worked_example;
    auto h = we::hamiltonian();
    auto d = squeezelab::diagonalize(h);
    auto ds = squeezelab::disentangle(d.bt);
    auto bm = squeezelab::bloch_messiah(d.bt);
    auto svs = squeezelab::make_svs(d.bt);

    // The embedded constants live in the reference gauge; τ is compared after
    // transport by the per-mode phases, everything else is phase-invariant.
    CVec p = we::gauge_phases_to_reference(d.bt);
    CMat tau_ref = p.conjugate().asDiagonal() * ds.tau * p.conjugate().asDiagonal();
    auto ref = we::reference_bt();

    constexpr double kGoldenTol = 1e-10;
    auto mk = [](const std::string& name, double dev) {
        return squeezelab::report::VerifyCheck{name, dev <= kGoldenTol, dev, kGoldenTol,
                                               "max deviation from the embedded value"};
    };
    std::vector<squeezelab::report::VerifyCheck> goldens = {
        mk("omega", (d.omega - we::omega()).cwiseAbs().maxCoeff()),
        mk("rho", squeezelab::max_abs_diff(ds.rho, we::rho())),
        mk("tau", squeezelab::max_abs_diff(tau_ref, we::tau())),
        mk("norm_magnitude", std::abs(ds.norm_magnitude - we::norm_magnitude())),
        mk("u_abs", (d.bt.u.cwiseAbs() - ref.u.cwiseAbs()).cwiseAbs().maxCoeff()),
        mk("v_abs", (d.bt.v.cwiseAbs() - ref.v.cwiseAbs()).cwiseAbs().maxCoeff()),
        mk("d_cosh", (bm.r_vals.array().cosh().matrix() - we::d_cosh_diag())
                         .cwiseAbs()
                         .maxCoeff()),
        mk("r_vals", (bm.r_vals - we::r_vals()).cwiseAbs().maxCoeff()),
        mk("s_abs", (bm.s_rot.cwiseAbs() - we::s_abs()).cwiseAbs().maxCoeff()),
        mk("t_abs", (bm.t_rot.cwiseAbs() - we::t_abs()).cwiseAbs().maxCoeff()),
        mk("mean_photon",
           (squeezelab::mean_photon(svs) - we::mean_photon()).cwiseAbs().maxCoeff()),
        mk("fock_amplitude_20",
           std::abs(squeezelab::wavefn_fock(svs, {2, 0}) - we::fock_20_amplitude())),
    };

    json report = squeezelab::report::make_report("paper-example");
    report["input"] = input_echo(h, "");
    report.update(diagonalization_sections(d));
    json dis = json::object();
    dis["rho"] = squeezelab::report::cmat_to_json(ds.rho);
    dis["tau"] = squeezelab::report::cmat_to_json(ds.tau);
    dis["tau_reference_gauge"] = squeezelab::report::cmat_to_json(tau_ref);
    dis["norm_magnitude"] = ds.norm_magnitude;
    report["disentangled"] = dis;
    json dec = json::object();
    dec["s"] = squeezelab::report::cmat_to_json(bm.s_rot);
    dec["r_vals"] = squeezelab::report::rvec_to_json(bm.r_vals);
    dec["t"] = squeezelab::report::cmat_to_json(bm.t_rot);
    dec["special_case"] =
        squeezelab::to_string(squeezelab::classify_special_case(bm));
    report["decomposition"] = dec;
    report["goldens"] = checks_to_json(goldens);
    bool ok = all_pass(goldens);
    report["overall"] = ok;
    emit_report(report, out_path);
    return ok ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"squeezelab: Bogoliubov diagonalization, squeeze operators, "
                 "squeezed-state families, and oracle verification"};
    app.require_subcommand(1);

    std::string spec_path, out_path, kind, n_raw, alpha_raw, coord_grid;
    std::string format = "json";
    std::vector<std::string> coherent_at;
    int cutoff = 0;
    int fock_upto = -1;

    auto add_common = [&](CLI::App* cmd, bool needs_spec) {
        if (needs_spec)
            cmd->add_option("--spec", spec_path, "Hamiltonian spec file (JSON or TOML)")
                ->required();
        cmd->add_option("--out", out_path, "write the report here instead of stdout");
        cmd->add_option("--format", format, "report format")
            ->check(CLI::IsMember({"json"}));
    };

    auto* cmd_diag = app.add_subcommand("diagonalize", "normal modes and BT blocks");
    add_common(cmd_diag, true);
    auto* cmd_sq = app.add_subcommand("squeeze-op", "disentangled and exponent forms");
    add_common(cmd_sq, true);
    auto* cmd_dec = app.add_subcommand("decompose", "three-factor decomposition");
    add_common(cmd_dec, true);
    auto* cmd_st = app.add_subcommand("state", "state statistics and wavefunctions");
    add_common(cmd_st, true);
    cmd_st->add_option("--kind", kind,
                       "fock | coherent | coherent-fock | svs | scs | sfs | scfs")
        ->required();
    cmd_st->add_option("--n", n_raw, "occupation numbers, comma separated");
    cmd_st->add_option("--alpha", alpha_raw,
                       "displacements, comma separated (re, imi, or re+imi)");
    cmd_st->add_option("--fock-upto", fock_upto,
                       "emit Fock amplitudes for total degree up to K");
    cmd_st->add_option("--coherent-at", coherent_at,
                       "coherent-basis sample point (repeatable)");
    cmd_st->add_option("--coord-grid", coord_grid,
                       "coordinate grid min:max:count, per mode ; separated");
    auto* cmd_ver = app.add_subcommand("verify", "closed-form vs oracle cross-check");
    add_common(cmd_ver, true);
    cmd_ver->add_option("--cutoff", cutoff, "per-mode Fock cutoff for the oracle")
        ->required()
        ->check(CLI::Range(2, 1000000));
    auto* cmd_pe = app.add_subcommand("paper-example", "embedded worked example");
    add_common(cmd_pe, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    double tol = 1e-6;
    bool tol_overridden = false;
    if (const char* env = std::getenv("SQUEEZELAB_TOL")) {
        char* end = nullptr;
        tol = std::strtod(env, &end);
        if (end == env || *end != '\0' || !(tol > 0.0)) {
            std::cerr << "SQUEEZELAB_TOL must be a positive number\n";
            return kExitInput;
        }
        tol_overridden = true;
    }

    try {
        if (cmd_diag->parsed()) return cmd_diagonalize(spec_path, out_path);
        if (cmd_sq->parsed()) return cmd_squeeze_op(spec_path, out_path);
        if (cmd_dec->parsed()) return cmd_decompose(spec_path, out_path);
        if (cmd_st->parsed())
            return cmd_state(spec_path, kind, n_raw, alpha_raw, fock_upto, coherent_at,
                             coord_grid, out_path);
        if (cmd_ver->parsed())
            return cmd_verify(spec_path, cutoff, tol, tol_overridden, out_path);
        if (cmd_pe->parsed()) return cmd_paper_example(out_path);
    } catch (const InputError& e) {
        std::cerr << e.message << "\n";
        return kExitInput;
    } catch (const squeezelab::TailMassTooLarge& e) {
        std::cerr << e.what() << "\n";
        return kExitResource;
    } catch (const squeezelab::SpaceTooLarge& e) {
        std::cerr << e.what() << "\n";
        return kExitResource;
    } catch (const squeezelab::DegreeTooLarge& e) {
        std::cerr << e.what() << "\n";
        return kExitInput;
    } catch (const squeezelab::Error& e) {
        std::cerr << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
