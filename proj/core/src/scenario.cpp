#include "holonomy/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "holonomy/checks.hpp"
#include "holonomy/torus.hpp"
#include "json.hpp"

namespace holonomy {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& message) {
    throw std::invalid_argument("scenario field '" + field + "': " + message);
}

Eigen::VectorXd parse_real_vector(const json& j, const std::string& field, int expect = -1) {
    if (!j.is_array()) fail(field, "expected an array of numbers");
    Eigen::VectorXd v(j.size());
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) fail(field, "expected numeric entries");
        v[i] = j[i].get<double>();
    }
    if (expect >= 0 && v.size() != expect)
        fail(field, "expected " + std::to_string(expect) + " entries");
    return v;
}

Eigen::VectorXi parse_int_vector(const json& j, const std::string& field, int expect = -1) {
    if (!j.is_array()) fail(field, "expected an array of integers");
    Eigen::VectorXi v(j.size());
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number_integer()) fail(field, "expected integer entries");
        v[i] = j[i].get<int>();
    }
    if (expect >= 0 && v.size() != expect)
        fail(field, "expected " + std::to_string(expect) + " entries");
    return v;
}

Polynomial parse_polynomial(const json& j, const std::string& field, int nvars) {
    if (!j.is_array()) fail(field, "expected an array of {coeff, powers} terms");
    std::vector<Polynomial::Term> terms;
    for (size_t i = 0; i < j.size(); ++i) {
        const auto& tj = j[i];
        std::string tf = field + "[" + std::to_string(i) + "]";
        if (!tj.contains("coeff") || !tj.contains("powers"))
            fail(tf, "term needs 'coeff' and 'powers'");
        Polynomial::Term t;
        t.coeff = tj["coeff"].get<double>();
        t.powers = parse_int_vector(tj["powers"], tf + ".powers", nvars);
        if ((t.powers.array() < 0).any()) fail(tf + ".powers", "exponents must be >= 0");
        terms.push_back(std::move(t));
    }
    return Polynomial(nvars, std::move(terms));
}

ConnectionSpec parse_connection(const json& j, int m, int d) {
    if (!j.contains("terms") || !j["terms"].is_array())
        fail("connection.terms", "expected an array");
    std::vector<ConnectionSpec::Term> terms;
    for (size_t i = 0; i < j["terms"].size(); ++i) {
        const auto& tj = j["terms"][i];
        std::string tf = "connection.terms[" + std::to_string(i) + "]";
        ConnectionSpec::Term t;
        int k = tj.value("k", 0);
        int alpha = tj.value("alpha", 0);
        if (k < 1 || k > m) fail(tf + ".k", "angle index must be in 1.." + std::to_string(m));
        if (alpha < 1 || alpha > d)
            fail(tf + ".alpha", "parameter index must be in 1.." + std::to_string(d));
        t.target = k - 1;
        t.param = alpha - 1;
        std::string kind = tj.value("kind", "");
        if (kind == "constant")
            t.kind = AngularKind::Constant;
        else if (kind == "cos")
            t.kind = AngularKind::Cos;
        else if (kind == "sin")
            t.kind = AngularKind::Sin;
        else
            fail(tf + ".kind", "must be one of constant, cos, sin");
        if (t.kind != AngularKind::Constant) {
            if (!tj.contains("harmonic")) fail(tf + ".harmonic", "required for cos/sin terms");
            t.harmonic = parse_int_vector(tj["harmonic"], tf + ".harmonic", m);
        }
        if (!tj.contains("amplitude")) fail(tf + ".amplitude", "required");
        t.amplitude = parse_polynomial(tj["amplitude"], tf + ".amplitude", d);
        terms.push_back(std::move(t));
    }
    return ConnectionSpec(m, d, std::move(terms));
}

ParameterPath parse_path(const json& j, int d) {
    if (!j.contains("segments") || !j["segments"].is_array() || j["segments"].empty())
        fail("path.segments", "expected a non-empty array");
    std::vector<PathSegment> segments;
    for (size_t i = 0; i < j["segments"].size(); ++i) {
        const auto& sj = j["segments"][i];
        std::string sf = "path.segments[" + std::to_string(i) + "]";
        std::string type = sj.value("type", "");
        double duration = sj.value("duration", 0.0);
        if (duration <= 0.0) fail(sf + ".duration", "must be > 0");
        if (type == "line" || type == "smoothstep_line") {
            if (!sj.contains("start") || !sj.contains("end"))
                fail(sf, "line segments need 'start' and 'end'");
            Eigen::VectorXd a = parse_real_vector(sj["start"], sf + ".start", d);
            Eigen::VectorXd b = parse_real_vector(sj["end"], sf + ".end", d);
            if (type == "line") {
                segments.push_back(PathSegment::line(a, b, duration));
            } else {
                int steepness = sj.value("steepness", 1);
                if (steepness < 1) fail(sf + ".steepness", "must be >= 1");
                segments.push_back(PathSegment::smoothstep_line(a, b, duration, steepness));
            }
        } else if (type == "arc") {
            for (const char* key : {"center", "radius", "axes", "start_angle", "sweep"})
                if (!sj.contains(key)) fail(sf, std::string("arc segments need '") + key + "'");
            Eigen::VectorXd center = parse_real_vector(sj["center"], sf + ".center", d);
            Eigen::VectorXi axes = parse_int_vector(sj["axes"], sf + ".axes", 2);
            if (axes[0] < 1 || axes[0] > d || axes[1] < 1 || axes[1] > d || axes[0] == axes[1])
                fail(sf + ".axes", "two distinct 1-based parameter indices");
            segments.push_back(PathSegment::arc(center, sj["radius"].get<double>(), axes[0] - 1,
                                                axes[1] - 1, sj["start_angle"].get<double>(),
                                                sj["sweep"].get<double>(), duration));
        } else {
            fail(sf + ".type", "must be one of line, smoothstep_line, arc");
        }
    }
    try {
        return ParameterPath(std::move(segments));
    } catch (const std::invalid_argument& e) {
        fail("path.segments", e.what());
    }
}

}  // namespace

int Scenario::effective_grid_points() const {
    if (grid_points > 0) return grid_points;
    return 2 * cutoff.maxCoeff() + 2;
}

SpectralState Scenario::initial_spectral_state() const {
    ModeLattice lat = lattice();
    if (spectral_initial) {
        if (spectral_initial->size() != lat.dim())
            throw std::invalid_argument(
                "scenario field 'initial.coeffs': count must match the mode window");
        return SpectralState(lat, lambda, *spectral_initial);
    }
    if (grid_initial)
        return from_grid(grid_initial->values, lat, lambda, grid_initial->P);
    throw std::invalid_argument("scenario: no spectral or grid initial state");
}

Scenario scenario_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("scenario parse error: ") + e.what());
    }

    Scenario s;
    if (!j.contains("m") || !j["m"].is_number_integer() || j["m"].get<int>() < 1)
        fail("m", "torus dimension must be a positive integer");
    if (!j.contains("d") || !j["d"].is_number_integer() || j["d"].get<int>() < 1)
        fail("d", "parameter dimension must be a positive integer");
    s.m = j["m"].get<int>();
    s.d = j["d"].get<int>();

    if (!j.contains("connection")) fail("connection", "required");
    s.connection = parse_connection(j["connection"], s.m, s.d);

    if (!j.contains("path")) fail("path", "required");
    s.path = parse_path(j["path"], s.d);

    if (!j.contains("lambda")) fail("lambda", "required");
    s.lambda = parse_real_vector(j["lambda"], "lambda", s.m);
    try {
        validate_lambda(s.lambda, s.m);
    } catch (const std::invalid_argument& e) {
        fail("lambda", e.what());
    }

    s.hamiltonian = j.contains("hamiltonian")
                        ? parse_polynomial(j["hamiltonian"], "hamiltonian", s.m)
                        : Polynomial::zero(s.m);

    if (!j.contains("cutoff")) fail("cutoff", "required");
    s.cutoff = parse_int_vector(j["cutoff"], "cutoff", s.m);
    if ((s.cutoff.array() < 1).any()) fail("cutoff", "entries must be >= 1");

    Eigen::VectorXi nmax = s.connection.max_abs_harmonic();
    for (int i = 0; i < s.m; ++i)
        if (nmax[i] > s.cutoff[i])
            fail("connection", "harmonic |n_" + std::to_string(i + 1) +
                                   "| exceeds cutoff N (band limit violated)");

    s.dt = j.value("dt", 1e-3);
    if (s.dt <= 0.0) fail("dt", "must be > 0");

    std::string method = j.value("method", "expmid");
    if (method == "expmid")
        s.method = PropagationMethod::ExpMidpoint;
    else if (method == "rk4")
        s.method = PropagationMethod::Rk4;
    else
        fail("method", "must be rk4 or expmid");

    s.grid_points = j.value("grid_points", 0);
    if (j.contains("grid_points") && s.grid_points < 2 * s.cutoff.maxCoeff() + 1)
        fail("grid_points", "must be >= 2*max(N)+1 (aliasing)");

    if (j.contains("initial")) {
        const auto& ij = j["initial"];
        std::string type = ij.value("type", "");
        if (type == "classical") {
            Scenario::ClassicalInitial ci;
            ci.action = parse_real_vector(ij.value("I", json::array()), "initial.I", s.m);
            ci.angle = parse_real_vector(ij.value("phi", json::array()), "initial.phi", s.m);
            s.classical_initial = std::move(ci);
        } else if (type == "spectral") {
            if (!ij.contains("coeffs")) fail("initial.coeffs", "required");
            const auto& cj = ij["coeffs"];
            Eigen::VectorXcd c(cj.size());
            for (size_t i = 0; i < cj.size(); ++i) {
                if (!cj[i].is_array() || cj[i].size() != 2)
                    fail("initial.coeffs", "entries must be [re, im] pairs");
                c[i] = Complex(cj[i][0].get<double>(), cj[i][1].get<double>());
            }
            s.spectral_initial = std::move(c);
        } else if (type == "grid") {
            Scenario::GridInitial gi;
            gi.P = ij.value("P", 0);
            if (gi.P < 1) fail("initial.P", "must be >= 1");
            const auto& vj = ij.value("values", json::array());
            for (size_t i = 0; i < vj.size(); ++i)
                gi.values.emplace_back(vj[i][0].get<double>(), vj[i][1].get<double>());
            s.grid_initial = std::move(gi);
        } else {
            fail("initial.type", "must be one of classical, spectral, grid");
        }
    }

    if (j.contains("classical_initial")) {
        const auto& cj = j["classical_initial"];
        Scenario::ClassicalInitial ci;
        ci.action = parse_real_vector(cj.value("I", json::array()), "classical_initial.I", s.m);
        ci.angle = parse_real_vector(cj.value("phi", json::array()), "classical_initial.phi", s.m);
        s.classical_initial = std::move(ci);
    }

    s.outputs = j.value("outputs", "out");
    return s;
}

Scenario load_scenario(const std::string& file_path) {
    std::ifstream in(file_path);
    if (!in) throw std::invalid_argument("scenario file not found: " + file_path);
    std::stringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Scenario apply_overrides(Scenario s, const CommandOverrides& o) {
    if (o.out_dir) s.outputs = *o.out_dir;
    if (o.dt) s.dt = *o.dt;
    if (o.cutoff) {
        if (o.cutoff->size() != s.m)
            throw std::invalid_argument("cutoff override: expected " + std::to_string(s.m) +
                                        " entries");
        s.cutoff = *o.cutoff;
    }
    if (o.method) s.method = *o.method;
    if (o.grid_points) s.grid_points = *o.grid_points;
    return s;
}

int cmd_classical(const Scenario& s, std::ostream& out) {
    if (!s.classical_initial)
        throw std::invalid_argument("classical command needs initial of type 'classical'");
    ClassicalState state0{0.0, s.classical_initial->action, s.classical_initial->angle};
    double T = s.path.duration();
    Trajectory init_frame = integrate_flow(s.connection, s.path, state0, T, s.dt);
    Trajectory orig_frame =
        original_frame_flow(s.connection, s.path, s.hamiltonian, state0, T, s.dt);
    write_file(fs::path(s.outputs) / "trajectory.csv", trajectory_csv(init_frame));
    write_file(fs::path(s.outputs) / "trajectory_original.csv", trajectory_csv(orig_frame));
    out << "classical: " << init_frame.size() << " samples -> " << s.outputs << "\n";
    return 0;
}

int cmd_quantum(const Scenario& s, std::ostream& out) {
    SpectralState x0 = s.initial_spectral_state();
    GeneratorAssembly assembly(s.connection, s.path, x0.lattice, s.lambda);
    PropagationResult r = propagate(assembly, x0, s.path.duration(), s.dt, s.method);
    write_file(fs::path(s.outputs) / "propagation.csv", propagation_csv(r.log));
    write_file(fs::path(s.outputs) / "state_final.json", to_json_string(r.state));
    out << "quantum: final norm " << fmt17(r.state.norm()) << ", max leakage "
        << fmt17(r.max_leakage) << (r.leakage_warning ? " (warning)" : "") << "\n";
    return 0;
}

std::string grid_csv(const std::vector<Complex>& values, int m, int P) {
    std::string out;
    for (int i = 1; i <= m; ++i) out += "phi_" + std::to_string(i) + ",";
    out += "re,im\n";
    for (size_t j = 0; j < values.size(); ++j) {
        int flat = static_cast<int>(j);
        std::vector<double> phi(m);
        for (int k = m - 1; k >= 0; --k) {
            phi[k] = two_pi * (flat % P) / P;
            flat /= P;
        }
        for (int k = 0; k < m; ++k) out += fmt17(phi[k]) + ",";
        out += fmt17(values[j].real()) + "," + fmt17(values[j].imag()) + "\n";
    }
    return out;
}

std::vector<Complex> initial_half_form_grid(const Scenario& s, const SpectralState& x0, int P) {
    // Psi0 = Psi(0) e^{-i lambda.phi}: strip the representation twist.
    std::vector<Complex> grid = to_grid(x0, P);
    const int m = x0.lattice.m();
    for (size_t j = 0; j < grid.size(); ++j) {
        int flat = static_cast<int>(j);
        double arg = 0.0;
        for (int k = m - 1; k >= 0; --k) {
            arg += s.lambda[k] * (two_pi * (flat % P) / P);
            flat /= P;
        }
        grid[j] *= std::polar(1.0, -arg);
    }
    return grid;
}

int cmd_closed_form(const Scenario& s, std::ostream& out) {
    SpectralState x0 = s.initial_spectral_state();
    int P = s.effective_grid_points();
    std::vector<Complex> psi0 = initial_half_form_grid(s, x0, P);
    std::vector<Complex> result =
        closed_form_evolve(s.connection, s.path, s.lambda, psi0, s.path.duration(), s.dt, P);
    write_file(fs::path(s.outputs) / "closed_form.csv", grid_csv(result, s.m, P));
    out << "closed-form: " << result.size() << " grid values -> " << s.outputs << "\n";
    return 0;
}

}  // namespace

double quantum_vs_closed_form_l2(const Scenario& s) {
    SpectralState x0 = s.initial_spectral_state();
    int P = s.effective_grid_points();
    double T = s.path.duration();

    GeneratorAssembly assembly(s.connection, s.path, x0.lattice, s.lambda);
    PropagationResult r = propagate(assembly, x0, T, s.dt, s.method);
    std::vector<Complex> propagated = to_grid(r.state, P);

    std::vector<Complex> psi0 = initial_half_form_grid(s, x0, P);
    std::vector<Complex> closed = closed_form_evolve(s.connection, s.path, s.lambda, psi0, T,
                                                     s.dt, P);

    // Half-integer lambda states live on a nontrivial chart; the e^{i lambda.phi}
    // seam at phi = 0 is excluded from the error norm.
    bool twisted = s.lambda.cwiseAbs().maxCoeff() > 0.0;
    double acc = 0.0;
    int counted = 0;
    for (size_t j = 0; j < propagated.size(); ++j) {
        if (twisted) {
            int flat = static_cast<int>(j);
            bool seam = false;
            for (int k = s.m - 1; k >= 0; --k) {
                if (s.lambda[k] != 0.0 && flat % P == 0) seam = true;
                flat /= P;
            }
            if (seam) continue;
        }
        acc += std::norm(propagated[j] - closed[j]);
        ++counted;
    }
    return std::sqrt(acc / std::max(1, counted));
}

namespace {

int cmd_compare(const Scenario& s, std::ostream& out) {
    double l2 = quantum_vs_closed_form_l2(s);
    out << "compare: L2(propagate, closed_form) = " << fmt17(l2) << "\n";
    json j;
    j["l2_error"] = l2;
    j["grid_points"] = s.effective_grid_points();
    j["dt"] = s.dt;
    write_file(fs::path(s.outputs) / "compare.json", j.dump(2) + "\n");
    return 0;
}

int cmd_berry(const Scenario& s, std::ostream& out) {
    if (!s.connection.is_constant())
        throw std::invalid_argument("berry command needs a constant-coefficient connection");
    Eigen::MatrixXd lam = s.connection.constant_matrix();
    Eigen::VectorXd delta_xi = s.path.value(s.path.duration()) - s.path.value(0.0);
    ModeLattice lat = s.lattice();
    OperatorMatrix mult = berry_multiplier(lam, delta_xi, lat);

    std::string csv;
    for (int i = 1; i <= s.m; ++i) csv += "n_" + std::to_string(i) + ",";
    csv += "re,im\n";
    for (int i = 0; i < lat.dim(); ++i) {
        Eigen::VectorXi n = lat.mode(i);
        for (int k = 0; k < s.m; ++k) csv += std::to_string(n[k]) + ",";
        Complex phase = mult.entries(i, i);
        csv += fmt17(phase.real()) + "," + fmt17(phase.imag()) + "\n";
    }
    write_file(fs::path(s.outputs) / "berry.csv", csv);
    out << "berry: " << lat.dim() << " mode phases -> " << s.outputs << "\n";
    return 0;
}

int cmd_checks(const Scenario& s, std::ostream& out) {
    std::vector<CheckResult> results = run_acceptance_checks();
    bool all_pass = true;
    for (const auto& r : results) {
        out << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  measured=" << fmt17(r.measured)
            << "  threshold=" << fmt17(r.threshold) << "\n";
        all_pass = all_pass && r.pass;
    }
    write_file(fs::path(s.outputs) / "report.json", checks_report_json(results));
    out << (all_pass ? "all checks passed\n" : "checks FAILED\n");
    return all_pass ? 0 : 1;
}

}  // namespace

namespace {

Eigen::VectorXcd gaussian_profile(const ModeLattice& lattice) {
    Eigen::VectorXcd c(lattice.dim());
    for (int i = 0; i < lattice.dim(); ++i) {
        double n2 = lattice.mode(i).cast<double>().squaredNorm();
        c[i] = std::exp(-0.5 * n2);
    }
    return c / c.norm();
}

}  // namespace

std::vector<std::string> builtin_scenario_names() {
    return {"berry_constant", "cos_connection", "product_constant"};
}

Scenario builtin_scenario(const std::string& name) {
    Scenario s;
    s.m = 1;
    s.d = 1;
    s.lambda = Eigen::VectorXd::Zero(1);
    s.dt = 1e-3;
    s.method = PropagationMethod::ExpMidpoint;

    Eigen::VectorXd zero1 = Eigen::VectorXd::Zero(1);
    Eigen::VectorXd pi1 = Eigen::VectorXd::Constant(1, std::numbers::pi);

    if (name == "berry_constant" || name == "product_constant") {
        ConnectionSpec::Term t;
        t.target = 0;
        t.param = 0;
        t.amplitude = Polynomial::constant(1, 0.5);
        t.kind = AngularKind::Constant;
        s.connection = ConnectionSpec(1, 1, {std::move(t)});
        s.path = ParameterPath({PathSegment::line(zero1, pi1, 1.0)});
        s.cutoff = Eigen::VectorXi::Constant(1, 8);
        if (name == "product_constant") {
            Polynomial::Term h{0.5, Eigen::VectorXi::Constant(1, 2)};
            s.hamiltonian = Polynomial(1, {h});
            s.spectral_initial = gaussian_profile(s.lattice());
        } else {
            // Gaussian profile: every mode populated for per-mode phase checks,
            // negligible weight on the edge shell so the leakage gate stays quiet.
            s.spectral_initial = gaussian_profile(s.lattice());
            s.classical_initial = Scenario::ClassicalInitial{
                Eigen::VectorXd::Constant(1, 1.25), Eigen::VectorXd::Constant(1, 0.7)};
        }
        s.outputs = "out";
        return s;
    }

    if (name == "cos_connection") {
        ConnectionSpec::Term t;
        t.target = 0;
        t.param = 0;
        t.amplitude = Polynomial::constant(1, 0.3);
        t.kind = AngularKind::Cos;
        t.harmonic = Eigen::VectorXi::Constant(1, 1);
        s.connection = ConnectionSpec(1, 1, {std::move(t)});
        s.path = ParameterPath({PathSegment::smoothstep_line(zero1, pi1, 1.0)});
        s.cutoff = Eigen::VectorXi::Constant(1, 24);
        s.grid_points = 128;
        Polynomial::Term h{0.5, Eigen::VectorXi::Constant(1, 2)};
        s.hamiltonian = Polynomial(1, {h});
        s.spectral_initial = gaussian_profile(s.lattice());
        s.classical_initial = Scenario::ClassicalInitial{Eigen::VectorXd::Constant(1, 1.0),
                                                         Eigen::VectorXd::Zero(1)};
        s.outputs = "out";
        return s;
    }

    throw std::invalid_argument("unknown builtin scenario: " + name);
}

int run_command(const std::string& command, const Scenario& scenario,
                const CommandOverrides& overrides, std::ostream& out) {
    Scenario s = apply_overrides(scenario, overrides);
    if (command == "classical") return cmd_classical(s, out);
    if (command == "quantum") return cmd_quantum(s, out);
    if (command == "closed-form") return cmd_closed_form(s, out);
    if (command == "compare") return cmd_compare(s, out);
    if (command == "berry") return cmd_berry(s, out);
    if (command == "checks") return cmd_checks(s, out);
    throw std::invalid_argument("unknown command: " + command);
}

}  // namespace holonomy
