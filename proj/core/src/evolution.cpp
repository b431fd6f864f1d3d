#include "holonomy/evolution.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

#include "holonomy/torus.hpp"

namespace holonomy {

namespace {

ConnectionSpec constant_spec(const Eigen::MatrixXd& lambda_const) {
    const int m = static_cast<int>(lambda_const.rows());
    const int d = static_cast<int>(lambda_const.cols());
    std::vector<ConnectionSpec::Term> terms;
    for (int k = 0; k < m; ++k) {
        for (int a = 0; a < d; ++a) {
            if (lambda_const(k, a) == 0.0) continue;
            ConnectionSpec::Term t;
            t.target = k;
            t.param = a;
            t.amplitude = Polynomial::constant(d, lambda_const(k, a));
            t.kind = AngularKind::Constant;
            terms.push_back(std::move(t));
        }
    }
    return ConnectionSpec(m, d, std::move(terms));
}

}  // namespace

OperatorMatrix holonomy_generator(const ConnectionSpec& spec, const ModeLattice& lattice,
                                  const Eigen::VectorXd& lambda, const Eigen::VectorXd& sigma,
                                  const Eigen::VectorXd& velocity) {
    const int m = spec.torus_dim();
    if (lattice.m() != m) throw std::invalid_argument("holonomy_generator: lattice dimension");
    if (velocity.size() != spec.param_dim())
        throw std::invalid_argument("holonomy_generator: velocity dimension");
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(lattice.dim(), lattice.dim());
    const Complex minus_i(0.0, -1.0);
    for (int a = 0; a < spec.param_dim(); ++a) {
        if (velocity[a] == 0.0) continue;
        std::vector<TrigPoly> coeff(m);
        for (int k = 0; k < m; ++k) coeff[k] = spec.slice(sigma, k, a);
        OperatorMatrix block = quantize_affine(lattice, lambda, coeff, {});
        g += (minus_i * velocity[a]) * block.entries;
    }
    return OperatorMatrix{lattice, std::move(g), false, true, spec.is_constant()};
}

GeneratorAssembly::GeneratorAssembly(ConnectionSpec spec, Drive drive, ModeLattice lattice,
                                     Eigen::VectorXd lambda)
    : spec_(std::move(spec)),
      drive_(std::move(drive)),
      lattice_(std::move(lattice)),
      lambda_(std::move(lambda)) {
    validate_lambda(lambda_, lattice_.m());
    if (spec_.torus_dim() != lattice_.m())
        throw std::invalid_argument("generator assembly: torus dimension mismatch");
    const Eigen::VectorXi nmax = spec_.max_abs_harmonic();
    if ((nmax.array() > lattice_.cutoffs().array()).any())
        throw std::invalid_argument("generator assembly: connection harmonic exceeds mode window");
    const int m = lattice_.m();
    blocks_.reserve(spec_.terms().size());
    for (const auto& term : spec_.terms()) {
        std::vector<TrigPoly> coeff(m);
        TrigTerm unit{term.kind,
                      term.kind == AngularKind::Constant ? Eigen::VectorXi::Zero(m).eval()
                                                         : term.harmonic,
                      1.0};
        coeff[term.target] = {unit};
        OperatorMatrix block = quantize_affine(lattice_, lambda_, coeff, {});
        blocks_.push_back(Complex(0.0, -1.0) * block.entries);
    }
}

GeneratorAssembly::GeneratorAssembly(ConnectionSpec spec, const ParameterPath& path,
                                     ModeLattice lattice, Eigen::VectorXd lambda)
    : GeneratorAssembly(std::move(spec), make_drive(path), std::move(lattice),
                        std::move(lambda)) {}

Eigen::MatrixXcd GeneratorAssembly::generator_at(const Eigen::VectorXd& sigma,
                                                 const Eigen::VectorXd& velocity) const {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(lattice_.dim(), lattice_.dim());
    for (size_t i = 0; i < blocks_.size(); ++i) {
        const auto& term = spec_.terms()[i];
        double scale = velocity[term.param] * term.amplitude(sigma);
        if (scale != 0.0) g += scale * blocks_[i];
    }
    return g;
}

Eigen::MatrixXcd GeneratorAssembly::generator(double t) const {
    return generator_at(drive_.value(t), drive_.velocity(t));
}

namespace {

PropagationSample sample_state(double t, const SpectralState& x) {
    PropagationSample s;
    s.t = t;
    s.norm = x.norm();
    s.leakage = edge_shell_fraction(x);
    s.mean_actions.resize(x.lattice.m());
    for (int k = 0; k < x.lattice.m(); ++k) s.mean_actions[k] = mean_action(x, k);
    return s;
}

}  // namespace

PropagationResult propagate(const GeneratorAssembly& assembly, const SpectralState& x0,
                            double t_end, double dt, PropagationMethod method,
                            double leakage_error) {
    if (dt <= 0.0) throw std::invalid_argument("propagate: dt must be > 0");
    if (t_end < 0.0 || t_end > assembly.drive().duration + 1e-12)
        throw std::invalid_argument("propagate: t_end outside drive domain");
    if (!(x0.lattice == assembly.lattice()))
        throw std::invalid_argument("propagate: lattice mismatch");

    Eigen::VectorXcd x = x0.coeffs;
    double t = 0.0;
    PropagationResult result{x0, {}, 0.0, false};
    result.log.push_back(sample_state(0.0, x0));

    while (t_end - t > 1e-15 * std::max(1.0, t_end)) {
        double h = std::min(dt, t_end - t);
        if (method == PropagationMethod::ExpMidpoint) {
            Eigen::MatrixXcd g = assembly.generator(t + 0.5 * h);
            x = (h * g).exp() * x;
        } else {
            Eigen::MatrixXcd g1 = assembly.generator(t);
            Eigen::MatrixXcd gm = assembly.generator(t + 0.5 * h);
            Eigen::MatrixXcd g2 = assembly.generator(t + h);
            Eigen::VectorXcd k1 = g1 * x;
            Eigen::VectorXcd k2 = gm * (x + 0.5 * h * k1);
            Eigen::VectorXcd k3 = gm * (x + 0.5 * h * k2);
            Eigen::VectorXcd k4 = g2 * (x + h * k3);
            x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        t += h;
        if (!x.allFinite())
            throw std::runtime_error("propagate: non-finite coefficients at t = " +
                                     std::to_string(t));
        SpectralState xt(x0.lattice, x0.lambda, x);
        PropagationSample s = sample_state(t, xt);
        result.max_leakage = std::max(result.max_leakage, s.leakage);
        if (s.leakage > leakage_error)
            throw std::runtime_error(
                "propagate: mode leakage exceeds error threshold; enlarge the window");
        result.log.push_back(std::move(s));
    }
    result.leakage_warning = result.max_leakage > leakage_warn_threshold;
    result.state = SpectralState(x0.lattice, x0.lambda, std::move(x));
    return result;
}

OperatorMatrix berry_multiplier(const Eigen::MatrixXd& lambda_const,
                                const Eigen::VectorXd& delta_xi, const ModeLattice& lattice) {
    if (lambda_const.rows() != lattice.m() || lambda_const.cols() != delta_xi.size())
        throw std::invalid_argument("berry_multiplier: dimension mismatch");
    Eigen::VectorXd transport = lambda_const * delta_xi;  // per-axis angle shift
    OperatorMatrix op{lattice, Eigen::MatrixXcd::Zero(lattice.dim(), lattice.dim()),
                      false, false, true};
    for (int i = 0; i < lattice.dim(); ++i) {
        double phase = -lattice.mode(i).cast<double>().dot(transport);
        op.entries(i, i) = std::polar(1.0, phase);
    }
    return op;
}

std::vector<Complex> closed_form_evolve(const ConnectionSpec& spec, const Drive& drive,
                                        const Eigen::VectorXd& lambda,
                                        const std::vector<Complex>& psi0_grid, double t,
                                        double dt, int P) {
    const int m = spec.torus_dim();
    validate_lambda(lambda, m);
    // Band-limited interpolant of the initial state from its grid samples.
    int n_interp = (P - 1) / 2;
    ModeLattice interp_lattice(Eigen::VectorXi::Constant(m, n_interp));
    SpectralState psi0 = from_grid(psi0_grid, interp_lattice, Eigen::VectorXd::Zero(m), P);

    int total = static_cast<int>(psi0_grid.size());
    std::vector<Complex> out(total);
    for (int j = 0; j < total; ++j) {
        Eigen::VectorXd phi(m);
        int flat = j;
        for (int k = m - 1; k >= 0; --k) {
            phi[k] = two_pi * (flat % P) / P;
            flat /= P;
        }
        InverseFlowResult inv = inverse_flow(spec, drive, t, phi, dt);
        double det = inv.jacobian.determinant();
        if (det <= 0.0)
            throw std::runtime_error("closed_form_evolve: non-positive flow Jacobian determinant");
        Complex value = std::sqrt(det) * evaluate(psi0, inv.angle);
        out[j] = value * std::polar(1.0, lambda.dot(phi));
    }
    return out;
}

SpectralState r_map(const SpectralState& x, const Polynomial& hamiltonian, double t,
                    RDirection direction) {
    if (hamiltonian.nvars() != x.lattice.m())
        throw std::invalid_argument("r_map: Hamiltonian variable count mismatch");
    double sign = (direction == RDirection::Forward) ? 1.0 : -1.0;
    Eigen::VectorXcd c(x.coeffs.size());
    for (int i = 0; i < x.lattice.dim(); ++i) {
        double energy = hamiltonian(x.lattice.mode(i).cast<double>() - x.lambda);
        c[i] = x.coeffs[i] * std::polar(1.0, sign * t * energy);
    }
    return SpectralState(x.lattice, x.lambda, std::move(c));
}

OperatorMatrix conjugate_by_r(const OperatorMatrix& op, const Polynomial& hamiltonian, double t,
                              const Eigen::VectorXd& lambda) {
    const ModeLattice& lattice = op.lattice;
    validate_lambda(lambda, lattice.m());
    Eigen::VectorXcd phases(lattice.dim());
    for (int i = 0; i < lattice.dim(); ++i)
        phases[i] = std::polar(1.0, t * hamiltonian(lattice.mode(i).cast<double>() - lambda));
    OperatorMatrix out = op;
    for (int r = 0; r < lattice.dim(); ++r)
        for (int c = 0; c < lattice.dim(); ++c)
            out.entries(r, c) = std::conj(phases[r]) * op.entries(r, c) * phases[c];
    return out;
}

ProductEvolutionResult product_evolution(const Polynomial& hamiltonian,
                                         const Eigen::MatrixXd& lambda_const, const Drive& drive,
                                         const SpectralState& x0, double t_end, double dt) {
    ConnectionSpec spec = constant_spec(lambda_const);
    GeneratorAssembly assembly(spec, drive, x0.lattice, x0.lambda);
    OperatorMatrix h_op = hamiltonian_operator(x0.lattice, x0.lambda, hamiltonian);

    // Combined: single propagation under G_total(t) = -i H + G_holonomy(t).
    Eigen::MatrixXcd h_term = Complex(0.0, -1.0) * h_op.entries;

    Eigen::VectorXcd x = x0.coeffs;
    double t = 0.0;
    while (t_end - t > 1e-15 * std::max(1.0, t_end)) {
        double h = std::min(dt, t_end - t);
        Eigen::MatrixXcd g = h_term + assembly.generator(t + 0.5 * h);
        x = (h * g).exp() * x;
        t += h;
    }
    SpectralState combined(x0.lattice, x0.lambda, std::move(x));

    // Factored: diagonal phase e^{-i t E_n}, then the Berry multiplier.
    SpectralState dynamic = r_map(x0, hamiltonian, t_end, RDirection::Inverse);
    Eigen::VectorXd delta_xi = drive.value(t_end) - drive.value(0.0);
    OperatorMatrix berry = berry_multiplier(lambda_const, delta_xi, x0.lattice);
    SpectralState factored = berry.apply(dynamic);

    return ProductEvolutionResult{std::move(combined), std::move(factored)};
}

std::string propagation_csv(const std::vector<PropagationSample>& log) {
    if (log.empty()) return "";
    const int m = static_cast<int>(log.front().mean_actions.size());
    std::string out = "t,norm,leakage";
    for (int i = 1; i <= m; ++i) out += ",mean_I_" + std::to_string(i);
    out += "\n";
    char buf[64];
    for (const auto& s : log) {
        std::snprintf(buf, sizeof buf, "%.17g,", s.t);
        out += buf;
        std::snprintf(buf, sizeof buf, "%.17g,", s.norm);
        out += buf;
        std::snprintf(buf, sizeof buf, "%.17g", s.leakage);
        out += buf;
        for (int i = 0; i < m; ++i) {
            std::snprintf(buf, sizeof buf, ",%.17g", s.mean_actions[i]);
            out += buf;
        }
        out += "\n";
    }
    return out;
}

std::vector<Complex> closed_form_evolve(const ConnectionSpec& spec, const ParameterPath& path,
                                        const Eigen::VectorXd& lambda,
                                        const std::vector<Complex>& psi0_grid, double t,
                                        double dt, int P) {
    return closed_form_evolve(spec, make_drive(path), lambda, psi0_grid, t, dt, P);
}

ProductEvolutionResult product_evolution(const Polynomial& hamiltonian,
                                         const Eigen::MatrixXd& lambda_const,
                                         const ParameterPath& path, const SpectralState& x0,
                                         double t_end, double dt) {
    return product_evolution(hamiltonian, lambda_const, make_drive(path), x0, t_end, dt);
}

}  // namespace holonomy
