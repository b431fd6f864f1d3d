#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "holonomy/evolution.hpp"
#include "holonomy/operators.hpp"
#include "holonomy/spectral.hpp"
#include "holonomy/torus.hpp"

using namespace holonomy;

namespace {

Eigen::VectorXd vec1(double x) { return Eigen::VectorXd::Constant(1, x); }
Eigen::VectorXi mode1(int n) { return Eigen::VectorXi::Constant(1, n); }
Eigen::VectorXd lam0(int m = 1) { return Eigen::VectorXd::Zero(m); }

ConnectionSpec constant_spec_1d(double value) {
    ConnectionSpec::Term t;
    t.target = 0;
    t.param = 0;
    t.amplitude = Polynomial::constant(1, value);
    t.kind = AngularKind::Constant;
    return ConnectionSpec(1, 1, {t});
}

ConnectionSpec cos_spec_1d(double amplitude, int harmonic = 1) {
    ConnectionSpec::Term t;
    t.target = 0;
    t.param = 0;
    t.amplitude = Polynomial::constant(1, amplitude);
    t.harmonic = mode1(harmonic);
    t.kind = AngularKind::Cos;
    return ConnectionSpec(1, 1, {t});
}

Polynomial quadratic_hamiltonian() {
    Polynomial::Term t{0.5, Eigen::VectorXi::Constant(1, 2)};
    return Polynomial(1, {t});
}

SpectralState gaussian_state(const ModeLattice& lattice, const Eigen::VectorXd& lambda) {
    Eigen::VectorXcd c(lattice.dim());
    for (int i = 0; i < lattice.dim(); ++i) {
        double n2 = lattice.mode(i).cast<double>().squaredNorm();
        c[i] = std::exp(-0.5 * n2);
    }
    return SpectralState(lattice, lambda, c / c.norm());
}

}  // namespace

TEST_CASE("generator entries for a pure cosine connection") {
    // Lambda = cos(phi), v = 1: entry at (n'+-1, n') is -i (n' +- 1/2) / 2.
    ModeLattice lattice(mode1(3));
    OperatorMatrix g = holonomy_generator(cos_spec_1d(1.0), lattice, lam0(), vec1(0.0), vec1(1.0));
    CHECK(g.skew_hermitian);
    CHECK(std::abs(g.entries(lattice.index(mode1(1)), lattice.index(mode1(0))) -
                   Complex(0.0, -0.25)) < 1e-15);
    CHECK(std::abs(g.entries(lattice.index(mode1(-1)), lattice.index(mode1(0))) -
                   Complex(0.0, 0.25)) < 1e-15);
    CHECK(std::abs(g.entries(lattice.index(mode1(3)), lattice.index(mode1(2))) -
                   Complex(0.0, -1.25)) < 1e-15);
    // velocity scales the generator linearly
    OperatorMatrix g2 =
        holonomy_generator(cos_spec_1d(1.0), lattice, lam0(), vec1(0.0), vec1(2.0));
    CHECK((g2.entries - 2.0 * g.entries).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("generator is skew-Hermitian for random specs") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> dist(-1.5, 1.5);
    ModeLattice lattice(mode1(4));
    for (int trial = 0; trial < 5; ++trial) {
        ConnectionSpec::Term t1;
        t1.target = 0;
        t1.param = 0;
        t1.amplitude = Polynomial::constant(1, dist(rng));
        t1.harmonic = mode1(1);
        t1.kind = AngularKind::Cos;
        ConnectionSpec::Term t2;
        t2.target = 0;
        t2.param = 0;
        t2.amplitude = Polynomial::constant(1, dist(rng));
        t2.harmonic = mode1(2);
        t2.kind = AngularKind::Sin;
        ConnectionSpec spec(1, 1, {t1, t2});
        Eigen::VectorXd lambda = Eigen::VectorXd::Constant(1, 0.5);
        OperatorMatrix g = holonomy_generator(spec, lattice, lambda, vec1(dist(rng)),
                                              vec1(dist(rng)));
        CHECK((g.entries + g.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("generator assembly matches the direct construction") {
    ConnectionSpec spec = cos_spec_1d(0.3);
    ParameterPath path({PathSegment::line(vec1(0.0), vec1(1.0), 1.0)});
    ModeLattice lattice(mode1(5));
    GeneratorAssembly assembly(spec, path, lattice, lam0());
    for (double t : {0.0, 0.4, 0.9}) {
        Eigen::MatrixXcd direct =
            holonomy_generator(spec, lattice, lam0(), path.value(t), path.velocity(t)).entries;
        CHECK((assembly.generator(t) - direct).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("constant connection reproduces the per-mode phase exactly") {
    // Lambda = 1/2, line from 0 to pi: mode n picks up e^{-i n pi / 2}.
    ConnectionSpec spec = constant_spec_1d(0.5);
    ParameterPath path(
        {PathSegment::line(vec1(0.0), vec1(std::numbers::pi), 1.0)});
    ModeLattice lattice(mode1(4));
    GeneratorAssembly assembly(spec, path, lattice, lam0());
    SpectralState x0 = gaussian_state(lattice, lam0());

    for (PropagationMethod method : {PropagationMethod::ExpMidpoint, PropagationMethod::Rk4}) {
        double tol = method == PropagationMethod::ExpMidpoint ? 1e-12 : 1e-9;
        PropagationResult result = propagate(assembly, x0, 1.0, 1e-3, method);
        CHECK(result.state.norm() == doctest::Approx(1.0).epsilon(1e-10));
        int i2 = lattice.index(mode1(2));
        Complex expected = x0.coeffs[i2] * std::exp(Complex(0.0, -2.0 * std::numbers::pi * 0.5));
        CHECK(std::abs(result.state.coeffs[i2] - expected) < tol);
        CHECK(std::abs(result.state.coeffs[i2] + x0.coeffs[i2]) < tol);  // phase is -1
    }
}

TEST_CASE("berry multiplier agrees with propagation for constant connections") {
    ConnectionSpec spec = constant_spec_1d(0.5);
    ParameterPath path({PathSegment::smoothstep_line(vec1(0.0), vec1(2.0), 1.0, 2)});
    ModeLattice lattice(mode1(4));
    GeneratorAssembly assembly(spec, path, lattice, lam0());
    SpectralState x0 = gaussian_state(lattice, lam0());

    PropagationResult result = propagate(assembly, x0, 1.0, 1e-3, PropagationMethod::ExpMidpoint);
    OperatorMatrix mult = berry_multiplier(spec.constant_matrix(), vec1(2.0), lattice);
    CHECK(mult.diagonal);
    SpectralState expected = mult.apply(x0);
    CHECK((result.state.coeffs - expected.coeffs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("propagation log records time, norm, leakage and mean actions") {
    ConnectionSpec spec = cos_spec_1d(0.2);
    ParameterPath path({PathSegment::smoothstep_line(vec1(0.0), vec1(1.0), 1.0, 1)});
    ModeLattice lattice(mode1(12));
    GeneratorAssembly assembly(spec, path, lattice, lam0());
    SpectralState x0 = gaussian_state(lattice, lam0());

    PropagationResult result = propagate(assembly, x0, 1.0, 0.01, PropagationMethod::ExpMidpoint);
    REQUIRE(result.log.size() >= 2);
    CHECK(result.log.front().t == 0.0);
    CHECK(result.log.back().t == doctest::Approx(1.0));
    for (const auto& sample : result.log) {
        CHECK(sample.norm == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(sample.leakage < leakage_warn_threshold);
        CHECK(sample.mean_actions.size() == 1);
    }
    CHECK_FALSE(result.leakage_warning);

    std::string csv = propagation_csv(result.log);
    CHECK(csv.rfind("t,norm,leakage,mean_I_1\n", 0) == 0);
}

TEST_CASE("propagation throws when the edge shell saturates") {
    ConnectionSpec spec = cos_spec_1d(0.5);
    ParameterPath path({PathSegment::line(vec1(0.0), vec1(1.0), 1.0)});
    ModeLattice lattice(mode1(1));
    GeneratorAssembly assembly(spec, path, lattice, lam0());
    SpectralState edge = SpectralState::basis(lattice, lam0(), mode1(1));
    CHECK_THROWS_AS(propagate(assembly, edge, 1.0, 0.01, PropagationMethod::ExpMidpoint),
                    std::runtime_error);
}

TEST_CASE("rk4 and exponential midpoint agree on a varying connection") {
    ConnectionSpec spec = cos_spec_1d(0.3);
    ParameterPath path({PathSegment::smoothstep_line(vec1(0.0), vec1(1.0), 1.0, 1)});
    ModeLattice lattice(mode1(14));
    GeneratorAssembly assembly(spec, path, lattice, lam0());
    SpectralState x0 = gaussian_state(lattice, lam0());

    SpectralState a = propagate(assembly, x0, 1.0, 5e-4, PropagationMethod::Rk4).state;
    SpectralState b = propagate(assembly, x0, 1.0, 5e-4, PropagationMethod::ExpMidpoint).state;
    CHECK((a.coeffs - b.coeffs).norm() < 1e-7);
}

TEST_CASE("closed form transport satisfies the evolution equation") {
    // residual oracle: central time difference of the closed-form grid data
    // against the generator applied in the spectral domain
    ConnectionSpec spec = cos_spec_1d(0.2);
    ParameterPath path({PathSegment::smoothstep_line(vec1(0.0), vec1(1.0), 1.0, 1)});
    Drive drive = make_drive(path);
    const int P = 64;
    ModeLattice lattice(mode1(10));
    SpectralState x0 = gaussian_state(lattice, lam0());
    std::vector<Complex> psi0 = to_grid(x0, P);

    const double t = 0.5, h = 1e-4, dt = 1e-4;
    auto at = [&](double time) {
        return closed_form_evolve(spec, drive, lam0(), psi0, time, dt, P);
    };
    std::vector<Complex> mid = at(t), plus = at(t + h), minus = at(t - h);

    ModeLattice wide(mode1(20));
    SpectralState mid_state = from_grid(mid, wide, lam0(), P);
    GeneratorAssembly assembly(spec, drive, wide, lam0());
    Eigen::VectorXcd rhs = assembly.generator(t) * mid_state.coeffs;
    std::vector<Complex> rhs_grid = to_grid(SpectralState(wide, lam0(), rhs), P);

    double residual = 0.0;
    for (int j = 0; j < P; ++j) {
        Complex dpsi = (plus[j] - minus[j]) / (2.0 * h);
        residual = std::max(residual, std::abs(dpsi - rhs_grid[j]));
    }
    CHECK(residual < 1e-3);
}

TEST_CASE("closed form matches spectral propagation on a small case") {
    ConnectionSpec spec = cos_spec_1d(0.25);
    ParameterPath path({PathSegment::smoothstep_line(vec1(0.0), vec1(1.0), 1.0, 1)});
    const int P = 64;
    ModeLattice lattice(mode1(12));
    SpectralState x0 = gaussian_state(lattice, lam0());
    std::vector<Complex> psi0 = to_grid(x0, P);

    std::vector<Complex> closed =
        closed_form_evolve(spec, path, lam0(), psi0, 1.0, 1e-3, P);
    GeneratorAssembly assembly(spec, path, lattice, lam0());
    std::vector<Complex> propagated =
        to_grid(propagate(assembly, x0, 1.0, 1e-3, PropagationMethod::ExpMidpoint).state, P);

    double err = 0.0;
    for (int j = 0; j < P; ++j) err += std::norm(closed[j] - propagated[j]);
    CHECK(std::sqrt(err / P) < 1e-4);
}

TEST_CASE("r map is a diagonal isometry with the conjugate inverse") {
    ModeLattice lattice(mode1(5));
    Polynomial h = quadratic_hamiltonian();
    SpectralState x = gaussian_state(lattice, Eigen::VectorXd::Constant(1, 0.5));
    SpectralState fwd = r_map(x, h, 0.7, RDirection::Forward);
    CHECK(fwd.norm() == doctest::Approx(x.norm()).epsilon(1e-14));
    SpectralState back = r_map(fwd, h, 0.7, RDirection::Inverse);
    CHECK((back.coeffs - x.coeffs).cwiseAbs().maxCoeff() < 1e-14);

    // mode n is multiplied by e^{+i t E_n}, E_n = H(n - lambda)
    int i2 = lattice.index(mode1(2));
    Complex expected = x.coeffs[i2] * std::exp(Complex(0.0, 0.7 * 0.5 * 1.5 * 1.5));
    CHECK(std::abs(fwd.coeffs[i2] - expected) < 1e-14);
}

TEST_CASE("r conjugation fixes diagonal operators and phases shifts") {
    ModeLattice lattice(mode1(3));
    Polynomial h = quadratic_hamiltonian();
    Eigen::VectorXd lambda = lam0();
    const double t = 0.9;

    OperatorMatrix action = action_operator(lattice, lambda, 0);
    OperatorMatrix fixed = conjugate_by_r(action, h, t, lambda);
    CHECK((fixed.entries - action.entries).cwiseAbs().maxCoeff() < 1e-12);

    OperatorMatrix shift = shift_operator(lattice, mode1(1));
    OperatorMatrix conj = conjugate_by_r(shift, h, t, lambda);
    // direct dense conjugation by the diagonal phase matrix
    Eigen::VectorXcd phases(lattice.dim());
    for (int i = 0; i < lattice.dim(); ++i) {
        double n = lattice.mode(i)[0];
        phases[i] = std::exp(Complex(0.0, t * 0.5 * n * n));
    }
    Eigen::MatrixXcd direct =
        phases.conjugate().asDiagonal() * shift.entries * phases.asDiagonal().toDenseMatrix();
    CHECK((conj.entries - direct).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("product decomposition degenerate cases") {
    ModeLattice lattice(mode1(4));
    SpectralState x0 = gaussian_state(lattice, lam0());
    ParameterPath path({PathSegment::smoothstep_line(vec1(0.0), vec1(1.5), 1.0, 1)});
    Eigen::MatrixXd lambda_const = Eigen::MatrixXd::Constant(1, 1, 0.5);

    SUBCASE("zero Hamiltonian reduces to the Berry multiplier") {
        ProductEvolutionResult result = product_evolution(Polynomial::constant(1, 0.0),
                                                          lambda_const, path, x0, 1.0, 1e-3);
        SpectralState expected = berry_multiplier(lambda_const, vec1(1.5), lattice).apply(x0);
        // combined carries the midpoint quadrature error of the smoothstep drive
        CHECK((result.combined.coeffs - expected.coeffs).cwiseAbs().maxCoeff() < 1e-6);
        CHECK((result.factored.coeffs - expected.coeffs).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("zero connection reduces to the free diagonal phase") {
        Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(1, 1);
        Polynomial h = quadratic_hamiltonian();
        ProductEvolutionResult result = product_evolution(h, zero, path, x0, 1.0, 1e-3);
        SpectralState expected = r_map(x0, h, 1.0, RDirection::Inverse);
        CHECK((result.combined.coeffs - expected.coeffs).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((result.factored.coeffs - expected.coeffs).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("combined and factored agree in the generic constant case") {
        ProductEvolutionResult result =
            product_evolution(quadratic_hamiltonian(), lambda_const, path, x0, 1.0, 1e-3);
        CHECK((result.combined.coeffs - result.factored.coeffs).cwiseAbs().maxCoeff() < 1e-6);
    }
}
