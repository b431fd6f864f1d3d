#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "holonomy/classical.hpp"
#include "holonomy/torus.hpp"

using namespace holonomy;

namespace {

Eigen::VectorXd vec1(double x) { return Eigen::VectorXd::Constant(1, x); }

ConnectionSpec constant_spec(double value) {
    ConnectionSpec::Term t;
    t.target = 0;
    t.param = 0;
    t.amplitude = Polynomial::constant(1, value);
    t.kind = AngularKind::Constant;
    return ConnectionSpec(1, 1, {t});
}

ConnectionSpec cos_spec(double amplitude) {
    ConnectionSpec::Term t;
    t.target = 0;
    t.param = 0;
    t.amplitude = Polynomial::constant(1, amplitude);
    t.harmonic = Eigen::VectorXi::Constant(1, 1);
    t.kind = AngularKind::Cos;
    return ConnectionSpec(1, 1, {t});
}

ParameterPath unit_line() {
    return ParameterPath({PathSegment::line(vec1(0.0), vec1(1.0), 1.0)});
}

Polynomial quadratic_hamiltonian() {
    Polynomial::Term t{0.5, Eigen::VectorXi::Constant(1, 2)};
    return Polynomial(1, {t});
}

}  // namespace

TEST_CASE("hamilton_rhs reproduces hand-derived values") {
    ParameterPath path = unit_line();

    SUBCASE("constant connection moves angles at constant rate, actions frozen") {
        auto [dphi, dI] = hamilton_rhs(constant_spec(0.25), path,
                                       ClassicalState{0.3, vec1(2.0), vec1(1.0)});
        CHECK(dphi[0] == doctest::Approx(0.25));
        CHECK(dI[0] == 0.0);
    }
    SUBCASE("cos connection at phi = pi/2") {
        auto [dphi, dI] = hamilton_rhs(cos_spec(1.0), path,
                                       ClassicalState{0.0, vec1(2.0), vec1(std::numbers::pi / 2)});
        CHECK(dphi[0] == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(dI[0] == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("zero velocity kills the right-hand side") {
        ParameterPath still({PathSegment::line(vec1(0.7), vec1(0.7 + 1e-300), 1.0)});
        auto [dphi, dI] =
            hamilton_rhs(cos_spec(1.0), still, ClassicalState{0.5, vec1(1.0), vec1(0.3)});
        CHECK(std::abs(dphi[0]) < 1e-290);
        CHECK(std::abs(dI[0]) < 1e-290);
    }
}

TEST_CASE("constant connection integrates to an exact angle shift") {
    Trajectory traj = integrate_flow(constant_spec(0.5), unit_line(),
                                     ClassicalState{0.0, vec1(1.0), vec1(0.25)}, 1.0, 1e-3);
    const ClassicalState& end = traj.back();
    CHECK(end.t == doctest::Approx(1.0));
    CHECK(end.angle[0] == doctest::Approx(wrap_angle(0.25 + 0.5)).epsilon(1e-12));
    CHECK(end.action[0] == 1.0);  // bitwise
}

TEST_CASE("zero connection leaves the state unchanged") {
    ConnectionSpec zero(1, 1, {});
    Trajectory traj = integrate_flow(zero, unit_line(),
                                     ClassicalState{0.0, vec1(2.5), vec1(1.1)}, 1.0, 1e-2);
    CHECK(traj.back().action[0] == 2.5);
    CHECK(traj.back().angle[0] == doctest::Approx(1.1));
}

TEST_CASE("Richardson self-consistency of the integrator") {
    ConnectionSpec spec = cos_spec(0.3);
    ParameterPath path = unit_line();
    ClassicalState z0{0.0, vec1(1.0), vec1(0.0)};
    ClassicalState coarse = integrate_flow_endpoint(spec, make_drive(path), z0, 1.0, 1e-3);
    ClassicalState fine = integrate_flow_endpoint(spec, make_drive(path), z0, 1.0, 5e-4);
    CHECK(std::abs(coarse.angle[0] - fine.angle[0]) < 1e-8);
    CHECK(std::abs(coarse.action[0] - fine.action[0]) < 1e-8);
}

TEST_CASE("variational flow matches finite-difference Jacobians") {
    ConnectionSpec spec = cos_spec(0.3);
    Drive drive = make_drive(unit_line());
    ClassicalState z0{0.0, vec1(1.0), vec1(0.4)};
    VariationalResult vr = variational_flow(spec, drive, z0, 1.0, 1e-3);
    CHECK(vr.jacobian.determinant() > 0.0);

    const double eps = 1e-5;
    ClassicalState zp = z0, zm = z0;
    zp.angle[0] += eps;
    zm.angle[0] -= eps;
    double fd = (integrate_flow_endpoint(spec, drive, zp, 1.0, 1e-3).angle[0] -
                 integrate_flow_endpoint(spec, drive, zm, 1.0, 1e-3).angle[0]) /
                (2.0 * eps);
    CHECK(std::abs(vr.jacobian(0, 0) - fd) < 1e-6);
}

TEST_CASE("constant connections have identity variational flow") {
    VariationalResult vr = variational_flow(constant_spec(0.7), make_drive(unit_line()),
                                            ClassicalState{0.0, vec1(1.0), vec1(0.0)}, 1.0, 1e-3);
    CHECK(vr.jacobian(0, 0) == 1.0);
}

TEST_CASE("inverse flow inverts the forward flow") {
    ConnectionSpec spec = cos_spec(0.3);
    Drive drive = make_drive(unit_line());
    ClassicalState z0{0.0, vec1(1.0), vec1(0.6)};
    ClassicalState fwd = integrate_flow_endpoint(spec, drive, z0, 1.0, 1e-3);
    InverseFlowResult inv = inverse_flow(spec, drive, 1.0, fwd.angle, 1e-3);
    CHECK(angle_distance(inv.angle[0], z0.angle[0]) < 1e-7);

    SUBCASE("chain rule: inverse Jacobian times forward Jacobian is identity") {
        VariationalResult vr = variational_flow(spec, drive, z0, 1.0, 1e-3);
        CHECK(std::abs(inv.jacobian(0, 0) * vr.jacobian(0, 0) - 1.0) < 1e-6);
    }
}

TEST_CASE("inverse flow of a constant connection is a translation") {
    InverseFlowResult inv =
        inverse_flow(constant_spec(0.5), make_drive(unit_line()), 1.0, vec1(1.0), 1e-3);
    CHECK(angle_distance(inv.angle[0], 1.0 - 0.5) < 1e-12);
    CHECK(inv.jacobian(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("canonical transformation and its inverse") {
    Polynomial h = quadratic_hamiltonian();
    SUBCASE("zero Hamiltonian is the identity") {
        ClassicalState s{2.0, vec1(1.5), vec1(0.7)};
        ClassicalState out = canonical_to_original(Polynomial::zero(1), s);
        CHECK(out.angle[0] == doctest::Approx(0.7));
        CHECK(out.action[0] == 1.5);
    }
    SUBCASE("quadratic Hamiltonian shifts the angle by t I") {
        ClassicalState out = canonical_to_original(h, ClassicalState{2.0, vec1(1.0), vec1(0.3)});
        CHECK(out.angle[0] == doctest::Approx(2.3).epsilon(1e-14));
    }
    SUBCASE("round trip over random states") {
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> dist(-4.0, 4.0);
        for (int i = 0; i < 100; ++i) {
            ClassicalState s{dist(rng), vec1(dist(rng)), vec1(wrap_angle(dist(rng)))};
            ClassicalState back = original_to_canonical(h, canonical_to_original(h, s));
            CHECK(back.action[0] == s.action[0]);
            CHECK(angle_distance(back.angle[0], s.angle[0]) < 1e-12);
        }
    }
}

TEST_CASE("original frame flow agrees with the composed solution") {
    Drive drive = make_drive(unit_line());
    Polynomial h = quadratic_hamiltonian();

    SUBCASE("zero Hamiltonian reduces to the initial-data flow") {
        ConnectionSpec spec = cos_spec(0.3);
        ClassicalState z0{0.0, vec1(1.0), vec1(0.2)};
        Trajectory direct = original_frame_flow(spec, drive, Polynomial::zero(1), z0, 1.0, 1e-3);
        ClassicalState ref = integrate_flow_endpoint(spec, drive, z0, 1.0, 1e-3);
        CHECK(std::abs(direct.back().action[0] - ref.action[0]) < 1e-12);
        CHECK(angle_distance(direct.back().angle[0], wrap_angle(ref.angle[0])) < 1e-12);
    }
    SUBCASE("constant connection with quadratic Hamiltonian") {
        Trajectory direct = original_frame_flow(constant_spec(0.25), drive, h,
                                                ClassicalState{0.0, vec1(1.0), vec1(0.0)}, 1.0,
                                                1e-3);
        CHECK(direct.back().action[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(direct.back().angle[0] == doctest::Approx(1.25).epsilon(1e-9));
    }
    SUBCASE("trig connection matches flow composed with the canonical map") {
        ConnectionSpec spec = cos_spec(0.3);
        ClassicalState z0{0.0, vec1(1.0), vec1(0.0)};
        Trajectory direct = original_frame_flow(spec, drive, h, z0, 1.0, 1e-3);
        ClassicalState composed =
            canonical_to_original(h, integrate_flow_endpoint(spec, drive, z0, 1.0, 1e-3));
        CHECK(std::abs(direct.back().action[0] - composed.action[0]) < 1e-6);
        CHECK(angle_distance(direct.back().angle[0], composed.angle[0]) < 1e-6);
    }
}

TEST_CASE("action trajectory is linear in the initial action") {
    ConnectionSpec spec = cos_spec(0.3);
    Drive drive = make_drive(unit_line());
    ClassicalState a{0.0, vec1(1.0), vec1(0.3)};
    ClassicalState b{0.0, vec1(3.0), vec1(0.3)};
    ClassicalState ea = integrate_flow_endpoint(spec, drive, a, 1.0, 1e-3);
    ClassicalState eb = integrate_flow_endpoint(spec, drive, b, 1.0, 1e-3);
    CHECK(std::abs(eb.action[0] - 3.0 * ea.action[0]) < 1e-10);
    CHECK(std::abs(eb.angle[0] - ea.angle[0]) < 1e-12);  // angle ODE ignores I
}

TEST_CASE("bounded specs stay finite under adversarially steep drives") {
    ConnectionSpec spec = cos_spec(0.9);
    ParameterPath steep({PathSegment::smoothstep_line(vec1(0.0), vec1(6.0), 1.0, 8)});
    ClassicalState z0{0.0, vec1(2.0), vec1(0.1)};
    Trajectory traj = integrate_flow(spec, steep, z0, 1.0, 1e-4);
    for (const auto& s : traj) {
        CHECK(std::isfinite(s.action[0]));
        CHECK(std::isfinite(s.angle[0]));
    }
}

TEST_CASE("integration rejects bad inputs") {
    ConnectionSpec spec = cos_spec(0.3);
    ParameterPath path = unit_line();
    CHECK_THROWS_AS(
        integrate_flow(spec, path, ClassicalState{0.0, vec1(1.0), vec1(0.0)}, 2.0, 1e-3),
        std::invalid_argument);
    CHECK_THROWS_AS(
        integrate_flow(spec, path, ClassicalState{0.0, vec1(1.0), vec1(0.0)}, 1.0, -1e-3),
        std::invalid_argument);
}

TEST_CASE("trajectory CSV has the documented header and row count") {
    Trajectory traj = integrate_flow(constant_spec(0.5), unit_line(),
                                     ClassicalState{0.0, vec1(1.0), vec1(0.0)}, 1.0, 0.1);
    std::string csv = trajectory_csv(traj);
    CHECK(csv.rfind("t,I_1,phi_1\n", 0) == 0);
    size_t rows = std::count(csv.begin(), csv.end(), '\n');
    CHECK(rows == traj.size() + 1);
}
