#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "holonomy/connection.hpp"
#include "holonomy/path.hpp"
#include "holonomy/torus.hpp"

using namespace holonomy;

namespace {

Eigen::VectorXd vec1(double x) { return Eigen::VectorXd::Constant(1, x); }

ConnectionSpec cos_spec(double amplitude_scale = 1.0, bool sigma_linear = true) {
    // Lambda^1_1 = (sigma or const) * cos(phi^1)
    ConnectionSpec::Term t;
    t.target = 0;
    t.param = 0;
    if (sigma_linear) {
        Polynomial::Term mono{amplitude_scale, Eigen::VectorXi::Constant(1, 1)};
        t.amplitude = Polynomial(1, {mono});
    } else {
        t.amplitude = Polynomial::constant(1, amplitude_scale);
    }
    t.harmonic = Eigen::VectorXi::Constant(1, 1);
    t.kind = AngularKind::Cos;
    return ConnectionSpec(1, 1, {t});
}

}  // namespace

TEST_CASE("angle wrapping is canonical and idempotent") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-50.0, 50.0);
    for (int i = 0; i < 200; ++i) {
        double a = dist(rng);
        double w = wrap_angle(a);
        CHECK(w >= 0.0);
        CHECK(w < two_pi);
        CHECK(wrap_angle(w) == w);
    }
    CHECK(wrap_angle(two_pi) == 0.0);
    CHECK(wrap_angle(-1e-9) < two_pi);
}

TEST_CASE("connection evaluation matches hand values") {
    ConnectionSpec spec = cos_spec();
    CHECK(spec.eval(vec1(0.5), vec1(0.0))(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(spec.eval(vec1(2.0), vec1(std::numbers::pi))(0, 0) ==
          doctest::Approx(-2.0).epsilon(1e-15));

    ConnectionSpec::Term c;
    c.target = 0;
    c.param = 0;
    c.amplitude = Polynomial::constant(1, 0.25);
    c.kind = AngularKind::Constant;
    ConnectionSpec constant(1, 1, {c});
    CHECK(constant.eval(vec1(3.0), vec1(1.2))(0, 0) == 0.25);
}

TEST_CASE("connection rejects dimension mismatches") {
    ConnectionSpec spec = cos_spec();
    CHECK_THROWS_AS(spec.eval(Eigen::VectorXd::Zero(2), vec1(0.0)), std::invalid_argument);
    CHECK_THROWS_AS(spec.eval(vec1(0.0), Eigen::VectorXd::Zero(2)), std::invalid_argument);
}

TEST_CASE("phi-derivative matches hand values and is exact for constants") {
    ConnectionSpec spec = cos_spec();
    auto d = spec.eval_dphi(vec1(0.5), vec1(std::numbers::pi / 2.0));
    CHECK(d[0](0, 0) == doctest::Approx(-0.5).epsilon(1e-15));

    ConnectionSpec::Term c;
    c.target = 0;
    c.param = 0;
    c.amplitude = Polynomial::constant(1, 0.25);
    c.kind = AngularKind::Constant;
    ConnectionSpec constant(1, 1, {c});
    auto dz = constant.eval_dphi(vec1(0.0), vec1(1.7));
    CHECK(dz[0](0, 0) == 0.0);  // bitwise zero, not approximately

    // Lambda = cos(2 phi)
    ConnectionSpec::Term h2;
    h2.target = 0;
    h2.param = 0;
    h2.amplitude = Polynomial::constant(1, 1.0);
    h2.harmonic = Eigen::VectorXi::Constant(1, 2);
    h2.kind = AngularKind::Cos;
    ConnectionSpec spec2(1, 1, {h2});
    CHECK(spec2.eval_dphi(vec1(0.0), vec1(0.0))[0](0, 0) == doctest::Approx(0.0));
    CHECK(spec2.eval_dphi(vec1(0.0), vec1(std::numbers::pi / 4.0))[0](0, 0) ==
          doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("derivative closure against central finite differences") {
    // two-axis, two-parameter spec with mixed harmonics
    ConnectionSpec::Term t1;
    t1.target = 0;
    t1.param = 1;
    Polynomial::Term m1{0.7, (Eigen::VectorXi(2) << 1, 1).finished()};
    t1.amplitude = Polynomial(2, {m1});
    t1.harmonic = (Eigen::VectorXi(2) << 1, -2).finished();
    t1.kind = AngularKind::Sin;
    ConnectionSpec::Term t2;
    t2.target = 1;
    t2.param = 0;
    t2.amplitude = Polynomial::constant(2, 0.4);
    t2.harmonic = (Eigen::VectorXi(2) << 3, 1).finished();
    t2.kind = AngularKind::Cos;
    ConnectionSpec spec(2, 2, {t1, t2});

    std::mt19937 rng(13);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    const double h = 1e-5;
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXd sigma(2), phi(2);
        sigma << dist(rng), dist(rng);
        phi << dist(rng), dist(rng);
        auto analytic = spec.eval_dphi(sigma, phi);
        for (int i = 0; i < 2; ++i) {
            Eigen::VectorXd pp = phi, pm = phi;
            pp[i] += h;
            pm[i] -= h;
            Eigen::MatrixXd fd = (spec.eval(sigma, pp) - spec.eval(sigma, pm)) / (2.0 * h);
            CHECK((analytic[i] - fd).cwiseAbs().maxCoeff() < 1e-7);
        }
    }
}

TEST_CASE("connection is 2pi-periodic in every angle") {
    ConnectionSpec spec = cos_spec();
    Eigen::VectorXd sigma = vec1(1.3);
    for (double phi : {0.1, 2.0, 5.5}) {
        Eigen::MatrixXd a = spec.eval(sigma, vec1(phi));
        Eigen::MatrixXd b = spec.eval(sigma, vec1(phi + two_pi));
        CHECK(std::abs(a(0, 0) - b(0, 0)) < 1e-14);
    }
}

TEST_CASE("line path evaluation and derivative") {
    ParameterPath path({PathSegment::line(vec1(0.0), vec1(1.0), 2.0)});
    CHECK(path.value(1.0)[0] == doctest::Approx(0.5));
    CHECK(path.velocity(0.3)[0] == doctest::Approx(0.5));
    CHECK_THROWS_AS(path.value(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(path.value(2.5), std::invalid_argument);
}

TEST_CASE("closed arc returns to its start and has the expected velocity") {
    Eigen::VectorXd center = Eigen::VectorXd::Zero(2);
    ParameterPath path({PathSegment::arc(center, 1.0, 0, 1, 0.0, two_pi, 1.0)});
    CHECK((path.value(0.0) - (Eigen::VectorXd(2) << 1, 0).finished()).norm() < 1e-14);
    CHECK((path.value(1.0) - (Eigen::VectorXd(2) << 1, 0).finished()).norm() < 1e-12);

    // finite-difference check of the velocity at t = 0 (right-sided)
    const double h = 1e-7;
    Eigen::VectorXd fd = (path.value(h) - path.value(0.0)) / h;
    Eigen::VectorXd v = path.velocity(0.0);
    CHECK((v - (Eigen::VectorXd(2) << 0.0, two_pi).finished()).norm() < 1e-12);
    CHECK((fd - v).norm() < 1e-5);
}

TEST_CASE("smoothstep ramp symmetry and endpoint derivatives") {
    for (int order : {1, 2, 3}) {
        ParameterPath path({PathSegment::smoothstep_line(vec1(0.0), vec1(1.0), 1.0, order)});
        CHECK(path.value(0.5)[0] == doctest::Approx(0.5).epsilon(1e-13));
        CHECK(path.velocity(0.0)[0] == doctest::Approx(0.0));
        CHECK(path.velocity(1.0)[0] == doctest::Approx(0.0));
        CHECK(path.value(0.0)[0] == doctest::Approx(0.0));
        CHECK(path.value(1.0)[0] == doctest::Approx(1.0));
    }
}

TEST_CASE("path derivative is consistent with finite differences") {
    ParameterPath path({PathSegment::smoothstep_line(vec1(0.0), vec1(2.0), 1.5, 2),
                        PathSegment::line(vec1(2.0), vec1(3.0), 0.5)});
    const double h = 1e-7;
    for (double t : {0.2, 0.9, 1.4, 1.7}) {
        Eigen::VectorXd fd = (path.value(t + h) - path.value(t - h)) / (2.0 * h);
        CHECK((fd - path.velocity(t)).norm() < 1e-6);
    }
}

TEST_CASE("paths must be continuous across joints") {
    CHECK_NOTHROW(ParameterPath({PathSegment::line(vec1(0.0), vec1(1.0), 1.0),
                                 PathSegment::line(vec1(1.0), vec1(0.5), 1.0)}));
    CHECK_THROWS_AS(ParameterPath({PathSegment::line(vec1(0.0), vec1(1.0), 1.0),
                                   PathSegment::line(vec1(1.5), vec1(0.5), 1.0)}),
                    std::invalid_argument);
    // joint values agree exactly from both sides
    ParameterPath path({PathSegment::line(vec1(0.0), vec1(1.0), 1.0),
                        PathSegment::line(vec1(1.0), vec1(0.5), 1.0)});
    CHECK((path.value(1.0 - 1e-12) - path.value(1.0)).norm() < 1e-11);
}

TEST_CASE("breakpoint derivative uses the right-sided segment") {
    ParameterPath path({PathSegment::line(vec1(0.0), vec1(1.0), 1.0),
                        PathSegment::line(vec1(1.0), vec1(3.0), 1.0)});
    CHECK(path.velocity(1.0)[0] == doctest::Approx(2.0));
    CHECK(path.velocity(2.0)[0] == doctest::Approx(2.0));  // left-sided at T
}
