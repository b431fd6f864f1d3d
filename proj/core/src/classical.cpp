#include "holonomy/classical.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>

#include "holonomy/torus.hpp"

namespace holonomy {

namespace {

using Rhs = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

void check_finite(const Eigen::VectorXd& y, double t) {
    if (!y.allFinite())
        throw std::runtime_error("integration failure: non-finite state at t = " +
                                 std::to_string(t));
}

Eigen::VectorXd rk4_step(const Rhs& f, double t, const Eigen::VectorXd& y, double h) {
    Eigen::VectorXd k1 = f(t, y);
    Eigen::VectorXd k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
    Eigen::VectorXd k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
    Eigen::VectorXd k4 = f(t + h, y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Integrate from t0 to t1 (either direction) with fixed step of magnitude dt,
/// shortening the last step to land exactly on t1. Calls sink after each step.
void rk4_drive(const Rhs& f, double t0, double t1, double dt, Eigen::VectorXd& y,
               const std::function<void(double, const Eigen::VectorXd&)>& sink = {}) {
    if (dt <= 0.0) throw std::invalid_argument("integration: dt must be > 0");
    double dir = (t1 >= t0) ? 1.0 : -1.0;
    double t = t0;
    while (dir * (t1 - t) > 1e-15 * std::max(1.0, std::abs(t1))) {
        double h = dir * dt;
        if (dir * (t + h - t1) > 0.0) h = t1 - t;
        y = rk4_step(f, t, y, h);
        t += h;
        check_finite(y, t);
        if (sink) sink(t, y);
    }
}

void check_state(const ConnectionSpec& spec, const Drive& drive, const ClassicalState& s) {
    if (s.action.size() != spec.torus_dim() || s.angle.size() != spec.torus_dim())
        throw std::invalid_argument("classical state dimension mismatch");
    if (s.t < -1e-12 || s.t > drive.duration + 1e-12)
        throw std::invalid_argument("classical state time outside drive domain");
}

}  // namespace

std::pair<Eigen::VectorXd, Eigen::VectorXd> hamilton_rhs(const ConnectionSpec& spec,
                                                         const Drive& drive,
                                                         const ClassicalState& state) {
    check_state(spec, drive, state);
    Eigen::VectorXd sigma = drive.value(state.t);
    Eigen::VectorXd v = drive.velocity(state.t);
    Eigen::MatrixXd lam = spec.eval(sigma, state.angle);
    std::vector<Eigen::MatrixXd> dlam = spec.eval_dphi(sigma, state.angle);

    Eigen::VectorXd dphi = lam * v;
    int m = spec.torus_dim();
    Eigen::VectorXd dI = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < m; ++i) dI[i] = -state.action.dot(dlam[i] * v);
    return {dphi, dI};
}

Trajectory integrate_flow(const ConnectionSpec& spec, const Drive& drive,
                          const ClassicalState& state0, double t_end, double dt) {
    check_state(spec, drive, state0);
    if (t_end < state0.t || t_end > drive.duration + 1e-12)
        throw std::invalid_argument("integrate_flow: t_end outside drive domain");
    const int m = spec.torus_dim();

    Rhs rhs = [&](double t, const Eigen::VectorXd& y) {
        ClassicalState s{t, y.tail(m), y.head(m)};
        auto [dphi, dI] = hamilton_rhs(spec, drive, s);
        Eigen::VectorXd dy(2 * m);
        dy << dphi, dI;
        return dy;
    };

    Eigen::VectorXd y(2 * m);
    y << state0.angle, state0.action;
    Trajectory traj;
    traj.push_back({state0.t, state0.action, wrap_angles(state0.angle)});
    rk4_drive(rhs, state0.t, t_end, dt, y, [&](double t, const Eigen::VectorXd& yt) {
        traj.push_back({t, yt.tail(m), wrap_angles(yt.head(m))});
    });
    return traj;
}

ClassicalState integrate_flow_endpoint(const ConnectionSpec& spec, const Drive& drive,
                                       const ClassicalState& state0, double t_end, double dt) {
    check_state(spec, drive, state0);
    const int m = spec.torus_dim();
    Rhs rhs = [&](double t, const Eigen::VectorXd& y) {
        ClassicalState s{t, y.tail(m), y.head(m)};
        auto [dphi, dI] = hamilton_rhs(spec, drive, s);
        Eigen::VectorXd dy(2 * m);
        dy << dphi, dI;
        return dy;
    };
    Eigen::VectorXd y(2 * m);
    y << state0.angle, state0.action;
    rk4_drive(rhs, state0.t, t_end, dt, y);
    return {t_end, y.tail(m), y.head(m)};
}

VariationalResult variational_flow(const ConnectionSpec& spec, const Drive& drive,
                                   const ClassicalState& state0, double t_end, double dt) {
    check_state(spec, drive, state0);
    const int m = spec.torus_dim();

    Rhs rhs = [&](double t, const Eigen::VectorXd& y) {
        Eigen::VectorXd phi = y.head(m);
        Eigen::VectorXd act = y.segment(m, m);
        Eigen::VectorXd sigma = drive.value(t);
        Eigen::VectorXd v = drive.velocity(t);
        Eigen::MatrixXd lam = spec.eval(sigma, phi);
        std::vector<Eigen::MatrixXd> dlam = spec.eval_dphi(sigma, phi);
        // A^i_k = d_k Lambda^i_a v^a
        Eigen::MatrixXd A(m, m);
        for (int k = 0; k < m; ++k) A.col(k) = dlam[k] * v;
        Eigen::Map<const Eigen::MatrixXd> J(y.data() + 2 * m, m, m);

        Eigen::VectorXd dy(2 * m + m * m);
        dy.head(m) = lam * v;
        for (int i = 0; i < m; ++i) dy[m + i] = -act.dot(dlam[i] * v);
        Eigen::Map<Eigen::MatrixXd>(dy.data() + 2 * m, m, m) = A * J;
        return dy;
    };

    Eigen::VectorXd y(2 * m + m * m);
    y.head(m) = state0.angle;
    y.segment(m, m) = state0.action;
    Eigen::Map<Eigen::MatrixXd>(y.data() + 2 * m, m, m) = Eigen::MatrixXd::Identity(m, m);
    rk4_drive(rhs, state0.t, t_end, dt, y);

    VariationalResult out;
    out.state = {t_end, y.segment(m, m), wrap_angles(y.head(m))};
    out.jacobian = Eigen::Map<const Eigen::MatrixXd>(y.data() + 2 * m, m, m);
    return out;
}

InverseFlowResult inverse_flow(const ConnectionSpec& spec, const Drive& drive, double t,
                               const Eigen::VectorXd& phi, double dt) {
    if (t < 0.0 || t > drive.duration + 1e-12)
        throw std::invalid_argument("inverse_flow: time outside drive domain");
    const int m = spec.torus_dim();

    Rhs rhs = [&](double s, const Eigen::VectorXd& y) {
        Eigen::VectorXd psi = y.head(m);
        Eigen::VectorXd sigma = drive.value(s);
        Eigen::VectorXd v = drive.velocity(s);
        Eigen::MatrixXd lam = spec.eval(sigma, psi);
        std::vector<Eigen::MatrixXd> dlam = spec.eval_dphi(sigma, psi);
        Eigen::MatrixXd A(m, m);
        for (int k = 0; k < m; ++k) A.col(k) = dlam[k] * v;
        Eigen::Map<const Eigen::MatrixXd> J(y.data() + m, m, m);

        Eigen::VectorXd dy(m + m * m);
        dy.head(m) = lam * v;
        Eigen::Map<Eigen::MatrixXd>(dy.data() + m, m, m) = A * J;
        return dy;
    };

    Eigen::VectorXd y(m + m * m);
    y.head(m) = phi;
    Eigen::Map<Eigen::MatrixXd>(y.data() + m, m, m) = Eigen::MatrixXd::Identity(m, m);
    rk4_drive(rhs, t, 0.0, dt, y);

    InverseFlowResult out;
    out.angle = wrap_angles(y.head(m));
    out.jacobian = Eigen::Map<const Eigen::MatrixXd>(y.data() + m, m, m);
    return out;
}

ClassicalState canonical_to_original(const Polynomial& hamiltonian, const ClassicalState& state) {
    Eigen::VectorXd shift = state.t * hamiltonian.gradient(state.action);
    return {state.t, state.action, wrap_angles(state.angle + shift)};
}

ClassicalState original_to_canonical(const Polynomial& hamiltonian, const ClassicalState& state) {
    Eigen::VectorXd shift = state.t * hamiltonian.gradient(state.action);
    return {state.t, state.action, wrap_angles(state.angle - shift)};
}

Trajectory original_frame_flow(const ConnectionSpec& spec, const Drive& drive,
                               const Polynomial& hamiltonian, const ClassicalState& state0,
                               double t_end, double dt) {
    check_state(spec, drive, state0);
    const int m = spec.torus_dim();
    if (hamiltonian.nvars() != m)
        throw std::invalid_argument("original_frame_flow: Hamiltonian variable count mismatch");

    Rhs rhs = [&](double t, const Eigen::VectorXd& y) {
        Eigen::VectorXd varphi = y.head(m);
        Eigen::VectorXd act = y.tail(m);
        Eigen::VectorXd sigma = drive.value(t);
        Eigen::VectorXd v = drive.velocity(t);
        Eigen::VectorXd gradH = hamiltonian.gradient(act);
        Eigen::MatrixXd hessH = hamiltonian.hessian(act);
        Eigen::VectorXd shifted = varphi - t * gradH;
        Eigen::MatrixXd lam = spec.eval(sigma, shifted);
        std::vector<Eigen::MatrixXd> dlam = spec.eval_dphi(sigma, shifted);

        // w_s = I_k d_s Lambda^k_a v^a  (also the negative action rate)
        Eigen::VectorXd w(m);
        for (int s = 0; s < m; ++s) w[s] = act.dot(dlam[s] * v);

        Eigen::VectorXd dy(2 * m);
        dy.head(m) = gradH + lam * v - t * (hessH * w);
        dy.tail(m) = -w;
        return dy;
    };

    Eigen::VectorXd y(2 * m);
    y << state0.angle, state0.action;
    Trajectory traj;
    traj.push_back({state0.t, state0.action, wrap_angles(state0.angle)});
    rk4_drive(rhs, state0.t, t_end, dt, y, [&](double t, const Eigen::VectorXd& yt) {
        traj.push_back({t, yt.tail(m), wrap_angles(yt.head(m))});
    });
    return traj;
}

std::string trajectory_csv(const Trajectory& traj) {
    if (traj.empty()) return "";
    const int m = static_cast<int>(traj.front().action.size());
    std::string out = "t";
    for (int i = 1; i <= m; ++i) out += ",I_" + std::to_string(i);
    for (int i = 1; i <= m; ++i) out += ",phi_" + std::to_string(i);
    out += "\n";
    char buf[64];
    for (const auto& s : traj) {
        std::snprintf(buf, sizeof buf, "%.17g", s.t);
        out += buf;
        for (int i = 0; i < m; ++i) {
            std::snprintf(buf, sizeof buf, ",%.17g", s.action[i]);
            out += buf;
        }
        for (int i = 0; i < m; ++i) {
            std::snprintf(buf, sizeof buf, ",%.17g", s.angle[i]);
            out += buf;
        }
        out += "\n";
    }
    return out;
}

// ParameterPath conveniences

std::pair<Eigen::VectorXd, Eigen::VectorXd> hamilton_rhs(const ConnectionSpec& spec,
                                                         const ParameterPath& path,
                                                         const ClassicalState& state) {
    return hamilton_rhs(spec, make_drive(path), state);
}

Trajectory integrate_flow(const ConnectionSpec& spec, const ParameterPath& path,
                          const ClassicalState& state0, double t_end, double dt) {
    return integrate_flow(spec, make_drive(path), state0, t_end, dt);
}

VariationalResult variational_flow(const ConnectionSpec& spec, const ParameterPath& path,
                                   const ClassicalState& state0, double t_end, double dt) {
    return variational_flow(spec, make_drive(path), state0, t_end, dt);
}

InverseFlowResult inverse_flow(const ConnectionSpec& spec, const ParameterPath& path, double t,
                               const Eigen::VectorXd& phi, double dt) {
    return inverse_flow(spec, make_drive(path), t, phi, dt);
}

Trajectory original_frame_flow(const ConnectionSpec& spec, const ParameterPath& path,
                               const Polynomial& hamiltonian, const ClassicalState& state0,
                               double t_end, double dt) {
    return original_frame_flow(spec, make_drive(path), hamiltonian, state0, t_end, dt);
}

}  // namespace holonomy
