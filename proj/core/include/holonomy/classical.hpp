#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "holonomy/connection.hpp"
#include "holonomy/path.hpp"
#include "holonomy/polynomial.hpp"

namespace holonomy {

/// Point of the classical flow in initial-data action-angle coordinates.
struct ClassicalState {
    double t = 0.0;
    Eigen::VectorXd action;  // I
    Eigen::VectorXd angle;   // phi, wrapped to [0, 2pi) at API boundaries
};

using Trajectory = std::vector<ClassicalState>;

/// Right-hand side of the holonomy Hamilton equations:
///   dphi^i/dt = Lambda^i_a(xi(t), phi) dxi^a/dt
///   dI_i/dt   = -I_k d_i Lambda^k_a(xi(t), phi) dxi^a/dt
std::pair<Eigen::VectorXd, Eigen::VectorXd> hamilton_rhs(const ConnectionSpec& spec,
                                                         const Drive& drive,
                                                         const ClassicalState& state);
std::pair<Eigen::VectorXd, Eigen::VectorXd> hamilton_rhs(const ConnectionSpec& spec,
                                                         const ParameterPath& path,
                                                         const ClassicalState& state);

/// Fixed-step RK4 flow of the holonomy equations. The trajectory is sampled at
/// every accepted step; the final step is shortened to land exactly on t_end.
/// Angles are integrated unwrapped and wrapped on output.
Trajectory integrate_flow(const ConnectionSpec& spec, const Drive& drive,
                          const ClassicalState& state0, double t_end, double dt);
Trajectory integrate_flow(const ConnectionSpec& spec, const ParameterPath& path,
                          const ClassicalState& state0, double t_end, double dt);

/// Endpoint of the flow with unwrapped angles, for finite-difference
/// Jacobians and composition checks where wrapping would inject jumps.
ClassicalState integrate_flow_endpoint(const ConnectionSpec& spec, const Drive& drive,
                                       const ClassicalState& state0, double t_end, double dt);

struct VariationalResult {
    ClassicalState state;
    Eigen::MatrixXd jacobian;  // d phi(t) / d phi(0), m x m
};

/// Joint integration of the angle flow with its linearization
/// d(delta phi)^i/dt = d_k Lambda^i_a v^a delta phi^k, J(0) = identity.
VariationalResult variational_flow(const ConnectionSpec& spec, const Drive& drive,
                                   const ClassicalState& state0, double t_end, double dt);
VariationalResult variational_flow(const ConnectionSpec& spec, const ParameterPath& path,
                                   const ClassicalState& state0, double t_end, double dt);

struct InverseFlowResult {
    Eigen::VectorXd angle;     // Phi^{-1}(t, phi), wrapped
    Eigen::MatrixXd jacobian;  // d (Phi^{-1})^i / d phi^k
};

/// Inverse angle flow by backward integration from time t (condition phi)
/// down to time 0, with the variational system alongside.
InverseFlowResult inverse_flow(const ConnectionSpec& spec, const Drive& drive, double t,
                               const Eigen::VectorXd& phi, double dt);
InverseFlowResult inverse_flow(const ConnectionSpec& spec, const ParameterPath& path, double t,
                               const Eigen::VectorXd& phi, double dt);

/// Canonical transformation between initial-data and original action-angle
/// coordinates: I' = I, phi'^i = phi^i + t d^i H(I) (mod 2pi), and its inverse.
ClassicalState canonical_to_original(const Polynomial& hamiltonian, const ClassicalState& state);
ClassicalState original_to_canonical(const Polynomial& hamiltonian, const ClassicalState& state);

/// Direct integration of the perturbed equations in original coordinates,
/// with the time-dependent Hessian coupling and shifted angles.
Trajectory original_frame_flow(const ConnectionSpec& spec, const Drive& drive,
                               const Polynomial& hamiltonian, const ClassicalState& state0,
                               double t_end, double dt);
Trajectory original_frame_flow(const ConnectionSpec& spec, const ParameterPath& path,
                               const Polynomial& hamiltonian, const ClassicalState& state0,
                               double t_end, double dt);

/// CSV export: t,I_1..I_m,phi_1..phi_m at 17 significant digits.
std::string trajectory_csv(const Trajectory& traj);

}  // namespace holonomy
