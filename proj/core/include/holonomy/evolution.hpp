#pragma once

#include <Eigen/Dense>
#include <vector>

#include "holonomy/classical.hpp"
#include "holonomy/connection.hpp"
#include "holonomy/operators.hpp"
#include "holonomy/path.hpp"
#include "holonomy/spectral.hpp"

namespace holonomy {

/// Generator G(sigma, v) with d/dt Psi = G Psi:
///   G = -i sum_a v^a [ -i Lambda^k_a d_k - (i/2) d_k Lambda^k_a - Lambda^k_a lambda_k ]
/// i.e. -i v^a times the affine quantization of Lambda_a. Skew-Hermitian.
OperatorMatrix holonomy_generator(const ConnectionSpec& spec, const ModeLattice& lattice,
                                  const Eigen::VectorXd& lambda, const Eigen::VectorXd& sigma,
                                  const Eigen::VectorXd& velocity);

/// Pre-assembled generator: per-term base matrices are built once, so the
/// time-dependent generator is a scalar recombination.
class GeneratorAssembly {
public:
    GeneratorAssembly(ConnectionSpec spec, Drive drive, ModeLattice lattice,
                      Eigen::VectorXd lambda);
    GeneratorAssembly(ConnectionSpec spec, const ParameterPath& path, ModeLattice lattice,
                      Eigen::VectorXd lambda);

    const ModeLattice& lattice() const { return lattice_; }
    const Eigen::VectorXd& lambda() const { return lambda_; }
    const Drive& drive() const { return drive_; }
    const ConnectionSpec& spec() const { return spec_; }

    Eigen::MatrixXcd generator(double t) const;
    Eigen::MatrixXcd generator_at(const Eigen::VectorXd& sigma,
                                  const Eigen::VectorXd& velocity) const;

private:
    ConnectionSpec spec_;
    Drive drive_;
    ModeLattice lattice_;
    Eigen::VectorXd lambda_;
    std::vector<Eigen::MatrixXcd> blocks_;  // -i * quantization of each unit term
};

enum class PropagationMethod { Rk4, ExpMidpoint };

struct PropagationSample {
    double t = 0.0;
    double norm = 0.0;
    double leakage = 0.0;
    Eigen::VectorXd mean_actions;
};

struct PropagationResult {
    SpectralState state;
    std::vector<PropagationSample> log;
    double max_leakage = 0.0;
    bool leakage_warning = false;  // outermost-shell fraction exceeded 1e-6
};

inline constexpr double leakage_warn_threshold = 1e-6;
inline constexpr double leakage_error_threshold = 1e-3;

/// Fixed-step propagation of dx/dt = G(t) x from t = 0 to t_end.
/// ExpMidpoint applies the exact exponential of the midpoint generator per
/// step and is unitary up to roundoff; Rk4 is an independent cross-check.
/// Throws when the outermost-shell norm fraction exceeds leakage_error;
/// cross-checks that deliberately saturate a tiny window may relax it.
PropagationResult propagate(const GeneratorAssembly& assembly, const SpectralState& x0,
                            double t_end, double dt, PropagationMethod method,
                            double leakage_error = leakage_error_threshold);

/// Diagonal phases exp[-i n_j dxi^a Lambda^j_a] for a constant connection.
OperatorMatrix berry_multiplier(const Eigen::MatrixXd& lambda_const,
                                const Eigen::VectorXd& delta_xi, const ModeLattice& lattice);

/// Closed-form transported state on the P-grid: at each node,
/// det(J)^{1/2} Psi0(Phi^{-1}(t, phi_j)) e^{i lambda.phi_j}, with Psi0
/// evaluated between nodes by band-limited interpolation.
std::vector<Complex> closed_form_evolve(const ConnectionSpec& spec, const Drive& drive,
                                        const Eigen::VectorXd& lambda,
                                        const std::vector<Complex>& psi0_grid, double t,
                                        double dt, int points_per_axis);
std::vector<Complex> closed_form_evolve(const ConnectionSpec& spec, const ParameterPath& path,
                                        const Eigen::VectorXd& lambda,
                                        const std::vector<Complex>& psi0_grid, double t,
                                        double dt, int points_per_axis);

enum class RDirection { Forward, Inverse };

/// Isometry between quantizations: forward multiplies mode n by
/// e^{+i t E_n}, E_n = H(n - lambda); inverse is the conjugate.
SpectralState r_map(const SpectralState& x, const Polynomial& hamiltonian, double t,
                    RDirection direction);

/// R^{-1} A R; diagonal operators are fixed points.
OperatorMatrix conjugate_by_r(const OperatorMatrix& op, const Polynomial& hamiltonian, double t,
                              const Eigen::VectorXd& lambda);

struct ProductEvolutionResult {
    SpectralState combined;  // one propagation under -i H + G_holonomy
    SpectralState factored;  // diagonal phase then Berry multiplier
};

/// Product decomposition for a constant connection, where the diagonal
/// Hamiltonian commutes with the holonomy generator.
ProductEvolutionResult product_evolution(const Polynomial& hamiltonian,
                                         const Eigen::MatrixXd& lambda_const, const Drive& drive,
                                         const SpectralState& x0, double t_end, double dt);
ProductEvolutionResult product_evolution(const Polynomial& hamiltonian,
                                         const Eigen::MatrixXd& lambda_const,
                                         const ParameterPath& path, const SpectralState& x0,
                                         double t_end, double dt);

/// CSV export of a propagation log: t,norm,leakage,mean_I_1..mean_I_m.
std::string propagation_csv(const std::vector<PropagationSample>& log);

}  // namespace holonomy
