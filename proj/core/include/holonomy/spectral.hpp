#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "holonomy/lattice.hpp"

namespace holonomy {

using Complex = std::complex<double>;

/// Throws unless every entry is 0 or +-1/2.
void validate_lambda(const Eigen::VectorXd& lambda, int m);

/// Truncated Fourier representation of a state on T^m, tagged with the
/// representation offsets lambda (each 0 or +-1/2).
struct SpectralState {
    ModeLattice lattice;
    Eigen::VectorXd lambda;
    Eigen::VectorXcd coeffs;

    SpectralState(ModeLattice lattice, Eigen::VectorXd lambda, Eigen::VectorXcd coeffs);

    static SpectralState basis(const ModeLattice& lattice, const Eigen::VectorXd& lambda,
                               const Eigen::VectorXi& n);

    double norm() const { return coeffs.norm(); }
};

/// Parseval form of the normalized integral pairing: sum x_n conj(y_n).
Complex inner_product(const SpectralState& x, const SpectralState& y);

/// <I_k x | x> / <x | x> = sum (n_k - lambda_k) |x_n|^2 / sum |x_n|^2.
double mean_action(const SpectralState& x, int axis);

/// Fraction of squared norm on the outermost mode shell.
double edge_shell_fraction(const SpectralState& x);

/// Evaluate sum c_n e^{i n.phi} (no e^{i lambda.phi} twist).
Complex evaluate(const SpectralState& x, const Eigen::VectorXd& phi);

/// Values on the uniform grid phi_j = 2 pi j / P per axis, row-major with
/// axis 0 outermost. Requires P >= 2 max(N_k) + 1 for an exact round trip.
std::vector<Complex> to_grid(const SpectralState& x, int points_per_axis);

SpectralState from_grid(const std::vector<Complex>& values, const ModeLattice& lattice,
                        const Eigen::VectorXd& lambda, int points_per_axis);

/// JSON serialization: {"m", "N", "lambda", "coeffs": [[re, im], ...]}.
std::string to_json_string(const SpectralState& x);
SpectralState spectral_state_from_json(const std::string& text);

}  // namespace holonomy
