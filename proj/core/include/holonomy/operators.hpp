#pragma once

#include <Eigen/Dense>

#include "holonomy/connection.hpp"
#include "holonomy/lattice.hpp"
#include "holonomy/polynomial.hpp"
#include "holonomy/spectral.hpp"

namespace holonomy {

/// Dense operator over a mode window, with structure flags. Flagged
/// properties hold to 1e-12 entrywise.
struct OperatorMatrix {
    ModeLattice lattice;
    Eigen::MatrixXcd entries;
    bool hermitian = false;
    bool skew_hermitian = false;
    bool diagonal = false;

    SpectralState apply(const SpectralState& x) const;
};

/// Diagonal action operator: entry (n_k - lambda_k) at mode n.
OperatorMatrix action_operator(const ModeLattice& lattice, const Eigen::VectorXd& lambda,
                               int axis);

/// Mode translation n -> n + shift; columns whose target leaves the window
/// are compressed to zero.
OperatorMatrix shift_operator(const ModeLattice& lattice, const Eigen::VectorXi& shift);

/// Quantization of the affine function a^k(phi) I_k + b(phi):
///   -i a^k d_k - (i/2) d_k a^k - a^k lambda_k + b.
/// Each harmonic c e^{i p.phi} of a^k contributes c (n'_k + p_k/2 - lambda_k)
/// at (row n'+p, column n'); b contributes pure shifts.
OperatorMatrix quantize_affine(const ModeLattice& lattice, const Eigen::VectorXd& lambda,
                               const std::vector<TrigPoly>& a, const TrigPoly& b);

/// Diagonal spectrum E_n = H(n_k - lambda_k).
OperatorMatrix hamiltonian_operator(const ModeLattice& lattice, const Eigen::VectorXd& lambda,
                                    const Polynomial& hamiltonian);

}  // namespace holonomy
