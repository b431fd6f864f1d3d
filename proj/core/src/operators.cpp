#include "holonomy/operators.hpp"

#include <stdexcept>

namespace holonomy {

SpectralState OperatorMatrix::apply(const SpectralState& x) const {
    if (!(x.lattice == lattice))
        throw std::invalid_argument("operator apply: lattice mismatch");
    return SpectralState(x.lattice, x.lambda, entries * x.coeffs);
}

OperatorMatrix action_operator(const ModeLattice& lattice, const Eigen::VectorXd& lambda,
                               int axis) {
    validate_lambda(lambda, lattice.m());
    if (axis < 0 || axis >= lattice.m())
        throw std::invalid_argument("action_operator: axis out of range");
    OperatorMatrix op{lattice, Eigen::MatrixXcd::Zero(lattice.dim(), lattice.dim()),
                      /*hermitian=*/true, /*skew_hermitian=*/false, /*diagonal=*/true};
    for (int i = 0; i < lattice.dim(); ++i)
        op.entries(i, i) = lattice.mode(i)[axis] - lambda[axis];
    return op;
}

OperatorMatrix shift_operator(const ModeLattice& lattice, const Eigen::VectorXi& shift) {
    if (shift.size() != lattice.m())
        throw std::invalid_argument("shift_operator: shift dimension mismatch");
    OperatorMatrix op{lattice, Eigen::MatrixXcd::Zero(lattice.dim(), lattice.dim()),
                      false, false, shift.isZero()};
    for (int col = 0; col < lattice.dim(); ++col) {
        Eigen::VectorXi target = lattice.mode(col) + shift;
        if (lattice.contains(target)) op.entries(lattice.index(target), col) = 1.0;
    }
    op.hermitian = shift.isZero();
    return op;
}

OperatorMatrix quantize_affine(const ModeLattice& lattice, const Eigen::VectorXd& lambda,
                               const std::vector<TrigPoly>& a, const TrigPoly& b) {
    const int m = lattice.m();
    validate_lambda(lambda, m);
    if (static_cast<int>(a.size()) != m)
        throw std::invalid_argument("quantize_affine: need one coefficient function per axis");

    OperatorMatrix op{lattice, Eigen::MatrixXcd::Zero(lattice.dim(), lattice.dim()),
                      false, false, false};
    Eigen::VectorXi p(m);

    for (int k = 0; k < m; ++k) {
        for (const auto& [key, c] : harmonics(a[k], m)) {
            for (int j = 0; j < m; ++j) p[j] = key[j];
            for (int col = 0; col < lattice.dim(); ++col) {
                Eigen::VectorXi n = lattice.mode(col);
                Eigen::VectorXi target = n + p;
                if (!lattice.contains(target)) continue;
                op.entries(lattice.index(target), col) +=
                    c * (n[k] + 0.5 * p[k] - lambda[k]);
            }
        }
    }
    for (const auto& [key, c] : harmonics(b, m)) {
        for (int j = 0; j < m; ++j) p[j] = key[j];
        for (int col = 0; col < lattice.dim(); ++col) {
            Eigen::VectorXi target = lattice.mode(col) + p;
            if (lattice.contains(target)) op.entries(lattice.index(target), col) += c;
        }
    }

    // Compression of a self-adjoint operator keeps it self-adjoint.
    op.hermitian = true;
    op.diagonal = op.entries.isDiagonal(0.0);
    return op;
}

OperatorMatrix hamiltonian_operator(const ModeLattice& lattice, const Eigen::VectorXd& lambda,
                                    const Polynomial& hamiltonian) {
    const int m = lattice.m();
    validate_lambda(lambda, m);
    if (hamiltonian.nvars() != m)
        throw std::invalid_argument("hamiltonian_operator: variable count mismatch");
    OperatorMatrix op{lattice, Eigen::MatrixXcd::Zero(lattice.dim(), lattice.dim()),
                      true, false, true};
    for (int i = 0; i < lattice.dim(); ++i) {
        Eigen::VectorXd shifted = lattice.mode(i).cast<double>() - lambda;
        op.entries(i, i) = hamiltonian(shifted);
    }
    return op;
}

}  // namespace holonomy
