#include "holonomy/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "holonomy/torus.hpp"
#include "json.hpp"

namespace holonomy {

void validate_lambda(const Eigen::VectorXd& lambda, int m) {
    if (lambda.size() != m) throw std::invalid_argument("lambda dimension mismatch");
    for (int k = 0; k < m; ++k)
        if (lambda[k] != 0.0 && lambda[k] != 0.5 && lambda[k] != -0.5)
            throw std::invalid_argument("lambda must be in {-1/2, 0, 1/2}");
}

SpectralState::SpectralState(ModeLattice lattice_, Eigen::VectorXd lambda_,
                             Eigen::VectorXcd coeffs_)
    : lattice(std::move(lattice_)), lambda(std::move(lambda_)), coeffs(std::move(coeffs_)) {
    validate_lambda(lambda, lattice.m());
    if (coeffs.size() != lattice.dim())
        throw std::invalid_argument("spectral state: coefficient count mismatch");
}

SpectralState SpectralState::basis(const ModeLattice& lattice, const Eigen::VectorXd& lambda,
                                   const Eigen::VectorXi& n) {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(lattice.dim());
    c[lattice.index(n)] = 1.0;
    return SpectralState(lattice, lambda, c);
}

Complex inner_product(const SpectralState& x, const SpectralState& y) {
    if (!(x.lattice == y.lattice) || x.lambda != y.lambda)
        throw std::invalid_argument("inner_product: lattice or lambda mismatch");
    // Pairing conjugates the second slot: sum x_n conj(y_n).
    return y.coeffs.dot(x.coeffs);
}

double mean_action(const SpectralState& x, int axis) {
    if (axis < 0 || axis >= x.lattice.m())
        throw std::invalid_argument("mean_action: axis out of range");
    double nrm2 = x.coeffs.squaredNorm();
    if (nrm2 == 0.0) throw std::invalid_argument("mean_action: zero state");
    double acc = 0.0;
    for (int i = 0; i < x.lattice.dim(); ++i) {
        double w = std::norm(x.coeffs[i]);
        if (w == 0.0) continue;
        acc += (x.lattice.mode(i)[axis] - x.lambda[axis]) * w;
    }
    return acc / nrm2;
}

double edge_shell_fraction(const SpectralState& x) {
    double nrm2 = x.coeffs.squaredNorm();
    if (nrm2 == 0.0) return 0.0;
    double edge = 0.0;
    for (int i = 0; i < x.lattice.dim(); ++i)
        if (x.lattice.on_edge(x.lattice.mode(i))) edge += std::norm(x.coeffs[i]);
    return edge / nrm2;
}

Complex evaluate(const SpectralState& x, const Eigen::VectorXd& phi) {
    if (phi.size() != x.lattice.m()) throw std::invalid_argument("evaluate: phi dimension mismatch");
    Complex acc = 0.0;
    for (int i = 0; i < x.lattice.dim(); ++i) {
        if (x.coeffs[i] == Complex(0.0)) continue;
        double arg = x.lattice.mode(i).cast<double>().dot(phi);
        acc += x.coeffs[i] * std::polar(1.0, arg);
    }
    return acc;
}

namespace {

int grid_size(int m, int P) {
    int total = 1;
    for (int k = 0; k < m; ++k) total *= P;
    return total;
}

Eigen::VectorXd grid_point(int m, int P, int flat) {
    Eigen::VectorXd phi(m);
    for (int k = m - 1; k >= 0; --k) {
        phi[k] = two_pi * (flat % P) / P;
        flat /= P;
    }
    return phi;
}

}  // namespace

std::vector<Complex> to_grid(const SpectralState& x, int P) {
    const int m = x.lattice.m();
    if (P < 1) throw std::invalid_argument("to_grid: points_per_axis must be >= 1");
    const int total = grid_size(m, P);
    std::vector<Complex> values(total);
    for (int j = 0; j < total; ++j) values[j] = evaluate(x, grid_point(m, P, j));
    return values;
}

SpectralState from_grid(const std::vector<Complex>& values, const ModeLattice& lattice,
                        const Eigen::VectorXd& lambda, int P) {
    const int m = lattice.m();
    if (P < 2 * lattice.cutoffs().maxCoeff() + 1)
        throw std::invalid_argument(
            "from_grid: grid too coarse for the mode window (aliasing); need P >= 2*max(N)+1");
    const int total = grid_size(m, P);
    if (static_cast<int>(values.size()) != total)
        throw std::invalid_argument("from_grid: value count does not match P^m");

    Eigen::VectorXcd coeffs = Eigen::VectorXcd::Zero(lattice.dim());
    for (int i = 0; i < lattice.dim(); ++i) {
        Eigen::VectorXd n = lattice.mode(i).cast<double>();
        Complex acc = 0.0;
        for (int j = 0; j < total; ++j)
            acc += values[j] * std::polar(1.0, -n.dot(grid_point(m, P, j)));
        coeffs[i] = acc / static_cast<double>(total);
    }
    return SpectralState(lattice, lambda, coeffs);
}

std::string to_json_string(const SpectralState& x) {
    nlohmann::json j;
    j["m"] = x.lattice.m();
    j["N"] = std::vector<int>(x.lattice.cutoffs().data(),
                              x.lattice.cutoffs().data() + x.lattice.m());
    j["lambda"] = std::vector<double>(x.lambda.data(), x.lambda.data() + x.lambda.size());
    auto coeffs = nlohmann::json::array();
    for (int i = 0; i < x.coeffs.size(); ++i)
        coeffs.push_back({x.coeffs[i].real(), x.coeffs[i].imag()});
    j["coeffs"] = std::move(coeffs);
    return j.dump(2);
}

SpectralState spectral_state_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    int m = j.at("m").get<int>();
    auto nvec = j.at("N").get<std::vector<int>>();
    if (static_cast<int>(nvec.size()) != m)
        throw std::invalid_argument("spectral state json: N length mismatch");
    ModeLattice lattice(Eigen::Map<const Eigen::VectorXi>(nvec.data(), m));
    auto lvec = j.at("lambda").get<std::vector<double>>();
    Eigen::VectorXd lambda = Eigen::Map<const Eigen::VectorXd>(lvec.data(), lvec.size());
    auto cj = j.at("coeffs");
    if (static_cast<int>(cj.size()) != lattice.dim())
        throw std::invalid_argument("spectral state json: coefficient count mismatch");
    Eigen::VectorXcd coeffs(lattice.dim());
    for (int i = 0; i < lattice.dim(); ++i)
        coeffs[i] = Complex(cj[i][0].get<double>(), cj[i][1].get<double>());
    return SpectralState(std::move(lattice), std::move(lambda), std::move(coeffs));
}

}  // namespace holonomy
