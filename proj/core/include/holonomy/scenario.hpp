#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "holonomy/classical.hpp"
#include "holonomy/connection.hpp"
#include "holonomy/evolution.hpp"
#include "holonomy/path.hpp"
#include "holonomy/polynomial.hpp"
#include "holonomy/spectral.hpp"

namespace holonomy {

/// A fully specified numerical experiment, loaded from a single JSON file.
struct Scenario {
    int m = 1, d = 1;
    ConnectionSpec connection{1, 1, {}};
    ParameterPath path{{PathSegment::line(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1), 1.0)}};
    Eigen::VectorXd lambda;
    Polynomial hamiltonian;
    Eigen::VectorXi cutoff;
    double dt = 1e-3;
    PropagationMethod method = PropagationMethod::ExpMidpoint;
    int grid_points = 0;  // 0 = pick 2*max(N)+2 rounded up

    struct ClassicalInitial {
        Eigen::VectorXd action, angle;
    };
    std::optional<ClassicalInitial> classical_initial;
    std::optional<Eigen::VectorXcd> spectral_initial;
    struct GridInitial {
        int P = 0;
        std::vector<Complex> values;
    };
    std::optional<GridInitial> grid_initial;

    std::string outputs = "out";

    ModeLattice lattice() const { return ModeLattice(cutoff); }
    int effective_grid_points() const;
    SpectralState initial_spectral_state() const;  // from spectral or grid initial
};

Scenario scenario_from_json(const std::string& text);
Scenario load_scenario(const std::string& file_path);

struct CommandOverrides {
    std::optional<std::string> out_dir;
    std::optional<double> dt;
    std::optional<Eigen::VectorXi> cutoff;
    std::optional<PropagationMethod> method;
    std::optional<int> grid_points;
};

/// Executes one CLI command against a scenario. Writes the documented output
/// files into the output directory and returns a process exit status.
/// Commands: classical, quantum, closed-form, compare, berry, checks.
int run_command(const std::string& command, const Scenario& scenario,
                const CommandOverrides& overrides, std::ostream& out);

/// L2 grid distance between propagated and closed-form evolution over the
/// full path. Seam nodes are excluded when lambda carries a half-form twist.
double quantum_vs_closed_form_l2(const Scenario& scenario);

/// Reference scenarios used by the checks suite; mirrored in scenarios/*.json.
Scenario builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenario_names();

}  // namespace holonomy
