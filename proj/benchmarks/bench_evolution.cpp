#include <benchmark/benchmark.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "holonomy/classical.hpp"
#include "holonomy/evolution.hpp"

using namespace holonomy;

namespace {

ConnectionSpec cos_spec() {
    ConnectionSpec::Term t;
    t.target = 0;
    t.param = 0;
    t.amplitude = Polynomial::constant(1, 0.3);
    t.harmonic = Eigen::VectorXi::Constant(1, 1);
    t.kind = AngularKind::Cos;
    return ConnectionSpec(1, 1, {t});
}

ParameterPath ramp_path() {
    return ParameterPath({PathSegment::smoothstep_line(
        Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, 3.0), 1.0, 1)});
}

void bench_generator_assembly(benchmark::State& state) {
    ConnectionSpec spec = cos_spec();
    ParameterPath path = ramp_path();
    ModeLattice lattice(Eigen::VectorXi::Constant(1, static_cast<int>(state.range(0))));
    GeneratorAssembly assembly(spec, path, lattice, Eigen::VectorXd::Zero(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(assembly.generator(0.5));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(bench_generator_assembly)->Arg(8)->Arg(24)->Arg(64)->Complexity();

void bench_expmid_step(benchmark::State& state) {
    ConnectionSpec spec = cos_spec();
    ParameterPath path = ramp_path();
    ModeLattice lattice(Eigen::VectorXi::Constant(1, static_cast<int>(state.range(0))));
    GeneratorAssembly assembly(spec, path, lattice, Eigen::VectorXd::Zero(1));
    Eigen::MatrixXcd g = 1e-3 * assembly.generator(0.5);
    for (auto _ : state) {
        Eigen::MatrixXcd u = g.exp();
        benchmark::DoNotOptimize(u.data());
        benchmark::ClobberMemory();
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(bench_expmid_step)->Arg(8)->Arg(24)->Arg(64)->Complexity();

void bench_propagate(benchmark::State& state) {
    ConnectionSpec spec = cos_spec();
    ParameterPath path = ramp_path();
    ModeLattice lattice(Eigen::VectorXi::Constant(1, 24));
    GeneratorAssembly assembly(spec, path, lattice, Eigen::VectorXd::Zero(1));
    Eigen::VectorXcd c(lattice.dim());
    for (int i = 0; i < lattice.dim(); ++i)
        c[i] = std::exp(-0.5 * lattice.mode(i).cast<double>().squaredNorm());
    SpectralState x0(lattice, Eigen::VectorXd::Zero(1), c / c.norm());
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            propagate(assembly, x0, 1.0, 1e-2, PropagationMethod::ExpMidpoint));
    }
}
BENCHMARK(bench_propagate);

void bench_classical_flow(benchmark::State& state) {
    ConnectionSpec spec = cos_spec();
    ParameterPath path = ramp_path();
    ClassicalState x0{0.0, Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Zero(1)};
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate_flow(spec, path, x0, 1.0, 1e-4));
    }
}
BENCHMARK(bench_classical_flow);

}  // namespace

BENCHMARK_MAIN();
