#include <benchmark/benchmark.h>

#include "ns2d/commutator.hpp"
#include "ns2d/config.hpp"
#include "ns2d/fft.hpp"
#include "ns2d/mollifier.hpp"
#include "ns2d/solver.hpp"
#include "ns2d/spectral.hpp"

namespace {

struct Case {
    ns2d::GridSpec grid;
    ns2d::Forcing forcing;
    ns2d::SolverParams params;
    ns2d::SpectralField omega;

    explicit Case(int n) {
        grid.points_per_side = n;
        forcing = ns2d::build_forcing(ns2d::ForcingSpec::kolmogorov(4, 1.0), grid);
        params.nu = 1e-2;
        params.dt = 2e-3;
        ns2d::InitialCondition ic;
        ic.amplitude = 5.0;
        omega = ns2d::build_initial_condition(ic, grid, forcing, params, 3);
    }
};

void BM_ForwardTransform(benchmark::State& state) {
    Case c(static_cast<int>(state.range(0)));
    const auto fft = ns2d::FourierTransform::for_size(c.grid.n());
    const ns2d::PhysicalField f = ns2d::inverse_transform(c.omega);
    ns2d::ComplexBuffer out(c.grid.spectral_size());
    for (auto _ : state) {
        fft->forward(f.values(), out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_ForwardTransform)->Arg(64)->Arg(128)->Arg(256);

void BM_InverseTransform(benchmark::State& state) {
    Case c(static_cast<int>(state.range(0)));
    const auto fft = ns2d::FourierTransform::for_size(c.grid.n());
    ns2d::RealBuffer out(c.grid.physical_size());
    for (auto _ : state) {
        fft->inverse(c.omega.coeffs(), out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_InverseTransform)->Arg(64)->Arg(128)->Arg(256);

void BM_Advection(benchmark::State& state) {
    Case c(static_cast<int>(state.range(0)));
    ns2d::IntegratingFactorRK4 stepper(c.grid, c.params, c.forcing);
    ns2d::SpectralField out(c.grid);
    for (auto _ : state) {
        stepper.advection(c.omega, out);
        benchmark::DoNotOptimize(out.coeffs().data());
    }
}
BENCHMARK(BM_Advection)->Arg(64)->Arg(128)->Arg(256);

void BM_Step(benchmark::State& state) {
    Case c(static_cast<int>(state.range(0)));
    ns2d::IntegratingFactorRK4 stepper(c.grid, c.params, c.forcing);
    stepper.set_warning_sink([](const std::string&) {});
    ns2d::TrajectoryState s{0.0, c.omega, 0};
    for (auto _ : state) {
        stepper.advance(s);
        benchmark::DoNotOptimize(s.omega.coeffs().data());
    }
}
BENCHMARK(BM_Step)->Arg(64)->Arg(128)->Arg(256);

void BM_FluxIdentity(benchmark::State& state) {
    Case c(static_cast<int>(state.range(0)));
    const ns2d::MollifierKernel kernel(c.grid, ns2d::MollifierKernel::min_epsilon(c.grid) * 2.0);
    const ns2d::VectorField u = ns2d::biot_savart(c.omega);
    const ns2d::PhysicalField b = ns2d::inverse_transform(c.omega);
    for (auto _ : state) {
        auto id = ns2d::flux_identity(u, b, kernel);
        benchmark::DoNotOptimize(id.max_defect);
    }
}
BENCHMARK(BM_FluxIdentity)->Arg(64)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
