#include <benchmark/benchmark.h>

#include "rotkp/boussinesq.hpp"
#include "rotkp/correctors.hpp"
#include "rotkp/experiments.hpp"
#include "rotkp/scalar_models.hpp"

using namespace rotkp;

namespace {

Grid grid_for(int n) { return Grid::make(n, n, 32.0 * kPi, 32.0 * kPi); }

void BM_Fft2dRoundTrip(benchmark::State& state) {
    Grid g = grid_for(static_cast<int>(state.range(0)));
    ScalarField f = make_profile("gaussian_dx2", g, 1.0, 2.0, 6.0);
    for (auto _ : state) {
        Spectrum s = to_spectrum(f);
        ScalarField back = to_field(s);
        benchmark::DoNotOptimize(back.v.data());
    }
    state.SetItemsProcessed(state.iterations() * g.size());
}
BENCHMARK(BM_Fft2dRoundTrip)->Arg(64)->Arg(128)->Arg(256);

void BM_ScalarStep(benchmark::State& state) {
    Grid g = grid_for(static_cast<int>(state.range(0)));
    ScalarField k0 = make_profile("gaussian_dx2", g, 0.75, 2.0, 6.0);
    ScalarStepper stepper(g, ScalarModelKind::Rkp, 1e-2);
    Spectrum k = to_spectrum(k0);
    project_zero_x_mean(k);
    long n = 0;
    for (auto _ : state) stepper.step_inplace(k, ++n);
    state.SetItemsProcessed(state.iterations() * g.size());
}
BENCHMARK(BM_ScalarStep)->Arg(128)->Arg(256);

void BM_BoussinesqStep(benchmark::State& state) {
    Grid g = grid_for(static_cast<int>(state.range(0)));
    const ModelParams p = params_for(RegimeKind::Rkp, 0.04);
    ScalarField z0 = make_profile("gaussian_dx2", g, 0.75, 2.0, 6.0);
    BoussinesqState st(z0, VectorField2(z0, ScalarField(g)), 0.0);
    BoussinesqStepper stepper(g, p, boussinesq_stable_dt(g, p, 0.5));
    auto s = stepper.lift(st);
    long n = 0;
    for (auto _ : state) stepper.step_inplace(s, ++n);
    state.SetItemsProcessed(state.iterations() * g.size());
}
BENCHMARK(BM_BoussinesqStep)->Arg(128)->Arg(256);

void BM_ResidualFrame(benchmark::State& state) {
    Grid g = grid_for(static_cast<int>(state.range(0)));
    ScalarField k0 = make_profile("gaussian_dx2", g, 0.75, 2.0, 6.0);
    const double dt = std::min(scalar_stable_dt(k0, 0.5), 0.5 / 64.0);
    const long n = std::lround(std::ceil(0.5 / dt));
    auto traj = std::make_shared<ScalarTrajectory>(
        solve(k0, ScalarModelKind::Rkp, 0.5, 0.5 / n, std::max<long>(1, n / 64)));
    CorrectorSet set(RegimeKind::Rkp, traj, ScalarField(g), ScalarField(g));
    double t = 1.0;
    for (auto _ : state) {
        auto frame = set.frame(t, 0.04 * t);
        benchmark::DoNotOptimize(frame.w_plus.c.data());
        t += 0.25;
        if (t > 12.0) t = 1.0;
    }
}
BENCHMARK(BM_ResidualFrame)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
