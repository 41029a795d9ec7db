#include <benchmark/benchmark.h>

#include "oqrw/discrete.hpp"
#include "oqrw/fokker_planck.hpp"
#include "oqrw/rng.hpp"
#include "oqrw/sde.hpp"

namespace {

void BM_PhiloxU64(benchmark::State& state) {
    oqrw::RngStream rng(123, 0);
    for (auto _ : state) benchmark::DoNotOptimize(rng.u64());
}
BENCHMARK(BM_PhiloxU64);

void BM_PhiloxNormal(benchmark::State& state) {
    oqrw::RngStream rng(123, 0);
    for (auto _ : state) benchmark::DoNotOptimize(rng.normal());
}
BENCHMARK(BM_PhiloxNormal);

void BM_DiscreteStep(benchmark::State& state) {
    oqrw::KrausPair k = oqrw::kraus_from_uvrs({1.1, 1.0, 0.00015, -0.00015});
    oqrw::RngStream rng(7, 0);
    oqrw::DiscreteWalkerState st{oqrw::BlochState::pure_up(), 0, 0};
    for (auto _ : state) {
        st = oqrw::step(st, k, rng);
        benchmark::DoNotOptimize(st.x);
    }
}
BENCHMARK(BM_DiscreteStep);

void BM_BlochSdeStep(benchmark::State& state) {
    oqrw::RngStream rng(7, 0);
    oqrw::ContinuousWalkerState st{oqrw::BlochState::pure_up(), 0.0, 0.0};
    const double dt = 1e-3, sdt = std::sqrt(dt);
    for (auto _ : state) {
        st = oqrw::bloch_sde_step(st, 2.0, 1.0, dt, rng.normal() * sdt);
        benchmark::DoNotOptimize(st.x);
    }
}
BENCHMARK(BM_BlochSdeStep);

void BM_PdeStep(benchmark::State& state) {
    oqrw::Grid1D g;
    g.x_min = -20.0;
    g.x_max = 20.0;
    g.n_cells = static_cast<std::size_t>(state.range(0));
    double h = g.dx();
    g.dt_pde = std::min(0.45 * h * h, h / 8.0);
    oqrw::MatrixDensityField f = oqrw::gaussian_packet(g, 0.0, 0.5, oqrw::BlochState::pure_up());
    // reset before the ballistic front reaches the wall
    const long reset_every = std::lround(2.0 / g.dt_pde);
    long k = 0;
    for (auto _ : state) {
        if (++k % reset_every == 0)
            f = oqrw::gaussian_packet(g, 0.0, 0.5, oqrw::BlochState::pure_up());
        oqrw::pde_step(f, 2.0, 1.0);
        benchmark::DoNotOptimize(f.p[0]);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PdeStep)->Arg(512)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
