#include <benchmark/benchmark.h>

#include "sl2lab/markov.hpp"
#include "sl2lab/walk.hpp"

namespace {

using namespace sl2lab;

ModelMeasure reference_measure() {
    const GroupElement d = GroupElement::diagonal(2.0);
    const GroupElement r = GroupElement::rotation(1.0);
    return ModelMeasure::uniform({d, r * d});
}

void BM_WalkStep(benchmark::State& state) {
    const ModelMeasure mu = reference_measure();
    Rng rng(42, 0);
    cplx v0 = 1.0, v1 = 0.0;
    double sigma = 0.0;
    for (auto _ : state) {
        const Mat2& m = mu.sample(rng).mat();
        const cplx u0 = m.a * v0 + m.b * v1;
        const cplx u1 = m.c * v0 + m.d * v1;
        const double n2 = std::norm(u0) + std::norm(u1);
        sigma += 0.5 * std::log(n2);
        const double inv = 1.0 / std::sqrt(n2);
        v0 = u0 * inv;
        v1 = u1 * inv;
    }
    benchmark::DoNotOptimize(sigma);
}
BENCHMARK(BM_WalkStep);

void BM_Cartan(benchmark::State& state) {
    const Mat2 m{cplx(1.3, 0.2), cplx(0.4, -0.1), cplx(0.2, 0.05),
                 (cplx(1.0) + cplx(0.4, -0.1) * cplx(0.2, 0.05)) / cplx(1.3, 0.2)};
    for (auto _ : state) {
        GroupElement g(m);
        benchmark::DoNotOptimize(g.cartan().lambda);
    }
}
BENCHMARK(BM_Cartan);

void BM_ApplyMarkov(benchmark::State& state) {
    const auto grid = ProjGrid::make(static_cast<int>(state.range(0)));
    const MarkovOperator op(grid, reference_measure());
    GridFunction u = GridFunction::sample(grid, [](const ProjPoint& p) {
        const double d = dist(p, ProjPoint::of(1.0, 0.0));
        return cplx(d * d);
    });
    for (auto _ : state) {
        u = op.apply(u, 0.3, 0);
        benchmark::DoNotOptimize(u.values()[0]);
    }
}
BENCHMARK(BM_ApplyMarkov)->Arg(64)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
