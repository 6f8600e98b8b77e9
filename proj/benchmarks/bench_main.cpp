#include <benchmark/benchmark.h>

#include <memory>

#include "calign/embed.hpp"
#include "calign/kernel.hpp"
#include "calign/laplacian.hpp"
#include "calign/sne.hpp"
#include "calign/verify.hpp"

using namespace calign;

namespace {

CMatrix random_hermitian(Rng& rng, std::size_t n) {
    CMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        h(i, i) = rng.normal();
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx v(rng.normal(), rng.normal());
            h(i, j) = v;
            h(j, i) = std::conj(v);
        }
    }
    return h;
}

Dataset random_points(Rng& rng, std::size_t n, std::size_t dim) {
    Dataset d;
    d.features = RealMatrix(n, dim);
    for (std::size_t i = 0; i < n; ++i) {
        d.ids.push_back(std::to_string(i));
        for (std::size_t c = 0; c < dim; ++c) d.features(i, c) = rng.normal();
    }
    return d;
}

void BM_hermitian_eig(benchmark::State& state) {
    Rng rng(1);
    const CMatrix h = random_hermitian(rng, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(hermitian_eig(h));
}
BENCHMARK(BM_hermitian_eig)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_generalized_spectrum(benchmark::State& state) {
    Rng rng(2);
    const CoupledGraph g = random_coupled_graph(rng, static_cast<std::size_t>(state.range(0)));
    const GenLaplacian gl = build_laplacian(g);
    for (auto _ : state) benchmark::DoNotOptimize(generalized_spectrum(gl));
}
BENCHMARK(BM_generalized_spectrum)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_knn_graph(benchmark::State& state) {
    Rng rng(3);
    const Dataset d = random_points(rng, static_cast<std::size_t>(state.range(0)), 5);
    for (auto _ : state) benchmark::DoNotOptimize(knn_graph(d, 10));
}
BENCHMARK(BM_knn_graph)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_conditional_probs(benchmark::State& state) {
    Rng rng(4);
    const Dataset d = random_points(rng, static_cast<std::size_t>(state.range(0)), 5);
    const auto sigmas = sigma_for_perplexity(d.features, 30.0);
    for (auto _ : state) benchmark::DoNotOptimize(conditional_probs(d.features, sigmas));
}
BENCHMARK(BM_conditional_probs)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_kernel_objective(benchmark::State& state) {
    Rng rng(5);
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const CMatrix b1 = random_gaussian(rng, n, n);
    const CMatrix k1 = b1 * b1.adjoint();
    const CMatrix b2 = random_gaussian(rng, n, n);
    const CMatrix k2 = b2 * b2.adjoint();
    const CMatrix a1 = random_gaussian(rng, 2, n) * cplx(0.05, 0);
    const CMatrix a2 = random_gaussian(rng, 2, n) * cplx(0.05, 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(kernel_objective(a1, a2, k1, k2, 2.0, 0.01, 0.1));
}
BENCHMARK(BM_kernel_objective)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_refine_step(benchmark::State& state) {
    Rng rng(6);
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const CoupledGraph g = random_coupled_graph(rng, n);
    auto spec = std::make_shared<Spectrum>(generalized_spectrum(build_laplacian(g)));
    const Embedding e = spectral_embed(spec, 2);
    const Dataset x1 = random_points(rng, n, 3);
    const Dataset x2 = random_points(rng, n, 5);
    RefineConfig cfg;
    cfg.perplexity = std::min(30.0, n / 3.0);
    cfg.max_iters = 1;
    for (auto _ : state) benchmark::DoNotOptimize(refine(e, x1, x2, cfg));
}
BENCHMARK(BM_refine_step)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
