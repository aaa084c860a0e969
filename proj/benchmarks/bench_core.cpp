#include <benchmark/benchmark.h>

#include <cmath>

#include "raytrans/families.hpp"
#include "raytrans/inversion.hpp"
#include "raytrans/zeros.hpp"

using namespace raytrans;

namespace {

Phantom gauss() {
    return Phantom({{cplx(0.0, 0.0), 0.15, 1.0, Bump::Kind::gaussian}}, 0.86);
}

}  // namespace

static void BM_EvalCoeffsHyperbolic(benchmark::State& state) {
    auto fam = hyperbolic_family();
    const DiscPoint z(0.31, -0.22);
    const cplx lam(0.4, 0.55);
    for (auto _ : state) {
        auto c = eval_coeffs(*fam, z, lam);
        benchmark::DoNotOptimize(c);
    }
}
BENCHMARK(BM_EvalCoeffsHyperbolic);

static void BM_HilbertRow(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::vector<double> row(n);
    for (int i = 0; i < n; ++i) {
        const double s = -1.0 + 2.0 * i / (n - 1);
        row[i] = std::exp(-s * s / 0.0225);
    }
    const double h = 2.0 / (n - 1);
    for (auto _ : state) {
        auto out = hilbert_line(row, h);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_HilbertRow)->Arg(513)->Arg(1025);

static void BM_FindZerosHyperbolic(benchmark::State& state) {
    auto fam = hyperbolic_family();
    int k = 0;
    for (auto _ : state) {
        // vary the point so the cache cannot short-circuit the work
        const DiscPoint z(0.2 + 1e-7 * (k++ % 997), 0.1);
        auto zs = find_zeros(*fam, z);
        benchmark::DoNotOptimize(zs);
    }
}
BENCHMARK(BM_FindZerosHyperbolic);

static void BM_RayTransformLines(benchmark::State& state) {
    auto fam = lines_family();
    const Phantom f = gauss();
    const SGrid g = SGrid::for_family(*fam, 16, 65, 512);
    for (auto _ : state) {
        auto s = ray_transform(f, *fam, g, 1);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_RayTransformLines);

static void BM_ReconstructLines(benchmark::State& state) {
    auto fam = lines_family();
    const Phantom f = gauss();
    const SGrid g = SGrid::for_family(*fam, 60, 129, 512);
    const auto sino = ray_transform(f, *fam, g, 1);
    for (auto _ : state) {
        auto img = reconstruct(sino, *fam, {.n = 64, .threads = 1});
        benchmark::DoNotOptimize(img);
    }
}
BENCHMARK(BM_ReconstructLines);

BENCHMARK_MAIN();
