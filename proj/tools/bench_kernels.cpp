// Serial reference vs OpenMP kernels. Thread count follows OMP_NUM_THREADS.
#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

#include "lyapcert/explorer.hpp"
#include "lyapcert/matrix.hpp"

using namespace lyapcert;

namespace {

BallMatrix random_ball(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    BallMatrix B(n, n);
    for (std::size_t k = 0; k < B.re.size(); ++k) {
        B.re[k] = u(rng);
        B.im[k] = u(rng);
        B.rad[k] = 1e-14;
    }
    return B;
}

template <void (*Kernel)(const BallMatrix&, const BallMatrix&, BallMatrix&)>
void BM_matmul(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    BallMatrix A = random_ball(n, 1), B = random_ball(n, 2), C;
    for (auto _ : state) {
        Kernel(A, B, C);
        benchmark::DoNotOptimize(C.re.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n * n * n));
}

template <void (*Kernel)(const IntervalMatrix&, const std::vector<ComplexInterval>&, std::vector<ComplexInterval>&)>
void BM_matvec(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    BallMatrix B = random_ball(n, 3);
    IntervalMatrix M(n, n);
    std::vector<ComplexInterval> x(n), y;
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = ball_entry(B, i, 0);
        for (std::size_t j = 0; j < n; ++j) M(i, j) = ball_entry(B, i, j);
    }
    for (auto _ : state) {
        Kernel(M, x, y);
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n * n));
}

void BM_assembly(benchmark::State& state) {
    TolProfile tol;
    tol.sigma = 0.2;
    const TestMap map = TestMap::family(MapParams{3.25, 1.0});
    for (auto _ : state) {
        auto M = assemble_deterministic(map, static_cast<int>(state.range(0)), tol);
        benchmark::DoNotOptimize(M.M.data().data());
    }
}

void BM_point(benchmark::State& state) {
    for (auto _ : state) {
        SweepRow r = run_point(MapParams{3.25, 1.0}, NoiseParams{0.2}, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(r.lambda_lo);
    }
}

}  // namespace

BENCHMARK(BM_matmul<kernels::ball_matmul_serial>)->Name("ball_matmul/serial")->Arg(129)->Arg(257);
BENCHMARK(BM_matmul<kernels::ball_matmul_omp>)->Name("ball_matmul/omp")->Arg(129)->Arg(257)->UseRealTime();
BENCHMARK(BM_matmul<kernels::ball_matmul_dot2_serial>)->Name("ball_matmul_dot2/serial")->Arg(129)->Arg(257);
BENCHMARK(BM_matmul<kernels::ball_matmul_dot2_omp>)->Name("ball_matmul_dot2/omp")->Arg(129)->Arg(257)->UseRealTime();
BENCHMARK(BM_matvec<kernels::interval_matvec_serial>)->Name("interval_matvec/serial")->Arg(257);
BENCHMARK(BM_matvec<kernels::interval_matvec_omp>)->Name("interval_matvec/omp")->Arg(257)->UseRealTime();
BENCHMARK(BM_assembly)->Name("assembly")->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_point)->Name("certified_point")->Arg(128)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
