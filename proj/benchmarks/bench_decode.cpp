// Hot-path microbenchmarks: syndrome extraction, matching, and the full
// decode pipeline at near-threshold noise, plus the pure-loss percolation
// check used by the lattice study.

#include <benchmark/benchmark.h>

#include <htqc/decoder.hpp>
#include <htqc/generation.hpp>
#include <htqc/rng.hpp>

using namespace htqc;

namespace {

ErrorInstance sample(const LatticeGraph& g, double p_z, double p_f,
                     std::uint64_t trial) {
    CounterRng rng(12345, 7, trial);
    return sample_instance_pz(g, p_z, p_f, ErrorLocationConfig(), rng);
}

void bm_extract_syndrome(benchmark::State& state) {
    LatticeGraph g(static_cast<int>(state.range(0)));
    std::uint64_t trial = 0;
    for (auto _ : state) {
        auto inst = sample(g, 6e-3, 0.0226, trial++);
        benchmark::DoNotOptimize(extract_syndrome(g, inst));
    }
}

void bm_decode(benchmark::State& state) {
    LatticeGraph g(static_cast<int>(state.range(0)));
    std::uint64_t trial = 0;
    for (auto _ : state) {
        auto inst = sample(g, 6e-3, 0.0226, trial++);
        benchmark::DoNotOptimize(decode(g, inst));
    }
    state.SetItemsProcessed(state.iterations());
}

void bm_percolation_check(benchmark::State& state) {
    LatticeGraph g(static_cast<int>(state.range(0)));
    std::uint64_t trial = 0;
    for (auto _ : state) {
        CounterRng rng(9, 1, trial++);
        std::vector<char> missing(g.n_qubits(), 0);
        for (auto& m : missing) m = rng.bernoulli(0.249) ? 1 : 0;
        SupercellPartition part(g, missing);
        benchmark::DoNotOptimize(part.percolated());
    }
}

}  // namespace

BENCHMARK(bm_extract_syndrome)->Arg(3)->Arg(5)->Arg(7);
BENCHMARK(bm_decode)->Arg(3)->Arg(5)->Arg(7)->Arg(9);
BENCHMARK(bm_percolation_check)->Arg(7)->Arg(9)->Arg(11);

BENCHMARK_MAIN();
