// Serial reference vs OpenMP kernels: relation verification over input tuples and the
// seed sweep of the tree solver.

#include "ainfty/morse_trees.hpp"
#include "ainfty/novikov.hpp"
#include "synthetic.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace ainfty;

namespace {

const OperationTable& curved_torus()
{
    static const OperationTable table = [] {
        MorseTableOptions opt;
        opt.max_k = 2;
        return synth::solve_beta_g(build_morse_table(MorseModel::torus(), opt), 2, 3, 17).merged;
    }();
    return table;
}

void BM_VerifySerial(benchmark::State& state)
{
    const auto& t = curved_torus();
    for (auto _ : state)
        benchmark::DoNotOptimize(verify_serial(t, state.range(0)));
}

void BM_VerifyParallel(benchmark::State& state)
{
    const auto& t = curved_torus();
    for (auto _ : state)
        benchmark::DoNotOptimize(verify(t, state.range(0)));
}

void solve(benchmark::State& state, Execution exec)
{
    const auto m = MorseModel::torus();
    TreeProblem p{&m, RibbonTree::parse("((xx)x)"),
                  {m.critical("min"), m.critical("b"), m.critical("max"), m.critical("min")},
                  EdgePerturbation()};
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_all(p, {}, exec));
}

void BM_SolveAllSerial(benchmark::State& state) { solve(state, Execution::Serial); }
void BM_SolveAllParallel(benchmark::State& state) { solve(state, Execution::Parallel); }

void BM_NovikovProduct(benchmark::State& state)
{
    std::mt19937_64 rng(1);
    std::vector<NovikovTerm> a, b;
    for (int i = 0; i < state.range(0); ++i) {
        a.push_back({1 + static_cast<std::int64_t>(rng() % 7), Rational(static_cast<long>(rng() % 50), 3), 0});
        b.push_back({1 + static_cast<std::int64_t>(rng() % 7), Rational(static_cast<long>(rng() % 50), 4), 1});
    }
    const NovikovElement x(a, Rational(20)), y(b, Rational(20));
    for (auto _ : state)
        benchmark::DoNotOptimize(x * y);
}

}  // namespace

BENCHMARK(BM_VerifySerial)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerifyParallel)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveAllSerial)->Unit(benchmark::kMillisecond)->Iterations(2);
BENCHMARK(BM_SolveAllParallel)->Unit(benchmark::kMillisecond)->Iterations(2);
BENCHMARK(BM_NovikovProduct)->Arg(8)->Arg(32);
BENCHMARK_MAIN();
