// Parallel kernels against the serial reference implementations.

#include <benchmark/benchmark.h>

#include "dyadic/form.hpp"
#include "dyadic/harness.hpp"
#include "dyadic/wolff.hpp"
#include "reference.hpp"

using namespace dyadic;

namespace {

Instance make(int depth, int n = 3)
{
    GeneratorSpec spec;
    spec.depth = depth;
    spec.n = n;
    spec.exponent_mode = ExponentMode::Wolff;
    spec.seed = 42;
    return generate(spec);
}

std::vector<LeafFunction> ones(const Instance& inst)
{
    return std::vector<LeafFunction>(inst.arity(), constant_function(inst.tree, 1.0));
}

void BM_form(benchmark::State& state)
{
    const auto inst = make(static_cast<int>(state.range(0)));
    const auto fs = ones(inst);
    for (auto _ : state)
        benchmark::DoNotOptimize(evaluate_form(inst, fs));
}

void BM_form_reference(benchmark::State& state)
{
    const auto inst = make(static_cast<int>(state.range(0)));
    const auto fs = ones(inst);
    for (auto _ : state)
        benchmark::DoNotOptimize(reference::evaluate_form(inst, fs));
}

void BM_dual(benchmark::State& state)
{
    const auto inst = make(static_cast<int>(state.range(0)));
    const auto fs = ones(inst);
    for (auto _ : state)
        benchmark::DoNotOptimize(dual_function(inst, 0, fs));
}

void BM_dual_reference(benchmark::State& state)
{
    const auto inst = make(static_cast<int>(state.range(0)));
    const auto fs = ones(inst);
    for (auto _ : state)
        benchmark::DoNotOptimize(reference::dual_function(inst, 0, fs));
}

void BM_maximal(benchmark::State& state)
{
    const auto inst = make(static_cast<int>(state.range(0)));
    const auto f = constant_function(inst.tree, 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(maximal_function(inst.tree, f, inst.measures[0]));
}

void BM_maximal_reference(benchmark::State& state)
{
    const auto inst = make(static_cast<int>(state.range(0)));
    const auto f = constant_function(inst.tree, 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(reference::maximal_function(inst.tree, f, inst.measures[0]));
}

void BM_wolff(benchmark::State& state)
{
    const auto inst = make(static_cast<int>(state.range(0)), 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(wolff_potential(inst.tree, inst.kernel, inst.measures[0], inst.measures[1], 2.5));
}

void BM_wolff_reference(benchmark::State& state)
{
    const auto inst = make(static_cast<int>(state.range(0)), 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            reference::wolff_potential(inst.tree, inst.kernel, inst.measures[0], inst.measures[1], 2.5));
}

void BM_iterated(benchmark::State& state)
{
    const auto inst = make(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(iterated_kernels(inst, {0, 1, 2}));
}

void BM_iterated_reference(benchmark::State& state)
{
    const auto inst = make(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(reference::iterated_kernels(inst, {0, 1, 2}));
}

} // namespace

BENCHMARK(BM_form)->DenseRange(6, 12, 3);
BENCHMARK(BM_form_reference)->DenseRange(6, 9, 3);
BENCHMARK(BM_dual)->DenseRange(6, 12, 3);
BENCHMARK(BM_dual_reference)->DenseRange(6, 9, 3);
BENCHMARK(BM_maximal)->DenseRange(6, 12, 3);
BENCHMARK(BM_maximal_reference)->DenseRange(6, 9, 3);
BENCHMARK(BM_wolff)->DenseRange(6, 12, 3);
BENCHMARK(BM_wolff_reference)->DenseRange(6, 9, 3);
BENCHMARK(BM_iterated)->DenseRange(6, 12, 3);
BENCHMARK(BM_iterated_reference)->DenseRange(6, 9, 3);

BENCHMARK_MAIN();
