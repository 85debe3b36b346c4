// Serial vs OpenMP kernels on planted-fixture sized inputs.
#include <benchmark/benchmark.h>

#include <random>

#include "fairfix/kernels.hpp"
#include "fairfix/repair.hpp"
#include "fairfix/synthetic.hpp"

using namespace fairfix;

namespace {

Model wide_model(std::size_t in, std::size_t hidden) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0.0, 0.3);
    auto dense = [&](std::size_t i, std::size_t o, Activation a) {
        DenseLayer l{i, o, std::vector<double>(i * o), std::vector<double>(o), a};
        for (double& w : l.weights) w = n(rng);
        for (double& b : l.biases) b = n(rng);
        return l;
    };
    return Model(in, {dense(in, hidden, Activation::relu), dense(hidden, hidden, Activation::relu),
                      dense(hidden, 2, Activation::softmax)});
}

Matrix random_rows(std::size_t rows, std::size_t cols) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix m(rows, cols);
    for (double& v : m.data) v = n(rng);
    return m;
}

kernels::Execution exec_of(const benchmark::State& state) {
    return state.range(0) == 0 ? kernels::Execution::serial : kernels::Execution::parallel;
}

void BM_LayerInputs(benchmark::State& state) {
    const Model m = wide_model(16, 64);
    const Matrix x = random_rows(static_cast<std::size_t>(state.range(1)), 16);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::layer_inputs(m, x, 2, exec_of(state)));
    state.SetItemsProcessed(state.iterations() * state.range(1));
}

void BM_PredictRows(benchmark::State& state) {
    const Model m = wide_model(16, 64);
    const Matrix x = random_rows(static_cast<std::size_t>(state.range(1)), 16);
    std::vector<int> out(x.rows);
    for (auto _ : state) {
        kernels::predict_rows(m.layers(), 0, x, out, exec_of(state));
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * state.range(1));
}

void BM_SwarmFitness(benchmark::State& state) {
    const auto fx = planted_bias_fixture(0, 1000, 10);
    const std::vector<WeightCoord> coords{{1, 4, 0}, {1, 4, 1}};
    const FitnessEvaluator eval(fx.model, coords, fx.repair_set, Metric::spd, 1, exec_of(state));
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<std::vector<double>> positions(static_cast<std::size_t>(state.range(1)));
    for (auto& p : positions) p = {n(rng), n(rng)};
    std::vector<double> out(positions.size());
    const kernels::ScalarObjective f = [&](std::span<const double> p) { return eval(p); };
    for (auto _ : state) {
        kernels::evaluate_positions(f, positions, out, exec_of(state));
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * state.range(1));
}

}  // namespace

// first argument: 0 serial, 1 OpenMP
BENCHMARK(BM_LayerInputs)->ArgsProduct({{0, 1}, {1000, 10000}});
BENCHMARK(BM_PredictRows)->ArgsProduct({{0, 1}, {1000, 10000}});
BENCHMARK(BM_SwarmFitness)->ArgsProduct({{0, 1}, {100}});

BENCHMARK_MAIN();
