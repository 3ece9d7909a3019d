#include <random>

#include <benchmark/benchmark.h>

#include "hgogp/parallel.hpp"

using namespace hgogp;

namespace {

Eigen::MatrixXd points(int dim, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    Eigen::MatrixXd m(dim, count);
    for (int j = 0; j < count; ++j) {
        for (int i = 0; i < dim; ++i) {
            m(i, j) = u(rng);
        }
    }
    return m;
}

GpPosterior window_gp(int n, std::uint64_t seed) {
    const Eigen::MatrixXd x = points(4, n, seed);
    const Eigen::VectorXd y = points(1, n, seed + 1).row(0).transpose();
    return fit(KernelParams::isotropic(4), Dataset(x, y, 1e-2));
}

template <Eigen::VectorXd (*Fn)(const GpPosterior&, const Eigen::MatrixXd&)>
void batch(benchmark::State& state) {
    const GpPosterior gp = window_gp(10, 1);
    const Eigen::MatrixXd q = points(4, static_cast<int>(state.range(0)), 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(Fn(gp, q));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <double (*Fn)(const GpPosterior&, const GpPosterior&, const Eigen::MatrixXd&)>
void sup_difference(benchmark::State& state) {
    const GpPosterior a = window_gp(8, 1);
    const GpPosterior b = window_gp(8, 5);
    const Eigen::MatrixXd q = points(4, static_cast<int>(state.range(0)), 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(Fn(a, b, q));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <Eigen::MatrixXd (*Fn)(const KernelParams&, const Eigen::MatrixXd&)>
void gram(benchmark::State& state) {
    const KernelParams k = KernelParams::isotropic(4);
    const Eigen::MatrixXd x = points(4, static_cast<int>(state.range(0)), 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(Fn(k, x));
    }
}

template <std::vector<SweepResult> (*Fn)(const ScenarioConfig&, std::span<const std::uint64_t>)>
void sweep(benchmark::State& state) {
    ScenarioConfig c = ScenarioConfig::defaults();
    c.duration = 2.0;
    c.transient = 1.0;
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(state.range(0)));
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        seeds[i] = i + 1;
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(Fn(c, seeds));
    }
}

}  // namespace

BENCHMARK(batch<predict_mean_batch_serial>)->Name("mean_batch/serial")->Arg(1000)->Arg(100000);
BENCHMARK(batch<predict_mean_batch>)->Name("mean_batch/parallel")->Arg(1000)->Arg(100000);
BENCHMARK(batch<predict_variance_batch_serial>)->Name("variance_batch/serial")->Arg(1000)->Arg(100000);
BENCHMARK(batch<predict_variance_batch>)->Name("variance_batch/parallel")->Arg(1000)->Arg(100000);
BENCHMARK(sup_difference<max_abs_mean_difference_serial>)->Name("sup_difference/serial")->Arg(1000)->Arg(100000);
BENCHMARK(sup_difference<max_abs_mean_difference>)->Name("sup_difference/parallel")->Arg(1000)->Arg(100000);
BENCHMARK(gram<gram_matrix_serial>)->Name("gram/serial")->Arg(64)->Arg(512);
BENCHMARK(gram<gram_matrix>)->Name("gram/parallel")->Arg(64)->Arg(512);
BENCHMARK(sweep<run_seed_sweep_serial>)->Name("seed_sweep/serial")->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(sweep<run_seed_sweep>)->Name("seed_sweep/parallel")->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
