#include <benchmark/benchmark.h>

#include "bhca/branch_bound.hpp"
#include "bhca/link_budget.hpp"
#include "bhca/model.hpp"
#include "bhca/scenario.hpp"

namespace {

bhca::Scenario paper_scenario() { return bhca::generate_scenario(bhca::reference_config()); }

void BM_RateTableSerial(benchmark::State& state) {
    const auto s = paper_scenario();
    for (auto _ : state) benchmark::DoNotOptimize(bhca::compute_rate_table_serial(s, bhca::default_modcod_table()));
}
BENCHMARK(BM_RateTableSerial)->Unit(benchmark::kMicrosecond);

void BM_RateTableParallel(benchmark::State& state) {
    const auto s = paper_scenario();
    for (auto _ : state) benchmark::DoNotOptimize(bhca::compute_rate_table(s, bhca::default_modcod_table()));
}
BENCHMARK(BM_RateTableParallel)->Unit(benchmark::kMicrosecond);

void BM_DeskBranchAndBound(benchmark::State& state) {
    auto config = bhca::desk_config();
    config.rng_seed = 3;
    const auto s = bhca::generate_scenario(config);
    const auto rates = bhca::compute_rate_table(s, bhca::default_modcod_table());
    const auto model = bhca::build_model(s, rates, bhca::adjacency_pairs(s));
    bhca::SolverOptions opts;
    opts.worker_count = static_cast<int>(state.range(0));
    opts.node_limit = 400;
    for (auto _ : state) benchmark::DoNotOptimize(bhca::solve_milp(model, opts));
}
BENCHMARK(BM_DeskBranchAndBound)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
