#include <benchmark/benchmark.h>

#include <sstream>

#include "goatforge/generate.hpp"

namespace {

using namespace goatforge;

void bm_make_record(benchmark::State& state) {
    Config config;
    config.total = 4096;
    const auto& templates = default_templates();
    CompositionPlan plan = plan_composition(config.total, weighted_keys(config.weights));
    auto assignment = plan_row_assignment(plan, config.master_seed);
    std::uint64_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            make_record(config, templates, plan, assignment, i++ % config.total));
    }
}
BENCHMARK(bm_make_record);

void bm_generate_dataset(benchmark::State& state) {
    Config config;
    config.total = 20000;
    config.threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        std::ostringstream out;
        benchmark::DoNotOptimize(generate_dataset(config, out));
        benchmark::DoNotOptimize(out.str().size());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(config.total));
}
BENCHMARK(bm_generate_dataset)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
