#include <benchmark/benchmark.h>

#include "goatforge/cot.hpp"
#include "goatforge/numeral.hpp"
#include "goatforge/rng.hpp"
#include "goatforge/sampler.hpp"

namespace {

using namespace goatforge;

std::vector<std::pair<Numeral, Numeral>> operand_pairs(std::size_t count, std::size_t digits) {
    Rng rng(42);
    std::vector<std::pair<Numeral, Numeral>> pairs;
    pairs.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        pairs.emplace_back(sample_numeral(rng, 1, digits), sample_numeral(rng, 1, digits));
    return pairs;
}

void bm_add(benchmark::State& state) {
    auto pairs = operand_pairs(1024, static_cast<std::size_t>(state.range(0)));
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& [a, b] = pairs[i++ & 1023];
        benchmark::DoNotOptimize(add(a, b));
    }
}
BENCHMARK(bm_add)->Arg(8)->Arg(16);

void bm_mul(benchmark::State& state) {
    auto pairs = operand_pairs(1024, static_cast<std::size_t>(state.range(0)));
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& [a, b] = pairs[i++ & 1023];
        benchmark::DoNotOptimize(mul(a, b));
    }
}
BENCHMARK(bm_mul)->Arg(6)->Arg(16);

void bm_divmod(benchmark::State& state) {
    auto pairs = operand_pairs(1024, static_cast<std::size_t>(state.range(0)));
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& [a, b] = pairs[i++ & 1023];
        benchmark::DoNotOptimize(divmod(a, b));
    }
}
BENCHMARK(bm_divmod)->Arg(6)->Arg(12);

void bm_mult_trace(benchmark::State& state) {
    Rng rng(7);
    Settings settings;
    std::vector<ProblemInstance> instances;
    while (instances.size() < 256) {
        ProblemInstance inst = sample_instance(rng, TaskKind::MulNM, settings);
        if (!detect_special_case(TaskKind::MulNM, inst.operands[0], inst.operands[1]))
            instances.push_back(std::move(inst));
    }
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& inst = instances[i++ & 255];
        MultTrace trace = gen_mult_trace(inst.operands[0], inst.operands[1]);
        benchmark::DoNotOptimize(
            render_mult_trace(trace, {}, RenderStyle::Ascii, FormatMode::Natural));
    }
}
BENCHMARK(bm_mult_trace);

void bm_div_trace(benchmark::State& state) {
    Rng rng(7);
    Settings settings;
    std::vector<ProblemInstance> instances;
    while (instances.size() < 256) {
        ProblemInstance inst = sample_instance(rng, TaskKind::DivNM, settings);
        if (!detect_special_case(TaskKind::DivNM, inst.operands[0], inst.operands[1]))
            instances.push_back(std::move(inst));
    }
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& inst = instances[i++ & 255];
        DivTrace trace = gen_div_trace(inst.operands[0], inst.operands[1]);
        benchmark::DoNotOptimize(
            render_div_trace(trace, {}, RenderStyle::Ascii, FormatMode::Natural));
    }
}
BENCHMARK(bm_div_trace);

}  // namespace
