#include "goatforge/generate.hpp"

#include <atomic>
#include <condition_variable>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "goatforge/cot.hpp"

namespace goatforge {

Record make_record(const Config& config, const std::vector<Template>& templates,
                   const CompositionPlan& plan,
                   const std::vector<std::uint32_t>& assignment, std::uint64_t index) {
    Rng rng = Rng::for_record(config.master_seed, index);
    const PlanKey& key = plan.rows.at(assignment.at(index)).key;

    DigitRange range{config.min_digits, config.max_digits};
    ProblemInstance inst = sample_instance(rng, key, config.settings, range);
    inst.seed_index = index;

    bool special = false;
    if (inst.task == TaskKind::MulNM || inst.task == TaskKind::DivNM)
        special = detect_special_case(inst.task, inst.operands[0], inst.operands[1]).has_value();
    bool cot = !learnable(inst.task) && !special && !config.ablation.no_cot;

    std::string body;
    if (cot) {
        if (inst.task == TaskKind::MulNM) {
            MultTrace trace = gen_mult_trace(inst.operands[0], inst.operands[1]);
            body = render_mult_trace(trace, config.ablation, config.render_style,
                                     config.format_mode);
        } else {
            DivTrace trace = gen_div_trace(inst.operands[0], inst.operands[1]);
            body = render_div_trace(trace, config.ablation, config.render_style,
                                    config.format_mode);
        }
    }

    Record record;
    if (config.format_mode == FormatMode::Natural) {
        record = format_natural(rng, inst, natural_target(inst, body), templates,
                                config.augmentation);
    } else {
        auto [prompt, target] = format_synthetic(inst, body);
        record.instruction = std::move(prompt);
        record.output = std::move(target);
        RecordMeta meta;
        meta.task = inst.task;
        for (const Numeral& n : inst.operands) meta.operands.push_back(n.str());
        meta.answer = inst.answer;
        meta.format_mode = FormatMode::Synthetic;
        meta.seed_index = index;
        record.meta = std::move(meta);
    }
    record.meta->cot = cot;
    record.meta->ablation = config.ablation;
    return record;
}

namespace {

struct OrderedSink {
    std::ostream& out;
    std::atomic<bool>& failed;
    std::mutex mutex;
    std::condition_variable drained;
    std::map<std::uint64_t, std::string> pending;
    std::uint64_t next_block = 0;
    std::size_t max_pending = 0;

    // Blocks written strictly in index order; a bounded reorder buffer
    // keeps fast workers from racing arbitrarily far ahead. The worker
    // holding next_block is never made to wait.
    void push(std::uint64_t block, std::string text) {
        std::unique_lock lock(mutex);
        drained.wait(lock, [&] {
            return pending.size() < max_pending || block == next_block || failed.load();
        });
        if (failed.load()) return;
        pending.emplace(block, std::move(text));
        while (!pending.empty() && pending.begin()->first == next_block) {
            out << pending.begin()->second;
            pending.erase(pending.begin());
            ++next_block;
            drained.notify_all();
        }
    }

    void abort() {
        std::scoped_lock lock(mutex);
        drained.notify_all();
    }
};

}  // namespace

GenStats generate_dataset(const Config& config, std::ostream& out) {
    if (auto err = config.settings.check()) throw std::runtime_error(*err);
    if (auto err = config.ablation.check()) throw std::runtime_error(*err);

    std::vector<Template> templates = config.template_path.empty()
                                          ? default_templates()
                                          : load_templates_file(config.template_path);
    if (config.format_mode == FormatMode::Natural && templates.empty())
        throw std::runtime_error("template list is empty");

    std::vector<WeightedKey> weights;
    if (config.task_filter.empty()) {
        weights = weighted_keys(config.weights);
    } else {
        auto key = plan_key_from_name(config.task_filter);
        if (!key) throw std::runtime_error("unknown task '" + config.task_filter + "'");
        weights.push_back(WeightedKey{*key, 1.0});
    }
    CompositionPlan plan = plan_composition(config.total, weights);
    std::vector<std::uint32_t> assignment = plan_row_assignment(plan, config.master_seed);

    GenStats stats;
    stats.records = plan.total;
    for (const PlanRow& row : plan.rows) stats.per_row[plan_key_name(row.key)] += row.count;

    if (plan.total == 0) return stats;

    unsigned threads = config.threads ? config.threads : std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;
    constexpr std::uint64_t kBlock = 512;
    std::uint64_t blocks = (plan.total + kBlock - 1) / kBlock;
    if (threads > blocks) threads = static_cast<unsigned>(blocks);

    std::atomic<bool> failed{false};
    OrderedSink sink{out, failed};
    sink.max_pending = threads * 4;
    std::atomic<std::uint64_t> next_block{0};
    std::mutex error_mutex;
    std::exception_ptr error;

    auto worker = [&] {
        try {
            while (!failed.load()) {
                std::uint64_t block = next_block.fetch_add(1);
                if (block >= blocks) return;
                std::uint64_t begin = block * kBlock;
                std::uint64_t end = std::min(plan.total, begin + kBlock);
                std::string buffer;
                buffer.reserve((end - begin) * 128);
                for (std::uint64_t i = begin; i < end; ++i) {
                    Record record = make_record(config, templates, plan, assignment, i);
                    buffer += record_to_jsonl(record, config.emit_meta);
                    buffer += '\n';
                }
                sink.push(block, std::move(buffer));
            }
        } catch (...) {
            {
                std::scoped_lock lock(error_mutex);
                if (!error) error = std::current_exception();
            }
            failed.store(true);
            sink.abort();
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return stats;
}

}  // namespace goatforge
