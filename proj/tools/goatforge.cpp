#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "goatforge/config.hpp"
#include "goatforge/cot.hpp"
#include "goatforge/generate.hpp"
#include "goatforge/metrics.hpp"
#include "goatforge/numeral.hpp"
#include "goatforge/record.hpp"
#include "goatforge/sampler.hpp"
#include "goatforge/templater.hpp"
#include "goatforge/trace_parser.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

using goatforge::Config;

std::uint64_t env_seed_or(std::uint64_t fallback) {
    const char* env = std::getenv("GOATFORGE_SEED");
    if (!env || !*env) return fallback;
    try {
        return std::stoull(env);
    } catch (...) {
        throw std::runtime_error("GOATFORGE_SEED is not a number");
    }
}

int run_gen(const Config& config, bool extrapolation, std::size_t base_digits,
            std::size_t max_extra, std::size_t per_bucket) {
    std::ofstream file;
    std::ostream* out = &std::cout;
    std::ostream* summary = &std::cerr;
    if (!config.output_path.empty()) {
        file.open(config.output_path, std::ios::binary);
        if (!file) {
            std::cerr << "error: cannot open output file: " << config.output_path << "\n";
            return kExitUsage;
        }
        out = &file;
        summary = &std::cout;
    }

    if (extrapolation) {
        goatforge::Rng rng =
            goatforge::Rng::for_record(config.master_seed, 0x6f6f64ull);  // ood stream
        auto instances =
            goatforge::gen_extrapolation_set(rng, base_digits, max_extra, per_bucket);
        for (const auto& inst : instances) {
            auto [prompt, target] = goatforge::format_synthetic(inst, "");
            goatforge::Record record;
            record.instruction = prompt;
            record.output = target;
            goatforge::RecordMeta meta;
            meta.task = inst.task;
            for (const auto& n : inst.operands) meta.operands.push_back(n.str());
            meta.answer = inst.answer;
            meta.format_mode = goatforge::FormatMode::Synthetic;
            meta.seed_index = inst.seed_index;
            record.meta = std::move(meta);
            *out << goatforge::record_to_jsonl(record, config.emit_meta) << "\n";
        }
        *summary << "extrapolation records: " << instances.size() << "\n";
        return kExitOk;
    }

    goatforge::GenStats stats = goatforge::generate_dataset(config, *out);
    out->flush();
    *summary << "records: " << stats.records << "\n";
    for (const auto& [row, count] : stats.per_row)
        *summary << "  " << row << ": " << count << "\n";
    return kExitOk;
}

int run_verify(const std::string& input, const std::string& format) {
    std::ifstream in(input, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot open input file: " << input << "\n";
        return kExitUsage;
    }
    goatforge::VerifyStats stats;
    try {
        stats = goatforge::verify_records(in);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    if (format == "json")
        std::cout << goatforge::verify_stats_json(stats) << "\n";
    else
        std::cout << goatforge::verify_stats_table(stats);
    return stats.failed == 0 ? kExitOk : kExitCheckFailed;
}

struct KeyedLine {
    std::optional<std::string> id;
    std::string text;                                   // completion or answer
    std::optional<goatforge::ProblemInstance> instance; // from record meta
    std::optional<std::string> final_answer;
};

std::vector<KeyedLine> load_eval_side(const std::string& path, bool is_prediction) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::vector<KeyedLine> lines;
    std::string raw;
    std::uint64_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (raw.empty()) continue;
        KeyedLine entry;
        if (raw.front() == '{') {
            nlohmann::json j = nlohmann::json::parse(raw, nullptr, false);
            if (j.is_discarded())
                throw std::runtime_error(path + " line " + std::to_string(line_no) +
                                         ": malformed JSON");
            if (j.contains("id")) {
                if (j["id"].is_string())
                    entry.id = j["id"].get<std::string>();
                else
                    entry.id = j["id"].dump();
            }
            if (is_prediction && j.contains("completion")) {
                entry.text = j["completion"].get<std::string>();
            } else if (!is_prediction && j.contains("answer") && !j.contains("output")) {
                entry.text = j["answer"].get<std::string>();
                entry.final_answer = entry.text;
            } else if (j.contains("output")) {
                goatforge::Record record = goatforge::record_from_jsonl(raw);
                entry.text = record.output;
                if (record.meta) {
                    goatforge::ProblemInstance inst;
                    inst.task = record.meta->task;
                    for (const auto& text : record.meta->operands)
                        inst.operands.emplace_back(text);
                    inst.answer = record.meta->answer;
                    entry.instance = std::move(inst);
                    entry.final_answer = record.meta->answer;
                }
            } else {
                throw std::runtime_error(path + " line " + std::to_string(line_no) +
                                         ": missing completion/answer/output field");
            }
        } else {
            entry.text = raw;
        }
        lines.push_back(std::move(entry));
    }
    return lines;
}

int run_eval(const std::string& pred_path, const std::string& ref_path,
             const std::string& format, bool final_answer_only) {
    std::vector<KeyedLine> preds;
    std::vector<KeyedLine> refs;
    try {
        preds = load_eval_side(pred_path, true);
        refs = load_eval_side(ref_path, false);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    bool keyed = !preds.empty() && preds.front().id.has_value() && !refs.empty() &&
                 refs.front().id.has_value();
    std::vector<goatforge::EvalItem> items;
    if (keyed) {
        std::map<std::string, const KeyedLine*> by_id;
        for (const KeyedLine& ref : refs) by_id[*ref.id] = &ref;
        std::size_t matched = 0;
        for (const KeyedLine& pred : preds) {
            auto it = by_id.find(pred.id.value_or(""));
            if (it == by_id.end()) continue;
            ++matched;
            const KeyedLine& ref = *it->second;
            std::string ref_text =
                final_answer_only && ref.final_answer ? *ref.final_answer : ref.text;
            items.push_back(goatforge::EvalItem{goatforge::extract_answer(pred.text),
                                                ref_text, ref.instance});
        }
        if (matched == 0) {
            std::cerr << "error: no shared ids between predictions and references\n";
            return kExitUsage;
        }
    } else {
        if (preds.size() != refs.size()) {
            std::cerr << "error: length mismatch: " << preds.size() << " predictions vs "
                      << refs.size() << " references\n";
            return kExitUsage;
        }
        for (std::size_t i = 0; i < preds.size(); ++i) {
            std::string ref_text = final_answer_only && refs[i].final_answer
                                       ? *refs[i].final_answer
                                       : refs[i].text;
            items.push_back(goatforge::EvalItem{goatforge::extract_answer(preds[i].text),
                                                ref_text, refs[i].instance});
        }
    }

    goatforge::EvalReport report = goatforge::evaluate_items(items);
    if (format == "json")
        std::cout << goatforge::eval_report_json(report) << "\n";
    else
        std::cout << goatforge::eval_report_table(report);

    for (const auto& [bucket, stats] : report.buckets)
        if (stats.exact_mean() < 1.0) return kExitCheckFailed;
    return kExitOk;
}

int run_oracle(const std::string& expression) {
    std::string stripped = goatforge::strip_augmentation(expression);
    std::size_t begin = stripped.find_first_not_of(" \t");
    std::size_t end = stripped.find_last_not_of(" \t");
    if (begin == std::string::npos) {
        std::cerr << "error: empty expression\n";
        return kExitUsage;
    }
    stripped = stripped.substr(begin, end - begin + 1);

    char op = 0;
    std::size_t op_pos = std::string::npos;
    for (std::size_t i = 1; i + 1 < stripped.size(); ++i) {
        char c = stripped[i];
        if ((c == '+' || c == '-' || c == '*' || c == '/') && stripped[i - 1] == ' ' &&
            stripped[i + 1] == ' ') {
            op = c;
            op_pos = i;
            break;
        }
    }
    if (!op) {
        std::cerr << "error: expected an expression like \"a + b\"\n";
        return kExitUsage;
    }
    auto a = goatforge::Numeral::parse(stripped.substr(0, op_pos - 1));
    auto b = goatforge::Numeral::parse(stripped.substr(op_pos + 2));
    if (!a || !b) {
        std::cerr << "error: operands must be canonical non-negative integers\n";
        return kExitUsage;
    }
    try {
        switch (op) {
            case '+': std::cout << goatforge::add(*a, *b).str() << "\n"; break;
            case '-': std::cout << goatforge::sub(*a, *b).str() << "\n"; break;
            case '*': std::cout << goatforge::mul(*a, *b).str() << "\n"; break;
            case '/': {
                auto qr = goatforge::divmod(*a, *b);
                if (qr.remainder.is_zero())
                    std::cout << qr.quotient.str() << "\n";
                else
                    std::cout << qr.quotient.str() << " R " << qr.remainder.str() << "\n";
                break;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}

int run_fewshot(const std::string& task_name, std::size_t k, const std::string& question,
                std::uint64_t seed) {
    goatforge::TaskKind task;
    if (task_name == "mul" || task_name == "mul_nm")
        task = goatforge::TaskKind::MulNM;
    else if (task_name == "div" || task_name == "div_nm")
        task = goatforge::TaskKind::DivNM;
    else {
        std::cerr << "error: few-shot prompts are defined for mul and div only\n";
        return kExitUsage;
    }

    goatforge::Settings settings;
    std::vector<std::pair<std::string, std::string>> pairs;
    std::uint64_t index = 0;
    while (pairs.size() < k) {
        goatforge::Rng rng = goatforge::Rng::for_record(seed, index++);
        goatforge::ProblemInstance inst = goatforge::sample_instance(rng, task, settings);
        if (goatforge::detect_special_case(task, inst.operands[0], inst.operands[1]))
            continue;
        std::string solution;
        const char* op;
        if (task == goatforge::TaskKind::MulNM) {
            auto trace = goatforge::gen_mult_trace(inst.operands[0], inst.operands[1]);
            solution = goatforge::render_mult_trace(trace, {}, goatforge::RenderStyle::Ascii,
                                                    goatforge::FormatMode::Natural);
            op = "*";
        } else {
            auto trace = goatforge::gen_div_trace(inst.operands[0], inst.operands[1]);
            solution = goatforge::render_div_trace(trace, {}, goatforge::RenderStyle::Ascii,
                                                   goatforge::FormatMode::Natural);
            op = "/";
        }
        std::string q =
            inst.operands[0].str() + " " + op + " " + inst.operands[1].str() + " = ";
        pairs.emplace_back(std::move(q), std::move(solution));
    }
    std::cout << goatforge::build_fewshot_prompt(pairs, question, task) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"goatforge: deterministic arithmetic instruction-tuning data "
                 "generator, verifier, and evaluator"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a JSONL dataset");
    std::string gen_config_path;
    std::vector<std::string> gen_sets;
    bool extrapolation = false;
    std::size_t base_digits = 16, max_extra = 8, per_bucket = 100;
    Config cli_overrides;
    bool seed_set = false, total_set = false, output_set = false, mode_set = false;
    bool meta_set = false, threads_set = false, task_set = false;
    bool min_set = false, max_set = false, template_set = false, style_set = false;
    std::string mode_name, style_name;

    gen->add_option("--config", gen_config_path, "Config file (key=value or JSON)");
    gen->add_option("--set", gen_sets, "Override a config key, e.g. --set weight_addition=30");
    gen->add_option("--seed", cli_overrides.master_seed, "Master seed")
        ->each([&](const std::string&) { seed_set = true; });
    gen->add_option("--total", cli_overrides.total, "Number of records")
        ->each([&](const std::string&) { total_set = true; });
    gen->add_option("-o,--output", cli_overrides.output_path, "Output path (default stdout)")
        ->each([&](const std::string&) { output_set = true; });
    gen->add_option("--format-mode", mode_name, "natural | synthetic")
        ->each([&](const std::string&) { mode_set = true; });
    gen->add_option("--render-style", style_name, "ascii | paper-typeset")
        ->each([&](const std::string&) { style_set = true; });
    gen->add_option("--template-file", cli_overrides.template_path, "Instruction templates")
        ->each([&](const std::string&) { template_set = true; });
    gen->add_flag("--emit-meta", cli_overrides.emit_meta, "Serialize per-record metadata")
        ->each([&](const std::string&) { meta_set = true; });
    gen->add_option("--threads", cli_overrides.threads, "Worker threads (0 = all cores)")
        ->each([&](const std::string&) { threads_set = true; });
    gen->add_option("--task", cli_overrides.task_filter,
                    "Restrict to one task (e.g. mul_nm, div_nm_special)")
        ->each([&](const std::string&) { task_set = true; });
    gen->add_option("--min-digits", cli_overrides.min_digits, "Operand digit range lower bound")
        ->each([&](const std::string&) { min_set = true; });
    gen->add_option("--max-digits", cli_overrides.max_digits, "Operand digit range upper bound")
        ->each([&](const std::string&) { max_set = true; });
    gen->add_flag("--extrapolation", extrapolation,
                  "Emit the out-of-distribution addition test set instead");
    gen->add_option("--base-digits", base_digits, "Extrapolation: in-distribution width");
    gen->add_option("--max-extra", max_extra, "Extrapolation: extra digit buckets");
    gen->add_option("--per-bucket", per_bucket, "Extrapolation: instances per bucket");

    // verify
    auto* verify = app.add_subcommand("verify", "Re-check every step of a JSONL dataset");
    std::string verify_input;
    std::string verify_format = "table";
    verify->add_option("input", verify_input, "JSONL dataset")->required();
    verify->add_option("--format", verify_format, "table | json")
        ->check(CLI::IsMember({"table", "json"}));

    // eval
    auto* eval = app.add_subcommand("eval", "Score predictions against references");
    std::string pred_path, ref_path;
    std::string eval_format = "table";
    bool final_answer_only = false;
    eval->add_option("--pred", pred_path, "Predictions (text or JSONL)")->required();
    eval->add_option("--ref", ref_path, "References (text or JSONL)")->required();
    eval->add_option("--format", eval_format, "table | json")
        ->check(CLI::IsMember({"table", "json"}));
    eval->add_flag("--final-answer-only", final_answer_only,
                   "Score the final answer instead of the whole target");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Evaluate one expression exactly");
    std::string expression;
    oracle->add_option("expression", expression, "\"a op b\" with op in + - * /")->required();

    // fewshot
    auto* fewshot = app.add_subcommand("fewshot", "Build a few-shot CoT prompt");
    std::string fewshot_task;
    std::size_t fewshot_k = 3;
    std::string fewshot_question;
    std::uint64_t fewshot_seed = 0;
    bool fewshot_seed_set = false;
    fewshot->add_option("--task", fewshot_task, "mul | div")->required();
    fewshot->add_option("-k,--examples", fewshot_k, "Number of solved pairs");
    fewshot->add_option("question", fewshot_question, "Final question, e.g. \"58061 * 3569 = \"")
        ->required();
    fewshot->add_option("--seed", fewshot_seed, "Exemplar seed")
        ->each([&](const std::string&) { fewshot_seed_set = true; });

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            Config config;
            config.master_seed = env_seed_or(config.master_seed);
            if (!gen_config_path.empty()) config = goatforge::load_config_file(gen_config_path, config);
            for (const std::string& kv : gen_sets) {
                std::size_t eq = kv.find('=');
                if (eq == std::string::npos)
                    throw std::runtime_error("--set expects key=value, got '" + kv + "'");
                if (!goatforge::config_apply(config, kv.substr(0, eq), kv.substr(eq + 1)))
                    throw std::runtime_error("unknown config key '" + kv.substr(0, eq) + "'");
            }
            if (seed_set) config.master_seed = cli_overrides.master_seed;
            if (total_set) config.total = cli_overrides.total;
            if (output_set) config.output_path = cli_overrides.output_path;
            if (template_set) config.template_path = cli_overrides.template_path;
            if (meta_set) config.emit_meta = cli_overrides.emit_meta;
            if (threads_set) config.threads = cli_overrides.threads;
            if (task_set) config.task_filter = cli_overrides.task_filter;
            if (min_set) config.min_digits = cli_overrides.min_digits;
            if (max_set) config.max_digits = cli_overrides.max_digits;
            if (mode_set) {
                auto mode = goatforge::format_mode_from_name(mode_name);
                if (!mode) throw std::runtime_error("unknown format mode '" + mode_name + "'");
                config.format_mode = *mode;
            }
            if (style_set) {
                auto style = goatforge::render_style_from_name(style_name);
                if (!style) throw std::runtime_error("unknown render style '" + style_name + "'");
                config.render_style = *style;
            }
            if (min_set && !max_set) config.max_digits = config.min_digits;
            return run_gen(config, extrapolation, base_digits, max_extra, per_bucket);
        }
        if (verify->parsed()) return run_verify(verify_input, verify_format);
        if (eval->parsed()) return run_eval(pred_path, ref_path, eval_format, final_answer_only);
        if (oracle->parsed()) return run_oracle(expression);
        if (fewshot->parsed()) {
            std::uint64_t seed = fewshot_seed_set ? fewshot_seed : env_seed_or(0);
            return run_fewshot(fewshot_task, fewshot_k, fewshot_question, seed);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
