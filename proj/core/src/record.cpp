#include "goatforge/record.hpp"

#include <stdexcept>

#include <json.hpp>

namespace goatforge {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json meta_to_json(const RecordMeta& meta) {
    ordered_json j;
    j["task"] = std::string(task_name(meta.task));
    j["operands"] = meta.operands;
    j["answer"] = meta.answer;
    j["format_mode"] = std::string(format_mode_name(meta.format_mode));
    j["template_id"] = meta.template_id;
    j["cot"] = meta.cot;
    ordered_json abl;
    abl["omit_split"] = meta.ablation.omit_split;
    abl["omit_expansion"] = meta.ablation.omit_expansion;
    abl["omit_term_by_term"] = meta.ablation.omit_term_by_term;
    abl["omit_middle_product"] = meta.ablation.omit_middle_product;
    abl["no_cot"] = meta.ablation.no_cot;
    j["ablation"] = std::move(abl);
    j["seed_index"] = meta.seed_index;
    return j;
}

RecordMeta meta_from_json(const ordered_json& j) {
    RecordMeta meta;
    auto task = task_from_name(j.at("task").get<std::string>());
    if (!task) throw std::runtime_error("unknown task in record meta");
    meta.task = *task;
    meta.operands = j.at("operands").get<std::vector<std::string>>();
    meta.answer = j.at("answer").get<std::string>();
    auto mode = format_mode_from_name(j.at("format_mode").get<std::string>());
    if (!mode) throw std::runtime_error("unknown format_mode in record meta");
    meta.format_mode = *mode;
    meta.template_id = j.at("template_id").get<std::size_t>();
    meta.cot = j.at("cot").get<bool>();
    const auto& abl = j.at("ablation");
    meta.ablation.omit_split = abl.at("omit_split").get<bool>();
    meta.ablation.omit_expansion = abl.at("omit_expansion").get<bool>();
    meta.ablation.omit_term_by_term = abl.at("omit_term_by_term").get<bool>();
    meta.ablation.omit_middle_product = abl.at("omit_middle_product").get<bool>();
    meta.ablation.no_cot = abl.at("no_cot").get<bool>();
    meta.seed_index = j.at("seed_index").get<std::uint64_t>();
    return meta;
}

}  // namespace

std::string record_to_jsonl(const Record& record, bool emit_meta) {
    ordered_json j;
    std::string instruction = record.instruction;
    if (record.meta && record.meta->format_mode == FormatMode::Natural)
        instruction += kAnswerSuffix;
    j["instruction"] = std::move(instruction);
    j["input"] = record.input;
    j["output"] = record.output;
    if (emit_meta && record.meta) j["meta"] = meta_to_json(*record.meta);
    return j.dump();
}

Record record_from_jsonl(const std::string& line) {
    ordered_json j = ordered_json::parse(line, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error("malformed JSON record");
    if (!j.is_object()) throw std::runtime_error("record line is not a JSON object");
    try {
        Record record;
        record.instruction = j.at("instruction").get<std::string>();
        record.input = j.value("input", std::string());
        record.output = j.at("output").get<std::string>();
        if (j.contains("meta")) record.meta = meta_from_json(j.at("meta"));
        return record;
    } catch (const ordered_json::exception& e) {
        throw std::runtime_error(std::string("record schema violation: ") + e.what());
    }
}

}  // namespace goatforge
