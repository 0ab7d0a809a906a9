#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "goatforge/cot.hpp"
#include "goatforge/task.hpp"

namespace goatforge {

struct RecordMeta {
    TaskKind task = TaskKind::Addition;
    std::vector<std::string> operands;
    std::string answer;
    FormatMode format_mode = FormatMode::Natural;
    std::size_t template_id = 0;  // 0 when no template was used
    bool cot = false;
    AblationConfig ablation;
    std::uint64_t seed_index = 0;

    bool operator==(const RecordMeta& other) const = default;
};

/// One dataset line. `instruction` holds the prompt without the
/// "\nAnswer: " suffix; the serializer appends it for natural-mode
/// records, keeping the suffix on the prompt side of the pair.
struct Record {
    std::string instruction;
    std::string input;
    std::string output;
    std::optional<RecordMeta> meta;

    bool operator==(const Record& other) const = default;
};

inline constexpr std::string_view kAnswerSuffix = "\nAnswer: ";

/// Fixed field order (instruction, input, output, meta) so identical
/// records serialize to identical bytes.
std::string record_to_jsonl(const Record& record, bool emit_meta);

/// Parses one JSONL line. The instruction comes back verbatim, including
/// any serialized answer suffix. Throws std::runtime_error on malformed
/// input or schema violations.
Record record_from_jsonl(const std::string& line);

}  // namespace goatforge
