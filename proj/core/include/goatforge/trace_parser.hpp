#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "goatforge/cot.hpp"
#include "goatforge/record.hpp"
#include "goatforge/task.hpp"

namespace goatforge {

struct ParseError {
    std::size_t offset = 0;   // byte offset into the original text
    std::string expected;
};

/// A learnable-task or special-case completion: either the bare answer
/// or the restated equation "a op b = answer".
struct DirectAnswer {
    std::optional<std::pair<Numeral, Numeral>> restated_operands;
    char op = 0;  // '+', '-', '*', '/' when restated
    std::string answer;
};

/// What the multiplication text literally claims, segment by segment.
/// Absent segments were suppressed by ablation or synthetic mode. The
/// verifier checks these claims; the semantic trace is derived from them.
struct MultClaims {
    std::optional<std::pair<Numeral, Numeral>> extraction;
    std::optional<Numeral> split_kept;
    std::vector<Numeral> split_terms;
    std::vector<std::pair<Numeral, Numeral>> expand_pairs;  // (kept, term)
    std::vector<Numeral> product_values;
    std::vector<std::vector<Numeral>> fold_segments;  // last one is [result]
};

struct DivLineClaim {
    Numeral remainder_in;
    Numeral divisor;
    Numeral multiple;  // q * 10^j as written
    std::optional<std::pair<Numeral, Numeral>> middle;  // "R - P" when present
    Numeral remainder_out;
};

struct DivClaims {
    std::vector<DivLineClaim> lines;
    Numeral dividend;
    Numeral divisor;
    Numeral quotient;
    std::optional<Numeral> remainder;  // absent when the target omits " R r"
};

struct MultParse {
    MultTrace trace;
    MultClaims claims;
};

struct DivParse {
    DivTrace trace;
    DivClaims claims;
};

using ParsedCompletion = std::variant<MultParse, DivParse, DirectAnswer>;

struct ParseOutcome {
    std::optional<ParsedCompletion> value;
    std::optional<ParseError> error;

    bool ok() const { return value.has_value(); }
};

/// Strict parser for the exact target grammars this project emits, both
/// format modes and every ablation variant. Leading/trailing whitespace
/// is tolerated; nothing else is.
ParseOutcome parse_completion(TaskKind task, std::string_view text);

enum class ErrorClass {
    AlignmentError,
    CopyError,
    IntermediateProductError,
    FinalAnswerError,
    FormatError,
};

std::string_view error_class_name(ErrorClass c);

struct VerifyReport {
    bool parse_ok = true;
    std::size_t steps_total = 0;
    std::size_t steps_failed = 0;
    std::optional<std::size_t> first_failure;
    std::optional<ErrorClass> error_class;
    std::optional<std::string> extracted_answer;

    bool accepted() const { return parse_ok && !error_class; }
};

/// Re-derives every claimed equality with exact arithmetic and classifies
/// the first failure: a wrong product, a mis-copied number, a wrong
/// sum/difference, or (with every step holding) a final answer that does
/// not match the oracle. `expected` additionally pins the extraction to
/// the known instance.
VerifyReport verify_trace(const ParsedCompletion& parsed,
                          const ProblemInstance* expected = nullptr);

/// parse + verify in one call; parse failures come back as FormatError.
VerifyReport verify_completion(TaskKind task, std::string_view text,
                               const ProblemInstance* expected = nullptr);

struct TaskVerifyStats {
    std::uint64_t records = 0;
    std::uint64_t passed = 0;
    std::map<ErrorClass, std::uint64_t> failures;
};

struct VerifyStats {
    std::uint64_t records = 0;
    std::uint64_t passed = 0;
    std::uint64_t failed = 0;
    std::map<std::string, TaskVerifyStats> per_task;
    std::optional<std::uint64_t> first_failure_line;  // 1-based
};

/// Verifies a JSONL record stream. Records with meta are checked against
/// their recorded instance; records without meta fall back to operand
/// recovery from the instruction text. Throws std::runtime_error with the
/// line number on malformed JSONL.
VerifyStats verify_records(std::istream& jsonl);

std::string verify_stats_json(const VerifyStats& stats);
std::string verify_stats_table(const VerifyStats& stats);

}  // namespace goatforge
