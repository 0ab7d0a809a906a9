#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "goatforge/task.hpp"

namespace goatforge {

/// Character-level Levenshtein distance (insert/delete/substitute, unit
/// costs).
std::size_t levenshtein(std::string_view a, std::string_view b);

/// 1 on byte equality after trimming a single trailing newline from each
/// side, 0 otherwise. No other normalization.
int exact_match(std::string_view pred, std::string_view ref);

/// 1 - CER, where CER = levenshtein(pred, ref) / len(ref), clamped at 0
/// because the distance can exceed the reference length. Throws
/// std::invalid_argument on an empty reference.
double digit_match(std::string_view pred, std::string_view ref);

enum class OpClass { Add, Sub, Mul, Div };

std::string_view op_class_name(OpClass op);

struct EvalBucket {
    OpClass op = OpClass::Add;
    std::string label;  // "3D", "16D+8D", "4Dx8D", "12D/6D", "other(2D,7D)"

    auto operator<=>(const EvalBucket& other) const = default;
};

/// Assigns the benchmark bucket: nD for n-by-n (division: n-by-m, m<=n)
/// up to 5D, the named wide buckets after that, other(nD,mD) for the
/// rest. Only the binary arithmetic tasks have buckets; other tasks
/// throw std::invalid_argument.
EvalBucket bucketize(const ProblemInstance& inst);

struct BucketStats {
    std::uint64_t count = 0;
    double exact_sum = 0.0;
    double digit_sum = 0.0;

    double exact_mean() const { return count ? exact_sum / count : 0.0; }
    double digit_mean() const { return count ? digit_sum / count : 0.0; }
};

struct EvalReport {
    std::map<EvalBucket, BucketStats> buckets;
    std::uint64_t total = 0;
};

/// "Answer:"-marker extraction: everything after the last marker, with
/// leading spaces and a trailing newline dropped; the whole completion
/// when no marker is present.
std::string extract_answer(std::string_view completion);

struct EvalItem {
    std::string prediction;
    std::string reference;
    std::optional<ProblemInstance> instance;  // enables bucketing
};

/// Scores each item with both metrics and aggregates per bucket. Items
/// without an instance land in a single "all" bucket per unknown op.
EvalReport evaluate_items(const std::vector<EvalItem>& items);

std::string eval_report_json(const EvalReport& report);

/// Aligned table, one row per op, buckets as columns, cells
/// "exact/digit" in percent.
std::string eval_report_table(const EvalReport& report);

}  // namespace goatforge
