#include "goatforge/metrics.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace goatforge {

std::size_t levenshtein(std::string_view a, std::string_view b) {
    if (a.empty()) return b.size();
    if (b.empty()) return a.size();
    std::vector<std::size_t> prev(b.size() + 1);
    std::vector<std::size_t> cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t sub_cost = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub_cost});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

namespace {

std::string_view trim_one_newline(std::string_view s) {
    if (!s.empty() && s.back() == '\n') s.remove_suffix(1);
    return s;
}

}  // namespace

int exact_match(std::string_view pred, std::string_view ref) {
    return trim_one_newline(pred) == trim_one_newline(ref) ? 1 : 0;
}

double digit_match(std::string_view pred, std::string_view ref) {
    if (ref.empty()) throw std::invalid_argument("digit_match: empty reference");
    double cer = static_cast<double>(levenshtein(pred, ref)) / static_cast<double>(ref.size());
    return std::max(0.0, 1.0 - cer);
}

std::string_view op_class_name(OpClass op) {
    switch (op) {
        case OpClass::Add: return "ADD";
        case OpClass::Sub: return "SUB";
        case OpClass::Mul: return "MUL";
        case OpClass::Div: return "DIV";
    }
    return "?";
}

namespace {

struct NamedPair {
    std::size_t n, m;
    const char* label;
};

constexpr NamedPair kAddBuckets[] = {{8, 8, "8D+8D"}, {16, 8, "16D+8D"}, {16, 16, "16D+16D"}};
constexpr NamedPair kSubBuckets[] = {{8, 8, "8D-8D"}, {16, 8, "16D-8D"}, {16, 16, "16D-16D"}};
constexpr NamedPair kMulBuckets[] = {{1, 16, "1Dx16D"}, {4, 8, "4Dx8D"}, {6, 6, "6Dx6D"}};
constexpr NamedPair kDivBuckets[] = {{16, 1, "16D/1D"}, {6, 3, "6D/3D"}, {12, 6, "12D/6D"}};

bool pair_matches(const NamedPair& p, std::size_t n, std::size_t m, bool ordered) {
    if (ordered) return p.n == n && p.m == m;
    return (p.n == n && p.m == m) || (p.n == m && p.m == n);
}

}  // namespace

EvalBucket bucketize(const ProblemInstance& inst) {
    OpClass op;
    switch (inst.task) {
        case TaskKind::Addition: op = OpClass::Add; break;
        case TaskKind::Subtraction: op = OpClass::Sub; break;
        case TaskKind::MulN1:
        case TaskKind::MulNM: op = OpClass::Mul; break;
        case TaskKind::DivN1:
        case TaskKind::DivNM: op = OpClass::Div; break;
        default:
            throw std::invalid_argument("bucketize: not a binary arithmetic task");
    }
    if (inst.operands.size() != 2)
        throw std::invalid_argument("bucketize: need exactly two operands");

    std::size_t n = inst.operands[0].digit_count();
    std::size_t m = inst.operands[1].digit_count();

    // BIG-bench columns: nD is n-by-n, except division where the divisor
    // may be narrower.
    if (op == OpClass::Div) {
        if (n <= 5 && m <= n) return {op, std::to_string(n) + "D"};
    } else if (n == m && n <= 5) {
        return {op, std::to_string(n) + "D"};
    }

    const NamedPair* named = nullptr;
    std::size_t named_count = 0;
    switch (op) {
        case OpClass::Add: named = kAddBuckets; named_count = 3; break;
        case OpClass::Sub: named = kSubBuckets; named_count = 3; break;
        case OpClass::Mul: named = kMulBuckets; named_count = 3; break;
        case OpClass::Div: named = kDivBuckets; named_count = 3; break;
    }
    // Division buckets are ordered (dividend, divisor); the commutative
    // ops match either operand order but keep the canonical label.
    bool ordered = op == OpClass::Div;
    for (std::size_t i = 0; i < named_count; ++i) {
        if (pair_matches(named[i], n, m, ordered)) return {op, named[i].label};
    }
    return {op, "other(" + std::to_string(n) + "D," + std::to_string(m) + "D)"};
}

std::string extract_answer(std::string_view completion) {
    constexpr std::string_view kMarker = "Answer:";
    std::size_t pos = completion.rfind(kMarker);
    std::string_view tail =
        pos == std::string_view::npos ? completion : completion.substr(pos + kMarker.size());
    while (!tail.empty() && tail.front() == ' ') tail.remove_prefix(1);
    tail = trim_one_newline(tail);
    return std::string(tail);
}

EvalReport evaluate_items(const std::vector<EvalItem>& items) {
    EvalReport report;
    for (const EvalItem& item : items) {
        EvalBucket bucket{OpClass::Add, "all"};
        if (item.instance) bucket = bucketize(*item.instance);
        BucketStats& stats = report.buckets[bucket];
        ++stats.count;
        stats.exact_sum += exact_match(item.prediction, item.reference);
        stats.digit_sum += digit_match(item.prediction, item.reference);
        ++report.total;
    }
    return report;
}

std::string eval_report_json(const EvalReport& report) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json buckets = nlohmann::ordered_json::object();
    for (const auto& [bucket, stats] : report.buckets) {
        nlohmann::ordered_json entry;
        entry["count"] = stats.count;
        entry["exact_match"] = stats.exact_mean();
        entry["digit_match"] = stats.digit_mean();
        buckets[std::string(op_class_name(bucket.op)) + "/" + bucket.label] = std::move(entry);
    }
    j["buckets"] = std::move(buckets);
    j["total"] = report.total;
    return j.dump(2);
}

namespace {

std::string percent_pair(const BucketStats& stats) {
    auto fmt = [](double v) {
        std::ostringstream out;
        double pct = v * 100.0;
        out.precision(1);
        out << std::fixed << pct;
        return out.str();
    };
    return fmt(stats.exact_mean()) + "/" + fmt(stats.digit_mean());
}

}  // namespace

std::string eval_report_table(const EvalReport& report) {
    // Column layout mirrors the benchmark table: one row per op, the
    // narrow nD buckets first, then the wide ones.
    std::vector<std::string> labels;
    for (const auto& [bucket, stats] : report.buckets) {
        if (std::find(labels.begin(), labels.end(), bucket.label) == labels.end())
            labels.push_back(bucket.label);
    }
    auto label_rank = [](const std::string& label) {
        if (label == "all") return std::make_pair(0, label);
        if (label.size() == 2 && label[1] == 'D') return std::make_pair(1, label);
        if (label.rfind("other", 0) == 0) return std::make_pair(3, label);
        return std::make_pair(2, label);
    };
    std::sort(labels.begin(), labels.end(), [&](const auto& a, const auto& b) {
        return label_rank(a) < label_rank(b);
    });

    constexpr std::size_t kCell = 13;
    std::ostringstream out;
    out << "Task ";
    for (const std::string& label : labels) {
        out << ' ' << label;
        for (std::size_t i = label.size(); i < kCell; ++i) out << ' ';
    }
    out << '\n';
    for (OpClass op : {OpClass::Add, OpClass::Sub, OpClass::Mul, OpClass::Div}) {
        bool any = false;
        for (const auto& [bucket, stats] : report.buckets)
            if (bucket.op == op) any = true;
        if (!any) continue;
        out << op_class_name(op) << "  ";
        for (const std::string& label : labels) {
            auto it = report.buckets.find(EvalBucket{op, label});
            std::string cell = it == report.buckets.end() ? "-" : percent_pair(it->second);
            out << ' ' << cell;
            for (std::size_t i = cell.size(); i < kCell; ++i) out << ' ';
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace goatforge
