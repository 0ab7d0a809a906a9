#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "goatforge/numeral.hpp"

namespace goatforge {

/// The first eight kinds are learnable (direct-answer) tasks; the last
/// two are the multi-digit kinds that need decomposed targets.
enum class TaskKind {
    Copying,
    Split,
    Comparison,
    Ordering,
    Addition,
    Subtraction,
    MulN1,
    DivN1,
    MulNM,
    DivNM,
};

inline constexpr TaskKind kAllTasks[] = {
    TaskKind::Copying,  TaskKind::Split,       TaskKind::Comparison, TaskKind::Ordering,
    TaskKind::Addition, TaskKind::Subtraction, TaskKind::MulN1,      TaskKind::DivN1,
    TaskKind::MulNM,    TaskKind::DivNM,
};

bool learnable(TaskKind task);

std::string_view task_name(TaskKind task);
std::optional<TaskKind> task_from_name(std::string_view name);

/// Digit-count limits on generated operands. The add/sub bound applies
/// per operand; the product bound caps multiplication results; the
/// quotient/dividend bounds cap division.
struct Settings {
    std::size_t max_addsub_digits = 16;
    std::size_t max_product_digits = 12;
    std::size_t max_quotient_digits = 6;
    std::size_t max_dividend_digits = 12;

    std::optional<std::string> check() const;
};

struct ProblemInstance {
    TaskKind task = TaskKind::Addition;
    std::vector<Numeral> operands;
    std::string answer;
    std::uint64_t seed_index = 0;

    bool operator==(const ProblemInstance& other) const = default;
};

enum class SpecialCase {
    SingleNonzeroDigitFactor,
    DividendEqualsDivisor,
    DividendLessThanDivisor,
};

std::string_view special_case_name(SpecialCase c);

/// nullopt means the instance satisfies every active constraint;
/// otherwise the returned text names the violated bound.
std::optional<std::string> validate_instance(const ProblemInstance& inst, const Settings& s);

/// Multi-digit inputs that stay learnable and take a direct answer.
/// Only meaningful for MulNM/DivNM; throws std::invalid_argument otherwise.
std::optional<SpecialCase> detect_special_case(TaskKind task, const Numeral& a,
                                               const Numeral& b);

}  // namespace goatforge
