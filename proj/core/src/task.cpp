#include "goatforge/task.hpp"

#include <stdexcept>

#include "goatforge/numeral.hpp"

namespace goatforge {

bool learnable(TaskKind task) {
    return task != TaskKind::MulNM && task != TaskKind::DivNM;
}

std::string_view task_name(TaskKind task) {
    switch (task) {
        case TaskKind::Copying: return "copying";
        case TaskKind::Split: return "split";
        case TaskKind::Comparison: return "comparison";
        case TaskKind::Ordering: return "ordering";
        case TaskKind::Addition: return "addition";
        case TaskKind::Subtraction: return "subtraction";
        case TaskKind::MulN1: return "mul_n1";
        case TaskKind::DivN1: return "div_n1";
        case TaskKind::MulNM: return "mul_nm";
        case TaskKind::DivNM: return "div_nm";
    }
    return "?";
}

std::optional<TaskKind> task_from_name(std::string_view name) {
    for (TaskKind task : kAllTasks) {
        if (task_name(task) == name) return task;
    }
    return std::nullopt;
}

std::string_view special_case_name(SpecialCase c) {
    switch (c) {
        case SpecialCase::SingleNonzeroDigitFactor: return "single_nonzero_digit_factor";
        case SpecialCase::DividendEqualsDivisor: return "dividend_equals_divisor";
        case SpecialCase::DividendLessThanDivisor: return "dividend_less_than_divisor";
    }
    return "?";
}

std::optional<std::string> Settings::check() const {
    if (max_addsub_digits == 0 || max_product_digits == 0 || max_quotient_digits == 0 ||
        max_dividend_digits == 0)
        return "settings bounds must be positive";
    if (max_quotient_digits > max_dividend_digits)
        return "max_quotient_digits exceeds max_dividend_digits";
    return std::nullopt;
}

namespace {

bool is_single_digit(const Numeral& n) {
    return n.digit_count() == 1 && !n.is_zero();
}

std::optional<std::string> require_operands(const ProblemInstance& inst, std::size_t lo,
                                            std::size_t hi) {
    if (inst.operands.size() < lo || inst.operands.size() > hi)
        return std::string("operand count out of range for ") + std::string(task_name(inst.task));
    return std::nullopt;
}

}  // namespace

std::optional<std::string> validate_instance(const ProblemInstance& inst, const Settings& s) {
    if (auto err = s.check()) return err;

    switch (inst.task) {
        case TaskKind::Copying:
        case TaskKind::Split:
            if (auto err = require_operands(inst, 1, 1)) return err;
            if (inst.task == TaskKind::Split && inst.operands[0].is_zero())
                return "split operand must be positive";
            return std::nullopt;
        case TaskKind::Comparison:
            return require_operands(inst, 2, 2);
        case TaskKind::Ordering:
            return require_operands(inst, 2, 4);
        case TaskKind::Addition:
        case TaskKind::Subtraction: {
            if (auto err = require_operands(inst, 2, 2)) return err;
            for (const Numeral& n : inst.operands) {
                if (n.is_zero()) return "operand must be positive";
                if (n.digit_count() > s.max_addsub_digits) return "max_addsub_digits";
            }
            return std::nullopt;
        }
        case TaskKind::MulN1: {
            if (auto err = require_operands(inst, 2, 2)) return err;
            if (inst.operands[0].is_zero()) return "operand must be positive";
            if (!is_single_digit(inst.operands[1]))
                return "mul_n1 second operand must be a single digit 1-9";
            if (mul(inst.operands[0], inst.operands[1]).digit_count() > s.max_product_digits)
                return "max_product_digits";
            return std::nullopt;
        }
        case TaskKind::MulNM: {
            if (auto err = require_operands(inst, 2, 2)) return err;
            for (const Numeral& n : inst.operands)
                if (n.is_zero()) return "operand must be positive";
            if (mul(inst.operands[0], inst.operands[1]).digit_count() > s.max_product_digits)
                return "max_product_digits";
            return std::nullopt;
        }
        case TaskKind::DivN1: {
            if (auto err = require_operands(inst, 2, 2)) return err;
            if (inst.operands[0].is_zero()) return "operand must be positive";
            if (!is_single_digit(inst.operands[1]))
                return "div_n1 second operand must be a single digit 1-9";
            if (inst.operands[0].digit_count() > s.max_dividend_digits)
                return "max_dividend_digits";
            return std::nullopt;
        }
        case TaskKind::DivNM: {
            if (auto err = require_operands(inst, 2, 2)) return err;
            for (const Numeral& n : inst.operands)
                if (n.is_zero()) return "operand must be positive";
            if (inst.operands[0].digit_count() > s.max_dividend_digits)
                return "max_dividend_digits";
            if (divmod(inst.operands[0], inst.operands[1]).quotient.digit_count() >
                s.max_quotient_digits)
                return "max_quotient_digits";
            return std::nullopt;
        }
    }
    return "unknown task";
}

std::optional<SpecialCase> detect_special_case(TaskKind task, const Numeral& a,
                                               const Numeral& b) {
    if (task == TaskKind::MulNM) {
        if (a.nonzero_digit_count() == 1 || b.nonzero_digit_count() == 1)
            return SpecialCase::SingleNonzeroDigitFactor;
        return std::nullopt;
    }
    if (task == TaskKind::DivNM) {
        Ord c = cmp(a, b);
        if (c == Ord::Equal) return SpecialCase::DividendEqualsDivisor;
        if (c == Ord::Less) return SpecialCase::DividendLessThanDivisor;
        return std::nullopt;
    }
    throw std::invalid_argument("special cases are defined for mul_nm and div_nm only");
}

}  // namespace goatforge
