#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "goatforge/numeral.hpp"
#include "goatforge/task.hpp"

namespace goatforge {

/// Which rendered segments are suppressed. The trace itself is always
/// fully computed; these flags act at render time only. no_cot wins over
/// everything and collapses the target to the bare equation.
struct AblationConfig {
    bool omit_split = false;
    bool omit_expansion = false;
    bool omit_term_by_term = false;
    bool omit_middle_product = false;
    bool no_cot = false;

    std::optional<std::string> check() const;
    bool operator==(const AblationConfig& other) const = default;
};

/// Operator glyphs in rendered text: Ascii emits "*" and "/",
/// PaperTypeset emits the typeset forms.
enum class RenderStyle { Ascii, PaperTypeset };

/// Natural targets restate the extracted equation; synthetic targets are
/// bare completions (the multiplication chain starts at the split form).
enum class FormatMode { Natural, Synthetic };

std::string_view format_mode_name(FormatMode mode);
std::optional<FormatMode> format_mode_from_name(std::string_view name);
std::string_view render_style_name(RenderStyle style);
std::optional<RenderStyle> render_style_from_name(std::string_view name);

struct MultTrace {
    /// Original operand order as extracted from the prompt; absent when
    /// the trace was parsed back from a synthetic-mode target.
    std::optional<std::pair<Numeral, Numeral>> extraction;
    Numeral kept;
    std::vector<Numeral> split_terms;
    std::vector<Numeral> products;
    std::vector<Numeral> partial_sums;
    Numeral result;

    bool operator==(const MultTrace& other) const = default;
};

struct DivStep {
    Numeral remainder_in;
    int q_digit = 0;           // 1..9
    std::size_t power = 0;     // exponent j of the 10^j weight
    Numeral product;           // divisor * q_digit * 10^power
    Numeral remainder_out;

    bool operator==(const DivStep& other) const = default;
};

struct DivTrace {
    Numeral dividend;
    Numeral divisor;
    std::vector<DivStep> steps;
    Numeral quotient;
    Numeral final_remainder;

    bool operator==(const DivTrace& other) const = default;
};

/// Place-value decomposition, zero digits omitted: 4536 -> [4000, 500, 30, 6].
/// Throws std::invalid_argument on zero.
std::vector<Numeral> split_place_values(const Numeral& n);

/// Picks the operand with fewer non-zero digits to split (shorter sum in
/// the expansion); a tie splits the second operand. Returns (kept, split).
std::pair<Numeral, Numeral> choose_split_operand(const Numeral& a, const Numeral& b);

/// Builds the full multiplication trace for a multi-digit pair. Inputs
/// that fall under a special case (single-non-zero-digit factor) or that
/// are n-digit-by-1-digit must be routed to a direct answer instead;
/// they throw std::invalid_argument here.
MultTrace gen_mult_trace(const Numeral& a, const Numeral& b);

/// Builds the slow-division trace: each step subtracts the largest
/// q*10^j multiple of the divisor from the running remainder. Requires
/// a > b and a multi-digit divisor; throws std::invalid_argument or
/// std::domain_error (zero divisor) otherwise.
DivTrace gen_div_trace(const Numeral& a, const Numeral& b);

/// The canonical final-answer text for any instance: plain numbers for
/// add/mul, signed for sub, "Q R r" (with " R r" dropped when r = 0) for
/// division, the comparison/ordering/split/copy forms for those tasks.
std::string canonical_answer(TaskKind task, const std::vector<Numeral>& operands);

/// Same as canonical_answer but enforces that the instance actually gets
/// a direct answer: learnable task, or a detected special case. Throws
/// std::invalid_argument for a plain unlearnable instance.
std::string gen_direct_answer(const ProblemInstance& inst);

std::string render_mult_trace(const MultTrace& trace, const AblationConfig& abl,
                              RenderStyle style, FormatMode mode);
std::string render_div_trace(const DivTrace& trace, const AblationConfig& abl,
                             RenderStyle style, FormatMode mode);

}  // namespace goatforge
