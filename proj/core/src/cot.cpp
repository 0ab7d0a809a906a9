#include "goatforge/cot.hpp"

#include <algorithm>
#include <stdexcept>

namespace goatforge {

std::optional<std::string> AblationConfig::check() const {
    if (no_cot && (omit_split || omit_expansion || omit_term_by_term || omit_middle_product))
        return "no_cot excludes the per-step ablation flags";
    if (omit_split && omit_expansion)
        return "omit_split and omit_expansion cannot both be set (one step at a time)";
    return std::nullopt;
}

std::string_view format_mode_name(FormatMode mode) {
    return mode == FormatMode::Natural ? "natural" : "synthetic";
}

std::optional<FormatMode> format_mode_from_name(std::string_view name) {
    if (name == "natural") return FormatMode::Natural;
    if (name == "synthetic") return FormatMode::Synthetic;
    return std::nullopt;
}

std::string_view render_style_name(RenderStyle style) {
    return style == RenderStyle::Ascii ? "ascii" : "paper-typeset";
}

std::optional<RenderStyle> render_style_from_name(std::string_view name) {
    if (name == "ascii") return RenderStyle::Ascii;
    if (name == "paper-typeset") return RenderStyle::PaperTypeset;
    return std::nullopt;
}

namespace {

const char* mul_glyph(RenderStyle style) {
    return style == RenderStyle::Ascii ? "*" : "×";
}

const char* div_glyph(RenderStyle style) {
    return style == RenderStyle::Ascii ? "/" : "÷";
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

}  // namespace

std::vector<Numeral> split_place_values(const Numeral& n) {
    if (n.is_zero()) throw std::invalid_argument("cannot split zero into place values");
    std::vector<Numeral> terms;
    const std::string& digits = n.str();
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (digits[i] == '0') continue;
        std::string term(digits.size() - i, '0');
        term[0] = digits[i];
        terms.emplace_back(std::move(term));
    }
    return terms;
}

std::pair<Numeral, Numeral> choose_split_operand(const Numeral& a, const Numeral& b) {
    if (a.nonzero_digit_count() < b.nonzero_digit_count()) return {b, a};
    return {a, b};
}

MultTrace gen_mult_trace(const Numeral& a, const Numeral& b) {
    if (a.digit_count() < 2 || b.digit_count() < 2)
        throw std::invalid_argument("multiplication trace needs two multi-digit factors");
    if (detect_special_case(TaskKind::MulNM, a, b))
        throw std::invalid_argument(
            "single-non-zero-digit factor takes a direct answer, not a trace");

    MultTrace trace;
    trace.extraction = std::make_pair(a, b);
    auto [kept, split] = choose_split_operand(a, b);
    trace.kept = kept;
    trace.split_terms = split_place_values(split);

    trace.products.reserve(trace.split_terms.size());
    for (const Numeral& term : trace.split_terms) trace.products.push_back(mul(kept, term));

    Numeral running = add(trace.products[0], trace.products[1]);
    trace.partial_sums.push_back(running);
    for (std::size_t i = 2; i < trace.products.size(); ++i) {
        running = add(running, trace.products[i]);
        trace.partial_sums.push_back(running);
    }
    trace.result = running;
    return trace;
}

DivTrace gen_div_trace(const Numeral& a, const Numeral& b) {
    if (b.is_zero()) throw std::domain_error("division by zero");
    if (b.digit_count() < 2)
        throw std::invalid_argument("division trace needs a multi-digit divisor");
    Ord c = cmp(a, b);
    if (c != Ord::Greater)
        throw std::invalid_argument("dividend <= divisor takes a direct answer, not a trace");

    DivTrace trace;
    trace.dividend = a;
    trace.divisor = b;

    Numeral remainder = a;
    std::string quotient_digits;
    std::optional<std::size_t> top_power;
    while (cmp(remainder, b) != Ord::Less) {
        // Largest j with divisor*10^j <= remainder, then the largest
        // digit q with divisor*q*10^j <= remainder.
        std::size_t power = remainder.digit_count() - b.digit_count();
        Numeral shifted = mul(b, pow10(power));
        if (cmp(shifted, remainder) == Ord::Greater) {
            --power;
            shifted = mul(b, pow10(power));
        }
        int q = 1;
        Numeral product = shifted;
        while (q < 9) {
            Numeral next = add(product, shifted);
            if (cmp(next, remainder) == Ord::Greater) break;
            product = next;
            ++q;
        }
        Numeral next_remainder = sub(remainder, product).magnitude;
        trace.steps.push_back(DivStep{remainder, q, power, product, next_remainder});

        if (!top_power) {
            top_power = power;
            quotient_digits.assign(power + 1, '0');
        }
        quotient_digits[*top_power - power] = static_cast<char>('0' + q);
        remainder = next_remainder;
    }

    trace.quotient = Numeral(quotient_digits);
    trace.final_remainder = remainder;
    return trace;
}

std::string canonical_answer(TaskKind task, const std::vector<Numeral>& operands) {
    switch (task) {
        case TaskKind::Copying:
            return operands.at(0).str();
        case TaskKind::Split: {
            std::vector<std::string> parts;
            for (const Numeral& term : split_place_values(operands.at(0)))
                parts.push_back(term.str());
            return join(parts, " + ");
        }
        case TaskKind::Comparison: {
            Ord c = cmp(operands.at(0), operands.at(1));
            const char* op = c == Ord::Less ? "<" : c == Ord::Greater ? ">" : "=";
            return operands.at(0).str() + op + operands.at(1).str();
        }
        case TaskKind::Ordering: {
            std::vector<Numeral> sorted = operands;
            std::sort(sorted.begin(), sorted.end());
            std::vector<std::string> parts;
            for (const Numeral& n : sorted) parts.push_back(n.str());
            return join(parts, ", ");
        }
        case TaskKind::Addition:
            return add(operands.at(0), operands.at(1)).str();
        case TaskKind::Subtraction:
            return sub(operands.at(0), operands.at(1)).str();
        case TaskKind::MulN1:
        case TaskKind::MulNM:
            return mul(operands.at(0), operands.at(1)).str();
        case TaskKind::DivN1:
        case TaskKind::DivNM: {
            DivModResult qr = divmod(operands.at(0), operands.at(1));
            if (qr.remainder.is_zero()) return qr.quotient.str();
            return qr.quotient.str() + " R " + qr.remainder.str();
        }
    }
    throw std::invalid_argument("unknown task");
}

std::string gen_direct_answer(const ProblemInstance& inst) {
    if (!learnable(inst.task) &&
        !detect_special_case(inst.task, inst.operands.at(0), inst.operands.at(1)))
        throw std::invalid_argument(
            "unlearnable instance without a special case has no direct answer");
    return canonical_answer(inst.task, inst.operands);
}

std::string render_mult_trace(const MultTrace& trace, const AblationConfig& abl,
                              RenderStyle style, FormatMode mode) {
    const std::string mul_op = std::string(" ") + mul_glyph(style) + " ";

    if (abl.no_cot) {
        if (mode == FormatMode::Synthetic) return trace.result.str();
        if (!trace.extraction)
            throw std::invalid_argument("natural rendering needs the extraction operands");
        return trace.extraction->first.str() + mul_op + trace.extraction->second.str() +
               " = " + trace.result.str();
    }

    std::vector<std::string> segments;

    if (mode == FormatMode::Natural) {
        if (!trace.extraction)
            throw std::invalid_argument("natural rendering needs the extraction operands");
        segments.push_back(trace.extraction->first.str() + mul_op +
                           trace.extraction->second.str());
    }

    if (!abl.omit_split) {
        std::vector<std::string> terms;
        for (const Numeral& t : trace.split_terms) terms.push_back(t.str());
        segments.push_back(trace.kept.str() + mul_op + "(" + join(terms, " + ") + ")");
    }

    if (!abl.omit_expansion) {
        std::vector<std::string> prods;
        for (const Numeral& t : trace.split_terms)
            prods.push_back(trace.kept.str() + mul_op + t.str());
        segments.push_back(join(prods, " + "));
    }

    {
        std::vector<std::string> values;
        for (const Numeral& p : trace.products) values.push_back(p.str());
        segments.push_back(join(values, " + "));
    }

    if (!abl.omit_term_by_term) {
        // Each fold adds the first two terms and copies the rest.
        for (std::size_t i = 0; i + 1 < trace.partial_sums.size(); ++i) {
            std::vector<std::string> values{trace.partial_sums[i].str()};
            for (std::size_t j = i + 2; j < trace.products.size(); ++j)
                values.push_back(trace.products[j].str());
            segments.push_back(join(values, " + "));
        }
    }

    segments.push_back(trace.result.str());
    return join(segments, " = ");
}

std::string render_div_trace(const DivTrace& trace, const AblationConfig& abl,
                             RenderStyle style, FormatMode mode) {
    const std::string mul_op = std::string(" ") + mul_glyph(style) + " ";
    const std::string div_op = std::string(" ") + div_glyph(style) + " ";

    std::string answer = trace.quotient.str();
    if (!trace.final_remainder.is_zero()) answer += " R " + trace.final_remainder.str();

    if (abl.no_cot) {
        if (mode == FormatMode::Synthetic) return answer;
        return trace.dividend.str() + div_op + trace.divisor.str() + " = " + answer;
    }

    std::string out;
    for (const DivStep& step : trace.steps) {
        Numeral multiple = mul(Numeral(std::string(1, static_cast<char>('0' + step.q_digit))),
                               pow10(step.power));
        out += step.remainder_in.str() + " - " + trace.divisor.str() + mul_op + multiple.str();
        if (!abl.omit_middle_product)
            out += " = " + step.remainder_in.str() + " - " + step.product.str();
        out += " = " + step.remainder_out.str() + "\n";
    }
    out += "Therefore, " + trace.dividend.str() + div_op + trace.divisor.str() + " = " + answer;
    return out;
}

}  // namespace goatforge
