#include "goatforge/trace_parser.hpp"

#include <algorithm>
#include <istream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "goatforge/templater.hpp"

namespace goatforge {

namespace {

struct ParseFail {
    std::size_t offset;
    std::string expected;
};

[[noreturn]] void fail(std::size_t offset, std::string expected) {
    throw ParseFail{offset, std::move(expected)};
}

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;

    bool at_end() const { return pos >= text.size(); }
    char peek() const { return pos < text.size() ? text[pos] : '\0'; }

    bool lit(std::string_view s) {
        if (text.substr(pos, s.size()) != s) return false;
        pos += s.size();
        return true;
    }

    void expect(std::string_view s, const char* what) {
        if (!lit(s)) fail(pos, what);
    }
};

Numeral parse_numeral(Cursor& c) {
    std::size_t start = c.pos;
    while (!c.at_end() && c.peek() >= '0' && c.peek() <= '9') ++c.pos;
    if (c.pos == start) fail(start, "a decimal number");
    std::string_view digits = c.text.substr(start, c.pos - start);
    if (digits.size() > 1 && digits.front() == '0') fail(start, "a number without leading zeros");
    return *Numeral::parse(digits);
}

// Both render styles: " * " / " × " and " / " / " ÷ ".
bool eat_mul_op(Cursor& c) { return c.lit(" * ") || c.lit(" × "); }
bool eat_div_op(Cursor& c) { return c.lit(" / ") || c.lit(" ÷ "); }

Numeral sum_of(const std::vector<Numeral>& values) {
    Numeral total;
    for (const Numeral& v : values) total = add(total, v);
    return total;
}

bool place_value_term(const Numeral& n) {
    return n.nonzero_digit_count() == 1;
}

// ----- multiplication chain ------------------------------------------------

struct Seg {
    enum Kind { Single, Pair, Split, Expand, Sum } kind = Single;
    std::vector<Numeral> values;                         // Single/Sum
    std::vector<std::pair<Numeral, Numeral>> pairs;      // Pair/Expand
    Numeral kept;                                        // Split
    std::vector<Numeral> terms;                          // Split
};

Seg parse_mult_segment(std::string_view view) {
    Cursor c{view};

    struct Term {
        Numeral head;
        std::optional<Numeral> factor;
        std::vector<Numeral> paren_terms;
    };
    std::vector<Term> parsed;
    bool saw_paren = false;
    for (;;) {
        Term term;
        term.head = parse_numeral(c);
        if (eat_mul_op(c)) {
            if (c.peek() == '(') {
                ++c.pos;
                term.paren_terms.push_back(parse_numeral(c));
                while (c.lit(" + ")) term.paren_terms.push_back(parse_numeral(c));
                if (!c.lit(")")) fail(c.pos, "')'");
                if (term.paren_terms.size() < 2) fail(c.pos, "at least two split terms");
                saw_paren = true;
            } else {
                term.factor = parse_numeral(c);
            }
        }
        parsed.push_back(std::move(term));
        if (!c.lit(" + ")) break;
    }
    if (!c.at_end()) fail(c.pos, "end of segment");

    Seg seg;
    if (saw_paren) {
        if (parsed.size() != 1) fail(0, "a lone split form in its segment");
        seg.kind = Seg::Split;
        seg.kept = parsed[0].head;
        seg.terms = std::move(parsed[0].paren_terms);
        return seg;
    }
    bool any_factor = false;
    bool all_factor = true;
    for (const Term& t : parsed) {
        if (t.factor)
            any_factor = true;
        else
            all_factor = false;
    }
    if (any_factor && !all_factor) fail(0, "a segment of uniform terms");
    if (any_factor) {
        if (parsed.size() == 1) {
            seg.kind = Seg::Pair;
            seg.pairs.emplace_back(parsed[0].head, *parsed[0].factor);
        } else {
            seg.kind = Seg::Expand;
            for (Term& t : parsed) seg.pairs.emplace_back(std::move(t.head), std::move(*t.factor));
        }
        return seg;
    }
    if (parsed.size() == 1) {
        seg.kind = Seg::Single;
        seg.values.push_back(std::move(parsed[0].head));
    } else {
        seg.kind = Seg::Sum;
        for (Term& t : parsed) seg.values.push_back(std::move(t.head));
    }
    return seg;
}

void require_place_terms(const std::vector<Numeral>& terms, std::size_t offset) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (!place_value_term(terms[i])) fail(offset, "a place-value term (one non-zero digit)");
        if (i > 0 && cmp(terms[i], terms[i - 1]) != Ord::Less)
            fail(offset, "strictly decreasing place-value terms");
    }
}

MultTrace trace_from_mult_claims(const MultClaims& claims) {
    MultTrace trace;
    trace.extraction = claims.extraction;
    trace.kept = claims.split_kept ? *claims.split_kept : claims.expand_pairs.at(0).first;
    trace.split_terms = !claims.split_terms.empty() ? claims.split_terms : [&] {
        std::vector<Numeral> terms;
        for (const auto& [kept, term] : claims.expand_pairs) terms.push_back(term);
        return terms;
    }();
    trace.products = claims.product_values;
    trace.result = claims.fold_segments.back().front();
    if (claims.fold_segments.size() == claims.product_values.size() - 1) {
        for (const auto& seg : claims.fold_segments) trace.partial_sums.push_back(seg.front());
    } else {
        // Folds were suppressed in the text; rebuild them from the claimed
        // products so the reconstruction matches what the generator held.
        Numeral running = add(trace.products.at(0), trace.products.at(1));
        trace.partial_sums.push_back(running);
        for (std::size_t i = 2; i < trace.products.size(); ++i) {
            running = add(running, trace.products[i]);
            trace.partial_sums.push_back(running);
        }
    }
    return trace;
}

ParsedCompletion assemble_mult_chain(const std::vector<Seg>& segments,
                                     const std::vector<std::size_t>& offsets) {
    std::size_t idx = 0;
    auto kind = [&](std::size_t i) { return segments[i].kind; };

    // Direct-answer shapes: "a * b = P" and bare "P".
    if (segments.size() == 1 && kind(0) == Seg::Single)
        return DirectAnswer{std::nullopt, 0, segments[0].values[0].str()};
    if (segments.size() == 2 && kind(0) == Seg::Pair && kind(1) == Seg::Single) {
        DirectAnswer direct;
        direct.restated_operands = segments[0].pairs[0];
        direct.op = '*';
        direct.answer = segments[1].values[0].str();
        return direct;
    }

    MultClaims claims;
    if (idx < segments.size() && kind(idx) == Seg::Pair) {
        claims.extraction = segments[idx].pairs[0];
        ++idx;
    }
    if (idx < segments.size() && kind(idx) == Seg::Split) {
        claims.split_kept = segments[idx].kept;
        claims.split_terms = segments[idx].terms;
        require_place_terms(claims.split_terms, offsets[idx]);
        ++idx;
    }
    if (idx < segments.size() && kind(idx) == Seg::Expand) {
        claims.expand_pairs = segments[idx].pairs;
        std::vector<Numeral> terms;
        for (const auto& [kept, term] : claims.expand_pairs) terms.push_back(term);
        require_place_terms(terms, offsets[idx]);
        ++idx;
    }
    if (!claims.split_kept && claims.expand_pairs.empty())
        fail(idx < offsets.size() ? offsets[idx] : 0, "a split or expansion segment");

    if (idx >= segments.size() || kind(idx) != Seg::Sum)
        fail(idx < offsets.size() ? offsets[idx] : 0, "the products segment");
    claims.product_values = segments[idx].values;
    ++idx;

    while (idx < segments.size() && kind(idx) == Seg::Sum) {
        claims.fold_segments.push_back(segments[idx].values);
        ++idx;
    }
    if (idx != segments.size() - 1 || kind(idx) != Seg::Single)
        fail(idx < offsets.size() ? offsets[idx] : 0, "the final result segment");
    claims.fold_segments.push_back(segments[idx].values);

    return MultParse{trace_from_mult_claims(claims), claims};
}

ParsedCompletion parse_mult_completion(std::string_view text) {
    std::vector<Seg> segments;
    std::vector<std::size_t> offsets;
    std::size_t pos = 0;
    for (;;) {
        std::size_t next = text.find(" = ", pos);
        std::string_view piece =
            next == std::string_view::npos ? text.substr(pos) : text.substr(pos, next - pos);
        offsets.push_back(pos);
        try {
            segments.push_back(parse_mult_segment(piece));
        } catch (ParseFail& f) {
            f.offset += pos;
            throw;
        }
        if (next == std::string_view::npos) break;
        pos = next + 3;
    }
    return assemble_mult_chain(segments, offsets);
}

// ----- division trace -------------------------------------------------------

DivLineClaim parse_div_line(std::string_view line) {
    Cursor c{line};

    DivLineClaim claim;
    claim.remainder_in = parse_numeral(c);
    c.expect(" - ", "' - '");
    claim.divisor = parse_numeral(c);
    if (!eat_mul_op(c)) fail(c.pos, "' * '");
    claim.multiple = parse_numeral(c);
    if (!place_value_term(claim.multiple)) fail(c.pos, "a q*10^j multiple");
    c.expect(" = ", "' = '");
    Numeral first = parse_numeral(c);
    if (c.lit(" - ")) {
        Numeral product = parse_numeral(c);
        claim.middle = std::make_pair(std::move(first), std::move(product));
        c.expect(" = ", "' = '");
        claim.remainder_out = parse_numeral(c);
    } else {
        claim.remainder_out = std::move(first);
    }
    if (!c.at_end()) fail(c.pos, "end of line");
    return claim;
}

int multiple_digit(const Numeral& multiple) { return multiple.str().front() - '0'; }
std::size_t multiple_power(const Numeral& multiple) { return multiple.digit_count() - 1; }

ParsedCompletion parse_div_trace(std::string_view text) {
    std::vector<std::string_view> lines;
    std::vector<std::size_t> offsets;
    std::size_t pos = 0;
    for (;;) {
        std::size_t next = text.find('\n', pos);
        offsets.push_back(pos);
        lines.push_back(next == std::string_view::npos ? text.substr(pos)
                                                       : text.substr(pos, next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    if (lines.size() < 2) fail(0, "at least one step line and the closing line");

    DivClaims claims;
    for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
        try {
            claims.lines.push_back(parse_div_line(lines[i]));
        } catch (ParseFail& f) {
            f.offset += offsets[i];
            throw;
        }
    }

    try {
        Cursor c{lines.back()};
        c.expect("Therefore, ", "'Therefore, '");
        claims.dividend = parse_numeral(c);
        if (!eat_div_op(c)) fail(c.pos, "' / '");
        claims.divisor = parse_numeral(c);
        c.expect(" = ", "' = '");
        claims.quotient = parse_numeral(c);
        if (c.lit(" R ")) {
            claims.remainder = parse_numeral(c);
            if (claims.remainder->is_zero())
                fail(c.pos, "a non-zero remainder (R 0 is never written)");
        }
        if (!c.at_end()) fail(c.pos, "end of text");
    } catch (ParseFail& f) {
        f.offset += offsets.back();
        throw;
    }

    DivTrace trace;
    trace.dividend = claims.dividend;
    trace.divisor = claims.divisor;
    trace.quotient = claims.quotient;
    trace.final_remainder = claims.remainder.value_or(Numeral{});
    for (const DivLineClaim& line : claims.lines) {
        DivStep step;
        step.remainder_in = line.remainder_in;
        step.q_digit = multiple_digit(line.multiple);
        step.power = multiple_power(line.multiple);
        step.product = line.middle ? line.middle->second : mul(line.divisor, line.multiple);
        step.remainder_out = line.remainder_out;
        trace.steps.push_back(std::move(step));
    }
    return DivParse{std::move(trace), std::move(claims)};
}

// ----- direct answers -------------------------------------------------------

std::string parse_signed_numeral(Cursor& c) {
    bool negative = c.lit("-");
    Numeral magnitude = parse_numeral(c);
    if (negative && magnitude.is_zero()) fail(c.pos, "no negative zero");
    return negative ? "-" + magnitude.str() : magnitude.str();
}

std::string parse_quotient_remainder(Cursor& c) {
    Numeral quotient = parse_numeral(c);
    std::string answer = quotient.str();
    if (c.lit(" R ")) {
        Numeral remainder = parse_numeral(c);
        if (remainder.is_zero()) fail(c.pos, "a non-zero remainder (R 0 is never written)");
        answer += " R " + remainder.str();
    }
    return answer;
}

ParsedCompletion parse_direct_binary(TaskKind task, std::string_view text) {
    Cursor c{text};
    DirectAnswer direct;

    char op = 0;
    bool (*eat_op)(Cursor&) = nullptr;
    switch (task) {
        case TaskKind::Addition: op = '+'; break;
        case TaskKind::Subtraction: op = '-'; break;
        case TaskKind::MulN1: op = '*'; eat_op = eat_mul_op; break;
        case TaskKind::DivN1:
        case TaskKind::DivNM: op = '/'; eat_op = eat_div_op; break;
        default: break;
    }

    // Restated form: "a op b = answer". Probe with a scratch cursor.
    Cursor probe = c;
    bool restated = false;
    try {
        Numeral a = parse_numeral(probe);
        bool op_ok = eat_op ? eat_op(probe)
                            : probe.lit(std::string(" ") + op + " ");
        if (op_ok) {
            Numeral b = parse_numeral(probe);
            if (probe.lit(" = ")) {
                direct.restated_operands = std::make_pair(std::move(a), std::move(b));
                direct.op = op;
                restated = true;
                c = probe;
            }
        }
    } catch (const ParseFail&) {
        // fall through to the bare-answer form
    }
    (void)restated;

    switch (task) {
        case TaskKind::Addition:
        case TaskKind::MulN1:
            direct.answer = parse_numeral(c).str();
            break;
        case TaskKind::Subtraction:
            direct.answer = parse_signed_numeral(c);
            break;
        case TaskKind::DivN1:
        case TaskKind::DivNM:
            direct.answer = parse_quotient_remainder(c);
            break;
        default:
            fail(c.pos, "a direct-answer task");
    }
    if (!c.at_end()) fail(c.pos, "end of text");
    return direct;
}

ParsedCompletion parse_simple_task(TaskKind task, std::string_view text) {
    Cursor c{text};
    DirectAnswer direct;
    switch (task) {
        case TaskKind::Copying:
            parse_numeral(c);
            break;
        case TaskKind::Split: {
            parse_numeral(c);
            while (c.lit(" + ")) parse_numeral(c);
            break;
        }
        case TaskKind::Comparison: {
            parse_numeral(c);
            if (!c.lit(">") && !c.lit("<") && !c.lit("=")) fail(c.pos, "'<', '>' or '='");
            parse_numeral(c);
            break;
        }
        case TaskKind::Ordering: {
            parse_numeral(c);
            while (c.lit(", ")) parse_numeral(c);
            break;
        }
        default:
            fail(0, "a simple task");
    }
    if (!c.at_end()) fail(c.pos, "end of text");
    direct.answer = std::string(text);
    return direct;
}

std::string_view trim(std::string_view text, std::size_t& leading) {
    std::size_t begin = text.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) {
        leading = text.size();
        return {};
    }
    std::size_t end = text.find_last_not_of(" \t\r\n");
    leading = begin;
    return text.substr(begin, end - begin + 1);
}

}  // namespace

std::string_view error_class_name(ErrorClass c) {
    switch (c) {
        case ErrorClass::AlignmentError: return "alignment_error";
        case ErrorClass::CopyError: return "copy_error";
        case ErrorClass::IntermediateProductError: return "intermediate_product_error";
        case ErrorClass::FinalAnswerError: return "final_answer_error";
        case ErrorClass::FormatError: return "format_error";
    }
    return "?";
}

ParseOutcome parse_completion(TaskKind task, std::string_view text) {
    std::size_t leading = 0;
    std::string_view body = trim(text, leading);
    ParseOutcome outcome;
    if (body.empty()) {
        outcome.error = ParseError{leading, "a non-empty completion"};
        return outcome;
    }
    try {
        switch (task) {
            case TaskKind::MulNM:
                outcome.value = parse_mult_completion(body);
                break;
            case TaskKind::DivNM:
                if (body.find('\n') != std::string_view::npos ||
                    body.substr(0, 10) == "Therefore,")
                    outcome.value = parse_div_trace(body);
                else
                    outcome.value = parse_direct_binary(task, body);
                break;
            case TaskKind::Addition:
            case TaskKind::Subtraction:
            case TaskKind::MulN1:
            case TaskKind::DivN1:
                outcome.value = parse_direct_binary(task, body);
                break;
            case TaskKind::Copying:
            case TaskKind::Split:
            case TaskKind::Comparison:
            case TaskKind::Ordering:
                outcome.value = parse_simple_task(task, body);
                break;
        }
    } catch (const ParseFail& f) {
        outcome.error = ParseError{leading + f.offset, f.expected};
    }
    if (!outcome.value && !outcome.error) outcome.error = ParseError{leading, "a known task"};
    return outcome;
}

namespace {

struct Checker {
    VerifyReport report;

    void check(bool ok, ErrorClass cls) {
        std::size_t index = report.steps_total++;
        if (ok) return;
        ++report.steps_failed;
        if (!report.first_failure) {
            report.first_failure = index;
            report.error_class = cls;
        }
    }

    // The final-answer comparison is not an intermediate step: it only
    // sets the class when every step held.
    void final_check(bool ok) {
        if (!ok && !report.error_class) report.error_class = ErrorClass::FinalAnswerError;
    }
};

void verify_mult(const MultParse& parsed, const ProblemInstance* expected, Checker& ck) {
    const MultClaims& claims = parsed.claims;

    std::optional<std::pair<Numeral, Numeral>> ref = claims.extraction;
    if (expected && expected->operands.size() == 2) {
        auto stated = std::make_pair(expected->operands[0], expected->operands[1]);
        if (claims.extraction) ck.check(*claims.extraction == stated, ErrorClass::CopyError);
        ref = stated;
    }

    Numeral kept = claims.split_kept ? *claims.split_kept : claims.expand_pairs.at(0).first;
    std::vector<Numeral> terms = !claims.split_terms.empty() ? claims.split_terms : [&] {
        std::vector<Numeral> t;
        for (const auto& [k, term] : claims.expand_pairs) t.push_back(term);
        return t;
    }();
    Numeral split_value = sum_of(terms);

    if (ref) {
        bool kept_known = kept == ref->first || kept == ref->second;
        ck.check(kept_known, ErrorClass::CopyError);
        if (kept_known) {
            const Numeral& other = kept == ref->first ? ref->second : ref->first;
            ck.check(split_value == other, ErrorClass::AlignmentError);
        }
    }

    if (claims.split_kept && !claims.expand_pairs.empty()) {
        ck.check(claims.expand_pairs.size() == claims.split_terms.size(), ErrorClass::CopyError);
        std::size_t n = std::min(claims.expand_pairs.size(), claims.split_terms.size());
        for (std::size_t i = 0; i < n; ++i) {
            ck.check(claims.expand_pairs[i].first == *claims.split_kept, ErrorClass::CopyError);
            ck.check(claims.expand_pairs[i].second == claims.split_terms[i],
                     ErrorClass::CopyError);
        }
    }

    ck.check(claims.product_values.size() == terms.size(), ErrorClass::CopyError);
    std::size_t n = std::min(claims.product_values.size(), terms.size());
    for (std::size_t i = 0; i < n; ++i)
        ck.check(claims.product_values[i] == mul(kept, terms[i]),
                 ErrorClass::IntermediateProductError);

    const std::vector<Numeral>* prev = &claims.product_values;
    for (const auto& fold : claims.fold_segments) {
        if (prev->size() >= 2 && fold.size() == prev->size() - 1) {
            ck.check(fold[0] == add((*prev)[0], (*prev)[1]), ErrorClass::AlignmentError);
            for (std::size_t j = 1; j < fold.size(); ++j)
                ck.check(fold[j] == (*prev)[j + 1], ErrorClass::CopyError);
        } else {
            ck.check(sum_of(fold) == sum_of(*prev), ErrorClass::AlignmentError);
        }
        prev = &fold;
    }

    const Numeral& result = claims.fold_segments.back().front();
    if (ref)
        ck.final_check(result == mul(ref->first, ref->second));
    else
        ck.final_check(result == mul(kept, split_value));
    ck.report.extracted_answer = result.str();
}

void verify_div(const DivParse& parsed, const ProblemInstance* expected, Checker& ck) {
    const DivClaims& claims = parsed.claims;

    if (expected && expected->operands.size() == 2) {
        ck.check(claims.dividend == expected->operands[0], ErrorClass::CopyError);
        ck.check(claims.divisor == expected->operands[1], ErrorClass::CopyError);
    }
    if (claims.divisor.is_zero()) {
        ck.check(false, ErrorClass::FinalAnswerError);
        return;
    }

    Numeral quotient_sum;
    const Numeral* prev_out = nullptr;
    if (!claims.lines.empty())
        ck.check(claims.lines.front().remainder_in == claims.dividend, ErrorClass::CopyError);

    for (const DivLineClaim& line : claims.lines) {
        ck.check(line.divisor == claims.divisor, ErrorClass::CopyError);
        if (prev_out) ck.check(line.remainder_in == *prev_out, ErrorClass::CopyError);

        Numeral true_product = mul(line.divisor, line.multiple);
        Numeral claimed_product = true_product;
        if (line.middle) {
            ck.check(line.middle->first == line.remainder_in, ErrorClass::CopyError);
            ck.check(line.middle->second == true_product, ErrorClass::IntermediateProductError);
            claimed_product = line.middle->second;
        }

        SignedNumeral diff = sub(line.remainder_in, claimed_product);
        ck.check(!diff.negative && diff.magnitude == line.remainder_out,
                 ErrorClass::AlignmentError);

        // Maximality of q*10^j: one more multiple in this position, or a
        // higher position, would overshoot the remainder.
        std::size_t power = multiple_power(line.multiple);
        Numeral step_weight = mul(line.divisor, pow10(power));
        bool maximal = cmp(true_product, line.remainder_in) != Ord::Greater &&
                       cmp(add(true_product, step_weight), line.remainder_in) == Ord::Greater &&
                       cmp(mul(step_weight, Numeral::from_u64(10)), line.remainder_in) ==
                           Ord::Greater;
        ck.check(maximal, ErrorClass::AlignmentError);

        quotient_sum = add(quotient_sum, mul(Numeral::from_u64(
                                                 static_cast<std::uint64_t>(
                                                     multiple_digit(line.multiple))),
                                             pow10(power)));
        prev_out = &line.remainder_out;
    }

    Numeral last_remainder = prev_out ? *prev_out : claims.dividend;
    ck.check(cmp(last_remainder, claims.divisor) == Ord::Less, ErrorClass::AlignmentError);

    if (claims.remainder)
        ck.check(*claims.remainder == last_remainder, ErrorClass::CopyError);

    DivModResult oracle = divmod(claims.dividend, claims.divisor);
    bool quotient_ok = claims.quotient == quotient_sum && claims.quotient == oracle.quotient;
    bool remainder_ok = claims.remainder ? *claims.remainder == oracle.remainder
                                         : oracle.remainder.is_zero();
    ck.final_check(quotient_ok && remainder_ok);

    std::string answer = claims.quotient.str();
    if (claims.remainder) answer += " R " + claims.remainder->str();
    ck.report.extracted_answer = answer;
}

std::string oracle_answer_for(char op, const Numeral& a, const Numeral& b) {
    switch (op) {
        case '+': return add(a, b).str();
        case '-': return sub(a, b).str();
        case '*': return mul(a, b).str();
        case '/': {
            DivModResult qr = divmod(a, b);
            if (qr.remainder.is_zero()) return qr.quotient.str();
            return qr.quotient.str() + " R " + qr.remainder.str();
        }
        default: return {};
    }
}

void verify_direct(const DirectAnswer& direct, const ProblemInstance* expected, Checker& ck) {
    ck.report.extracted_answer = direct.answer;
    if (expected) {
        if (direct.restated_operands && expected->operands.size() == 2) {
            auto stated = std::make_pair(expected->operands[0], expected->operands[1]);
            ck.check(*direct.restated_operands == stated, ErrorClass::CopyError);
        }
        ck.final_check(direct.answer == expected->answer);
        return;
    }
    if (direct.restated_operands && direct.op) {
        if (direct.op == '/' && direct.restated_operands->second.is_zero()) {
            ck.final_check(false);
            return;
        }
        ck.final_check(direct.answer == oracle_answer_for(direct.op,
                                                          direct.restated_operands->first,
                                                          direct.restated_operands->second));
    }
}

}  // namespace

VerifyReport verify_trace(const ParsedCompletion& parsed, const ProblemInstance* expected) {
    Checker ck;
    if (const auto* mult = std::get_if<MultParse>(&parsed))
        verify_mult(*mult, expected, ck);
    else if (const auto* div = std::get_if<DivParse>(&parsed))
        verify_div(*div, expected, ck);
    else
        verify_direct(std::get<DirectAnswer>(parsed), expected, ck);
    return ck.report;
}

VerifyReport verify_completion(TaskKind task, std::string_view text,
                               const ProblemInstance* expected) {
    ParseOutcome outcome = parse_completion(task, text);
    if (!outcome.ok()) {
        VerifyReport report;
        report.parse_ok = false;
        report.error_class = ErrorClass::FormatError;
        return report;
    }
    return verify_trace(*outcome.value, expected);
}

namespace {

std::vector<std::string> digit_runs(const std::string& text) {
    std::vector<std::string> runs;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] >= '0' && text[i] <= '9') {
            std::size_t start = i;
            while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
            runs.push_back(text.substr(start, i - start));
        } else {
            ++i;
        }
    }
    return runs;
}

// Recovers the instance from a meta-less record: normalize augmentation
// away, pull the operand digit runs out of the instruction, and classify
// the task from the operator and the output shape.
std::optional<ProblemInstance> infer_instance(const Record& record) {
    std::string instruction = record.instruction;
    if (instruction.size() >= kAnswerSuffix.size() &&
        instruction.compare(instruction.size() - kAnswerSuffix.size(), kAnswerSuffix.size(),
                            kAnswerSuffix) == 0)
        instruction.resize(instruction.size() - kAnswerSuffix.size());
    std::string stripped = strip_augmentation(instruction);

    char op = 0;
    for (std::size_t i = 1; i + 1 < stripped.size() && !op; ++i) {
        char c = stripped[i];
        if ((c == '+' || c == '-' || c == '*' || c == '/') && stripped[i - 1] == ' ' &&
            stripped[i + 1] == ' ' && i >= 2 && stripped[i - 2] >= '0' &&
            stripped[i - 2] <= '9' && i + 2 < stripped.size() && stripped[i + 2] >= '0' &&
            stripped[i + 2] <= '9')
            op = c;
    }

    std::vector<std::string> runs = digit_runs(stripped);
    std::vector<Numeral> operands;
    for (const std::string& run : runs) {
        auto n = Numeral::parse(run);
        if (!n) return std::nullopt;
        operands.push_back(*n);
    }

    TaskKind task;
    const std::string& output = record.output;
    if (op == '+') {
        task = TaskKind::Addition;
    } else if (op == '-') {
        task = TaskKind::Subtraction;
    } else if (op == '*') {
        if (operands.size() == 2 && operands[1].digit_count() == 1)
            task = TaskKind::MulN1;
        else
            task = TaskKind::MulNM;
    } else if (op == '/') {
        if (operands.size() == 2 && operands[1].digit_count() == 1)
            task = TaskKind::DivN1;
        else
            task = TaskKind::DivNM;
    } else if (operands.size() == 1) {
        task = output.find(" + ") != std::string::npos ? TaskKind::Split : TaskKind::Copying;
    } else if (operands.size() >= 2) {
        bool comparison = output.find('<') != std::string::npos ||
                          output.find('>') != std::string::npos ||
                          output.find('=') != std::string::npos;
        task = comparison && operands.size() == 2 ? TaskKind::Comparison : TaskKind::Ordering;
    } else {
        return std::nullopt;
    }

    if (operands.empty()) return std::nullopt;
    if (task != TaskKind::Comparison && task != TaskKind::Ordering &&
        task != TaskKind::Copying && task != TaskKind::Split && operands.size() != 2)
        return std::nullopt;

    ProblemInstance inst;
    inst.task = task;
    inst.answer = canonical_answer(task, operands);
    inst.operands = std::move(operands);
    return inst;
}

ProblemInstance instance_from_meta(const RecordMeta& meta) {
    ProblemInstance inst;
    inst.task = meta.task;
    for (const std::string& text : meta.operands) inst.operands.emplace_back(text);
    inst.answer = meta.answer;
    inst.seed_index = meta.seed_index;
    return inst;
}

}  // namespace

VerifyStats verify_records(std::istream& jsonl) {
    VerifyStats stats;
    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(jsonl, line)) {
        ++line_no;
        if (line.empty()) continue;
        Record record;
        try {
            record = record_from_jsonl(line);
        } catch (const std::exception& e) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
        }

        std::optional<ProblemInstance> expected;
        if (record.meta)
            expected = instance_from_meta(*record.meta);
        else
            expected = infer_instance(record);

        ++stats.records;
        std::string task_key =
            expected ? std::string(task_name(expected->task)) : std::string("unknown");
        TaskVerifyStats& task_stats = stats.per_task[task_key];
        ++task_stats.records;

        VerifyReport report;
        if (!expected) {
            report.parse_ok = false;
            report.error_class = ErrorClass::FormatError;
        } else {
            report = verify_completion(expected->task, record.output, &*expected);
        }

        if (report.accepted()) {
            ++stats.passed;
            ++task_stats.passed;
        } else {
            ++stats.failed;
            ++task_stats.failures[report.error_class.value_or(ErrorClass::FormatError)];
            if (!stats.first_failure_line) stats.first_failure_line = line_no;
        }
    }
    return stats;
}

std::string verify_stats_json(const VerifyStats& stats) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json per_task;
    for (const auto& [task, ts] : stats.per_task) {
        nlohmann::ordered_json entry;
        entry["records"] = ts.records;
        entry["passed"] = ts.passed;
        nlohmann::ordered_json failures;
        for (const auto& [cls, count] : ts.failures)
            failures[std::string(error_class_name(cls))] = count;
        entry["failures"] = std::move(failures);
        per_task[task] = std::move(entry);
    }
    j["per_task"] = std::move(per_task);
    nlohmann::ordered_json totals;
    totals["records"] = stats.records;
    totals["passed"] = stats.passed;
    totals["failed"] = stats.failed;
    if (stats.first_failure_line) totals["first_failure_line"] = *stats.first_failure_line;
    j["totals"] = std::move(totals);
    return j.dump(2);
}

std::string verify_stats_table(const VerifyStats& stats) {
    std::ostringstream out;
    out << "task                 records    passed    failed\n";
    for (const auto& [task, ts] : stats.per_task) {
        std::uint64_t failed = ts.records - ts.passed;
        out << task;
        for (std::size_t i = task.size(); i < 21; ++i) out << ' ';
        std::string r = std::to_string(ts.records);
        std::string p = std::to_string(ts.passed);
        std::string f = std::to_string(failed);
        for (std::size_t i = r.size(); i < 7; ++i) out << ' ';
        out << r << "   ";
        for (std::size_t i = p.size(); i < 7; ++i) out << ' ';
        out << p << "   ";
        for (std::size_t i = f.size(); i < 7; ++i) out << ' ';
        out << f << "\n";
    }
    out << "total                ";
    std::string r = std::to_string(stats.records);
    std::string p = std::to_string(stats.passed);
    std::string f = std::to_string(stats.failed);
    for (std::size_t i = r.size(); i < 7; ++i) out << ' ';
    out << r << "   ";
    for (std::size_t i = p.size(); i < 7; ++i) out << ' ';
    out << p << "   ";
    for (std::size_t i = f.size(); i < 7; ++i) out << ' ';
    out << f << "\n";
    return out.str();
}

}  // namespace goatforge
