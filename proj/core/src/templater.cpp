#include "goatforge/templater.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace goatforge {

namespace {

const char* kDefaultPatterns[] = {
    "{arithmetic} = ",
    "What is {arithmetic}?",
    "Compute {arithmetic}",
    "Solve {arithmetic}",
    "Determine {arithmetic}",
    "Find {arithmetic}",
    "What is the result of {arithmetic}?",
    "Please help me calculate {arithmetic}.",
    "Solve the following problem: {arithmetic}",
    "I am looking for the value of {arithmetic}. Can you help?",
    "What is the numerical value of {arithmetic}?",
    "Help me obtain {arithmetic}",
    "Show me the result of {arithmetic}?",
    "Kindly calculate {arithmetic} for me.",
    "Determine the value for {arithmetic}.",
    "Can you please compute {arithmetic}?",
    "Find the numerical value of {arithmetic}?",
    "I would appreciate it if you could assist me in calculating {arithmetic}.",
    "Please work out {arithmetic}.",
    "What is the answer to {arithmetic}?",
};

bool placeholder_once(const std::string& pattern) {
    std::size_t first = pattern.find(kArithmeticPlaceholder);
    if (first == std::string::npos) return false;
    return pattern.find(kArithmeticPlaceholder, first + 1) == std::string::npos;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// An operator char qualifies for augmentation when the nearest
// non-space neighbors on both sides are digits, which keeps template
// punctuation and hyphenated words out of reach.
bool digit_flanked(const std::string& text, std::size_t pos) {
    std::size_t left = pos;
    while (left > 0 && text[left - 1] == ' ') --left;
    if (left == 0 || !is_digit(text[left - 1])) return false;
    std::size_t right = pos + 1;
    while (right < text.size() && text[right] == ' ') ++right;
    return right < text.size() && is_digit(text[right]);
}

std::string replace_operator(const std::string& text, char op, const std::string& word) {
    std::string out;
    out.reserve(text.size() + 8);
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == op && digit_flanked(text, i))
            out += word;
        else
            out += text[i];
    }
    return out;
}

std::string remove_operator_spaces(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if ((c == '+' || c == '-' || c == '*' || c == '/') && digit_flanked(text, i)) {
            while (!out.empty() && out.back() == ' ') out.pop_back();
            out += c;
            while (i + 1 < text.size() && text[i + 1] == ' ') ++i;
        } else {
            out += c;
        }
    }
    return out;
}

std::string binary_expression(const ProblemInstance& inst, const char* op) {
    return inst.operands.at(0).str() + " " + op + " " + inst.operands.at(1).str();
}

bool operator_task(TaskKind task) {
    switch (task) {
        case TaskKind::Addition:
        case TaskKind::Subtraction:
        case TaskKind::MulN1:
        case TaskKind::MulNM:
        case TaskKind::DivN1:
        case TaskKind::DivNM:
            return true;
        default:
            return false;
    }
}

std::string escape_newlines(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (c == '\n')
            out += "\\n";
        else
            out += c;
    }
    return out;
}

}  // namespace

const std::vector<Template>& default_templates() {
    static const std::vector<Template> templates = [] {
        std::vector<Template> out;
        std::size_t id = 1;
        for (const char* pattern : kDefaultPatterns)
            out.push_back(Template{id++, pattern});
        return out;
    }();
    return templates;
}

std::vector<Template> load_templates(std::istream& in) {
    std::vector<Template> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') continue;
        if (!placeholder_once(line))
            throw std::runtime_error("template line " + std::to_string(line_no) +
                                     ": pattern must contain {arithmetic} exactly once");
        out.push_back(Template{out.size() + 1, line});
    }
    return out;
}

std::vector<Template> load_templates_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open template file: " + path);
    return load_templates(in);
}

std::string augment(Rng& rng, const std::string& prompt, const AugmentationConfig& cfg) {
    std::string text = prompt;
    if (rng.coin(cfg.mul_word)) {
        const char* word = rng.coin(0.5) ? " x " : " times ";
        std::string spaced = replace_operator(text, '*', word);
        // replace_operator keeps the original spacing; normalize the
        // doubled spaces the padded word introduces.
        std::string collapsed;
        collapsed.reserve(spaced.size());
        for (char c : spaced) {
            if (c == ' ' && !collapsed.empty() && collapsed.back() == ' ') continue;
            collapsed += c;
        }
        text = std::move(collapsed);
    }
    if (rng.coin(cfg.add_word)) text = replace_operator(text, '+', "plus");
    if (rng.coin(cfg.sub_word)) text = replace_operator(text, '-', "minus");
    if (rng.coin(cfg.div_word)) text = replace_operator(text, '/', "divided by");
    if (rng.coin(cfg.space_removal)) text = remove_operator_spaces(text);
    return text;
}

std::string strip_augmentation(const std::string& prompt) {
    // Word operators back to symbols. The words only ever appear
    // digit-flanked, so plain substring replacement is safe for
    // augment() output.
    static const std::pair<const char*, const char*> kWords[] = {
        {" divided by ", " / "}, {" times ", " * "}, {" plus ", " + "},
        {" minus ", " - "},      {" x ", " * "},
    };
    std::string text = prompt;
    for (const auto& [word, symbol] : kWords) {
        std::size_t pos = 0;
        while ((pos = text.find(word, pos)) != std::string::npos) {
            std::size_t left = pos;
            while (left > 0 && text[left - 1] == ' ') --left;
            bool left_digit = left > 0 && is_digit(text[left - 1]);
            std::size_t right = pos + std::char_traits<char>::length(word);
            bool right_digit = right < text.size() && is_digit(text[right]);
            if (left_digit && right_digit) {
                text.replace(pos, std::char_traits<char>::length(word), symbol);
                pos += std::char_traits<char>::length(symbol);
            } else {
                ++pos;
            }
        }
    }
    // Bare "24x79" form.
    for (std::size_t i = 1; i + 1 < text.size(); ++i) {
        if (text[i] == 'x' && is_digit(text[i - 1]) && is_digit(text[i + 1]))
            text.replace(i, 1, "*");
    }
    // Re-insert single spaces around digit-adjacent symbol operators.
    std::string out;
    out.reserve(text.size() + 8);
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if ((c == '+' || c == '-' || c == '*' || c == '/') && digit_flanked(text, i)) {
            while (!out.empty() && out.back() == ' ') out.pop_back();
            out += ' ';
            out += c;
            out += ' ';
            while (i + 1 < text.size() && text[i + 1] == ' ') ++i;
        } else {
            out += c;
        }
    }
    return out;
}

std::string expression_text(const ProblemInstance& inst) {
    switch (inst.task) {
        case TaskKind::Copying:
        case TaskKind::Split:
            return inst.operands.at(0).str();
        case TaskKind::Comparison:
        case TaskKind::Ordering: {
            std::string out;
            for (std::size_t i = 0; i < inst.operands.size(); ++i) {
                if (i) out += ", ";
                out += inst.operands[i].str();
            }
            return out;
        }
        case TaskKind::Addition:
            return binary_expression(inst, "+");
        case TaskKind::Subtraction:
            return binary_expression(inst, "-");
        case TaskKind::MulN1:
        case TaskKind::MulNM:
            return binary_expression(inst, "*");
        case TaskKind::DivN1:
        case TaskKind::DivNM:
            return binary_expression(inst, "/");
    }
    throw std::invalid_argument("unknown task");
}

std::string natural_target(const ProblemInstance& inst, const std::string& cot_body) {
    if (!cot_body.empty()) return cot_body;
    if (operator_task(inst.task)) return expression_text(inst) + " = " + inst.answer;
    return inst.answer;
}

std::string synthetic_target(const ProblemInstance& inst, const std::string& cot_body) {
    if (!cot_body.empty()) return cot_body;
    return inst.answer;
}

Record format_natural(Rng& rng, const ProblemInstance& inst, const std::string& target,
                      const std::vector<Template>& templates,
                      const AugmentationConfig& aug) {
    if (templates.empty()) throw std::invalid_argument("template list is empty");
    const Template& tpl = templates[rng.uniform(0, templates.size() - 1)];

    std::string instruction = tpl.pattern;
    std::size_t slot = instruction.find(kArithmeticPlaceholder);
    instruction.replace(slot, kArithmeticPlaceholder.size(), expression_text(inst));
    instruction = augment(rng, instruction, aug);

    Record record;
    record.instruction = std::move(instruction);
    record.output = target;
    RecordMeta meta;
    meta.task = inst.task;
    for (const Numeral& n : inst.operands) meta.operands.push_back(n.str());
    meta.answer = inst.answer;
    meta.format_mode = FormatMode::Natural;
    meta.template_id = tpl.id;
    meta.seed_index = inst.seed_index;
    record.meta = std::move(meta);
    return record;
}

std::pair<std::string, std::string> format_synthetic(const ProblemInstance& inst,
                                                     const std::string& cot_body) {
    return {expression_text(inst), synthetic_target(inst, cot_body)};
}

std::string build_fewshot_prompt(const std::vector<std::pair<std::string, std::string>>& pairs,
                                 const std::string& question, TaskKind task) {
    const char* problem_kind;
    if (task == TaskKind::MulNM)
        problem_kind = "multiplication problems";
    else if (task == TaskKind::DivNM)
        problem_kind = "division problem";
    else
        throw std::invalid_argument("few-shot CoT prompts exist for mul_nm and div_nm only");
    if (pairs.empty()) throw std::invalid_argument("need at least one example pair");

    std::ostringstream out;
    out << "Here are " << pairs.size()
        << " examples of question-solution pairs for solving arithmetic " << problem_kind
        << ". Solve the last question using the same format given in the solutions.\n";
    for (const auto& [q, solution] : pairs) {
        out << "\n\"question\": \"" << q << "\",\n";
        out << "\"solution\": \"" << escape_newlines(solution) << "\"\n";
    }
    out << "\n\"question\": \"" << question << "\",";
    return out.str();
}

}  // namespace goatforge
