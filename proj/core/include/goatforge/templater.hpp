#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "goatforge/cot.hpp"
#include "goatforge/record.hpp"
#include "goatforge/rng.hpp"
#include "goatforge/task.hpp"

namespace goatforge {

struct Template {
    std::size_t id = 0;  // 1-based position in the loaded list
    std::string pattern; // contains "{arithmetic}" exactly once
};

inline constexpr std::string_view kArithmeticPlaceholder = "{arithmetic}";

/// The built-in instruction templates.
const std::vector<Template>& default_templates();

/// One pattern per line; blank lines and '#' comments are skipped.
/// Throws std::runtime_error naming the line when a pattern does not
/// contain the placeholder exactly once.
std::vector<Template> load_templates(std::istream& in);
std::vector<Template> load_templates_file(const std::string& path);

/// Per-transformation firing probabilities; 0 disables a transformation.
struct AugmentationConfig {
    double space_removal = 0.5;
    double mul_word = 0.5;
    double add_word = 0.5;
    double sub_word = 0.5;
    double div_word = 0.5;

    bool operator==(const AugmentationConfig& other) const = default;
};

/// Applies the enabled rewrites to operators that sit between digits:
/// "*" -> "x"/"times", "+" -> "plus", "-" -> "minus", "/" -> "divided by",
/// and removal of the spaces around operators that stayed symbolic.
/// Digits are never touched.
std::string augment(Rng& rng, const std::string& prompt, const AugmentationConfig& cfg);

/// Inverse normalization: word operators back to symbols, single spaces
/// re-inserted around digit-adjacent operators. Recovers a parseable
/// expression from any augment() output.
std::string strip_augmentation(const std::string& prompt);

/// The text substituted for {arithmetic}: "a + b", "a - b", "a * b",
/// "a / b" for the binary tasks, the bare numeral for copying/split, the
/// comma-separated list for comparison/ordering.
std::string expression_text(const ProblemInstance& inst);

/// Natural-mode target: CoT bodies pass through; direct answers restate
/// the equation ("1463456 + 2107 = 1465563") for the four operator tasks
/// and stay bare for copying/split/comparison/ordering.
std::string natural_target(const ProblemInstance& inst, const std::string& cot_body);

/// Synthetic-mode target: CoT body or the bare answer.
std::string synthetic_target(const ProblemInstance& inst, const std::string& cot_body);

/// Wraps an instance into an instruction record: uniform template pick,
/// placeholder substitution, then augmentation. `target` is the final
/// output text (from natural_target or a rendered trace).
Record format_natural(Rng& rng, const ProblemInstance& inst, const std::string& target,
                      const std::vector<Template>& templates,
                      const AugmentationConfig& aug);

/// Template-free fixed-spacing pair: ("24 * 79", CoT-or-bare-answer).
std::pair<std::string, std::string> format_synthetic(const ProblemInstance& inst,
                                                     const std::string& cot_body);

/// Few-shot prompt: header, k question/solution pairs as quoted fields,
/// then the final question. Newlines inside solutions are escaped as the
/// two-character sequence \n. Only the multi-digit tasks have CoT
/// solutions; anything else throws std::invalid_argument.
std::string build_fewshot_prompt(const std::vector<std::pair<std::string, std::string>>& pairs,
                                 const std::string& question, TaskKind task);

}  // namespace goatforge
