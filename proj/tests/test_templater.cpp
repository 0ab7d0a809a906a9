#include <doctest.h>

#include <map>
#include <sstream>
#include <stdexcept>

#include "goatforge/record.hpp"
#include "goatforge/rng.hpp"
#include "goatforge/sampler.hpp"
#include "goatforge/templater.hpp"

using namespace goatforge;

namespace {

ProblemInstance inst_of(TaskKind task, std::vector<std::string> operand_texts,
                        std::string answer) {
    ProblemInstance inst;
    inst.task = task;
    for (auto& text : operand_texts) inst.operands.emplace_back(text);
    inst.answer = std::move(answer);
    return inst;
}

const AugmentationConfig kAllOn{1.0, 1.0, 1.0, 1.0, 1.0};
const AugmentationConfig kAllOff{0.0, 0.0, 0.0, 0.0, 0.0};

}  // namespace

TEST_CASE("default templates") {
    const auto& templates = default_templates();
    REQUIRE(templates.size() == 20);
    CHECK(templates[0].pattern == "{arithmetic} = ");
    CHECK(templates[1].id == 2);
    CHECK(templates[1].pattern == "What is {arithmetic}?");
    CHECK(templates[2].pattern == "Compute {arithmetic}");
    CHECK(templates[19].pattern == "What is the answer to {arithmetic}?");
    for (const Template& t : templates)
        CHECK(t.pattern.find(kArithmeticPlaceholder) != std::string::npos);
}

TEST_CASE("load_templates validates the placeholder") {
    std::istringstream good("# comment\nWhat is {arithmetic}?\n\nCompute {arithmetic}\n");
    auto templates = load_templates(good);
    REQUIRE(templates.size() == 2);
    CHECK(templates[0].id == 1);
    CHECK(templates[0].pattern == "What is {arithmetic}?");
    CHECK(templates[1].id == 2);

    std::istringstream missing("Compute {arithmetic}\nCompute 3+4\n");
    try {
        load_templates(missing);
        FAIL("expected an error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    std::istringstream twice("{arithmetic} and {arithmetic}\n");
    CHECK_THROWS_AS(load_templates(twice), std::runtime_error);
}

TEST_CASE("expression text per task") {
    CHECK(expression_text(inst_of(TaskKind::Addition, {"1463456", "2107"}, "")) ==
          "1463456 + 2107");
    CHECK(expression_text(inst_of(TaskKind::Subtraction, {"40920", "6173772696"}, "")) ==
          "40920 - 6173772696");
    CHECK(expression_text(inst_of(TaskKind::MulNM, {"24", "79"}, "")) == "24 * 79");
    CHECK(expression_text(inst_of(TaskKind::DivN1, {"3651803", "7"}, "")) == "3651803 / 7");
    CHECK(expression_text(inst_of(TaskKind::Copying, {"59265395"}, "")) == "59265395");
    CHECK(expression_text(inst_of(TaskKind::Comparison, {"8116449", "97863"}, "")) ==
          "8116449, 97863");
    CHECK(expression_text(inst_of(TaskKind::Ordering, {"3568", "9591", "8061"}, "")) ==
          "3568, 9591, 8061");
}

TEST_CASE("augmentation rewrites operators without touching digits") {
    Rng rng(3);

    AugmentationConfig only_sub{0.0, 0.0, 0.0, 1.0, 0.0};
    CHECK(augment(rng, "4523646 - 67453156", only_sub) == "4523646 minus 67453156");

    AugmentationConfig only_div{0.0, 0.0, 0.0, 0.0, 1.0};
    CHECK(augment(rng, "What is 8914 / 64?", only_div) == "What is 8914 divided by 64?");

    AugmentationConfig only_add{0.0, 0.0, 1.0, 0.0, 0.0};
    CHECK(augment(rng, "3978640188 + 42886272 = ", only_add) ==
          "3978640188 plus 42886272 = ");

    AugmentationConfig only_space{1.0, 0.0, 0.0, 0.0, 0.0};
    CHECK(augment(rng, "What is 8914 / 64?", only_space) == "What is 8914/64?");
    CHECK(augment(rng, "Calculate 397 * 4429", only_space) == "Calculate 397*4429");

    AugmentationConfig only_mul{0.0, 1.0, 0.0, 0.0, 0.0};
    std::map<std::string, int> seen;
    for (int i = 0; i < 50; ++i) ++seen[augment(rng, "Calculate 397 * 4429", only_mul)];
    CHECK(seen.count("Calculate 397 x 4429"));
    CHECK(seen.count("Calculate 397 times 4429"));
    CHECK(seen.size() == 2);

    CHECK(augment(rng, "24 * 79", kAllOff) == "24 * 79");

    // hyphens between words are not subtraction operators
    CHECK(augment(rng, "question-solution 1 - 2", kAllOn).find("question-solution") == 0);
}

TEST_CASE("strip_augmentation inverts every transformation") {
    Rng rng(17);
    const std::string exprs[] = {
        "4523646 - 67453156", "3978640188 + 42886272", "397 * 4429", "8914 / 64",
    };
    for (const std::string& expr : exprs) {
        for (int i = 0; i < 200; ++i) {
            std::string augmented = augment(rng, expr, AugmentationConfig{0.5, 0.5, 0.5, 0.5, 0.5});
            CAPTURE(expr);
            CAPTURE(augmented);
            REQUIRE(strip_augmentation(augmented) == expr);
        }
    }
    CHECK(strip_augmentation("What is 8914/64?") == "What is 8914 / 64?");
    CHECK(strip_augmentation("24x79") == "24 * 79");
    CHECK(strip_augmentation("5 times 3") == "5 * 3");
}

TEST_CASE("format_natural templated instruction and metadata") {
    Rng rng(9);
    ProblemInstance inst = inst_of(TaskKind::MulNM, {"397", "4429"}, "1758313");
    inst.seed_index = 17;
    std::string target = "397 * 4429 = ... = 1758313";
    Record record = format_natural(rng, inst, target, default_templates(), kAllOff);
    CHECK(record.output == target);
    CHECK(record.instruction.find("397 * 4429") != std::string::npos);
    REQUIRE(record.meta);
    CHECK(record.meta->task == TaskKind::MulNM);
    CHECK(record.meta->operands == std::vector<std::string>{"397", "4429"});
    CHECK(record.meta->answer == "1758313");
    CHECK(record.meta->template_id >= 1);
    CHECK(record.meta->template_id <= 20);
    CHECK(record.meta->seed_index == 17);

    CHECK_THROWS_AS(format_natural(rng, inst, target, {}, kAllOff), std::invalid_argument);
}

TEST_CASE("template selection is uniform") {
    Rng rng(123456);
    ProblemInstance inst = inst_of(TaskKind::Addition, {"12", "34"}, "46");
    std::map<std::size_t, int> counts;
    constexpr int kDraws = 100000;
    for (int i = 0; i < kDraws; ++i) {
        Record record = format_natural(rng, inst, "12 + 34 = 46", default_templates(), kAllOff);
        ++counts[record.meta->template_id];
    }
    REQUIRE(counts.size() == 20);
    // chi-square against uniform over 20 cells, 19 dof; 43.8 is the 0.1% tail
    double expected = kDraws / 20.0;
    double chi2 = 0.0;
    for (const auto& [id, count] : counts) {
        double diff = count - expected;
        chi2 += diff * diff / expected;
    }
    CHECK(chi2 < 43.8);
}

TEST_CASE("natural targets restate operator equations only") {
    CHECK(natural_target(inst_of(TaskKind::Addition, {"1463456", "2107"}, "1465563"), "") ==
          "1463456 + 2107 = 1465563");
    CHECK(natural_target(inst_of(TaskKind::Subtraction, {"2348233", "483579"}, "1864654"),
                         "") == "2348233 - 483579 = 1864654");
    CHECK(natural_target(inst_of(TaskKind::MulN1, {"593295", "7"}, "4153065"), "") ==
          "593295 * 7 = 4153065");
    CHECK(natural_target(inst_of(TaskKind::DivN1, {"3651803", "7"}, "521686 R 1"), "") ==
          "3651803 / 7 = 521686 R 1");
    CHECK(natural_target(inst_of(TaskKind::MulNM, {"857483", "400"}, "342993200"), "") ==
          "857483 * 400 = 342993200");
    CHECK(natural_target(inst_of(TaskKind::Comparison, {"8116449", "97863"},
                                 "8116449>97863"),
                         "") == "8116449>97863");
    CHECK(natural_target(inst_of(TaskKind::Ordering, {"3568", "9591", "8061"},
                                 "3568, 8061, 9591"),
                         "") == "3568, 8061, 9591");
    // CoT bodies pass through untouched
    CHECK(natural_target(inst_of(TaskKind::MulNM, {"24", "79"}, "1896"), "BODY") == "BODY");
}

TEST_CASE("synthetic pairs match the fixed-spacing format") {
    auto [p1, t1] = format_synthetic(inst_of(TaskKind::Addition, {"1463456", "2107"},
                                             "1465563"), "");
    CHECK(p1 == "1463456 + 2107");
    CHECK(t1 == "1465563");

    auto [p2, t2] = format_synthetic(inst_of(TaskKind::Subtraction, {"2348233", "483579"},
                                             "1864654"), "");
    CHECK(p2 == "2348233 - 483579");
    CHECK(t2 == "1864654");

    auto [p3, t3] = format_synthetic(inst_of(TaskKind::MulN1, {"593295", "7"}, "4153065"), "");
    CHECK(p3 == "593295 * 7");
    CHECK(t3 == "4153065");

    auto [p4, t4] = format_synthetic(inst_of(TaskKind::DivN1, {"3651803", "7"}, "521686 R 1"),
                                     "");
    CHECK(p4 == "3651803 / 7");
    CHECK(t4 == "521686 R 1");

    auto [p5, t5] = format_synthetic(
        inst_of(TaskKind::MulNM, {"24", "79"}, "1896"),
        "24 * (70 + 9) = 24 * 70 + 24 * 9 = 1680 + 216 = 1896");
    CHECK(p5 == "24 * 79");
    CHECK(t5 == "24 * (70 + 9) = 24 * 70 + 24 * 9 = 1680 + 216 = 1896");
}

TEST_CASE("synthetic targets stay symbol-only") {
    Rng rng(55);
    Settings settings;
    for (TaskKind task : kAllTasks) {
        for (int i = 0; i < 200; ++i) {
            ProblemInstance inst = sample_instance(rng, task, settings);
            auto [prompt, target] = format_synthetic(inst, "");
            for (char c : target) {
                bool alpha = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
                if (alpha) CHECK(c == 'R');
            }
            (void)prompt;
        }
    }
}

TEST_CASE("few-shot prompt structure") {
    std::vector<std::pair<std::string, std::string>> pairs = {
        {"24 * 79 = ", "24 * 79 = 24 * (70 + 9) = 24 * 70 + 24 * 9 = 1680 + 216 = 1896"},
    };
    std::string prompt = build_fewshot_prompt(pairs, "58061 * 3569 = ", TaskKind::MulNM);
    CHECK(prompt.find("Here are 1 examples of question-solution pairs for solving "
                      "arithmetic multiplication problems. Solve the last question using "
                      "the same format given in the solutions.") == 0);
    CHECK(prompt.find("\"question\": \"24 * 79 = \",") != std::string::npos);
    CHECK(prompt.find("\"solution\": \"24 * 79 = 24 * (70 + 9)") != std::string::npos);
    CHECK(prompt.ends_with("\"question\": \"58061 * 3569 = \","));

    std::vector<std::pair<std::string, std::string>> div_pairs = {
        {"2546 / 38 = ",
         "2546 - 38 * 60 = 2546 - 2280 = 266\n266 - 38 * 7 = 266 - 266 = 0\n"
         "Therefore, 2546 / 38 = 67"},
    };
    std::string div_prompt = build_fewshot_prompt(div_pairs, "262122 / 591 = ",
                                                  TaskKind::DivNM);
    CHECK(div_prompt.find("arithmetic division problem.") != std::string::npos);
    // newlines inside solutions are escaped as the two-character sequence
    CHECK(div_prompt.find("= 266\\n266 - 38") != std::string::npos);
    CHECK(div_prompt.find("= 266\n266") == std::string::npos);

    CHECK_THROWS_AS(build_fewshot_prompt(pairs, "q", TaskKind::Addition),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_fewshot_prompt({}, "q", TaskKind::MulNM), std::invalid_argument);
}

TEST_CASE("records serialize with fixed field order and answer suffix") {
    Record record;
    record.instruction = "What is 8914/64?";
    record.output = "... Therefore, 8914 / 64 = 139 R 18";
    RecordMeta meta;
    meta.task = TaskKind::DivNM;
    meta.operands = {"8914", "64"};
    meta.answer = "139 R 18";
    meta.format_mode = FormatMode::Natural;
    meta.template_id = 2;
    meta.cot = true;
    meta.seed_index = 5;
    record.meta = meta;

    std::string line = record_to_jsonl(record, false);
    CHECK(line.find("{\"instruction\":\"What is 8914/64?\\nAnswer: \",\"input\":\"\","
                    "\"output\":") == 0);
    CHECK(line.find("\"meta\"") == std::string::npos);

    std::string with_meta = record_to_jsonl(record, true);
    CHECK(with_meta.find("\"meta\"") != std::string::npos);
    Record back = record_from_jsonl(with_meta);
    CHECK(back.instruction == "What is 8914/64?\nAnswer: ");
    CHECK(back.output == record.output);
    REQUIRE(back.meta);
    CHECK(back.meta->task == TaskKind::DivNM);
    CHECK(back.meta->operands == meta.operands);
    CHECK(back.meta->answer == "139 R 18");
    CHECK(back.meta->cot);
    CHECK(back.meta->seed_index == 5);

    // synthetic records carry no suffix
    record.meta->format_mode = FormatMode::Synthetic;
    record.instruction = "8914 / 64";
    std::string synthetic = record_to_jsonl(record, false);
    CHECK(synthetic.find("Answer:") == std::string::npos);

    CHECK_THROWS_AS(record_from_jsonl("not json"), std::runtime_error);
    CHECK_THROWS_AS(record_from_jsonl("[1,2]"), std::runtime_error);
    CHECK_THROWS_AS(record_from_jsonl("{\"input\":\"\"}"), std::runtime_error);
}
