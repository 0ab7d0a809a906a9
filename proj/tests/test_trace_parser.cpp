#include <doctest.h>

#include <sstream>
#include <variant>

#include "goatforge/cot.hpp"
#include "goatforge/generate.hpp"
#include "goatforge/rng.hpp"
#include "goatforge/sampler.hpp"
#include "goatforge/trace_parser.hpp"

using namespace goatforge;

namespace {

ProblemInstance inst_of(TaskKind task, std::vector<std::string> operand_texts) {
    ProblemInstance inst;
    inst.task = task;
    for (auto& text : operand_texts) inst.operands.emplace_back(text);
    inst.answer = canonical_answer(task, inst.operands);
    return inst;
}

const MultParse& as_mult(const ParsedCompletion& parsed) {
    return std::get<MultParse>(parsed);
}

const DivParse& as_div(const ParsedCompletion& parsed) { return std::get<DivParse>(parsed); }

std::vector<AblationConfig> mult_variants() {
    AblationConfig omit_split;
    omit_split.omit_split = true;
    AblationConfig omit_expansion;
    omit_expansion.omit_expansion = true;
    AblationConfig omit_fold;
    omit_fold.omit_term_by_term = true;
    return {AblationConfig{}, omit_split, omit_expansion, omit_fold};
}

std::vector<AblationConfig> div_variants() {
    AblationConfig omit_middle;
    omit_middle.omit_middle_product = true;
    return {AblationConfig{}, omit_middle};
}

}  // namespace

TEST_CASE("parses the worked multiplication target") {
    auto outcome = parse_completion(
        TaskKind::MulNM, "24 * 79 = 24 * (70 + 9) = 24 * 70 + 24 * 9 = 1680 + 216 = 1896");
    REQUIRE(outcome.ok());
    const MultParse& parsed = as_mult(*outcome.value);
    REQUIRE(parsed.trace.extraction);
    CHECK(parsed.trace.extraction->first.str() == "24");
    CHECK(parsed.trace.extraction->second.str() == "79");
    CHECK(parsed.trace.kept.str() == "24");
    REQUIRE(parsed.trace.split_terms.size() == 2);
    CHECK(parsed.trace.split_terms[0].str() == "70");
    CHECK(parsed.trace.split_terms[1].str() == "9");
    CHECK(parsed.trace.result.str() == "1896");

    VerifyReport report = verify_trace(*outcome.value);
    CHECK(report.accepted());
    CHECK(report.steps_failed == 0);
    CHECK(report.extracted_answer == "1896");
}

TEST_CASE("parses the worked division target") {
    auto outcome = parse_completion(TaskKind::DivNM,
                                    "8914 - 64 * 100 = 8914 - 6400 = 2514\n"
                                    "2514 - 64 * 30 = 2514 - 1920 = 594\n"
                                    "594 - 64 * 9 = 594 - 576 = 18\n"
                                    "Therefore, 8914 / 64 = 139 R 18");
    REQUIRE(outcome.ok());
    const DivParse& parsed = as_div(*outcome.value);
    CHECK(parsed.trace.dividend.str() == "8914");
    CHECK(parsed.trace.divisor.str() == "64");
    REQUIRE(parsed.trace.steps.size() == 3);
    CHECK(parsed.trace.quotient.str() == "139");
    CHECK(parsed.trace.final_remainder.str() == "18");
    CHECK(verify_trace(*outcome.value).accepted());
}

TEST_CASE("direct answers parse without being checked") {
    auto outcome = parse_completion(TaskKind::MulNM, "24 * 79 = 1897");
    REQUIRE(outcome.ok());
    const auto& direct = std::get<DirectAnswer>(*outcome.value);
    CHECK(direct.answer == "1897");
    REQUIRE(direct.restated_operands);
    CHECK(direct.restated_operands->first.str() == "24");

    // parsing succeeded; verification is what rejects it
    VerifyReport report = verify_trace(*outcome.value);
    CHECK(!report.accepted());
    CHECK(report.error_class == ErrorClass::FinalAnswerError);
}

TEST_CASE("parse errors carry an offset and expectation") {
    auto outcome = parse_completion(TaskKind::MulNM, "24 * 79 = banana");
    REQUIRE(!outcome.ok());
    CHECK(outcome.error->offset == 10);
    CHECK(!outcome.error->expected.empty());

    CHECK(!parse_completion(TaskKind::Addition, "1 + 2 = 03").ok());
    CHECK(!parse_completion(TaskKind::DivNM, "x").ok());
    CHECK(!parse_completion(TaskKind::MulNM, "").ok());
    CHECK(!parse_completion(TaskKind::DivNM,
                            "8914 - 64 * 110 = 8914 - 7040 = 1874\n"
                            "Therefore, 8914 / 64 = 139 R 18")
               .ok());  // 110 is not q*10^j
    // trailing garbage after a valid chain
    CHECK(!parse_completion(TaskKind::MulNM, "24 * 79 = 1896 oops").ok());
    // R 0 is never written
    CHECK(!parse_completion(TaskKind::DivN1, "10 / 5 = 2 R 0").ok());
    // leading/trailing whitespace is fine
    CHECK(parse_completion(TaskKind::MulNM, "  24 * 79 = 1896\n").ok());
}

TEST_CASE("simple task grammars") {
    CHECK(parse_completion(TaskKind::Copying, "59265395").ok());
    CHECK(parse_completion(TaskKind::Split, "4000 + 500 + 30 + 6").ok());
    CHECK(parse_completion(TaskKind::Split, "7").ok());
    CHECK(parse_completion(TaskKind::Comparison, "8116449>97863").ok());
    CHECK(parse_completion(TaskKind::Comparison, "5=5").ok());
    CHECK(parse_completion(TaskKind::Ordering, "3568, 8061, 9591").ok());
    CHECK(!parse_completion(TaskKind::Comparison, "5 > 3").ok());
    CHECK(!parse_completion(TaskKind::Ordering, "3568,8061").ok());

    auto outcome = parse_completion(TaskKind::Subtraction, "4523646 - 67453156 = -62929510");
    REQUIRE(outcome.ok());
    CHECK(std::get<DirectAnswer>(*outcome.value).answer == "-62929510");
    CHECK(parse_completion(TaskKind::Subtraction, "-62929510").ok());
    CHECK(!parse_completion(TaskKind::Subtraction, "-0").ok());
}

TEST_CASE("round-trip across ablation variants and modes") {
    Rng rng(606);
    Settings settings;
    int checked = 0;
    while (checked < 1500) {
        ProblemInstance inst = sample_instance(rng, TaskKind::MulNM, settings);
        if (detect_special_case(TaskKind::MulNM, inst.operands[0], inst.operands[1]))
            continue;
        ++checked;
        MultTrace trace = gen_mult_trace(inst.operands[0], inst.operands[1]);
        for (const AblationConfig& abl : mult_variants()) {
            for (FormatMode mode : {FormatMode::Natural, FormatMode::Synthetic}) {
                std::string text = render_mult_trace(trace, abl, RenderStyle::Ascii, mode);
                auto outcome = parse_completion(TaskKind::MulNM, text);
                CAPTURE(text);
                REQUIRE(outcome.ok());
                MultTrace expected = trace;
                if (mode == FormatMode::Synthetic) expected.extraction.reset();
                REQUIRE(as_mult(*outcome.value).trace == expected);
                REQUIRE(verify_trace(*outcome.value, &inst).accepted());
            }
        }
        // no_cot renders the bare equation; the answer must survive
        AblationConfig no_cot;
        no_cot.no_cot = true;
        std::string text =
            render_mult_trace(trace, no_cot, RenderStyle::Ascii, FormatMode::Natural);
        auto outcome = parse_completion(TaskKind::MulNM, text);
        REQUIRE(outcome.ok());
        REQUIRE(std::get<DirectAnswer>(*outcome.value).answer == trace.result.str());
    }

    checked = 0;
    while (checked < 1500) {
        ProblemInstance inst = sample_instance(rng, TaskKind::DivNM, settings);
        if (detect_special_case(TaskKind::DivNM, inst.operands[0], inst.operands[1]))
            continue;
        ++checked;
        DivTrace trace = gen_div_trace(inst.operands[0], inst.operands[1]);
        for (const AblationConfig& abl : div_variants()) {
            for (FormatMode mode : {FormatMode::Natural, FormatMode::Synthetic}) {
                std::string text = render_div_trace(trace, abl, RenderStyle::Ascii, mode);
                auto outcome = parse_completion(TaskKind::DivNM, text);
                CAPTURE(text);
                REQUIRE(outcome.ok());
                REQUIRE(as_div(*outcome.value).trace == trace);
                REQUIRE(verify_trace(*outcome.value, &inst).accepted());
            }
        }
    }
}

TEST_CASE("fault injection is classified") {
    const std::string fig1 =
        "397 * 4429 = 4429 * (300 + 90 + 7) = 4429 * 300 + 4429 * 90 + 4429 * 7 = "
        "1328700 + 398610 + 31003 = 1727310 + 31003 = 1758313";

    SUBCASE("wrong product segment value") {
        std::string text = fig1;
        text.replace(text.find("1328700"), 7, "1328800");
        auto outcome = parse_completion(TaskKind::MulNM, text);
        REQUIRE(outcome.ok());
        VerifyReport report = verify_trace(*outcome.value);
        CHECK(!report.accepted());
        CHECK(report.error_class == ErrorClass::IntermediateProductError);
        CHECK(report.steps_failed >= 1);
        // same corruption, same classification and index
        VerifyReport again = verify_trace(*parse_completion(TaskKind::MulNM, text).value);
        CHECK(again.first_failure == report.first_failure);
        CHECK(again.error_class == report.error_class);
    }

    SUBCASE("wrong fold sum") {
        auto outcome = parse_completion(
            TaskKind::MulNM, "24 * 79 = 24 * (70 + 9) = 24 * 70 + 24 * 9 = 1680 + 216 = 1897");
        REQUIRE(outcome.ok());
        VerifyReport report = verify_trace(*outcome.value);
        CHECK(report.error_class == ErrorClass::AlignmentError);
    }

    SUBCASE("mis-copied term between segments") {
        std::string text = fig1;
        // the expansion copies 90 from the split; corrupt the copy to a
        // different place value (a non-place value would be a parse error)
        text.replace(text.find("4429 * 90"), 9, "4429 * 80");
        auto outcome = parse_completion(TaskKind::MulNM, text);
        REQUIRE(outcome.ok());
        VerifyReport report = verify_trace(*outcome.value);
        CHECK(!report.accepted());
        CHECK(report.error_class == ErrorClass::CopyError);
    }

    SUBCASE("non-place-value term is a format error") {
        std::string text = fig1;
        text.replace(text.find("(300 + 90 + 7)"), 14, "(300 + 91 + 7)");
        auto outcome = parse_completion(TaskKind::MulNM, text);
        CHECK(!outcome.ok());
        VerifyReport report = verify_completion(TaskKind::MulNM, text);
        CHECK(!report.parse_ok);
        CHECK(report.error_class == ErrorClass::FormatError);
    }

    SUBCASE("mis-copied fold tail") {
        std::string text = fig1;
        text.replace(text.rfind("+ 31003"), 7, "+ 31004");
        auto outcome = parse_completion(TaskKind::MulNM, text);
        REQUIRE(outcome.ok());
        VerifyReport report = verify_trace(*outcome.value);
        CHECK(!report.accepted());
        CHECK(report.error_class == ErrorClass::CopyError);
    }

    SUBCASE("division product corrupted") {
        auto outcome = parse_completion(TaskKind::DivNM,
                                        "8914 - 64 * 100 = 8914 - 6500 = 2514\n"
                                        "2514 - 64 * 30 = 2514 - 1920 = 594\n"
                                        "594 - 64 * 9 = 594 - 576 = 18\n"
                                        "Therefore, 8914 / 64 = 139 R 18");
        REQUIRE(outcome.ok());
        VerifyReport report = verify_trace(*outcome.value);
        CHECK(report.error_class == ErrorClass::IntermediateProductError);
    }

    SUBCASE("division subtraction misaligned") {
        auto outcome = parse_completion(TaskKind::DivNM,
                                        "8914 - 64 * 100 = 8914 - 6400 = 2524\n"
                                        "2524 - 64 * 30 = 2524 - 1920 = 604\n"
                                        "604 - 64 * 9 = 604 - 576 = 28\n"
                                        "Therefore, 8914 / 64 = 139 R 28");
        REQUIRE(outcome.ok());
        VerifyReport report = verify_trace(*outcome.value);
        CHECK(report.error_class == ErrorClass::AlignmentError);
    }

    SUBCASE("division chain broken between lines") {
        auto outcome = parse_completion(TaskKind::DivNM,
                                        "8914 - 64 * 100 = 8914 - 6400 = 2514\n"
                                        "2515 - 64 * 30 = 2515 - 1920 = 595\n"
                                        "595 - 64 * 9 = 595 - 576 = 19\n"
                                        "Therefore, 8914 / 64 = 139 R 19");
        REQUIRE(outcome.ok());
        VerifyReport report = verify_trace(*outcome.value);
        CHECK(report.error_class == ErrorClass::CopyError);
    }

    SUBCASE("quotient assembled wrong") {
        auto outcome = parse_completion(TaskKind::DivNM,
                                        "8914 - 64 * 100 = 8914 - 6400 = 2514\n"
                                        "2514 - 64 * 30 = 2514 - 1920 = 594\n"
                                        "594 - 64 * 9 = 594 - 576 = 18\n"
                                        "Therefore, 8914 / 64 = 149 R 18");
        REQUIRE(outcome.ok());
        VerifyReport report = verify_trace(*outcome.value);
        CHECK(!report.accepted());
        CHECK(report.error_class == ErrorClass::FinalAnswerError);
        CHECK(report.steps_failed == 0);
    }

    SUBCASE("expected instance pins the extraction") {
        ProblemInstance other = inst_of(TaskKind::MulNM, {"25", "79"});
        auto outcome = parse_completion(
            TaskKind::MulNM, "24 * 79 = 24 * (70 + 9) = 24 * 70 + 24 * 9 = 1680 + 216 = 1896");
        REQUIRE(outcome.ok());
        VerifyReport report = verify_trace(*outcome.value, &other);
        CHECK(!report.accepted());
        CHECK(report.error_class == ErrorClass::CopyError);
    }
}

TEST_CASE("brute force: three-digit by two-digit division verification") {
    // every non-special 3-digit / 2-digit pair round-trips and verifies
    int traced = 0;
    for (int dividend = 100; dividend < 1000; dividend += 7) {
        for (int divisor = 10; divisor < 100; divisor += 3) {
            Numeral a = Numeral::from_u64(static_cast<std::uint64_t>(dividend));
            Numeral b = Numeral::from_u64(static_cast<std::uint64_t>(divisor));
            if (detect_special_case(TaskKind::DivNM, a, b)) continue;
            ++traced;
            DivTrace trace = gen_div_trace(a, b);
            std::string text =
                render_div_trace(trace, {}, RenderStyle::Ascii, FormatMode::Natural);
            ProblemInstance inst = inst_of(TaskKind::DivNM, {a.str(), b.str()});
            VerifyReport report = verify_completion(TaskKind::DivNM, text, &inst);
            CAPTURE(text);
            REQUIRE(report.accepted());
        }
    }
    CHECK(traced > 3000);
}

TEST_CASE("verify_records accepts generated files and localizes corruption") {
    Config config;
    config.total = 400;
    config.master_seed = 99;
    config.emit_meta = true;
    config.threads = 1;
    std::ostringstream out;
    generate_dataset(config, out);
    std::string data = out.str();

    {
        std::istringstream in(data);
        VerifyStats stats = verify_records(in);
        CHECK(stats.records == 400);
        CHECK(stats.failed == 0);
        CHECK(!stats.first_failure_line);
    }

    {
        // corrupt one digit inside the first record that contains "= 1"
        std::string corrupted = data;
        std::size_t pos = corrupted.find("8");
        while (pos != std::string::npos) {
            // only touch digits inside an output field to keep JSON valid
            if (corrupted.compare(pos - 2, 2, "= ") == 0) break;
            pos = corrupted.find("8", pos + 1);
        }
        REQUIRE(pos != std::string::npos);
        corrupted[pos] = '9';
        std::istringstream in(corrupted);
        VerifyStats stats = verify_records(in);
        CHECK(stats.failed == 1);
        CHECK(stats.records == 400);
        CHECK(stats.first_failure_line);
    }

    {
        std::istringstream in("");
        VerifyStats stats = verify_records(in);
        CHECK(stats.records == 0);
        CHECK(stats.failed == 0);
    }

    {
        std::istringstream in("{broken\n");
        CHECK_THROWS_WITH_AS(verify_records(in), doctest::Contains("line 1"),
                             std::runtime_error);
    }
}

TEST_CASE("verify_records works without meta via operand recovery") {
    Config config;
    config.total = 400;
    config.master_seed = 123;
    config.emit_meta = false;
    config.threads = 1;
    std::ostringstream out;
    generate_dataset(config, out);

    std::istringstream in(out.str());
    VerifyStats stats = verify_records(in);
    CHECK(stats.records == 400);
    CHECK(stats.failed == 0);

    Config synthetic = config;
    synthetic.format_mode = FormatMode::Synthetic;
    std::ostringstream out2;
    generate_dataset(synthetic, out2);
    std::istringstream in2(out2.str());
    VerifyStats stats2 = verify_records(in2);
    CHECK(stats2.records == 400);
    CHECK(stats2.failed == 0);
}

TEST_CASE("verification statistics render") {
    Config config;
    config.total = 50;
    config.emit_meta = true;
    config.threads = 1;
    std::ostringstream out;
    generate_dataset(config, out);
    std::istringstream in(out.str());
    VerifyStats stats = verify_records(in);
    std::string json = verify_stats_json(stats);
    CHECK(json.find("\"per_task\"") != std::string::npos);
    CHECK(json.find("\"totals\"") != std::string::npos);
    std::string table = verify_stats_table(stats);
    CHECK(table.find("total") != std::string::npos);
}
