#include <doctest.h>

#include <map>
#include <set>
#include <stdexcept>

#include "goatforge/config.hpp"
#include "goatforge/cot.hpp"
#include "goatforge/rng.hpp"
#include "goatforge/sampler.hpp"

using namespace goatforge;

TEST_CASE("sample_numeral respects the digit range") {
    Rng rng(1);
    for (int i = 0; i < 200; ++i) {
        Numeral n = sample_numeral(rng, 1, 1);
        CHECK(n.digit_count() == 1);
        CHECK(!n.is_zero());
    }
    for (int i = 0; i < 200; ++i) {
        Numeral n = sample_numeral(rng, 3, 3);
        CHECK(n.digit_count() == 3);
    }
    CHECK_THROWS_AS(sample_numeral(rng, 0, 4), std::invalid_argument);
    CHECK_THROWS_AS(sample_numeral(rng, 5, 4), std::invalid_argument);
}

TEST_CASE("digit counts are uniform across the range") {
    Rng rng(20240516);
    std::map<std::size_t, int> histogram;
    constexpr int kDraws = 100000;
    for (int i = 0; i < kDraws; ++i) ++histogram[sample_numeral(rng, 1, 16).digit_count()];
    REQUIRE(histogram.size() == 16);
    const double expected = kDraws / 16.0;
    for (const auto& [digits, count] : histogram) {
        CAPTURE(digits);
        CHECK(count > expected * 0.8);
        CHECK(count < expected * 1.2);
    }
}

TEST_CASE("values within a decade look uniform") {
    Rng rng(77);
    // first-digit frequencies for fixed 4-digit draws
    std::map<char, int> leading;
    for (int i = 0; i < 45000; ++i) ++leading[sample_numeral(rng, 4, 4).str()[0]];
    for (char d = '1'; d <= '9'; ++d) {
        CAPTURE(d);
        CHECK(leading[d] > 4200);
        CHECK(leading[d] < 5800);
    }
}

TEST_CASE("instances always satisfy the active constraints") {
    Rng rng(5150);
    Settings s;
    for (TaskKind task : kAllTasks) {
        for (int i = 0; i < 2000; ++i) {
            ProblemInstance inst = sample_instance(rng, task, s);
            CAPTURE(task_name(task));
            auto violation = validate_instance(inst, s);
            if (violation) CAPTURE(*violation);
            REQUIRE(!violation);
            REQUIRE(inst.answer == canonical_answer(task, inst.operands));
        }
    }
}

TEST_CASE("multi-digit constraint satisfaction") {
    Rng rng(31337);
    Settings s;
    for (int i = 0; i < 5000; ++i) {
        ProblemInstance m = sample_instance(rng, TaskKind::MulNM, s);
        REQUIRE(mul(m.operands[0], m.operands[1]).digit_count() <= s.max_product_digits);
        REQUIRE(m.operands[0].digit_count() >= 2);
        REQUIRE(m.operands[1].digit_count() >= 2);

        ProblemInstance d = sample_instance(rng, TaskKind::DivNM, s);
        REQUIRE(d.operands[0].digit_count() <= s.max_dividend_digits);
        REQUIRE(d.operands[1].digit_count() >= 2);
        REQUIRE(divmod(d.operands[0], d.operands[1]).quotient.digit_count() <=
                s.max_quotient_digits);
    }
}

TEST_CASE("forced special-case rows") {
    Rng rng(8);
    Settings s;
    for (int i = 0; i < 2000; ++i) {
        ProblemInstance m = sample_instance(rng, PlanKey{TaskKind::MulNM, true}, s);
        CHECK(detect_special_case(TaskKind::MulNM, m.operands[0], m.operands[1]) ==
              SpecialCase::SingleNonzeroDigitFactor);
        CHECK(!validate_instance(m, s));

        ProblemInstance d = sample_instance(rng, PlanKey{TaskKind::DivNM, true}, s);
        auto c = detect_special_case(TaskKind::DivNM, d.operands[0], d.operands[1]);
        CHECK(c);
        CHECK(!validate_instance(d, s));
    }
}

TEST_CASE("digit range override") {
    Rng rng(4242);
    Settings s;
    DigitRange range{4, 4};
    for (int i = 0; i < 500; ++i) {
        ProblemInstance m = sample_instance(rng, PlanKey{TaskKind::MulNM, false}, s, range);
        CHECK(m.operands[0].digit_count() == 4);
        CHECK(m.operands[1].digit_count() == 4);

        ProblemInstance a = sample_instance(rng, PlanKey{TaskKind::Addition, false}, s, range);
        CHECK(a.operands[0].digit_count() == 4);

        ProblemInstance d = sample_instance(rng, PlanKey{TaskKind::DivNM, false}, s,
                                            DigitRange{6, 6});
        CHECK(d.operands[0].digit_count() == 6);
    }
    // 7-digit by 7-digit products always exceed the 12-digit cap
    CHECK_THROWS_AS(sample_instance(rng, PlanKey{TaskKind::MulNM, false}, s, DigitRange{7, 7}),
                    std::runtime_error);
}

TEST_CASE("largest-remainder apportionment") {
    auto key = [](TaskKind t) { return PlanKey{t, false}; };

    std::vector<WeightedKey> equal;
    for (TaskKind t : kAllTasks) equal.push_back({key(t), 1.0});
    CompositionPlan plan = plan_composition(10, equal);
    REQUIRE(plan.rows.size() == 10);
    for (const PlanRow& row : plan.rows) CHECK(row.count == 1);

    std::vector<WeightedKey> two = {{key(TaskKind::Addition), 2.0},
                                    {key(TaskKind::Subtraction), 1.0}};
    plan = plan_composition(7, two);
    REQUIRE(plan.rows.size() == 2);
    CHECK(plan.rows[0].count == 5);
    CHECK(plan.rows[1].count == 2);

    CompositionWeights weights;
    plan = plan_composition(1000000, weighted_keys(weights));
    std::uint64_t total = 0;
    for (const PlanRow& row : plan.rows) total += row.count;
    CHECK(total == 1000000);
    CHECK(plan.total == 1000000);

    CHECK_THROWS_AS(plan_composition(10, {}), std::invalid_argument);
    CHECK_THROWS_AS(plan_composition(10, {{key(TaskKind::Addition), 0.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(plan_composition(10, {{key(TaskKind::Addition), -1.0}}),
                    std::invalid_argument);
}

TEST_CASE("plan assignment is a deterministic shuffle of the plan") {
    CompositionWeights weights;
    CompositionPlan plan = plan_composition(10000, weighted_keys(weights));
    auto a = plan_row_assignment(plan, 42);
    auto b = plan_row_assignment(plan, 42);
    CHECK(a == b);
    auto c = plan_row_assignment(plan, 43);
    CHECK(a != c);

    std::map<std::uint32_t, std::uint64_t> counts;
    for (std::uint32_t row : a) ++counts[row];
    REQUIRE(counts.size() == plan.rows.size());
    for (std::size_t row = 0; row < plan.rows.size(); ++row)
        CHECK(counts[static_cast<std::uint32_t>(row)] == plan.rows[row].count);
}

TEST_CASE("record streams are reproducible per (seed, index)") {
    Settings s;
    for (std::uint64_t index : {0ull, 1ull, 999ull}) {
        Rng r1 = Rng::for_record(42, index);
        Rng r2 = Rng::for_record(42, index);
        ProblemInstance a = sample_instance(r1, TaskKind::MulNM, s);
        ProblemInstance b = sample_instance(r2, TaskKind::MulNM, s);
        CHECK(a == b);
    }
    Rng r1 = Rng::for_record(42, 7);
    Rng r2 = Rng::for_record(43, 7);
    CHECK(sample_instance(r1, TaskKind::Addition, s) !=
          sample_instance(r2, TaskKind::Addition, s));
}

TEST_CASE("extrapolation sets walk one digit bucket at a time") {
    Rng rng(16);
    auto set = gen_extrapolation_set(rng, 16, 2, 5);
    REQUIRE(set.size() == 10);
    for (std::size_t i = 0; i < set.size(); ++i) {
        const ProblemInstance& inst = set[i];
        std::size_t expected_digits = 17 + i / 5;
        CHECK(inst.task == TaskKind::Addition);
        CHECK(inst.operands[0].digit_count() == expected_digits);
        CHECK(inst.operands[1].digit_count() == expected_digits);
        CHECK(inst.answer == add(inst.operands[0], inst.operands[1]).str());
    }
    CHECK(gen_extrapolation_set(rng, 16, 0, 3).empty());
}

TEST_CASE("large-operand duplicates stay near the birthday bound") {
    Rng rng(9001);
    std::set<std::pair<std::string, std::string>> seen;
    int duplicates = 0;
    constexpr int kDraws = 100000;
    for (int i = 0; i < kDraws; ++i) {
        Numeral a = sample_numeral(rng, 8, 16);
        Numeral b = sample_numeral(rng, 8, 16);
        if (!seen.emplace(a.str(), b.str()).second) ++duplicates;
    }
    CHECK(duplicates < 5);
}
