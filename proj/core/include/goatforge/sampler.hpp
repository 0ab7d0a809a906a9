#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "goatforge/numeral.hpp"
#include "goatforge/rng.hpp"
#include "goatforge/task.hpp"

namespace goatforge {

/// One dataset slice: a task, and for the multi-digit kinds whether the
/// slice deliberately produces special-case (direct-answer) instances.
struct PlanKey {
    TaskKind task = TaskKind::Addition;
    bool force_special = false;

    auto operator<=>(const PlanKey& other) const = default;
};

std::string plan_key_name(const PlanKey& key);

struct PlanRow {
    PlanKey key;
    std::uint64_t count = 0;

    bool operator==(const PlanRow& other) const = default;
};

struct CompositionPlan {
    std::vector<PlanRow> rows;  // fixed task order, zero-count rows dropped
    std::uint64_t total = 0;

    bool operator==(const CompositionPlan& other) const = default;
};

struct WeightedKey {
    PlanKey key;
    double weight = 0.0;
};

/// Largest-remainder apportionment of `total` across the weighted keys;
/// ties break by key order. Throws std::invalid_argument when weights
/// are empty, negative, or all zero.
CompositionPlan plan_composition(std::uint64_t total, const std::vector<WeightedKey>& weights);

/// Log-space sampling: digit count uniform in [min_digits, max_digits],
/// then the value uniform within that decade. Never returns zero.
Numeral sample_numeral(Rng& rng, std::size_t min_digits, std::size_t max_digits);

/// Optional override of the operand digit range (both bounds inclusive;
/// min = 0 means inactive). For division it constrains the dividend.
struct DigitRange {
    std::size_t min = 0;
    std::size_t max = 0;

    bool active() const { return min > 0; }
    bool operator==(const DigitRange& other) const = default;
};

/// Draws one instance satisfying validate_instance under `s`, filling the
/// answer field from the exact oracle. Multi-digit constraints are met by
/// rejection; derived div sampling picks quotient and divisor first so the
/// quotient bound holds by construction.
ProblemInstance sample_instance(Rng& rng, TaskKind task, const Settings& s,
                                const DigitRange& range = {});

/// Plan-row variant: force_special draws a guaranteed special-case
/// instance for MulNM/DivNM.
ProblemInstance sample_instance(Rng& rng, const PlanKey& key, const Settings& s,
                                const DigitRange& range = {});

/// Out-of-distribution addition buckets: per_bucket instances at each of
/// (base_digits+1) .. (base_digits+max_extra) digits, both operands the
/// same width. Deliberately ignores Settings.
std::vector<ProblemInstance> gen_extrapolation_set(Rng& rng, std::size_t base_digits,
                                                   std::size_t max_extra,
                                                   std::size_t per_bucket);

/// Deterministic record->row assignment: the plan's rows expanded to one
/// entry per record and shuffled by a generator derived from the master
/// seed. Workers index into this to learn what record i contains.
std::vector<std::uint32_t> plan_row_assignment(const CompositionPlan& plan,
                                               std::uint64_t master_seed);

}  // namespace goatforge
