#include "goatforge/sampler.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "goatforge/cot.hpp"

namespace goatforge {

namespace {

constexpr int kMaxResampleAttempts = 10000;

[[noreturn]] void unsatisfiable(TaskKind task) {
    throw std::runtime_error(std::string("constraints make task '") +
                             std::string(task_name(task)) + "' unsatisfiable");
}

// Uniform value below `limit` (exclusive), any width; allows zero.
Numeral sample_below(Rng& rng, const Numeral& limit) {
    if (limit.is_zero()) throw std::invalid_argument("sample_below: zero limit");
    for (;;) {
        std::string digits(limit.digit_count(), '0');
        for (char& c : digits) c = static_cast<char>('0' + rng.digit(0, 9));
        std::size_t first = digits.find_first_not_of('0');
        Numeral value = first == std::string::npos
                            ? Numeral{}
                            : Numeral(digits.substr(first));
        if (cmp(value, limit) == Ord::Less) return value;
    }
}

Numeral sample_single_nonzero(Rng& rng, std::size_t min_digits, std::size_t max_digits) {
    std::size_t d = rng.uniform(min_digits, max_digits);
    std::string digits(d, '0');
    digits[0] = static_cast<char>('0' + rng.digit(1, 9));
    return Numeral(std::move(digits));
}

ProblemInstance make(TaskKind task, std::vector<Numeral> operands) {
    ProblemInstance inst;
    inst.task = task;
    inst.answer = canonical_answer(task, operands);
    inst.operands = std::move(operands);
    return inst;
}

// Digit bounds after applying an optional user range over [lo, hi].
std::pair<std::size_t, std::size_t> clamp_range(std::size_t lo, std::size_t hi,
                                                const DigitRange& range, TaskKind task) {
    if (range.active()) {
        lo = std::max(lo, range.min);
        hi = std::min(hi, range.max);
    }
    if (lo > hi) unsatisfiable(task);
    return {lo, hi};
}

ProblemInstance sample_mul_nm(Rng& rng, const Settings& s, bool force_special,
                              const DigitRange& range) {
    if (s.max_product_digits < 3) unsatisfiable(TaskKind::MulNM);
    auto [lo, hi] = clamp_range(2, s.max_product_digits - 1, range, TaskKind::MulNM);
    for (int attempt = 0; attempt < kMaxResampleAttempts; ++attempt) {
        std::size_t da = rng.uniform(lo, hi);
        std::size_t db_hi = std::min<std::size_t>(hi, s.max_product_digits + 1 - da);
        if (db_hi < lo) continue;
        std::size_t db = rng.uniform(lo, db_hi);
        Numeral a;
        Numeral b;
        if (force_special) {
            a = sample_single_nonzero(rng, da, da);
            b = sample_numeral(rng, db, db);
            if (rng.coin(0.5)) std::swap(a, b);
        } else {
            a = sample_numeral(rng, da, da);
            b = sample_numeral(rng, db, db);
        }
        if (mul(a, b).digit_count() > s.max_product_digits) continue;
        return make(TaskKind::MulNM, {a, b});
    }
    unsatisfiable(TaskKind::MulNM);
}

ProblemInstance sample_div_nm(Rng& rng, const Settings& s, bool force_special,
                              const DigitRange& range) {
    if (s.max_dividend_digits < 3) unsatisfiable(TaskKind::DivNM);

    if (force_special) {
        auto [lo, hi] = clamp_range(2, s.max_dividend_digits, range, TaskKind::DivNM);
        Numeral divisor = sample_numeral(rng, lo, hi);
        if (rng.coin(0.5)) return make(TaskKind::DivNM, {divisor, divisor});
        for (;;) {
            Numeral dividend = sample_below(rng, divisor);
            if (!dividend.is_zero())
                return make(TaskKind::DivNM, {dividend, divisor});
        }
    }

    // Quotient and divisor first, dividend derived: the quotient bound
    // then holds by construction and only the dividend width needs a
    // rejection check.
    auto [div_lo, div_hi] = clamp_range(2, s.max_dividend_digits, range, TaskKind::DivNM);
    for (int attempt = 0; attempt < kMaxResampleAttempts; ++attempt) {
        Numeral quotient = sample_numeral(rng, 1, s.max_quotient_digits);
        std::size_t divisor_max =
            std::min(s.max_dividend_digits - quotient.digit_count() + 1,
                     s.max_dividend_digits);
        if (divisor_max < 2) continue;
        Numeral divisor = sample_numeral(rng, 2, divisor_max);
        Numeral remainder = sample_below(rng, divisor);
        Numeral dividend = add(mul(quotient, divisor), remainder);
        if (dividend.digit_count() > s.max_dividend_digits) continue;
        if (dividend.digit_count() < div_lo || dividend.digit_count() > div_hi) continue;
        return make(TaskKind::DivNM, {dividend, divisor});
    }
    unsatisfiable(TaskKind::DivNM);
}

}  // namespace

std::string plan_key_name(const PlanKey& key) {
    std::string name(task_name(key.task));
    if (key.force_special) name += "_special";
    return name;
}

CompositionPlan plan_composition(std::uint64_t total, const std::vector<WeightedKey>& weights) {
    if (weights.empty()) throw std::invalid_argument("composition weights are empty");
    long double weight_sum = 0.0L;
    for (const WeightedKey& w : weights) {
        if (w.weight < 0.0) throw std::invalid_argument("composition weight is negative");
        weight_sum += w.weight;
    }
    if (weight_sum <= 0.0L) throw std::invalid_argument("composition weights are all zero");

    struct Share {
        std::size_t index;
        std::uint64_t count;
        long double fraction;
    };
    std::vector<Share> shares;
    shares.reserve(weights.size());
    std::uint64_t assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        long double quota =
            static_cast<long double>(total) * weights[i].weight / weight_sum;
        auto count = static_cast<std::uint64_t>(quota);
        shares.push_back(Share{i, count, quota - static_cast<long double>(count)});
        assigned += count;
    }
    std::stable_sort(shares.begin(), shares.end(),
                     [](const Share& a, const Share& b) { return a.fraction > b.fraction; });
    for (std::size_t i = 0; assigned < total; ++i, ++assigned)
        ++shares[i % shares.size()].count;
    std::sort(shares.begin(), shares.end(),
              [](const Share& a, const Share& b) { return a.index < b.index; });

    CompositionPlan plan;
    plan.total = total;
    for (const Share& share : shares) {
        if (share.count == 0) continue;
        plan.rows.push_back(PlanRow{weights[share.index].key, share.count});
    }
    return plan;
}

Numeral sample_numeral(Rng& rng, std::size_t min_digits, std::size_t max_digits) {
    if (min_digits < 1 || min_digits > max_digits)
        throw std::invalid_argument("sample_numeral: invalid digit range");
    std::size_t d = rng.uniform(min_digits, max_digits);
    std::string digits(d, '0');
    digits[0] = static_cast<char>('0' + rng.digit(1, 9));
    for (std::size_t i = 1; i < d; ++i)
        digits[i] = static_cast<char>('0' + rng.digit(0, 9));
    return Numeral(std::move(digits));
}

ProblemInstance sample_instance(Rng& rng, TaskKind task, const Settings& s,
                                const DigitRange& range) {
    return sample_instance(rng, PlanKey{task, false}, s, range);
}

ProblemInstance sample_instance(Rng& rng, const PlanKey& key, const Settings& s,
                                const DigitRange& range) {
    if (auto err = s.check()) throw std::invalid_argument(*err);
    if (range.active() && range.min > range.max)
        throw std::invalid_argument("digit range: min exceeds max");

    switch (key.task) {
        case TaskKind::Copying:
        case TaskKind::Split: {
            auto [lo, hi] = clamp_range(1, s.max_addsub_digits, range, key.task);
            return make(key.task, {sample_numeral(rng, lo, hi)});
        }
        case TaskKind::Comparison: {
            auto [lo, hi] = clamp_range(1, s.max_addsub_digits, range, key.task);
            return make(key.task, {sample_numeral(rng, lo, hi), sample_numeral(rng, lo, hi)});
        }
        case TaskKind::Ordering: {
            auto [lo, hi] = clamp_range(1, s.max_addsub_digits, range, key.task);
            std::size_t count = rng.uniform(2, 4);
            std::vector<Numeral> operands;
            operands.reserve(count);
            for (std::size_t i = 0; i < count; ++i)
                operands.push_back(sample_numeral(rng, lo, hi));
            return make(key.task, std::move(operands));
        }
        case TaskKind::Addition:
        case TaskKind::Subtraction: {
            auto [lo, hi] = clamp_range(1, s.max_addsub_digits, range, key.task);
            return make(key.task, {sample_numeral(rng, lo, hi), sample_numeral(rng, lo, hi)});
        }
        case TaskKind::MulN1: {
            auto [lo, hi] = clamp_range(1, s.max_product_digits, range, key.task);
            for (int attempt = 0; attempt < kMaxResampleAttempts; ++attempt) {
                Numeral a = sample_numeral(rng, lo, hi);
                Numeral d = sample_numeral(rng, 1, 1);
                if (mul(a, d).digit_count() > s.max_product_digits) continue;
                return make(key.task, {a, d});
            }
            unsatisfiable(key.task);
        }
        case TaskKind::DivN1: {
            auto [lo, hi] = clamp_range(1, s.max_dividend_digits, range, key.task);
            return make(key.task, {sample_numeral(rng, lo, hi), sample_numeral(rng, 1, 1)});
        }
        case TaskKind::MulNM:
            return sample_mul_nm(rng, s, key.force_special, range);
        case TaskKind::DivNM:
            return sample_div_nm(rng, s, key.force_special, range);
    }
    throw std::invalid_argument("unknown task");
}

std::vector<ProblemInstance> gen_extrapolation_set(Rng& rng, std::size_t base_digits,
                                                   std::size_t max_extra,
                                                   std::size_t per_bucket) {
    if (base_digits < 1) throw std::invalid_argument("base_digits must be positive");
    std::vector<ProblemInstance> out;
    out.reserve(max_extra * per_bucket);
    for (std::size_t extra = 1; extra <= max_extra; ++extra) {
        std::size_t digits = base_digits + extra;
        for (std::size_t i = 0; i < per_bucket; ++i) {
            ProblemInstance inst = make(TaskKind::Addition,
                                        {sample_numeral(rng, digits, digits),
                                         sample_numeral(rng, digits, digits)});
            inst.seed_index = out.size();
            out.push_back(std::move(inst));
        }
    }
    return out;
}

std::vector<std::uint32_t> plan_row_assignment(const CompositionPlan& plan,
                                               std::uint64_t master_seed) {
    std::vector<std::uint32_t> assignment;
    assignment.reserve(plan.total);
    for (std::size_t row = 0; row < plan.rows.size(); ++row)
        assignment.insert(assignment.end(), plan.rows[row].count,
                          static_cast<std::uint32_t>(row));
    Rng rng = Rng::for_record(master_seed, 0x706c616eull);  // independent shuffle stream
    for (std::size_t i = assignment.size(); i > 1; --i)
        std::swap(assignment[i - 1], assignment[rng.uniform(0, i - 1)]);
    return assignment;
}

}  // namespace goatforge
