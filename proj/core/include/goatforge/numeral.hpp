#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace goatforge {

/// Non-negative decimal integer held as its canonical digit string
/// (most significant digit first, no leading zeros, "0" for zero).
class Numeral {
public:
    Numeral() : digits_("0") {}

    /// Validating constructor. Throws std::invalid_argument on empty
    /// input, non-digit characters, or a leading zero ("007" is rejected,
    /// not normalized).
    explicit Numeral(std::string digits);

    static Numeral from_u64(std::uint64_t value);

    /// Non-throwing parse; rejects exactly what the constructor rejects.
    static std::optional<Numeral> parse(std::string_view text);

    const std::string& str() const { return digits_; }
    std::size_t digit_count() const { return digits_.size(); }
    bool is_zero() const { return digits_ == "0"; }
    std::size_t nonzero_digit_count() const;

    bool operator==(const Numeral& other) const = default;
    std::strong_ordering operator<=>(const Numeral& other) const;

private:
    struct unchecked_tag {};
    Numeral(std::string digits, unchecked_tag) : digits_(std::move(digits)) {}
    friend Numeral numeral_unchecked(std::string digits);

    std::string digits_;
};

/// Signed value; only subtraction produces these. Never a negative zero.
struct SignedNumeral {
    bool negative = false;
    Numeral magnitude;

    std::string str() const;
    bool operator==(const SignedNumeral& other) const = default;
};

enum class Ord { Less, Equal, Greater };

struct DivModResult {
    Numeral quotient;
    Numeral remainder;
    bool operator==(const DivModResult& other) const = default;
};

Numeral add(const Numeral& a, const Numeral& b);
SignedNumeral sub(const Numeral& a, const Numeral& b);
Numeral mul(const Numeral& a, const Numeral& b);

/// Euclidean division with least positive remainder:
/// a = q*b + r, 0 <= r < b. Throws std::domain_error when b is zero.
DivModResult divmod(const Numeral& a, const Numeral& b);

Ord cmp(const Numeral& a, const Numeral& b);

/// 10^k.
Numeral pow10(std::size_t k);

}  // namespace goatforge
