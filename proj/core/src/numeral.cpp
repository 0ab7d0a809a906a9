#include "goatforge/numeral.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <vector>

namespace goatforge {

namespace {

// Arithmetic runs on little-endian base-1e9 limbs; the digit string is
// only a boundary format. Values in this project rarely exceed ~35
// digits (verification of model-claimed products), so schoolbook
// complexity is fine.
constexpr std::uint32_t kLimbBase = 1000000000u;
constexpr int kLimbDigits = 9;

using Limbs = std::vector<std::uint32_t>;

Limbs to_limbs(const std::string& digits) {
    Limbs limbs;
    limbs.reserve(digits.size() / kLimbDigits + 1);
    std::size_t pos = digits.size();
    while (pos > 0) {
        std::size_t take = std::min<std::size_t>(kLimbDigits, pos);
        std::uint32_t limb = 0;
        for (std::size_t i = pos - take; i < pos; ++i)
            limb = limb * 10 + static_cast<std::uint32_t>(digits[i] - '0');
        limbs.push_back(limb);
        pos -= take;
    }
    while (limbs.size() > 1 && limbs.back() == 0) limbs.pop_back();
    return limbs;
}

std::string from_limbs(const Limbs& limbs) {
    std::string out = std::to_string(limbs.back());
    for (std::size_t i = limbs.size() - 1; i-- > 0;) {
        std::string part = std::to_string(limbs[i]);
        out.append(kLimbDigits - part.size(), '0');
        out += part;
    }
    return out;
}

int cmp_limbs(const Limbs& a, const Limbs& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

Limbs add_limbs(const Limbs& a, const Limbs& b) {
    Limbs out;
    out.reserve(std::max(a.size(), b.size()) + 1);
    std::uint32_t carry = 0;
    for (std::size_t i = 0; i < a.size() || i < b.size(); ++i) {
        std::uint32_t sum = carry;
        if (i < a.size()) sum += a[i];
        if (i < b.size()) sum += b[i];
        carry = sum >= kLimbBase ? 1 : 0;
        out.push_back(sum >= kLimbBase ? sum - kLimbBase : sum);
    }
    if (carry) out.push_back(carry);
    return out;
}

// Requires a >= b.
Limbs sub_limbs(const Limbs& a, const Limbs& b) {
    Limbs out;
    out.reserve(a.size());
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::int64_t diff = static_cast<std::int64_t>(a[i]) - borrow -
                            (i < b.size() ? static_cast<std::int64_t>(b[i]) : 0);
        if (diff < 0) {
            diff += kLimbBase;
            borrow = 1;
        } else {
            borrow = 0;
        }
        out.push_back(static_cast<std::uint32_t>(diff));
    }
    while (out.size() > 1 && out.back() == 0) out.pop_back();
    return out;
}

bool limbs_zero(const Limbs& a) { return a.size() == 1 && a[0] == 0; }

Limbs mul_limbs(const Limbs& a, const Limbs& b) {
    if (limbs_zero(a) || limbs_zero(b)) return {0};
    std::vector<unsigned __int128> acc(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j)
            acc[i + j] += static_cast<std::uint64_t>(a[i]) * b[j];
    }
    Limbs out(acc.size());
    unsigned __int128 carry = 0;
    for (std::size_t i = 0; i < acc.size(); ++i) {
        unsigned __int128 cur = acc[i] + carry;
        out[i] = static_cast<std::uint32_t>(cur % kLimbBase);
        carry = cur / kLimbBase;
    }
    while (carry) {
        out.push_back(static_cast<std::uint32_t>(carry % kLimbBase));
        carry /= kLimbBase;
    }
    while (out.size() > 1 && out.back() == 0) out.pop_back();
    return out;
}

Limbs mul_small(const Limbs& a, std::uint32_t m) {
    if (m == 0 || limbs_zero(a)) return {0};
    Limbs out;
    out.reserve(a.size() + 1);
    std::uint64_t carry = 0;
    for (std::uint32_t limb : a) {
        std::uint64_t cur = static_cast<std::uint64_t>(limb) * m + carry;
        out.push_back(static_cast<std::uint32_t>(cur % kLimbBase));
        carry = cur / kLimbBase;
    }
    while (carry) {
        out.push_back(static_cast<std::uint32_t>(carry % kLimbBase));
        carry /= kLimbBase;
    }
    return out;
}

// Divisor fits one limb: single pass, remainder carried in 64 bits.
std::pair<Limbs, std::uint32_t> divmod_small(const Limbs& a, std::uint32_t d) {
    Limbs q(a.size(), 0);
    std::uint64_t rem = 0;
    for (std::size_t i = a.size(); i-- > 0;) {
        std::uint64_t cur = rem * kLimbBase + a[i];
        q[i] = static_cast<std::uint32_t>(cur / d);
        rem = cur % d;
    }
    while (q.size() > 1 && q.back() == 0) q.pop_back();
    return {std::move(q), static_cast<std::uint32_t>(rem)};
}

Limbs shift_limbs(Limbs v, std::size_t k) {
    if (limbs_zero(v)) return v;
    v.insert(v.begin(), k, 0);
    return v;
}

// General long division over limbs: for each quotient limb position,
// binary-search the limb value against shifted multiples of the divisor.
std::pair<Limbs, Limbs> divmod_limbs(const Limbs& a, const Limbs& b) {
    if (b.size() == 1) {
        auto [q, r] = divmod_small(a, b[0]);
        return {std::move(q), Limbs{r}};
    }
    if (cmp_limbs(a, b) < 0) return {Limbs{0}, a};

    std::size_t qlen = a.size() - b.size() + 1;
    Limbs quotient(qlen, 0);
    Limbs rem = a;
    for (std::size_t pos = qlen; pos-- > 0;) {
        Limbs shifted = shift_limbs(b, pos);
        if (cmp_limbs(rem, shifted) < 0) continue;
        std::uint32_t lo = 1, hi = kLimbBase - 1, best = 1;
        while (lo <= hi) {
            std::uint32_t mid = lo + (hi - lo) / 2;
            if (cmp_limbs(mul_small(shifted, mid), rem) <= 0) {
                best = mid;
                lo = mid + 1;
            } else {
                if (mid == 0) break;
                hi = mid - 1;
            }
        }
        quotient[pos] = best;
        rem = sub_limbs(rem, mul_small(shifted, best));
    }
    while (quotient.size() > 1 && quotient.back() == 0) quotient.pop_back();
    return {std::move(quotient), std::move(rem)};
}

std::optional<std::string> canonical_error(std::string_view text) {
    if (text.empty()) return "numeral is empty";
    for (char c : text) {
        if (c < '0' || c > '9')
            return std::string("numeral contains non-digit character '") + c + "'";
    }
    if (text.size() > 1 && text.front() == '0') return "numeral has a leading zero";
    return std::nullopt;
}

}  // namespace

Numeral numeral_unchecked(std::string digits) {
    return Numeral(std::move(digits), Numeral::unchecked_tag{});
}

Numeral::Numeral(std::string digits) : digits_(std::move(digits)) {
    if (auto err = canonical_error(digits_)) throw std::invalid_argument(*err);
}

Numeral Numeral::from_u64(std::uint64_t value) {
    return numeral_unchecked(std::to_string(value));
}

std::optional<Numeral> Numeral::parse(std::string_view text) {
    if (canonical_error(text)) return std::nullopt;
    return numeral_unchecked(std::string(text));
}

std::size_t Numeral::nonzero_digit_count() const {
    return static_cast<std::size_t>(
        std::count_if(digits_.begin(), digits_.end(), [](char c) { return c != '0'; }));
}

std::strong_ordering Numeral::operator<=>(const Numeral& other) const {
    if (digits_.size() != other.digits_.size())
        return digits_.size() <=> other.digits_.size();
    return digits_.compare(other.digits_) <=> 0;
}

std::string SignedNumeral::str() const {
    return negative ? "-" + magnitude.str() : magnitude.str();
}

Numeral add(const Numeral& a, const Numeral& b) {
    return numeral_unchecked(from_limbs(add_limbs(to_limbs(a.str()), to_limbs(b.str()))));
}

SignedNumeral sub(const Numeral& a, const Numeral& b) {
    Limbs la = to_limbs(a.str());
    Limbs lb = to_limbs(b.str());
    int c = cmp_limbs(la, lb);
    if (c == 0) return SignedNumeral{false, Numeral{}};
    if (c > 0) return SignedNumeral{false, numeral_unchecked(from_limbs(sub_limbs(la, lb)))};
    return SignedNumeral{true, numeral_unchecked(from_limbs(sub_limbs(lb, la)))};
}

Numeral mul(const Numeral& a, const Numeral& b) {
    return numeral_unchecked(from_limbs(mul_limbs(to_limbs(a.str()), to_limbs(b.str()))));
}

DivModResult divmod(const Numeral& a, const Numeral& b) {
    if (b.is_zero()) throw std::domain_error("division by zero");
    auto [q, r] = divmod_limbs(to_limbs(a.str()), to_limbs(b.str()));
    return DivModResult{numeral_unchecked(from_limbs(q)), numeral_unchecked(from_limbs(r))};
}

Ord cmp(const Numeral& a, const Numeral& b) {
    auto c = a <=> b;
    if (c < 0) return Ord::Less;
    if (c > 0) return Ord::Greater;
    return Ord::Equal;
}

Numeral pow10(std::size_t k) {
    std::string s(k + 1, '0');
    s[0] = '1';
    return numeral_unchecked(std::move(s));
}

}  // namespace goatforge
