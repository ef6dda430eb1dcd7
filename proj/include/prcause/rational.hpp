#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>

namespace prcause {

using Rat = mpq_class;

// Parses "p/q" or an integer; decimals are rejected.
Rat parse_rational(std::string_view text);

std::string to_string(const Rat& value);

// Decimal rendering with 17 significant digits.
std::string to_decimal(const Rat& value);

// A rational or +infinity. Only produced by ratio and expectation queries.
class Extended {
public:
    Extended() = default;
    Extended(Rat value) : value_(std::move(value)) {}
    Extended(long value) : value_(value) {}

    static Extended infinity() {
        Extended e;
        e.infinite_ = true;
        return e;
    }

    bool is_infinite() const { return infinite_; }
    const Rat& value() const;

    std::string str() const { return infinite_ ? "inf" : to_string(value_); }
    std::string decimal() const { return infinite_ ? "inf" : to_decimal(value_); }

    friend bool operator==(const Extended& a, const Extended& b) {
        if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
        return a.value_ == b.value_;
    }
    friend std::strong_ordering operator<=>(const Extended& a, const Extended& b) {
        if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
        int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

private:
    Rat value_{0};
    bool infinite_ = false;
};

}  // namespace prcause
