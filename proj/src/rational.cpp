#include "prcause/rational.hpp"

#include "prcause/error.hpp"

#include <cctype>
#include <cstdio>

namespace prcause {

namespace {

bool is_integer_literal(std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

}  // namespace

Rat parse_rational(std::string_view text) {
    auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+')
        throw InputError("expected a fraction p/q or an integer, got '" + std::string(text) + "'");
    mpz_class n(std::string(num[0] == '+' ? num.substr(1) : num));
    mpz_class d{std::string(den)};
    if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    Rat r(n, d);
    r.canonicalize();
    return r;
}

std::string to_string(const Rat& value) {
    if (value.get_den() == 1) return value.get_num().get_str();
    return value.get_str();
}

std::string to_decimal(const Rat& value) {
    mpf_class x(value, 256);
    char buf[64];
    gmp_snprintf(buf, sizeof buf, "%.17Fg", x.get_mpf_t());
    return buf;
}

const Rat& Extended::value() const {
    if (infinite_) throw PreconditionError("value requested from an infinite result");
    return value_;
}

}  // namespace prcause
