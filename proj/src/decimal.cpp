#include "lobvol/decimal.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "lobvol/errors.hpp"

namespace lobvol {

namespace {

constexpr std::int64_t kMaxMantissa = std::numeric_limits<std::int64_t>::max() / 10;

void normalize(std::int64_t& mantissa, std::int32_t& exponent) {
    if (mantissa == 0) {
        exponent = 0;
        return;
    }
    while (mantissa % 10 == 0) {
        mantissa /= 10;
        ++exponent;
    }
}

}  // namespace

std::optional<Decimal> Decimal::try_parse(std::string_view text) {
    const char* p = text.data();
    const char* end = p + text.size();
    if (p == end) return std::nullopt;

    bool negative = false;
    if (*p == '+' || *p == '-') {
        negative = (*p == '-');
        ++p;
    }

    auto take_digits = [&]() {
        const char* start = p;
        while (p != end && std::isdigit(static_cast<unsigned char>(*p))) ++p;
        return std::string_view(start, static_cast<std::size_t>(p - start));
    };
    std::string_view int_part = take_digits();
    std::string_view frac_part;
    if (p != end && *p == '.') {
        ++p;
        frac_part = take_digits();
    }
    if (int_part.empty() && frac_part.empty()) return std::nullopt;

    std::int64_t exp10 = 0;
    if (p != end && (*p == 'e' || *p == 'E')) {
        ++p;
        bool exp_neg = false;
        if (p != end && (*p == '+' || *p == '-')) {
            exp_neg = (*p == '-');
            ++p;
        }
        if (p == end || !std::isdigit(static_cast<unsigned char>(*p))) return std::nullopt;
        while (p != end && std::isdigit(static_cast<unsigned char>(*p))) {
            exp10 = exp10 * 10 + (*p - '0');
            if (exp10 > 100000) return std::nullopt;
            ++p;
        }
        if (exp_neg) exp10 = -exp10;
    }
    if (p != end) return std::nullopt;

    // Strip leading and trailing zeros of the combined digit stream before
    // building the mantissa, so values like 3.7e19 written out in full still
    // fit in 64 bits.
    std::string digits;
    digits.reserve(int_part.size() + frac_part.size());
    digits.append(int_part);
    digits.append(frac_part);
    std::size_t first = digits.find_first_not_of('0');
    if (first == std::string::npos) return Decimal{0, 0};
    std::size_t last = digits.find_last_not_of('0');
    std::size_t trailing = digits.size() - 1 - last;

    std::int64_t mantissa = 0;
    for (std::size_t i = first; i <= last; ++i) {
        if (mantissa > kMaxMantissa) return std::nullopt;
        std::int64_t next = mantissa * 10 + (digits[i] - '0');
        if (next < mantissa) return std::nullopt;
        mantissa = next;
    }
    std::int64_t exponent64 =
        exp10 - static_cast<std::int64_t>(frac_part.size()) + static_cast<std::int64_t>(trailing);
    if (exponent64 > 200000 || exponent64 < -200000) return std::nullopt;

    if (negative) mantissa = -mantissa;
    std::int32_t exponent = static_cast<std::int32_t>(exponent64);
    normalize(mantissa, exponent);
    return Decimal{mantissa, exponent};
}

Decimal Decimal::parse(std::string_view text) {
    auto d = try_parse(text);
    if (!d) throw ParameterError("not a decimal number: '" + std::string(text) + "'");
    return *d;
}

Decimal Decimal::from_int(std::int64_t v) {
    std::int64_t m = v;
    std::int32_t e = 0;
    normalize(m, e);
    return Decimal{m, e};
}

std::string Decimal::str() const {
    if (mantissa == 0) return "0";
    std::string digits = std::to_string(mantissa < 0 ? -mantissa : mantissa);
    std::string out = mantissa < 0 ? "-" : "";
    if (exponent >= 0) {
        out += digits;
        out.append(static_cast<std::size_t>(exponent), '0');
    } else {
        std::size_t frac = static_cast<std::size_t>(-exponent);
        if (digits.size() > frac) {
            out += digits.substr(0, digits.size() - frac);
            out += '.';
            out += digits.substr(digits.size() - frac);
        } else {
            out += "0.";
            out.append(frac - digits.size(), '0');
            out += digits;
        }
    }
    return out;
}

double Decimal::to_double() const {
    // strtod on the canonical rendering gives the correctly rounded double.
    return std::strtod(str().c_str(), nullptr);
}

int compare(const Decimal& a, const Decimal& b) {
    if (a.mantissa == 0 || b.mantissa == 0 || (a.mantissa < 0) != (b.mantissa < 0)) {
        if (a.mantissa < b.mantissa) return -1;
        if (a.mantissa > b.mantissa) return 1;
        if (a.mantissa != 0) return 0;  // both zero
        return 0;
    }
    // Same sign, both nonzero: align exponents in 128-bit arithmetic.
    __int128 ma = a.mantissa;
    __int128 mb = b.mantissa;
    std::int32_t ea = a.exponent;
    std::int32_t eb = b.exponent;
    while (ea > eb && ma > std::numeric_limits<std::int64_t>::min() &&
           ma < std::numeric_limits<std::int64_t>::max()) {
        ma *= 10;
        --ea;
    }
    while (eb > ea && mb > std::numeric_limits<std::int64_t>::min() &&
           mb < std::numeric_limits<std::int64_t>::max()) {
        mb *= 10;
        --eb;
    }
    if (ea != eb) {
        // Alignment hit the 128-bit guard: magnitudes differ by > 18 orders.
        bool a_bigger = (ea > eb);
        bool positive = a.mantissa > 0;
        return a_bigger == positive ? 1 : -1;
    }
    if (ma < mb) return -1;
    if (ma > mb) return 1;
    return 0;
}

}  // namespace lobvol
