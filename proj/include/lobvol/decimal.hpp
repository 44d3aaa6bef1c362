#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace lobvol {

// Exact decimal scalar: value = mantissa * 10^exponent, mantissa normalized so
// it carries no trailing zeros (zero is (0,0)). Prices and volumes are parsed
// into this form and compared exactly; quote data down to 1e-8 BTC survives a
// parse/serialize round trip bit-for-bit.
struct Decimal {
    std::int64_t mantissa = 0;
    std::int32_t exponent = 0;

    // Parses "[+-]digits[.digits][(e|E)[+-]digits]". Returns nullopt on any
    // malformed text or mantissa overflow.
    static std::optional<Decimal> try_parse(std::string_view text);

    // Same as try_parse but throws ParameterError.
    static Decimal parse(std::string_view text);

    static Decimal from_int(std::int64_t v);

    // Canonical plain-decimal rendering ("0.00000001", "13.26", "1500").
    std::string str() const;

    double to_double() const;

    bool is_zero() const { return mantissa == 0; }
    bool is_positive() const { return mantissa > 0; }

    friend bool operator==(const Decimal&, const Decimal&) = default;
};

// Numeric comparison (aligns exponents exactly; never goes through double).
int compare(const Decimal& a, const Decimal& b);

inline bool operator<(const Decimal& a, const Decimal& b) { return compare(a, b) < 0; }
inline bool operator>(const Decimal& a, const Decimal& b) { return compare(a, b) > 0; }
inline bool operator<=(const Decimal& a, const Decimal& b) { return compare(a, b) <= 0; }
inline bool operator>=(const Decimal& a, const Decimal& b) { return compare(a, b) >= 0; }

}  // namespace lobvol
