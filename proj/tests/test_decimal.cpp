#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lobvol/decimal.hpp"
#include "lobvol/errors.hpp"
#include "lobvol/rng.hpp"

using lobvol::Decimal;

TEST_CASE("parse and canonical rendering") {
    CHECK(Decimal::parse("13.26") == Decimal{1326, -2});
    CHECK(Decimal::parse("0.00000001") == Decimal{1, -8});
    CHECK(Decimal::parse("1500") == Decimal{15, 2});
    CHECK(Decimal::parse("-2.50") == Decimal{-25, -1});
    CHECK(Decimal::parse("1e-8") == Decimal{1, -8});
    CHECK(Decimal::parse("2.5E3") == Decimal{25, 2});
    CHECK(Decimal::parse("0") == Decimal{0, 0});
    CHECK(Decimal::parse("0.0") == Decimal{0, 0});

    CHECK(Decimal::parse("13.26").str() == "13.26");
    CHECK(Decimal::parse("0.00000001").str() == "0.00000001");
    CHECK(Decimal::parse("1500").str() == "1500");
    CHECK(Decimal::parse("-2.50").str() == "-2.5");
    CHECK(Decimal::parse("0").str() == "0");
}

TEST_CASE("rejects malformed text") {
    CHECK(!Decimal::try_parse(""));
    CHECK(!Decimal::try_parse("abc"));
    CHECK(!Decimal::try_parse("1.2.3"));
    CHECK(!Decimal::try_parse("1e"));
    CHECK(!Decimal::try_parse("--1"));
    CHECK(!Decimal::try_parse(" 1"));
    CHECK(!Decimal::try_parse("99999999999999999999999999"));  // mantissa overflow
    CHECK_THROWS_AS((void)Decimal::parse("x"), lobvol::ParameterError);
}

TEST_CASE("numeric comparison aligns exponents") {
    CHECK(Decimal::parse("0.5") < Decimal::parse("1"));
    CHECK(Decimal::parse("100.5") > Decimal::parse("100.49"));
    CHECK(lobvol::compare(Decimal::parse("2.50"), Decimal::parse("2.5")) == 0);
    CHECK(Decimal::parse("-3") < Decimal::parse("0.0001"));
    CHECK(Decimal::parse("-3") < Decimal::parse("-2.999"));
    CHECK(Decimal::parse("1e10") > Decimal::parse("9999999999"));
    CHECK(Decimal::parse("1e-30") > Decimal::parse("0"));
    // magnitude gap beyond 64-bit alignment range
    CHECK(Decimal::parse("1e30") > Decimal::parse("1e-30"));
    CHECK(Decimal::parse("-1e30") < Decimal::parse("-1e-30"));
}

TEST_CASE("round trip: str then parse is identity on random decimals") {
    lobvol::CounterRng rng(17);
    for (int i = 0; i < 2000; ++i) {
        std::int64_t mantissa =
            static_cast<std::int64_t>(rng.next_u64() % 1000000000000ull) - 500000000000ll;
        std::int32_t exponent = static_cast<std::int32_t>(rng.next_u64() % 17) - 8;
        Decimal d{mantissa, exponent};
        // normalize through the parser
        Decimal norm = Decimal::parse(d.str());
        CHECK(Decimal::parse(norm.str()) == norm);
    }
}

TEST_CASE("to_double matches strtod semantics") {
    CHECK(Decimal::parse("0.5").to_double() == 0.5);
    CHECK(Decimal::parse("13.26").to_double() == 13.26);
    CHECK(Decimal::parse("1e-8").to_double() == 1e-8);
}
