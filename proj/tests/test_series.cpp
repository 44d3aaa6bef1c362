#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lobvol/errors.hpp"
#include "lobvol/rng.hpp"
#include "lobvol/series.hpp"
#include "lobvol/series_io.hpp"

using namespace lobvol;

namespace {

std::string two_level_file() {
    return
        "timestamp,side,level,price,volume\n"
        "0,ask,1,100,2.0\n"
        "0,ask,2,101,5.0\n"
        "0,bid,1,99,1.5\n"
        "0,bid,2,98,9.0\n"
        "10,ask,1,100,2.5\n"
        "10,bid,1,99,1.25\n"
        // slot 2 (t=20) missing
        "30,ask,1,100,4.0\n"
        "30,bid,1,99,8.0\n";
}

SnapshotStream parse_str(const std::string& text, std::int64_t max_gap = 30) {
    std::istringstream in(text);
    return parse_snapshots(in, FormatConfig{}, max_gap);
}

VolumeSeries make_series(std::initializer_list<double> values) {
    VolumeSeries s;
    s.values = values;
    s.valid.assign(s.values.size(), 1);
    s.segment.assign(s.values.size(), 0);
    return s;
}

}  // namespace

TEST_CASE("best quote picks lowest ask and highest bid") {
    SnapshotStream stream = parse_str(two_level_file());
    VolumeSeries ask = best_volume_series(stream, Side::ask);
    VolumeSeries bid = best_volume_series(stream, Side::bid);
    REQUIRE(ask.size() == 4);
    CHECK(ask.values[0] == 2.0);   // best ask = lowest price level
    CHECK(bid.values[0] == 1.5);   // best bid = highest price level
    CHECK(ask.valid[2] == 0);      // missing slot propagates as invalid
    CHECK(ask.valid[3] == 1);
    CHECK(ask.values[3] == 4.0);
}

TEST_CASE("empty stream yields an empty series") {
    SnapshotStream stream;
    VolumeSeries v = best_volume_series(stream, Side::ask);
    CHECK(v.size() == 0);
}

TEST_CASE("resample takes the closing value per window") {
    VolumeSeries s = make_series({1, 2, 3, 4, 5, 6});
    VolumeSeries r = resample(s, 60);
    REQUIRE(r.size() == 1);
    CHECK(r.values[0] == 6.0);
    CHECK(r.valid[0] == 1);

    // identity
    VolumeSeries same = resample(s, 10);
    CHECK(same.values == s.values);

    // fully invalid window stays invalid
    VolumeSeries gappy = make_series({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
    for (std::size_t i = 6; i < 12; ++i) {
        gappy.valid[i] = 0;
        gappy.segment[i] = -1;
    }
    VolumeSeries rg = resample(gappy, 60);
    REQUIRE(rg.size() == 2);
    CHECK(rg.valid[0] == 1);
    CHECK(rg.valid[1] == 0);

    CHECK_THROWS_AS((void)resample(s, 25), ParameterError);
    CHECK_THROWS_AS((void)resample(s, -10), ParameterError);
}

TEST_CASE("resample associativity on a gappy series") {
    CounterRng rng(5);
    VolumeSeries s;
    for (int i = 0; i < 1000; ++i) {
        bool ok = rng.next_uniform() > 0.2;
        s.values.push_back(1.0 + rng.next_uniform() * 10);
        s.valid.push_back(ok ? 1 : 0);
        s.segment.push_back(ok ? static_cast<std::int32_t>(i / 333) : -1);
    }
    VolumeSeries direct = resample(s, 180);
    VolumeSeries stepped = resample(resample(s, 60), 180);
    REQUIRE(direct.size() == stepped.size());
    for (std::size_t i = 0; i < direct.size(); ++i) {
        CHECK(direct.valid[i] == stepped.valid[i]);
        if (direct.valid[i]) CHECK(direct.values[i] == stepped.values[i]);
    }
}

TEST_CASE("log returns: exact values, zeros, and gap handling") {
    VolumeSeries s = make_series({1, 10, 1});
    ReturnSeries r = log_returns(s);
    REQUIRE(r.size() == 2);
    CHECK(r.values[0] == doctest::Approx(std::log(10.0)).epsilon(1e-15));
    CHECK(r.values[1] == doctest::Approx(-std::log(10.0)).epsilon(1e-15));
    // antisymmetry is exact by construction (difference of the same two logs)
    CHECK(r.values[0] == -r.values[1]);

    VolumeSeries flat = make_series({5, 5, 5, 5});
    ReturnSeries rf = log_returns(flat);
    for (std::size_t i = 0; i < rf.size(); ++i) CHECK(rf.values[i] == 0.0);

    VolumeSeries gap = make_series({2, 1, 8});
    gap.valid[1] = 0;
    gap.segment[1] = -1;
    ReturnSeries rg = log_returns(gap);
    CHECK(rg.valid[0] == 0);
    CHECK(rg.valid[1] == 0);

    // segment boundary between valid slots also invalidates the return
    VolumeSeries seg = make_series({2, 4});
    seg.segment[1] = 1;
    ReturnSeries rs = log_returns(seg);
    CHECK(rs.valid[0] == 0);
}

TEST_CASE("returns are side-agnostic in magnitude") {
    // magnitudes stored unsigned; the sign convention is a flag only, so the
    // bid series produces identical returns
    VolumeSeries ask = make_series({2, 6, 3});
    VolumeSeries bid = ask;
    bid.side = Side::bid;
    ReturnSeries ra = log_returns(ask);
    ReturnSeries rb = log_returns(bid);
    CHECK(ra.values == rb.values);
}

TEST_CASE("aggregation consistency: coarse returns telescope fine returns") {
    CounterRng rng(11);
    VolumeSeries s;
    for (int i = 0; i < 600; ++i) {
        s.values.push_back(std::exp(rng.next_normal()));
        s.valid.push_back(1);
        s.segment.push_back(0);
    }
    ReturnSeries fine = log_returns(s);
    ReturnSeries coarse = log_returns(resample(s, 60));
    for (std::size_t j = 0; j < coarse.size(); ++j) {
        double sum = 0.0;
        for (std::size_t i = 6 * j + 5; i < 6 * j + 11; ++i) sum += fine.values[i];
        CHECK(coarse.values[j] == doctest::Approx(sum).epsilon(1e-12));
    }
}

TEST_CASE("descriptive stats on the hand-computed fixture") {
    VolumeSeries s = make_series({1, 2, 3, 4, 5});
    DescriptiveStats stats = descriptive_stats(s);
    CHECK(stats.median == 3.0);
    CHECK(stats.mean == 3.0);
    CHECK(stats.iqr == 2.0);  // nearest-rank quartiles: 4 - 2
    CHECK(stats.n == 5);
    CHECK(stats.std_dev == doctest::Approx(std::sqrt(2.5)));
    CHECK(stats.skewness == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    // population kurtosis of {1..5}: m4/m2^2 = 6.8/4 = 1.7
    CHECK(stats.kurtosis == doctest::Approx(1.7).epsilon(1e-12));

    VolumeSeries tiny = make_series({1});
    CHECK_THROWS_AS((void)descriptive_stats(tiny), InsufficientDataError);
}

TEST_CASE("stats unchanged by appending an invalid slot") {
    VolumeSeries s = make_series({1, 2, 3, 4, 5});
    DescriptiveStats before = descriptive_stats(s);
    s.values.push_back(99.0);
    s.valid.push_back(0);
    s.segment.push_back(-1);
    DescriptiveStats after = descriptive_stats(s);
    CHECK(before.mean == after.mean);
    CHECK(before.median == after.median);
    CHECK(before.kurtosis == after.kurtosis);
    CHECK(before.n == after.n);
}

TEST_CASE("empirical cdf steps and dominance") {
    VolumeSeries s = make_series({1, 1, 2});
    auto cdf = empirical_cdf(s);
    REQUIRE(cdf.size() == 2);
    CHECK(cdf[0] == std::pair<double, double>{1.0, 2.0 / 3.0});
    CHECK(cdf[1] == std::pair<double, double>{2.0, 1.0});

    VolumeSeries single = make_series({7});
    auto one = empirical_cdf(single);
    REQUIRE(one.size() == 1);
    CHECK(one[0].second == 1.0);

    // asks shifted upward dominate: F_ask <= F_bid pointwise
    VolumeSeries bid = make_series({1, 2, 3, 4});
    VolumeSeries ask = make_series({2, 3, 4, 5});
    CHECK(first_order_dominates(empirical_cdf(ask), empirical_cdf(bid)));
    CHECK(!first_order_dominates(empirical_cdf(bid), empirical_cdf(ask)));
}

TEST_CASE("series CSV round trip") {
    CounterRng rng(31);
    VolumeSeries s;
    s.side = Side::bid;
    s.interval = 10;
    s.start_timestamp = 1420070400;
    for (int i = 0; i < 200; ++i) {
        bool ok = rng.next_uniform() > 0.1;
        s.values.push_back(ok ? std::exp(rng.next_normal()) : 0.0);
        s.valid.push_back(ok ? 1 : 0);
        s.segment.push_back(ok ? 0 : -1);
    }
    std::ostringstream out;
    write_volume_series(out, s);
    std::istringstream in(out.str());
    VolumeSeries back = read_volume_series(in);
    CHECK(back.side == s.side);
    CHECK(back.interval == s.interval);
    CHECK(back.start_timestamp == s.start_timestamp);
    REQUIRE(back.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(back.valid[i] == s.valid[i]);
        if (s.valid[i]) CHECK(back.values[i] == s.values[i]);  // bit-exact
    }

    ReturnSeries r = log_returns(s);
    std::ostringstream rout;
    write_return_series(rout, r);
    std::istringstream rin(rout.str());
    ReturnSeries rback = read_return_series(rin);
    REQUIRE(rback.size() == r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        CHECK(rback.valid[i] == r.valid[i]);
        if (r.valid[i]) CHECK(rback.values[i] == r.values[i]);
    }
}
