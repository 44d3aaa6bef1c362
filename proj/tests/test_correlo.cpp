#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lobvol/correlo.hpp"
#include "lobvol/errors.hpp"
#include "lobvol/rng.hpp"
#include "lobvol/synth.hpp"

using namespace lobvol;

namespace {

ReturnSeries from_values(std::vector<double> values) {
    ReturnSeries r;
    r.values = std::move(values);
    r.valid.assign(r.values.size(), 1);
    r.segment.assign(r.values.size(), 0);
    return r;
}

// Test oracle: solve the Yule-Walker normal equations R phi = rho by dense
// Gaussian elimination with partial pivoting; the lag-k PACF is the last
// least-squares regression coefficient of that order-k system.
double pacf_by_normal_equations(const std::vector<double>& rho, std::size_t k) {
    std::vector<std::vector<double>> m(k, std::vector<double>(k + 1, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            std::size_t lag = i > j ? i - j : j - i;
            m[i][j] = lag == 0 ? 1.0 : rho[lag - 1];
        }
        m[i][k] = rho[i];
    }
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < k; ++row)
            if (std::fabs(m[row][col]) > std::fabs(m[pivot][col])) pivot = row;
        std::swap(m[col], m[pivot]);
        for (std::size_t row = col + 1; row < k; ++row) {
            double f = m[row][col] / m[col][col];
            for (std::size_t j = col; j <= k; ++j) m[row][j] -= f * m[col][j];
        }
    }
    std::vector<double> phi(k);
    for (std::size_t i = k; i-- > 0;) {
        double acc = m[i][k];
        for (std::size_t j = i + 1; j < k; ++j) acc -= m[i][j] * phi[j];
        phi[i] = acc / m[i][i];
    }
    return phi[k - 1];
}

}  // namespace

TEST_CASE("perfect anti-alternation gives C(1) = -1") {
    std::vector<double> v;
    for (int i = 0; i < 100; ++i) v.push_back(i % 2 == 0 ? 1.5 : -1.5);
    CorrelationEstimate est = acf(from_values(std::move(v)), 3);
    CHECK(est.at(1) == doctest::Approx(-1.0));
    CHECK(est.at(2) == doctest::Approx(1.0));
}

TEST_CASE("exact linearity gives correlation one") {
    CorrelationEstimate est = acf(from_values({1, 2, 3, 4, 5, 6}), 1);
    CHECK(est.at(1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(est.n_effective[0] == 5);
}

TEST_CASE("iid noise stays within the 3-sigma band at almost all lags") {
    GeneratorSpec spec;
    spec.kind = GeneratorSpec::Kind::iid_normal;
    spec.length = 100000;
    spec.seed = 424242;
    ReturnSeries r = generate(spec).returns;
    CorrelationEstimate est = acf(r, 100);
    double bound = 3.0 / std::sqrt(static_cast<double>(spec.length));
    int inside = 0;
    for (int k = 1; k <= 100; ++k) inside += std::fabs(est.at(k)) < bound;
    CHECK(inside >= 99);
}

TEST_CASE("pairs crossing invalid slots or segment boundaries are excluded") {
    ReturnSeries r = from_values({1, 2, 3, 4, 5, 6, 7, 8});
    r.valid[3] = 0;
    r.segment[3] = -1;
    for (std::size_t i = 4; i < 8; ++i) r.segment[i] = 1;
    CorrelationEstimate est = acf(r, 2);
    // lag 1 pairs: (0,1),(1,2) in segment 0 and (4,5),(5,6),(6,7) in segment 1
    CHECK(est.n_effective[0] == 5);
    // lag 2 pairs: (0,2),(1,3)x,(2,4)x,(3,5)x,(4,6),(5,7)
    CHECK(est.n_effective[1] == 3);
}

TEST_CASE("scale invariance is exact for power-of-two scaling") {
    CounterRng rng(55);
    std::vector<double> base;
    for (int i = 0; i < 500; ++i) base.push_back(rng.next_normal());
    CorrelationEstimate plain = acf(from_values(base), 10);

    std::vector<double> scaled = base;
    for (double& x : scaled) x *= 0.25;
    CorrelationEstimate s = acf(from_values(scaled), 10);
    for (int k = 1; k <= 10; ++k) CHECK(s.at(k) == plain.at(k));

    std::vector<double> shifted = base;
    for (double& x : shifted) x += 3.5;
    CorrelationEstimate t = acf(from_values(shifted), 10);
    for (int k = 1; k <= 10; ++k)
        CHECK(t.at(k) == doctest::Approx(plain.at(k)).epsilon(1e-10));
}

TEST_CASE("noise band is z over root pair count") {
    ReturnSeries r = from_values(std::vector<double>(1001, 0.0));
    for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] = std::sin(0.7 * i);
    CorrelationEstimate est = acf(r, 5);
    double z = normal_quantile(0.995);
    for (int k = 1; k <= 5; ++k) {
        double expect = z / std::sqrt(static_cast<double>(1001 - k));
        CHECK(est.noise_high[k - 1] == doctest::Approx(expect).epsilon(1e-12));
        CHECK(est.noise_low[k - 1] == doctest::Approx(-expect).epsilon(1e-12));
    }
}

TEST_CASE("acf errors: short series, zero variance, bad max_lag") {
    CHECK_THROWS_AS((void)acf(from_values({1, 2, 3}), 5), ParameterError);
    CHECK_THROWS_AS((void)acf(from_values(std::vector<double>(100, 2.0)), 3), NumericalError);
    CHECK_THROWS_AS((void)acf(from_values({1, 2, 3, 4}), 0), ParameterError);
}

TEST_CASE("pacf lag 1 equals acf lag 1 exactly") {
    CounterRng rng(66);
    std::vector<double> v;
    for (int i = 0; i < 400; ++i) v.push_back(rng.next_normal());
    ReturnSeries r = from_values(std::move(v));
    CorrelationEstimate a = acf(r, 10);
    CorrelationEstimate p = pacf(r, 10);
    CHECK(p.at(1) == a.at(1));
}

TEST_CASE("pacf equals the dense normal-equations solve to 1e-6") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        GeneratorSpec spec;
        spec.kind = GeneratorSpec::Kind::ar1;
        spec.ar_phi = 0.6;
        spec.length = 500;
        spec.seed = seed;
        ReturnSeries r = generate(spec).returns;
        CorrelationEstimate a = acf(r, 20);
        CorrelationEstimate p = pacf(r, 20);
        for (std::size_t k = 1; k <= 20; ++k)
            CHECK(p.at(static_cast<int>(k)) ==
                  doctest::Approx(pacf_by_normal_equations(a.values, k)).epsilon(1e-6));
    }
}

TEST_CASE("pacf of AR(1) spikes at lag 1 then dies") {
    GeneratorSpec spec;
    spec.kind = GeneratorSpec::Kind::ar1;
    spec.ar_phi = 0.5;
    spec.length = 100000;
    spec.seed = 99;
    ReturnSeries r = generate(spec).returns;
    CorrelationEstimate p = pacf(r, 30);
    CHECK(p.at(1) == doctest::Approx(0.5).epsilon(0.02));
    double bound = 3.0 / std::sqrt(static_cast<double>(spec.length));
    int small = 0;
    for (int k = 2; k <= 30; ++k) small += std::fabs(p.at(k)) < bound;
    CHECK(small >= 27);  // 95% of the lags beyond 1
}

TEST_CASE("pacf approximates raw-data least squares on a long AR(1)") {
    // the Yule-Walker and data-regression estimators agree to O(1/sqrt(N))
    GeneratorSpec spec;
    spec.kind = GeneratorSpec::Kind::ar1;
    spec.ar_phi = 0.7;
    spec.length = 50000;
    spec.seed = 4;
    ReturnSeries r = generate(spec).returns;
    CorrelationEstimate p = pacf(r, 3);

    // direct OLS of r(t) on r(t-1..t-3) via normal equations on raw moments
    const auto& v = r.values;
    const std::size_t k = 3, n = v.size();
    std::vector<std::vector<double>> xtx(k, std::vector<double>(k, 0.0));
    std::vector<double> xty(k, 0.0);
    double ymean = 0.0;
    std::vector<double> xmean(k, 0.0);
    for (std::size_t t = k; t < n; ++t) {
        ymean += v[t];
        for (std::size_t i = 0; i < k; ++i) xmean[i] += v[t - 1 - i];
    }
    double m = static_cast<double>(n - k);
    ymean /= m;
    for (auto& x : xmean) x /= m;
    for (std::size_t t = k; t < n; ++t)
        for (std::size_t i = 0; i < k; ++i) {
            xty[i] += (v[t - 1 - i] - xmean[i]) * (v[t] - ymean);
            for (std::size_t j = 0; j < k; ++j)
                xtx[i][j] += (v[t - 1 - i] - xmean[i]) * (v[t - 1 - j] - xmean[j]);
        }
    // solve 3x3
    for (std::size_t col = 0; col < k; ++col) {
        for (std::size_t row = col + 1; row < k; ++row) {
            double f = xtx[row][col] / xtx[col][col];
            for (std::size_t j = col; j < k; ++j) xtx[row][j] -= f * xtx[col][j];
            xty[row] -= f * xty[col];
        }
    }
    std::vector<double> phi(k);
    for (std::size_t i = k; i-- > 0;) {
        double acc = xty[i];
        for (std::size_t j = i + 1; j < k; ++j) acc -= xtx[i][j] * phi[j];
        phi[i] = acc / xtx[i][i];
    }
    CHECK(std::fabs(p.at(3) - phi[2]) < 0.02);
}

TEST_CASE("bootstrap is deterministic and brackets the estimate sanely") {
    GeneratorSpec spec;
    spec.kind = GeneratorSpec::Kind::iid_normal;
    spec.length = 4000;
    spec.seed = 10;
    ReturnSeries r = generate(spec).returns;

    CorrelationEstimate a = acf(r, 20);
    CorrelationEstimate b = a;
    BootstrapOptions options;
    options.replicates = 300;
    options.seed = 7;
    block_bootstrap_ci(r, a, options);
    block_bootstrap_ci(r, b, options);
    CHECK(a.ci_low == b.ci_low);
    CHECK(a.ci_high == b.ci_high);

    // thread count must not change the answer
    CorrelationEstimate c = acf(r, 20);
    options.max_threads = 3;
    block_bootstrap_ci(r, c, options);
    CHECK(a.ci_low == c.ci_low);
    CHECK(a.ci_high == c.ci_high);

    // iid truth (zero) inside the 99% CI almost everywhere
    int covered = 0;
    for (std::size_t i = 0; i < 20; ++i)
        covered += (a.ci_low[i] <= 0.0 && 0.0 <= a.ci_high[i]);
    CHECK(covered >= 19);

    // the point estimate itself sits inside its CI
    for (std::size_t i = 0; i < 20; ++i) {
        CHECK(a.ci_low[i] <= a.values[i]);
        CHECK(a.values[i] <= a.ci_high[i]);
    }

    BootstrapOptions bad;
    bad.replicates = 50;
    CHECK_THROWS_AS(block_bootstrap_ci(r, a, bad), ParameterError);
    bad.replicates = 300;
    bad.block_len = 5000;
    CHECK_THROWS_AS(block_bootstrap_ci(r, a, bad), ParameterError);
}

TEST_CASE("bootstrap CI width shrinks with series length") {
    auto mean_width = [](std::size_t n, std::uint64_t seed) {
        GeneratorSpec spec;
        spec.kind = GeneratorSpec::Kind::iid_normal;
        spec.length = n;
        spec.seed = seed;
        ReturnSeries r = generate(spec).returns;
        CorrelationEstimate est = acf(r, 10);
        BootstrapOptions options;
        options.replicates = 200;
        options.seed = 13;
        block_bootstrap_ci(r, est, options);
        double w = 0.0;
        for (std::size_t i = 0; i < 10; ++i) w += est.ci_high[i] - est.ci_low[i];
        return w / 10.0;
    };
    // statistical monotonicity: averaged over a few seeds
    double short_w = 0.0, long_w = 0.0;
    for (std::uint64_t s = 0; s < 3; ++s) {
        short_w += mean_width(2000, 100 + s);
        long_w += mean_width(16000, 200 + s);
    }
    CHECK(long_w < short_w);
}

TEST_CASE("order diagnosis: white noise, MA(3), AR(1)") {
    AcfOptions opt;
    {
        GeneratorSpec spec;
        spec.kind = GeneratorSpec::Kind::iid_normal;
        spec.length = 50000;
        spec.seed = 2024;
        ReturnSeries r = generate(spec).returns;
        MaDiagnosis d = ma_order_diagnosis(acf(r, 40, opt), pacf(r, 40, opt));
        CHECK(d.cutoff_lag_acf == 0);
        CHECK(d.suggested_model == "none");
    }
    {
        GeneratorSpec spec;
        spec.kind = GeneratorSpec::Kind::ma;
        spec.ma_theta = {0.5, 0.4, 0.6};
        spec.length = 200000;
        spec.seed = 31;
        ReturnSeries r = generate(spec).returns;
        MaDiagnosis d = ma_order_diagnosis(acf(r, 40, opt), pacf(r, 40, opt));
        CHECK(d.cutoff_lag_acf == 3);
        CHECK(d.tail_off_pacf);
        CHECK(d.suggested_model == "MA(3)");
    }
    {
        GeneratorSpec spec;
        spec.kind = GeneratorSpec::Kind::ar1;
        spec.ar_phi = 0.6;
        spec.length = 200000;
        spec.seed = 8;
        ReturnSeries r = generate(spec).returns;
        MaDiagnosis d = ma_order_diagnosis(acf(r, 40, opt), pacf(r, 40, opt));
        CHECK(d.suggested_model == "AR(1)");
    }
}
