#include <doctest.h>

#include <cmath>
#include <vector>

#include "oqrw/rng.hpp"

using namespace oqrw;

TEST_SUITE_BEGIN("rng");

TEST_CASE("same seed and index reproduce the stream") {
    RngStream a = seed_stream(123456789, 42);
    RngStream b = seed_stream(123456789, 42);
    for (int i = 0; i < 256; ++i) CHECK(a.u64() == b.u64());
}

TEST_CASE("distinct indices give distinct streams") {
    RngStream a = seed_stream(1, 0);
    RngStream b = seed_stream(1, 1);
    int agree = 0;
    for (int i = 0; i < 64; ++i)
        if (a.u64() == b.u64()) ++agree;
    CHECK(agree == 0);
}

TEST_CASE("uniform stays strictly inside (0,1) and is unbiased") {
    RngStream rng = seed_stream(7, 0);
    double sum = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
        double u = rng.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    double mean = sum / n;
    double se = std::sqrt(1.0 / 12.0 / n);
    CHECK(std::abs(mean - 0.5) < 4.0 * se);
}

TEST_CASE("normal moments") {
    RngStream rng = seed_stream(8, 0);
    const int n = 1000000;
    double s = 0.0, s2 = 0.0, s4 = 0.0;
    for (int i = 0; i < n; ++i) {
        double z = rng.normal();
        s += z;
        s2 += z * z;
        s4 += z * z * z * z;
    }
    CHECK(std::abs(s / n) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(s2 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
    CHECK(std::abs(s4 / n - 3.0) < 5.0 * std::sqrt(96.0 / n));
}

TEST_CASE("consumption contract: one u64 per uniform, two per normal") {
    RngStream a = seed_stream(9, 5);
    RngStream b = seed_stream(9, 5);
    (void)a.normal();
    (void)b.u64();
    (void)b.u64();
    CHECK(a.u64() == b.u64());

    RngStream c = seed_stream(9, 6);
    RngStream d = seed_stream(9, 6);
    (void)c.uniform();
    (void)c.exponential();
    (void)d.u64();
    (void)d.u64();
    CHECK(c.u64() == d.u64());
}

TEST_CASE("adjacent streams are uncorrelated") {
    const int n = 200000;
    for (int pair = 0; pair < 8; ++pair) {
        RngStream a = seed_stream(0xabcdef, static_cast<std::uint64_t>(2 * pair));
        RngStream b = seed_stream(0xabcdef, static_cast<std::uint64_t>(2 * pair + 1));
        double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
        for (int i = 0; i < n; ++i) {
            double x = a.uniform() - 0.5;
            double y = b.uniform() - 0.5;
            sa += x;
            sb += y;
            sab += x * y;
            saa += x * x;
            sbb += y * y;
        }
        double cov = sab / n - (sa / n) * (sb / n);
        double r = cov / std::sqrt((saa / n) * (sbb / n));
        CHECK(std::abs(r) < 0.01);  // ~4.5 sigma at this n
    }
}

TEST_CASE("chi-square uniformity of one stream") {
    RngStream rng = seed_stream(0x5eed, 3);
    const int bins = 64, n = 640000;
    std::vector<int> count(bins, 0);
    for (int i = 0; i < n; ++i)
        ++count[static_cast<int>(rng.uniform() * bins)];
    double expect = static_cast<double>(n) / bins;
    double chi2 = 0.0;
    for (int c : count) chi2 += (c - expect) * (c - expect) / expect;
    // chi2 with 63 dof: mean 63, sd ~ 11.2; 5 sigma gate
    CHECK(chi2 < 63.0 + 5.0 * std::sqrt(2.0 * 63.0));
    CHECK(chi2 > 63.0 - 5.0 * std::sqrt(2.0 * 63.0));
}

TEST_SUITE_END();
