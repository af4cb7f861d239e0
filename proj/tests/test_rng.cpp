// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gscm/harness.hpp" // ks_statistic / ks_pvalue
#include "gscm/rng.hpp"

#include <cmath>
#include <vector>

using namespace gscm;

TEST_CASE("same key replays identically")
{
    const StreamKey key{42, 3, 17, stream_module::kLsp, 2};
    RandomStream a = derive_stream(key);
    RandomStream b = derive_stream(key);
    for (int i = 0; i < 1000; ++i)
        CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("keys differing in one tag give decorrelated streams")
{
    const int n = 10000;
    auto draw = [&](StreamKey k) {
        RandomStream s = derive_stream(k);
        std::vector<double> xs(n);
        for (auto& x : xs)
            x = s.uniform();
        return xs;
    };
    const StreamKey base{7, 1, 2, stream_module::kSmallScale, 0};
    std::vector<StreamKey> variants = {
        {8, 1, 2, stream_module::kSmallScale, 0},
        {7, 2, 2, stream_module::kSmallScale, 0},
        {7, 1, 3, stream_module::kSmallScale, 0},
        {7, 1, 2, stream_module::kPolarization, 0},
        {7, 1, 2, stream_module::kSmallScale, 1},
    };
    const auto xs = draw(base);
    for (const auto& k : variants) {
        const auto ys = draw(k);
        double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
        for (int i = 0; i < n; ++i) {
            sx += xs[i];
            sy += ys[i];
            sxy += xs[i] * ys[i];
            sxx += xs[i] * xs[i];
            syy += ys[i] * ys[i];
        }
        const double rho = (n * sxy - sx * sy) /
                           std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
        CHECK(std::abs(rho) < 0.05);
    }
}

TEST_CASE("uniform outputs lie strictly inside (0,1)")
{
    RandomStream s(123);
    for (int i = 0; i < 1000000; ++i) {
        const double u = s.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("KS test of uniforms against U(0,1) passes at alpha = 0.01")
{
    RandomStream s(555);
    std::vector<double> u(100000);
    for (auto& x : u)
        x = s.uniform();
    const double d = ks_statistic(u, [](double x) { return x < 0 ? 0.0 : x > 1 ? 1.0 : x; });
    CHECK(ks_pvalue(d, u.size()) > 0.01);
}

TEST_CASE("standard normal moments over 1e6 draws")
{
    RandomStream s(99);
    const int n = 1000000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < n; ++i) {
        const double x = s.normal();
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean) < 0.005);
    CHECK(std::abs(var - 1.0) < 0.01);
}

TEST_CASE("normal_inv_cdf hits reference quantiles")
{
    CHECK(normal_inv_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(normal_inv_cdf(0.975) == doctest::Approx(1.959963985).epsilon(1e-8));
    CHECK(normal_inv_cdf(0.999) == doctest::Approx(3.090232306).epsilon(1e-8));
    CHECK(normal_inv_cdf(0.025) == doctest::Approx(-1.959963985).epsilon(1e-8));
    CHECK(normal_inv_cdf(1e-10) == doctest::Approx(-6.361340902).epsilon(1e-7));
}

TEST_CASE("lognormal with sigma = 0 is constant 10^mu")
{
    RandomStream s(5);
    for (int i = 0; i < 100; ++i)
        CHECK(s.lognormal_base10(-7.5, 0.0) == doctest::Approx(std::pow(10.0, -7.5)));
}

TEST_CASE("lognormal log-domain moments match (mu, sigma)")
{
    RandomStream s(6);
    const int n = 100000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < n; ++i) {
        const double lg = std::log10(s.lognormal_base10(-7.0, 0.4));
        sum += lg;
        sum2 += lg * lg;
    }
    const double mean = sum / n;
    CHECK(mean == doctest::Approx(-7.0).epsilon(0.001));
    CHECK(std::sqrt(sum2 / n - mean * mean) == doctest::Approx(0.4).epsilon(0.02));
}

TEST_CASE("uniform_int covers the full inclusive range")
{
    RandomStream s(77);
    std::vector<int> counts(14, 0);
    for (int i = 0; i < 140000; ++i) {
        const int v = s.uniform_int(6, 19);
        REQUIRE(v >= 6);
        REQUIRE(v <= 19);
        ++counts[v - 6];
    }
    for (int c : counts)
        CHECK(std::abs(c / 140000.0 - 1.0 / 14) < 0.01);
}

TEST_CASE("sign is +/-1 and roughly balanced")
{
    RandomStream s(13);
    int pos = 0;
    for (int i = 0; i < 10000; ++i) {
        const double v = s.sign();
        REQUIRE((v == 1.0 || v == -1.0));
        pos += v > 0;
    }
    CHECK(std::abs(pos / 10000.0 - 0.5) < 0.02);
}
