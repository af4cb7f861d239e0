// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gscm/harness.hpp" // ks_statistic / ks_pvalue
#include "gscm/polarization.hpp"

#include <cmath>
#include <complex>
#include <vector>

using namespace gscm;

TEST_CASE("XPR: sigma = 0 gives kappa = 10^(mu/10) exactly")
{
    RandomStream rng(1);
    CHECK(draw_xpr(10.0, 0.0, rng) == doctest::Approx(10.0));
    CHECK(draw_xpr(0.0, 0.0, rng) == doctest::Approx(1.0));
}

TEST_CASE("XPR moment check: dB mean over 1e5 draws")
{
    RandomStream rng(2);
    const int n = 100000;
    double sum = 0;
    for (int i = 0; i < n; ++i)
        sum += 10.0 * std::log10(draw_xpr(8.0, 3.0, rng));
    CHECK(std::abs(sum / n - 8.0) < 0.05);
}

TEST_CASE("XPR mean is capped at 40 dB and suppresses cross terms")
{
    RandomStream rng(3);
    const double kappa = draw_xpr(80.0, 0.0, rng); // capped to 40 dB
    CHECK(kappa == doctest::Approx(1e4));
    const PolarizationMatrix m = polarization_matrix(kappa, false, 0.0, rng);
    CHECK(std::abs(m.m_tp) <= 1e-2 * std::abs(m.m_tt));
    CHECK(std::abs(m.m_pt) <= 1e-2 * std::abs(m.m_pp));
}

TEST_CASE("disabled variability: unit co-polar magnitudes, 1/sqrt(kappa) cross")
{
    RandomStream rng(4);
    for (int i = 0; i < 1000; ++i) {
        const double kappa = draw_xpr(8.0, 3.0, rng);
        const PolarizationMatrix m = polarization_matrix(kappa, false, 0.0, rng);
        CHECK(std::abs(m.m_tt) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(m.m_pp) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(m.m_tp) == doctest::Approx(1.0 / std::sqrt(kappa)).epsilon(1e-12));
        CHECK(std::abs(m.m_pt) == doctest::Approx(1.0 / std::sqrt(kappa)).epsilon(1e-12));
    }
}

TEST_CASE("sigma_var = 0 is bit-identical to the disabled path")
{
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        RandomStream a(seed), b(seed);
        const PolarizationMatrix ma = polarization_matrix(6.3, false, 0.0, a);
        const PolarizationMatrix mb = polarization_matrix(6.3, true, 0.0, b);
        CHECK(ma.m_tt == mb.m_tt);
        CHECK(ma.m_tp == mb.m_tp);
        CHECK(ma.m_pt == mb.m_pt);
        CHECK(ma.m_pp == mb.m_pp);
    }
}

TEST_CASE("enabled variability: co-polar dB std = 3.0 +/- 0.05 over 1e5 draws")
{
    RandomStream rng(6);
    const int n = 100000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < n; ++i) {
        const PolarizationMatrix m = polarization_matrix(6.3, true, 3.0, rng);
        const double db = 20.0 * std::log10(std::abs(m.m_tt));
        sum += db;
        sum2 += db * db;
    }
    const double mean = sum / n;
    CHECK(std::sqrt(sum2 / n - mean * mean) == doctest::Approx(3.0).epsilon(0.05 / 3.0));
    CHECK(std::abs(mean) < 0.05);
}

TEST_CASE("entry phases are uniform on (-pi, pi] and variability leaves them unchanged")
{
    RandomStream rng(7);
    std::vector<double> phases;
    for (int i = 0; i < 20000; ++i) {
        const PolarizationMatrix m = polarization_matrix(4.0, false, 0.0, rng);
        phases.push_back(std::arg(m.m_tt));
        phases.push_back(std::arg(m.m_pp));
    }
    const double d = ks_statistic(
        phases, [](double x) { return (x + kPi) / (2 * kPi); });
    CHECK(ks_pvalue(d, phases.size()) > 0.01);

    // Same stream state: the phases (drawn first) agree regardless of the
    // variability draws that follow.
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        RandomStream a(seed), b(seed);
        const PolarizationMatrix ma = polarization_matrix(6.3, false, 0.0, a);
        const PolarizationMatrix mb = polarization_matrix(6.3, true, 3.0, b);
        CHECK(std::arg(ma.m_tt) == doctest::Approx(std::arg(mb.m_tt)).epsilon(1e-12));
        CHECK(std::arg(ma.m_tp) == doctest::Approx(std::arg(mb.m_tp)).epsilon(1e-12));
    }
}
