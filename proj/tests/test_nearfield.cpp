// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gscm/nearfield.hpp"

#include <cmath>
#include <vector>

using namespace gscm;

TEST_CASE("direct-path params: single-element geometry oracle")
{
    // BS element at the origin, UT element at (10, 0, 1.5).
    const std::vector<Vec3> bs = {{0, 0, 0}};
    const std::vector<Vec3> ut = {{10, 0, 1.5}};
    const auto params = element_wise_los_params(bs, ut, 7.0);
    REQUIRE(params.size() == 1);
    const double d = std::sqrt(100.0 + 2.25);
    CHECK(params[0].distance == doctest::Approx(d).epsilon(1e-12));
    // Departure: zenith of the vector (10, 0, 1.5) seen from the BS.
    CHECK(params[0].departure.theta == doctest::Approx(std::acos(1.5 / d)).epsilon(1e-12));
    CHECK(params[0].departure.phi == doctest::Approx(0.0));
    // Arrival points back toward the BS element.
    CHECK(params[0].arrival.theta == doctest::Approx(std::acos(-1.5 / d)).epsilon(1e-12));
    CHECK(std::abs(params[0].arrival.phi) == doctest::Approx(kPi));
}

TEST_CASE("single-element pair at reference distance has zero relative phase")
{
    const double lambda = kSpeedOfLight / 7e9;
    const std::vector<Vec3> bs = {{0, 0, 0}};
    const std::vector<Vec3> ut = {{lambda, 0, 0}};
    const auto params = element_wise_los_params(bs, ut, 7.0);
    // Phase convention is relative to the pair-center reference, so a single
    // pair is its own reference: phase = 0 (mod 2 pi).
    const double ph = std::fmod(std::abs(params[0].phase), 2 * kPi);
    CHECK((ph < 1e-9 || std::abs(ph - 2 * kPi) < 1e-9));
}

TEST_CASE("auxiliary points: sigma = 0 places them at exactly mu distance")
{
    AuxDistanceDist dist;
    dist.sigma_lg_bs = 0;
    dist.sigma_lg_ut = 0;
    RandomStream rng(1);
    const Vec3 bs{0, 0, 25}, ut{50, 0, 1.5};
    const Vec3 dep = Vec3{1, 1, 0}.normalized();
    const Vec3 arr = Vec3{-1, 0, 0}.normalized();
    const auto aux = place_auxiliary_points(bs, ut, dep, arr, dist, rng);
    CHECK(aux.d_bs == doctest::Approx(std::pow(10.0, dist.mu_lg_bs)).epsilon(1e-12));
    CHECK(aux.d_ut == doctest::Approx(std::pow(10.0, dist.mu_lg_ut)).epsilon(1e-12));
    const Vec3 want_bs = bs + dep * aux.d_bs;
    CHECK(aux.p_bs.x == doctest::Approx(want_bs.x));
    CHECK(aux.p_bs.y == doctest::Approx(want_bs.y));
    CHECK(aux.p_bs.z == doctest::Approx(want_bs.z));
}

TEST_CASE("auxiliary distances: lognormal moments over 1e4 draws")
{
    AuxDistanceDist dist;
    RandomStream rng(2);
    const Vec3 bs{0, 0, 25}, ut{50, 0, 1.5};
    const int n = 10000;
    double s_bs = 0, s2_bs = 0, s_ut = 0, s2_ut = 0;
    for (int i = 0; i < n; ++i) {
        const auto aux = place_auxiliary_points(bs, ut, {1, 0, 0}, {-1, 0, 0}, dist, rng);
        const double lb = std::log10(aux.d_bs), lu = std::log10(aux.d_ut);
        s_bs += lb;
        s2_bs += lb * lb;
        s_ut += lu;
        s2_ut += lu * lu;
    }
    const double m_bs = s_bs / n, m_ut = s_ut / n;
    CHECK(std::abs(m_bs - dist.mu_lg_bs) < 0.02 * dist.mu_lg_bs);
    CHECK(std::abs(m_ut - dist.mu_lg_ut) < 0.02 * dist.mu_lg_ut);
    CHECK(std::sqrt(s2_bs / n - m_bs * m_bs) == doctest::Approx(dist.sigma_lg_bs).epsilon(0.02));
    CHECK(std::sqrt(s2_ut / n - m_ut * m_ut) == doctest::Approx(dist.sigma_lg_ut).epsilon(0.02));
}

TEST_CASE("distance bounds are respected")
{
    AuxDistanceDist dist;
    dist.d_min_m = 15.0;
    dist.d_max_m = 25.0;
    RandomStream rng(3);
    for (int i = 0; i < 2000; ++i) {
        const auto aux =
            place_auxiliary_points({0, 0, 25}, {50, 0, 1.5}, {1, 0, 0}, {-1, 0, 0}, dist, rng);
        CHECK(aux.d_bs >= dist.d_min_m);
        CHECK(aux.d_bs <= dist.d_max_m);
        CHECK(aux.d_ut >= dist.d_min_m);
        CHECK(aux.d_ut <= dist.d_max_m);
    }
}

TEST_CASE("far auxiliary point reproduces far-field angles and planar phases")
{
    const double fc = 7.0;
    const double lambda = kSpeedOfLight / (fc * 1e9);
    // 8-element vertical array centered at the BS reference.
    std::vector<Vec3> bs;
    for (int i = 0; i < 8; ++i)
        bs.push_back({0, 0, (i - 3.5) * 0.5 * lambda});
    const std::vector<Vec3> ut = {{0, 0, 0}}; // unused side
    const Direction mean_dir{deg2rad(75), deg2rad(30)};
    const Vec3 u = spherical_unit_vector(mean_dir);

    AuxiliaryPointPair aux;
    aux.p_bs = u * 1e9; // forced to effectively infinite range
    aux.p_ut = Vec3{100, 0, 1.5};
    aux.d_bs = 1e9;
    aux.d_ut = 10.0;
    const auto nf = element_wise_nlos_params(aux, bs, ut, fc);
    REQUIRE(nf.departure.size() == 8);
    for (int i = 0; i < 8; ++i) {
        CHECK(std::abs(nf.departure[i].direction.theta - mean_dir.theta) < 1e-6);
        CHECK(std::abs(wrap_angle(nf.departure[i].direction.phi - mean_dir.phi)) < 1e-6);
        // Element-relative phases must match the planar array factor:
        // d_i - d_0 -> -(bs_i - bs_0) . u in the far field.
        const double planar_rel = -2 * kPi * ((bs[i] - bs[0]).dot(u)) / lambda;
        const double diff =
            std::remainder(nf.departure[i].phase - nf.departure[0].phase - planar_rel, 2 * kPi);
        CHECK(std::abs(diff) < 1e-3);
    }
}

TEST_CASE("mirrored elements about the boresight get mirrored azimuth angles")
{
    const double fc = 7.0;
    const double lambda = kSpeedOfLight / (fc * 1e9);
    // Horizontal pair symmetric in y, aux point on the +x axis.
    const std::vector<Vec3> bs = {{0, -lambda, 0}, {0, lambda, 0}};
    const std::vector<Vec3> ut = {{0, 0, 0}};
    AuxiliaryPointPair aux;
    aux.p_bs = {10, 0, 0};
    aux.p_ut = {20, 0, 0};
    const auto nf = element_wise_nlos_params(aux, bs, ut, fc);
    CHECK(nf.departure[0].direction.phi == doctest::Approx(-nf.departure[1].direction.phi));
    CHECK(nf.departure[0].direction.theta ==
          doctest::Approx(nf.departure[1].direction.theta));
    CHECK(nf.departure[0].phase == doctest::Approx(nf.departure[1].phase));
}

TEST_CASE("same auxiliary pair gives identical element params (consistency)")
{
    const std::vector<Vec3> bs = {{0, 0, 0}, {0, 0.02, 0}};
    const std::vector<Vec3> ut = {{30, 0, 1.5}};
    AuxiliaryPointPair aux;
    aux.p_bs = {5, 2, 3};
    aux.p_ut = {25, -1, 2};
    const auto a = element_wise_nlos_params(aux, bs, ut, 7.0);
    const auto b = element_wise_nlos_params(aux, bs, ut, 7.0);
    for (size_t i = 0; i < a.departure.size(); ++i) {
        CHECK(a.departure[i].phase == b.departure[i].phase);
        CHECK(a.departure[i].distance == b.departure[i].distance);
    }
}
