// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gscm/coeffgen.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <vector>

using namespace gscm;

namespace {

class IsotropicProvider final : public PatternProvider
{
  public:
    FieldPattern evaluate(int, const Direction&) const override { return {1.0, 0.0}; }
};

RayBundle single_ray(double xpr_db = 100.0)
{
    RayBundle b;
    b.m = 1;
    b.offsets = {0.0};
    b.coupling_aoa = {0};
    b.coupling_zoa = {0};
    b.coupling_cross = {0};
    b.xpr_db = {xpr_db};
    return b;
}

PolarizationMatrix identity_pol()
{
    PolarizationMatrix m;
    m.m_tt = {1.0, 0.0};
    m.m_tp = {0.0, 0.0};
    m.m_pt = {0.0, 0.0};
    m.m_pp = {1.0, 0.0};
    m.kappa = 1e10;
    return m;
}

AssemblyInputs minimal_inputs(const PatternProvider& iso)
{
    AssemblyInputs in;
    in.bs_center = {0, 0, 25};
    in.ut_center = {100, 0, 1.5};
    in.bs_elements = {in.bs_center};
    in.ut_elements = {in.ut_center};
    in.bs_pattern = &iso;
    in.ut_pattern = &iso;
    in.los = false;
    in.powers = {1.0};
    in.delays_s = {0.0};
    in.angles.aod_deg = {10.0};
    in.angles.aoa_deg = {-170.0};
    in.angles.zod_deg = {92.0};
    in.angles.zoa_deg = {88.0};
    in.rays = {single_ray()};
    in.pol = {{identity_pol()}};
    in.ut_element_gain_db = {0.0};
    in.fc_ghz = 7.0;
    return in;
}

} // namespace

TEST_CASE("unit pipeline: one of everything gives |h| = 1")
{
    const IsotropicProvider iso;
    const AssemblyInputs in = minimal_inputs(iso);
    const ChannelRealization h = assemble_coefficients(in, {1, 0.0});
    REQUIRE(h.n_clusters == 1);
    REQUIRE(h.h.size() == 1);
    CHECK(std::abs(h.at(0, 0, 0, 0)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("zero velocity keeps coefficients constant over time, bit-exact")
{
    const IsotropicProvider iso;
    AssemblyInputs in = minimal_inputs(iso);
    in.ut_velocity = {0, 0, 0};
    const ChannelRealization h = assemble_coefficients(in, {8, 1e-3});
    for (int t = 1; t < 8; ++t) {
        CHECK(h.at(0, t, 0, 0).real() == h.at(0, 0, 0, 0).real());
        CHECK(h.at(0, t, 0, 0).imag() == h.at(0, 0, 0, 0).imag());
    }
}

TEST_CASE("doppler phase: closed form, parallel and perpendicular cases")
{
    const Direction arrival{deg2rad(90), 0}; // wave arriving from +x
    const Vec3 v_par{30.0 / 3.6, 0, 0};
    const double want = 2 * kPi * (30.0 / 3.6) * 7e9 / kSpeedOfLight * 1e-3;
    CHECK(doppler_phase(v_par, arrival, 7.0, 1e-3) == doctest::Approx(want).epsilon(1e-9));
    CHECK(want == doctest::Approx(2 * kPi * 0.1945).epsilon(0.001));
    const Vec3 v_perp{0, 12.0, 0};
    CHECK(doppler_phase(v_perp, arrival, 7.0, 2.0) == doctest::Approx(0.0));
    CHECK(doppler_phase({0, 0, 0}, arrival, 7.0, 5.0) == doctest::Approx(0.0));
}

TEST_CASE("mean tensor power is 1 over many fading realizations")
{
    const IsotropicProvider iso;
    RandomStream rng(2);
    double sum = 0;
    const int reps = 3000;
    for (int r = 0; r < reps; ++r) {
        AssemblyInputs in = minimal_inputs(iso);
        // 3 clusters with normalized powers and random ray phases.
        in.powers = {0.5, 0.3, 0.2};
        in.delays_s = {0.0, 50e-9, 120e-9};
        in.angles.aod_deg = {10, 40, -60};
        in.angles.aoa_deg = {-170, 100, 20};
        in.angles.zod_deg = {92, 85, 95};
        in.angles.zoa_deg = {88, 80, 100};
        in.c_asd_deg = 3.0;
        in.c_asa_deg = 15.0;
        in.c_zsd_deg = 1.0;
        in.c_zsa_deg = 7.0;
        in.rays.assign(3, RayBundle{});
        in.pol.assign(3, {});
        for (int n = 0; n < 3; ++n) {
            in.rays[n] = build_ray_bundle(20, 100.0, 0.0, rng);
            for (int m = 0; m < 20; ++m)
                in.pol[n].push_back(polarization_matrix(1e10, false, 0.0, rng));
        }
        const ChannelRealization h = assemble_coefficients(in, {1, 0.0});
        double p = 0;
        for (const auto& c : h.h)
            p += std::norm(c);
        sum += p;
    }
    CHECK(sum / reps == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("parallel and serial assembly produce identical bits")
{
    const IsotropicProvider iso;
    RandomStream rng(3);
    AssemblyInputs in = minimal_inputs(iso);
    in.bs_elements.clear();
    const double lambda = kSpeedOfLight / 7e9;
    for (int i = 0; i < 8; ++i)
        in.bs_elements.push_back(in.bs_center + Vec3{0, 0, (i - 3.5) * 0.5 * lambda});
    in.powers = {0.4, 0.3, 0.2, 0.1};
    in.delays_s = {0, 30e-9, 80e-9, 200e-9};
    in.angles.aod_deg = {10, 40, -60, 120};
    in.angles.aoa_deg = {-170, 100, 20, -60};
    in.angles.zod_deg = {92, 85, 95, 100};
    in.angles.zoa_deg = {88, 80, 100, 70};
    in.c_asa_deg = 15.0;
    in.rays.clear();
    in.pol.clear();
    for (int n = 0; n < 4; ++n) {
        in.rays.push_back(build_ray_bundle(20, 8.0, 3.0, rng));
        std::vector<PolarizationMatrix> pm;
        for (int m = 0; m < 20; ++m)
            pm.push_back(polarization_matrix(6.3, false, 0.0, rng));
        in.pol.push_back(pm);
    }
    in.ut_velocity = {3.0, 1.0, 0};

    AssemblyOptions par, ser;
    par.parallel = true;
    ser.parallel = false;
    const ChannelRealization a = assemble_coefficients(in, {4, 1e-3}, par);
    const ChannelRealization b = assemble_coefficients(in, {4, 1e-3}, ser);
    REQUIRE(a.h.size() == b.h.size());
    for (size_t i = 0; i < a.h.size(); ++i) {
        CHECK(a.h[i].real() == b.h[i].real());
        CHECK(a.h[i].imag() == b.h[i].imag());
    }
}

TEST_CASE("LOS specular: K -> infinity pins the full power on the direct ray")
{
    const IsotropicProvider iso;
    AssemblyInputs in = minimal_inputs(iso);
    in.los = true;
    in.k_db = 40.0;
    // Specular share K/(K+1) embedded in cluster 0.
    const double k_lin = 1e4;
    in.powers = {k_lin / (k_lin + 1) + 0.5 / (k_lin + 1), 0.5 / (k_lin + 1)};
    in.delays_s = {0.0, 40e-9};
    in.angles.aod_deg = {0.0, 50.0};
    in.angles.aoa_deg = {180.0, -30.0};
    in.angles.zod_deg = {90.0, 85.0};
    in.angles.zoa_deg = {90.0, 95.0};
    RandomStream rng(4);
    in.rays = {build_ray_bundle(20, 100.0, 0.0, rng), build_ray_bundle(20, 100.0, 0.0, rng)};
    in.pol.assign(2, {});
    for (int m = 0; m < 20; ++m) {
        in.pol[0].push_back(polarization_matrix(1e10, false, 0.0, rng));
        in.pol[1].push_back(polarization_matrix(1e10, false, 0.0, rng));
    }
    const ChannelRealization h = assemble_coefficients(in, {1, 0.0});
    // Cluster 0 carries essentially all the power (the residual diffuse rays
    // beat against the specular term, so a single realization wobbles a bit).
    const double p0 = std::norm(h.at(0, 0, 0, 0));
    CHECK(p0 == doctest::Approx(1.0).epsilon(0.05));
    CHECK(std::norm(h.at(1, 0, 0, 0)) < 1e-3);
}

TEST_CASE("absolute ToA: LOS geometric, NLOS adds the lognormal excess")
{
    const IsotropicProvider iso;
    AssemblyInputs in = minimal_inputs(iso);
    ChannelRealization h = assemble_coefficients(in, {1, 0.0});
    const double d3d = 120.0;
    const double t_los = apply_absolute_toa(h, true, d3d, {-7.5, 0.3, 15.0}, 1.7);
    CHECK(t_los == doctest::Approx(d3d / kSpeedOfLight).epsilon(1e-12));

    ChannelRealization h2 = assemble_coefficients(in, {1, 0.0});
    const double t_nlos = apply_absolute_toa(h2, false, d3d, {-7.5, 0.0, 15.0}, 0.0);
    CHECK(t_nlos == doctest::Approx(d3d / kSpeedOfLight + std::pow(10.0, -7.5)).epsilon(1e-12));
    CHECK(std::pow(10.0, -7.5) == doctest::Approx(31.6e-9).epsilon(0.01));
    // The correlated field shifts the excess by sigma * field in log domain.
    ChannelRealization h3 = assemble_coefficients(in, {1, 0.0});
    const double t_shift = apply_absolute_toa(h3, false, d3d, {-7.5, 0.2, 15.0}, 1.0);
    CHECK(t_shift == doctest::Approx(d3d / kSpeedOfLight + std::pow(10.0, -7.3)).epsilon(1e-12));
}

TEST_CASE("tensor file round-trip is bit-exact")
{
    const IsotropicProvider iso;
    AssemblyInputs in = minimal_inputs(iso);
    in.powers = {0.7, 0.3};
    in.delays_s = {0.0, 60e-9};
    in.angles.aod_deg = {10, 30};
    in.angles.aoa_deg = {-170, 60};
    in.angles.zod_deg = {92, 85};
    in.angles.zoa_deg = {88, 95};
    RandomStream rng(5);
    in.rays = {build_ray_bundle(20, 8.0, 3.0, rng), build_ray_bundle(20, 8.0, 3.0, rng)};
    in.pol.assign(2, {});
    for (int m = 0; m < 20; ++m) {
        in.pol[0].push_back(polarization_matrix(6.3, false, 0.0, rng));
        in.pol[1].push_back(polarization_matrix(6.3, false, 0.0, rng));
    }
    ChannelRealization h = assemble_coefficients(in, {3, 5e-4});
    h.absolute_first_delay_s = 4.2e-7;
    const std::string path = "test_tensor_roundtrip.bin";
    write_tensor(path, h, "{\"link\":7}");
    std::string meta;
    const ChannelRealization r = read_tensor(path, &meta);
    std::remove(path.c_str());
    CHECK(meta == "{\"link\":7}");
    CHECK(r.n_clusters == h.n_clusters);
    CHECK(r.n_times == h.n_times);
    CHECK(r.n_bs == h.n_bs);
    CHECK(r.n_ut == h.n_ut);
    CHECK(r.absolute_first_delay_s == h.absolute_first_delay_s);
    REQUIRE(r.delays_s.size() == h.delays_s.size());
    for (size_t i = 0; i < h.delays_s.size(); ++i)
        CHECK(r.delays_s[i] == h.delays_s[i]);
    REQUIRE(r.h.size() == h.h.size());
    for (size_t i = 0; i < h.h.size(); ++i) {
        CHECK(r.h[i].real() == h.h[i].real());
        CHECK(r.h[i].imag() == h.h[i].imag());
    }
}

TEST_CASE("structural dimension errors are rejected")
{
    const IsotropicProvider iso;
    AssemblyInputs in = minimal_inputs(iso);
    in.delays_s = {0.0, 1e-9}; // mismatched with powers
    CHECK_THROWS(assemble_coefficients(in, {1, 0.0}));
    AssemblyInputs in2 = minimal_inputs(iso);
    in2.pol.clear();
    CHECK_THROWS(assemble_coefficients(in2, {1, 0.0}));
}

TEST_CASE("near-field toggle reduces to planar for far auxiliary points")
{
    const IsotropicProvider iso;
    AssemblyInputs in = minimal_inputs(iso);
    const double lambda = kSpeedOfLight / 7e9;
    in.bs_elements.clear();
    for (int i = 0; i < 4; ++i)
        in.bs_elements.push_back(in.bs_center + Vec3{0, (i - 1.5) * 0.5 * lambda, 0});
    std::vector<AuxiliaryPointPair> aux(1);
    const Vec3 dep = spherical_unit_vector({deg2rad(92), deg2rad(10)});
    const Vec3 arr = spherical_unit_vector({deg2rad(88), deg2rad(-170)});
    aux[0].p_bs = in.bs_center + dep * 1e8;
    aux[0].p_ut = in.ut_center + arr * 1e8;
    aux[0].d_bs = 1e8;
    aux[0].d_ut = 1e8;
    in.nf_aux = &aux;

    AssemblyOptions nf, planar;
    nf.nearfield = true;
    planar.nearfield = false;
    const ChannelRealization a = assemble_coefficients(in, {1, 0.0}, nf);
    const ChannelRealization b = assemble_coefficients(in, {1, 0.0}, planar);
    for (size_t i = 0; i < a.h.size(); ++i)
        CHECK(std::abs(a.h[i] - b.h[i]) < 2e-3);
}

TEST_CASE("SNS amplitudes scale the per-element magnitudes")
{
    const IsotropicProvider iso;
    AssemblyInputs in = minimal_inputs(iso);
    const double lambda = kSpeedOfLight / 7e9;
    in.bs_elements = {in.bs_center, in.bs_center + Vec3{0, 0.5 * lambda, 0}};
    std::vector<std::vector<double>> amp = {{1.0, 0.25}};
    in.sns_amp = &amp;
    const ChannelRealization h = assemble_coefficients(in, {1, 0.0});
    CHECK(std::abs(h.at(0, 0, 1, 0)) ==
          doctest::Approx(0.25 * std::abs(h.at(0, 0, 0, 0))).epsilon(1e-6));
}
