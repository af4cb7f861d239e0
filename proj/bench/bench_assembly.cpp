// SPDX-License-Identifier: Apache-2.0
//
// Serial vs OpenMP coefficient assembly on a representative link:
// 19 clusters x 20 rays into a 64-element BS panel, 4 UT elements, 16 time
// samples. Run with --benchmark_filter=assembly to compare the two paths.

#include "gscm/coeffgen.hpp"
#include "gscm/polarization.hpp"
#include "gscm/smallscale.hpp"

#include <benchmark/benchmark.h>

using namespace gscm;

namespace {

class IsotropicProvider final : public PatternProvider
{
  public:
    FieldPattern evaluate(int, const Direction&) const override { return {1.0, 0.0}; }
};

AssemblyInputs make_inputs(const PatternProvider& iso, int n_clusters)
{
    AssemblyInputs in;
    in.bs_center = {0, 0, 25};
    in.ut_center = {120, 40, 1.5};
    const double lambda = kSpeedOfLight / 7e9;
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c)
            in.bs_elements.push_back(in.bs_center +
                                     Vec3{0, (c - 3.5) * 0.5 * lambda, (r - 3.5) * 0.5 * lambda});
    for (int u = 0; u < 4; ++u)
        in.ut_elements.push_back(in.ut_center + Vec3{0, u * 0.02, 0});
    in.bs_pattern = &iso;
    in.ut_pattern = &iso;
    in.los = false;
    in.fc_ghz = 7.0;
    in.ut_velocity = {8.3, 0, 0};
    in.ut_element_gain_db.assign(4, 0.0);
    in.c_asd_deg = 3.0;
    in.c_asa_deg = 15.0;
    in.c_zsd_deg = 1.0;
    in.c_zsa_deg = 7.0;

    RandomStream rng(99);
    const auto delays = generate_delays(n_clusters, 100e-9, 2.3, 0.0, false, rng);
    in.delays_s = delays;
    in.powers = generate_powers(delays, 100e-9, 2.3, 3.0, 0.0, false, rng);
    in.delays_s.resize(in.powers.size());
    const int nc = static_cast<int>(in.powers.size());
    const auto ang = generate_angles(in.powers, 25.0, 60.0, 5.0, 9.0, 0.0, false, {}, rng);
    in.angles = ang;
    for (int n = 0; n < nc; ++n) {
        in.rays.push_back(build_ray_bundle(20, 8.0, 3.0, rng));
        std::vector<PolarizationMatrix> pm;
        for (int m = 0; m < 20; ++m)
            pm.push_back(polarization_matrix(6.3, false, 0.0, rng));
        in.pol.push_back(pm);
    }
    return in;
}

void bench_assembly(benchmark::State& state, bool parallel)
{
    const IsotropicProvider iso;
    const AssemblyInputs in = make_inputs(iso, 19);
    AssemblyOptions opts;
    opts.parallel = parallel;
    const TimeGrid grid{16, 1e-3};
    for (auto _ : state) {
        const ChannelRealization h = assemble_coefficients(in, grid, opts);
        benchmark::DoNotOptimize(h.h.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.powers.size()) *
                            20 * 64 * 4 * 16);
}

void assembly_serial(benchmark::State& state)
{
    bench_assembly(state, false);
}

void assembly_parallel(benchmark::State& state)
{
    bench_assembly(state, true);
}

BENCHMARK(assembly_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(assembly_parallel)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
