// SPDX-License-Identifier: Apache-2.0
#include "gscm/smallscale.hpp"

#include "gscm/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gscm {

namespace {

// Ray offset angles for 20 rays per cluster, rms spread normalized to 1
// (TR 38.901 Table 7.5-3).
constexpr std::array<double, 20> kRayOffsets = {
    0.0447, -0.0447, 0.1413, -0.1413, 0.2492, -0.2492, 0.3715, -0.3715, 0.5129, -0.5129,
    0.6797, -0.6797, 0.8844, -0.8844, 1.1481, -1.1481, 1.5195, -1.5195, 2.1551, -2.1551};

// Azimuth scaling constants C_phi (TR 38.901 Table 7.5-2).
constexpr std::array<std::pair<int, double>, 12> kCphi = {{{4, 0.779},
                                                           {5, 0.860},
                                                           {8, 1.018},
                                                           {10, 1.090},
                                                           {11, 1.123},
                                                           {12, 1.146},
                                                           {14, 1.190},
                                                           {15, 1.211},
                                                           {16, 1.226},
                                                           {19, 1.273},
                                                           {20, 1.289},
                                                           {25, 1.358}}};

// Zenith scaling constants C_theta (TR 38.901 Table 7.5-4).
constexpr std::array<std::pair<int, double>, 8> kCtheta = {{{8, 0.889},
                                                            {10, 0.957},
                                                            {11, 1.031},
                                                            {12, 1.104},
                                                            {15, 1.1088},
                                                            {19, 1.184},
                                                            {20, 1.178},
                                                            {25, 1.282}}};

template <size_t N>
double interp_knots(const std::array<std::pair<int, double>, N>& knots, int n)
{
    if (n <= knots.front().first)
        return knots.front().second;
    if (n >= knots.back().first)
        return knots.back().second;
    for (size_t i = 1; i < N; ++i)
        if (n <= knots[i].first) {
            const auto [x0, y0] = knots[i - 1];
            const auto [x1, y1] = knots[i];
            return y0 + (y1 - y0) * (n - x0) / static_cast<double>(x1 - x0);
        }
    return knots.back().second;
}

void fisher_yates(std::vector<int>& perm, RandomStream& rng)
{
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = static_cast<int>(perm.size()) - 1; i > 0; --i)
        std::swap(perm[i], perm[rng.uniform_int(0, i)]);
}

} // namespace

ClusterInterval::ClusterInterval(int lo, int hi) : d_min(lo), d_max(hi)
{
    if (lo < 1 || hi < lo)
        throw std::invalid_argument("ClusterInterval requires 1 <= d_min <= d_max");
}

int draw_num_clusters(const ClusterInterval& interval, ClusterCountMode mode, int legacy_n,
                      RandomStream& rng)
{
    if (mode == ClusterCountMode::FixedLegacy)
        return legacy_n;
    return rng.uniform_int(interval.d_min, interval.d_max);
}

std::vector<double> generate_delays(int n, double ds_s, double r_tau, double k_db, bool los,
                                    RandomStream& rng)
{
    if (ds_s <= 0)
        throw std::invalid_argument("generate_delays: ds must be positive");
    if (r_tau <= 1)
        throw std::invalid_argument("generate_delays: r_tau must be > 1");
    std::vector<double> tau(n);
    for (auto& t : tau)
        t = -r_tau * ds_s * std::log(rng.uniform());
    std::sort(tau.begin(), tau.end());
    const double t0 = tau.empty() ? 0.0 : tau.front();
    for (auto& t : tau)
        t -= t0;
    if (los) {
        const double k = k_db;
        const double c_tau = 0.7705 - 0.0433 * k + 0.0002 * k * k + 0.000017 * k * k * k;
        for (auto& t : tau)
            t /= c_tau;
    }
    return tau;
}

std::vector<double> generate_powers(const std::vector<double>& delays, double ds_s, double r_tau,
                                    double zeta_db, double k_db, bool los, RandomStream& rng,
                                    std::vector<int>* kept)
{
    const int n = static_cast<int>(delays.size());
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal(0.0, zeta_db);
        p[i] = std::exp(-delays[i] * (r_tau - 1) / (r_tau * ds_s)) * std::pow(10.0, -z / 10.0);
    }
    double sum = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& v : p)
        v /= sum;
    if (los) {
        const double k_lin = std::pow(10.0, std::min(k_db, 40.0) / 10.0);
        for (auto& v : p)
            v /= (k_lin + 1);
        p[0] += k_lin / (k_lin + 1);
    }

    // Prune clusters more than 25 dB below the strongest, then renormalize.
    const double pmax = *std::max_element(p.begin(), p.end());
    const double floor = pmax * std::pow(10.0, -2.5);
    std::vector<double> out;
    if (kept)
        kept->clear();
    for (int i = 0; i < n; ++i)
        if (p[i] >= floor) {
            out.push_back(p[i]);
            if (kept)
                kept->push_back(i);
        }
    sum = std::accumulate(out.begin(), out.end(), 0.0);
    for (auto& v : out)
        v /= sum;
    return out;
}

double c_phi(int n, double k_db, bool los)
{
    double c = interp_knots(kCphi, n);
    if (los) {
        const double k = k_db;
        c *= 1.1035 - 0.028 * k - 0.002 * k * k + 0.0001 * k * k * k;
    }
    return c;
}

double c_theta(int n, double k_db, bool los)
{
    double c = interp_knots(kCtheta, n);
    if (los) {
        const double k = k_db;
        c *= 1.3086 + 0.0339 * k - 0.0077 * k * k + 0.0002 * k * k * k;
    }
    return c;
}

ClusterAngles generate_angles(const std::vector<double>& powers, double asd_deg, double asa_deg,
                              double zsd_deg, double zsa_deg, double k_db, bool los,
                              const LosAngles& center, RandomStream& rng)
{
    const int n = static_cast<int>(powers.size());
    const double pmax = *std::max_element(powers.begin(), powers.end());
    const double cp = c_phi(n, k_db, los);
    const double ct = c_theta(n, k_db, los);

    ClusterAngles a;
    a.aod_deg.resize(n);
    a.aoa_deg.resize(n);
    a.zod_deg.resize(n);
    a.zoa_deg.resize(n);

    auto azimuth = [&](double spread, double mean, std::vector<double>& out) {
        std::vector<double> raw(n);
        for (int i = 0; i < n; ++i) {
            const double prime =
                2.0 * (spread / 1.4) * std::sqrt(-std::log(powers[i] / pmax)) / cp;
            raw[i] = rng.sign() * prime + rng.normal(0.0, spread / 7.0);
        }
        const double shift = los ? raw[0] : 0.0;
        for (int i = 0; i < n; ++i) {
            double phi = raw[i] - shift + mean;
            phi = std::remainder(phi, 360.0); // wrap to (-180, 180]
            out[i] = phi;
        }
    };
    auto zenith = [&](double spread, double mean, std::vector<double>& out) {
        std::vector<double> raw(n);
        for (int i = 0; i < n; ++i) {
            const double prime = -spread * std::log(powers[i] / pmax) / ct;
            raw[i] = rng.sign() * prime + rng.normal(0.0, spread / 7.0);
        }
        const double shift = los ? raw[0] : 0.0;
        for (int i = 0; i < n; ++i) {
            double th = raw[i] - shift + mean;
            th = std::fmod(std::fmod(th, 360.0) + 360.0, 360.0);
            if (th > 180.0)
                th = 360.0 - th; // reflect into [0, 180]
            out[i] = th;
        }
    };

    azimuth(asd_deg, center.aod_deg, a.aod_deg);
    azimuth(asa_deg, center.aoa_deg, a.aoa_deg);
    zenith(zsd_deg, center.zod_deg, a.zod_deg);
    zenith(zsa_deg, center.zoa_deg, a.zoa_deg);
    return a;
}

int rays_per_cluster(const ParameterTables& tables, Scenario s, double fc_ghz, double bandwidth_hz,
                     double array_extent_wavelengths, const RayCountConfig& cfg)
{
    const bool wideband = bandwidth_hz > kSpeedOfLight / (2.0 * cfg.cluster_extent_m);
    const bool elaa = array_extent_wavelengths > cfg.array_extent_threshold;
    if (!wideband && !elaa)
        return 20;
    const int m = tables.ray_count(s, fc_ghz);
    return std::clamp(m, cfg.m_min, 20);
}

RayBundle build_ray_bundle(int m, double xpr_mu_db, double xpr_sigma_db, RandomStream& rng)
{
    if (m < 1 || m > 20)
        throw std::invalid_argument("build_ray_bundle: m must be in [1, 20]");
    RayBundle b;
    b.m = m;
    if (m == 20) {
        b.offsets.assign(kRayOffsets.begin(), kRayOffsets.end());
    } else {
        // Keep the smallest-magnitude +/- pairs; an odd m adds a zero singleton.
        // The table is already ordered by magnitude in pairs.
        for (int i = 0; i + 1 < m || (m % 2 == 0 && i < m); i += 2) {
            b.offsets.push_back(kRayOffsets[i]);
            b.offsets.push_back(kRayOffsets[i + 1]);
            if (static_cast<int>(b.offsets.size()) >= m - (m % 2))
                break;
        }
        if (m % 2 == 1)
            b.offsets.push_back(0.0);
        // Rescale so the rms offset is exactly 1 again.
        double rms = 0;
        for (double o : b.offsets)
            rms += o * o;
        rms = std::sqrt(rms / m);
        if (rms > 0)
            for (auto& o : b.offsets)
                o /= rms;
    }

    b.coupling_aoa.resize(m);
    b.coupling_zoa.resize(m);
    b.coupling_cross.resize(m);
    fisher_yates(b.coupling_aoa, rng);
    fisher_yates(b.coupling_zoa, rng);
    fisher_yates(b.coupling_cross, rng);

    b.xpr_db.resize(m);
    for (auto& x : b.xpr_db)
        x = rng.normal(xpr_mu_db, xpr_sigma_db);
    return b;
}

} // namespace gscm
