// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gscm/rng.hpp"
#include "gscm/tables.hpp"

#include <vector>

namespace gscm {

struct ClusterInterval
{
    int d_min = 1;
    int d_max = 1;

    ClusterInterval() = default;
    ClusterInterval(int lo, int hi);
};

enum class ClusterCountMode { FixedLegacy, UniformInterval };

/// FixedLegacy returns `legacy_n`; UniformInterval draws discrete-uniform over
/// [d_min, d_max].
int draw_num_clusters(const ClusterInterval& interval, ClusterCountMode mode, int legacy_n,
                      RandomStream& rng);

/// Exponential cluster delays: tau'_i = -r_tau * ds * ln(U_i), sorted, min
/// subtracted. For LOS the delays are divided by the K-dependent scaling
/// C_tau = 0.7705 - 0.0433K + 0.0002K^2 + 0.000017K^3 (K in dB).
std::vector<double> generate_delays(int n, double ds_s, double r_tau, double k_db, bool los,
                                    RandomStream& rng);

/// Cluster powers: exponential delay profile with per-cluster lognormal
/// shadowing zeta, normalized to sum 1. LOS adds a specular share K/(K+1) on
/// cluster 0 and scales the rest by 1/(K+1). Clusters more than 25 dB below the
/// strongest are pruned and the rest renormalized; `kept` (when non-null)
/// receives the surviving cluster indices.
std::vector<double> generate_powers(const std::vector<double>& delays, double ds_s, double r_tau,
                                    double zeta_db, double k_db, bool los, RandomStream& rng,
                                    std::vector<int>* kept = nullptr);

/// Azimuth/zenith scaling constants for the inverse-Gaussian / inverse-Laplacian
/// angle mappings, linearly interpolated between the canonical tabulated cluster
/// counts (needed because the cluster count is now variable).
double c_phi(int n, double k_db, bool los);
double c_theta(int n, double k_db, bool los);

struct ClusterAngles
{
    std::vector<double> aod_deg, aoa_deg, zod_deg, zoa_deg;
};

/// Mean-direction inputs for the angle generation (degrees, global frame).
struct LosAngles
{
    double aod_deg = 0, aoa_deg = 0, zod_deg = 90, zoa_deg = 90;
};

/// Per-cluster angles: inverse-Gaussian mapping in azimuth, inverse-Laplacian in
/// zenith, random sign and Gaussian jitter, centered on the LOS direction (LOS
/// links re-center so cluster 0 aligns exactly).
ClusterAngles generate_angles(const std::vector<double>& powers, double asd_deg, double asa_deg,
                              double zsd_deg, double zsa_deg, double k_db, bool los,
                              const LosAngles& center, RandomStream& rng);

struct RayCountConfig
{
    int m_min = 1;
    double cluster_extent_m = 10.0;       // D_cluster in the large-bandwidth trigger
    double array_extent_threshold = 8.0;  // wavelengths
};

/// Rays per cluster. Outside the large-bandwidth/ELAA trigger condition the
/// legacy 20 is kept; inside it the table value for (scenario, fc) applies,
/// clamped to [m_min, 20].
int rays_per_cluster(const ParameterTables& tables, Scenario s, double fc_ghz, double bandwidth_hz,
                     double array_extent_wavelengths, const RayCountConfig& cfg = {});

struct RayBundle
{
    int m = 20;
    std::vector<double> offsets; // unit-rms angular offsets (scaled by c_AS at use)
    std::vector<int> coupling_aoa;   // AoD ray -> AoA ray
    std::vector<int> coupling_zoa;   // ZoD ray -> ZoA ray
    std::vector<int> coupling_cross; // AoD ray -> ZoA ray (phase pairing)
    std::vector<double> xpr_db;      // per-ray cross-polarization ratio
};

/// Ray offsets and couplings. m = 20 uses the canonical fixed offset table;
/// m < 20 keeps the m smallest-magnitude offsets as +/- pairs (odd m adds a
/// zero singleton) rescaled back to unit rms.
RayBundle build_ray_bundle(int m, double xpr_mu_db, double xpr_sigma_db, RandomStream& rng);

} // namespace gscm
