// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gscm/geometry.hpp"
#include "gscm/rng.hpp"
#include "gscm/tables.hpp"

#include <vector>

namespace gscm {

/// One correlated large-scale-parameter realization for a link.
struct LspSet
{
    double ds_s = 0;      // rms delay spread, seconds
    double asd_deg = 0;   // azimuth spread of departure, clipped at 104 deg
    double asa_deg = 0;   // azimuth spread of arrival, clipped at 104 deg
    double zsd_deg = 0;   // zenith spread of departure, clipped at 52 deg
    double zsa_deg = 0;   // zenith spread of arrival, clipped at 52 deg
    double sf_db = 0;     // shadow fading
    double k_db = 0;      // Ricean K-factor (LOS links)
};

/// Geometry the LSP step needs per link.
struct LspLinkGeometry
{
    Vec3 ut_position;
    double d2d_m = 0;
    double h_ut_m = 1.5;
};

struct LspOptions
{
    bool spatial_correlation = true;
    /// Exact Cholesky of the pairwise kernel up to this many links; larger
    /// drops switch to a random-Fourier-feature field approximation.
    int exact_max_links = 2000;
    int rff_features = 2048;
};

/// exp(-d / corr_dist)
double spatial_correlation(double d_m, double corr_dist_m);

/// Correlated standard-normal field over 2D positions with kernel
/// exp(-d / corr_dist). Exact (Cholesky) up to opt.exact_max_links positions,
/// random-Fourier-feature approximation beyond. Identical positions always
/// receive identical values.
std::vector<double> correlated_normal_field(const std::vector<std::pair<double, double>>& pos,
                                            double corr_dist_m, RandomStream& rng,
                                            const LspOptions& opt = {});

/// Draws the 7 LSPs for every link: spatially correlated standard-normal fields
/// (one per parameter, exponential kernel on UT position), mixed by the
/// Cholesky factor of the cross-correlation matrix, then scaled to the
/// log-domain marginals and delinearized (10^x for DS and spreads, dB for
/// SF/K). All links must share one (scenario, state) grouping.
std::vector<LspSet> generate_correlated_lsps(const std::vector<LspLinkGeometry>& links,
                                             const LspDistributions& dists, double fc_ghz,
                                             RandomStream& rng, const LspOptions& opt = {});

} // namespace gscm
