// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gscm/geometry.hpp"
#include "gscm/rng.hpp"

#include <vector>

namespace gscm {

/// Spherical-wavefront anchor points for one cluster: one on the departure
/// side, one on the arrival side, placed along the cluster's mean directions.
struct AuxiliaryPointPair
{
    Vec3 p_bs, p_ut;
    double d_bs = 0, d_ut = 0; // drawn distances, m
};

/// Per-element (or per element pair) spherical-wave parameters.
struct ElementWaveParams
{
    double phase = 0;    // rad, 2 pi d / lambda mod 2 pi
    Direction direction; // global frame
    double distance = 0; // m
};

/// Exact direct-path parameters for one (BS element, UT element) pair. The
/// departure direction is the unit vector s -> u at the BS element; the
/// arrival direction points from the UT element back toward the BS element
/// (the direction the wave arrives from, as used by the Doppler term).
struct LosPairParams
{
    double phase = 0; // rad, 2 pi d / lambda mod 2 pi
    Direction departure, arrival;
    double distance = 0; // m
};

/// Row-major (s * n_ut + u) exact spherical-wave direct-path parameters.
std::vector<LosPairParams> element_wise_los_params(const std::vector<Vec3>& bs_elements,
                                                   const std::vector<Vec3>& ut_elements,
                                                   double fc_ghz);

/// Lognormal (base-10) distance distribution for auxiliary points.
struct AuxDistanceDist
{
    double mu_lg_bs = 1.3, sigma_lg_bs = 0.2; // log10(d_bs / 1 m)
    double mu_lg_ut = 1.0, sigma_lg_ut = 0.2;
    double d_min_m = 1.0, d_max_m = 1e9;
};

/// Draws the pair for one cluster: distances lognormal along the mean
/// departure/arrival unit vectors from the BS/UT reference centers. Callers
/// cache the result per (link, cluster) for drop-level consistency.
AuxiliaryPointPair place_auxiliary_points(const Vec3& bs_center, const Vec3& ut_center,
                                          const Vec3& departure_unit, const Vec3& arrival_unit,
                                          const AuxDistanceDist& dist, RandomStream& rng);

/// Per-element spherical-wave parameters against the auxiliary points: BS side
/// toward p_bs, UT side toward p_ut. The mid segment p_bs -> p_ut is a common
/// per-cluster term handled by the caller's delay bookkeeping.
struct NlosElementParams
{
    std::vector<ElementWaveParams> departure; // BS elements -> p_bs
    std::vector<ElementWaveParams> arrival;   // UT elements -> p_ut
};

NlosElementParams element_wise_nlos_params(const AuxiliaryPointPair& aux,
                                           const std::vector<Vec3>& bs_elements,
                                           const std::vector<Vec3>& ut_elements, double fc_ghz);

} // namespace gscm
