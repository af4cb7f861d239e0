// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gscm/geometry.hpp"
#include "gscm/rng.hpp"

#include <vector>

namespace gscm {

enum class SnsMode { Off, Physical, Stochastic };

/// Rectangular screen blocking cluster departures at the BS side. The local +x
/// axis is the screen normal; the rectangle spans local y (width) and local z
/// (height) about the center.
struct Blocker
{
    Vec3 center;
    double width_m = 1.0, height_m = 1.0;
    Orientation orientation;
};

/// Per-element amplitude factors in [0,1] for one cluster: a ray is cast from
/// each BS element toward the cluster's departure anchor (auxiliary point when
/// the near field is enabled, a far-range point on the mean direction
/// otherwise). A hit applies a knife-edge-style soft factor that transitions
/// smoothly from 0 (deep inside the screen) to 1 over `edge_width_m` around the
/// nearest screen edge; misses give 1. Multiple blockers multiply.
std::vector<double> physical_blocker_attenuation(const std::vector<Blocker>& blockers,
                                                 const std::vector<Vec3>& bs_elements,
                                                 const Vec3& cluster_anchor,
                                                 double edge_width_m = 0.5);

struct StochasticSnsConfig
{
    double region_fraction_min = 0.3; // visible-window length as fraction of the array
    double region_fraction_max = 1.0;
    double atten_mu_db = -15.0;  // 20 log10 amplitude outside the visible region
    double atten_sigma_db = 3.0;
    int rolloff_elements = 2;    // minimum raised-cosine span at the window edges
    double max_step_db = 3.0;    // adjacent-element smoothness bound
};

struct ClusterVisibility
{
    bool impacted = false;
    int start = 0, length = 0;      // visible window (element indices)
    std::vector<double> amplitude;  // per element, [0,1]; empty when not impacted
};

struct VisibilityAssignment
{
    std::vector<ClusterVisibility> clusters;
};

/// Stochastic visibility model: each cluster is independently impacted with
/// probability (1 - p). An impacted cluster gets a contiguous visible window
/// (uniform start, uniform length fraction); elements outside the window share
/// one lognormal amplitude level, reached through a raised-cosine roll-off.
VisibilityAssignment stochastic_sns(double visibility_prob, const StochasticSnsConfig& cfg,
                                    int n_clusters, int n_elements, RandomStream& rng);

} // namespace gscm
