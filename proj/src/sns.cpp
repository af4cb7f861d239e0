// SPDX-License-Identifier: Apache-2.0
#include "gscm/sns.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gscm {

namespace {

/// Smooth 0 -> 1 factor as a function of the signed miss distance m to the
/// nearest screen edge (m > 0 outside the rectangle, m < 0 inside).
double knife_edge_factor(double m, double edge_width)
{
    if (m >= edge_width)
        return 1.0;
    if (m <= -edge_width)
        return 0.0;
    return 0.5 * (1.0 + std::sin(0.5 * kPi * m / edge_width));
}

} // namespace

std::vector<double> physical_blocker_attenuation(const std::vector<Blocker>& blockers,
                                                 const std::vector<Vec3>& bs_elements,
                                                 const Vec3& cluster_anchor, double edge_width_m)
{
    if (edge_width_m <= 0)
        throw std::invalid_argument("physical_blocker_attenuation: edge width must be positive");
    std::vector<double> out(bs_elements.size(), 1.0);
    for (const auto& b : blockers) {
        if (b.width_m <= 0 || b.height_m <= 0)
            throw std::invalid_argument("blocker dimensions must be positive");
        const Mat3 r = rotation_matrix(b.orientation);
        const Vec3 n = mat_apply(r, {1, 0, 0});
        const Vec3 h = mat_apply(r, {0, 1, 0});
        const Vec3 v = mat_apply(r, {0, 0, 1});
        for (size_t i = 0; i < bs_elements.size(); ++i) {
            const Vec3& e = bs_elements[i];
            const Vec3 seg = cluster_anchor - e;
            const double denom = seg.dot(n);
            if (std::abs(denom) < 1e-12)
                continue; // ray parallel to the screen plane
            const double s = (b.center - e).dot(n) / denom;
            if (s <= 0.0 || s >= 1.0)
                continue; // screen not between element and anchor
            const Vec3 hit = e + seg * s - b.center;
            const double dy = std::abs(hit.dot(h)) - 0.5 * b.width_m;
            const double dz = std::abs(hit.dot(v)) - 0.5 * b.height_m;
            double miss; // signed distance to the rectangle boundary
            if (dy <= 0 && dz <= 0)
                miss = std::max(dy, dz); // inside: negative margin to nearest edge
            else
                miss = std::hypot(std::max(dy, 0.0), std::max(dz, 0.0));
            out[i] *= knife_edge_factor(miss, edge_width_m);
        }
    }
    return out;
}

VisibilityAssignment stochastic_sns(double visibility_prob, const StochasticSnsConfig& cfg,
                                    int n_clusters, int n_elements, RandomStream& rng)
{
    if (visibility_prob < 0 || visibility_prob > 1)
        throw std::invalid_argument("stochastic_sns: visibility probability outside [0,1]");
    if (cfg.region_fraction_min <= 0 || cfg.region_fraction_max > 1.0 ||
        cfg.region_fraction_min > cfg.region_fraction_max)
        throw std::invalid_argument("stochastic_sns: bad region fraction bounds");
    if (n_clusters < 0 || n_elements < 1)
        throw std::invalid_argument("stochastic_sns: bad dimensions");

    VisibilityAssignment va;
    va.clusters.resize(n_clusters);
    for (auto& cv : va.clusters) {
        cv.impacted = rng.uniform() < (1.0 - visibility_prob);
        if (!cv.impacted)
            continue;
        const double frac = rng.uniform(cfg.region_fraction_min, cfg.region_fraction_max);
        cv.length = std::clamp(static_cast<int>(std::lround(frac * n_elements)), 1, n_elements);
        cv.start = rng.uniform_int(0, n_elements - cv.length);
        // One shared amplitude level outside the window keeps adjacent elements
        // consistent; a raised-cosine roll-off in the dB domain connects it to
        // the fully visible core. The span stretches beyond the configured
        // minimum when the level is deep, so adjacent elements never step by
        // more than max_step_db.
        const double level =
            std::clamp(std::pow(10.0, rng.normal(cfg.atten_mu_db, cfg.atten_sigma_db) / 20.0),
                       1e-6, 1.0);
        const double level_db = 20.0 * std::log10(level);
        cv.amplitude.assign(n_elements, level);
        for (int i = cv.start; i < cv.start + cv.length; ++i)
            cv.amplitude[i] = 1.0;
        const int span = std::max(
            {cfg.rolloff_elements + 1, 1,
             static_cast<int>(std::ceil(kPi * std::abs(level_db) / (2.0 * cfg.max_step_db)))});
        for (int k = 1; k < span; ++k) {
            const double w_db = level_db * 0.5 * (1.0 - std::cos(kPi * k / span));
            const double w = std::pow(10.0, w_db / 20.0);
            const int lo = cv.start - k;
            const int hi = cv.start + cv.length - 1 + k;
            if (lo >= 0)
                cv.amplitude[lo] = w;
            if (hi < n_elements)
                cv.amplitude[hi] = w;
        }
    }
    return va;
}

} // namespace gscm
