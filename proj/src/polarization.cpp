// SPDX-License-Identifier: Apache-2.0
#include "gscm/polarization.hpp"

#include "gscm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gscm {

double draw_xpr(double mu_xpr_db, double sigma_xpr_db, RandomStream& rng)
{
    if (sigma_xpr_db < 0)
        throw std::invalid_argument("draw_xpr: sigma must be >= 0");
    const double x = rng.normal(std::min(mu_xpr_db, 40.0), sigma_xpr_db);
    return std::pow(10.0, x / 10.0);
}

PolarizationMatrix polarization_matrix(double kappa, bool variability_enabled, double sigma_var_db,
                                       RandomStream& rng)
{
    if (kappa <= 0)
        throw std::invalid_argument("polarization_matrix: kappa must be positive");
    PolarizationMatrix m;
    m.kappa = kappa;
    const double cross = 1.0 / std::sqrt(kappa);
    // Phases first so that sigma_var = 0 reproduces the disabled case exactly.
    double phase[4], amp[4] = {1.0, cross, cross, 1.0};
    for (auto& p : phase)
        p = rng.uniform(-kPi, kPi);
    if (variability_enabled)
        for (auto& a : amp)
            a *= std::pow(10.0, rng.normal(0.0, sigma_var_db) / 20.0);
    m.m_tt = std::polar(amp[0], phase[0]);
    m.m_tp = std::polar(amp[1], phase[1]);
    m.m_pt = std::polar(amp[2], phase[2]);
    m.m_pp = std::polar(amp[3], phase[3]);
    return m;
}

} // namespace gscm
