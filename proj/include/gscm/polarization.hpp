// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gscm/rng.hpp"

#include <complex>

namespace gscm {

/// 2x2 per-ray polarization transfer matrix acting on (F_theta, F_phi) field
/// components: receive = M * transmit.
struct PolarizationMatrix
{
    std::complex<double> m_tt, m_tp, m_pt, m_pp;
    double kappa = 1.0; // linear XPR used to build the matrix
};

/// kappa = 10^(X/10), X ~ N(mu, sigma^2) in dB. mu is capped at 40 dB.
double draw_xpr(double mu_xpr_db, double sigma_xpr_db, RandomStream& rng);

/// Base matrix: co-polar entries unit magnitude, cross-polar 1/sqrt(kappa), all
/// four phases i.i.d. uniform on (-pi, pi]. With variability enabled each entry
/// is additionally scaled by an independent amplitude factor 10^(V/20),
/// V ~ N(0, sigma_var^2); the phases are unaffected.
PolarizationMatrix polarization_matrix(double kappa, bool variability_enabled, double sigma_var_db,
                                       RandomStream& rng);

} // namespace gscm
