// SPDX-License-Identifier: Apache-2.0
#include "gscm/nearfield.hpp"

#include <cmath>
#include <stdexcept>

namespace gscm {

namespace {

double wavelength_m(double fc_ghz)
{
    if (fc_ghz <= 0)
        throw std::invalid_argument("fc must be positive");
    return kSpeedOfLight / (fc_ghz * 1e9);
}

double phase_of(double d_m, double lambda)
{
    return std::fmod(2.0 * kPi * d_m / lambda, 2.0 * kPi);
}

} // namespace

std::vector<LosPairParams> element_wise_los_params(const std::vector<Vec3>& bs_elements,
                                                   const std::vector<Vec3>& ut_elements,
                                                   double fc_ghz)
{
    if (bs_elements.empty() || ut_elements.empty())
        throw std::invalid_argument("element_wise_los_params: empty element set");
    const double lambda = wavelength_m(fc_ghz);
    std::vector<LosPairParams> out;
    out.reserve(bs_elements.size() * ut_elements.size());
    for (const auto& s : bs_elements)
        for (const auto& u : ut_elements) {
            const Vec3 seg = u - s;
            const double d = seg.norm();
            if (d <= 0)
                throw std::invalid_argument("element_wise_los_params: coincident elements");
            LosPairParams p;
            p.distance = d;
            p.phase = phase_of(d, lambda);
            p.departure = direction_of(seg);
            p.arrival = direction_of(s - u);
            out.push_back(p);
        }
    return out;
}

AuxiliaryPointPair place_auxiliary_points(const Vec3& bs_center, const Vec3& ut_center,
                                          const Vec3& departure_unit, const Vec3& arrival_unit,
                                          const AuxDistanceDist& dist, RandomStream& rng)
{
    if (dist.d_min_m <= 0 || dist.d_max_m < dist.d_min_m)
        throw std::invalid_argument("place_auxiliary_points: bad distance bounds");
    auto draw = [&](double mu, double sigma) {
        for (int attempt = 0; attempt < 100; ++attempt) {
            const double d = rng.lognormal_base10(mu, sigma);
            if (d >= dist.d_min_m && d <= dist.d_max_m)
                return d;
        }
        throw std::runtime_error("auxiliary-point distance draw failed (bounds too tight)");
    };
    AuxiliaryPointPair aux;
    aux.d_bs = draw(dist.mu_lg_bs, dist.sigma_lg_bs);
    aux.d_ut = draw(dist.mu_lg_ut, dist.sigma_lg_ut);
    aux.p_bs = bs_center + departure_unit.normalized() * aux.d_bs;
    aux.p_ut = ut_center + arrival_unit.normalized() * aux.d_ut;
    return aux;
}

NlosElementParams element_wise_nlos_params(const AuxiliaryPointPair& aux,
                                           const std::vector<Vec3>& bs_elements,
                                           const std::vector<Vec3>& ut_elements, double fc_ghz)
{
    const double lambda = wavelength_m(fc_ghz);
    NlosElementParams out;
    out.departure.reserve(bs_elements.size());
    out.arrival.reserve(ut_elements.size());
    for (const auto& s : bs_elements) {
        const Vec3 seg = aux.p_bs - s;
        const double d = seg.norm();
        if (d <= 0)
            throw std::invalid_argument("element coincides with auxiliary point");
        out.departure.push_back({phase_of(d, lambda), direction_of(seg), d});
    }
    for (const auto& u : ut_elements) {
        const Vec3 seg = aux.p_ut - u;
        const double d = seg.norm();
        if (d <= 0)
            throw std::invalid_argument("element coincides with auxiliary point");
        out.arrival.push_back({phase_of(d, lambda), direction_of(seg), d});
    }
    return out;
}

} // namespace gscm
