// SPDX-License-Identifier: Apache-2.0
#include "gscm/coeffgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace gscm {

namespace {

/// Direction from angles in degrees; zenith values outside [0, 180] are
/// reflected back into range (with the azimuth flipped across the pole).
Direction direction_deg(double zenith_deg, double azimuth_deg)
{
    double th = std::fmod(std::fmod(zenith_deg, 360.0) + 360.0, 360.0);
    if (th > 180.0) {
        th = 360.0 - th;
        azimuth_deg += 180.0;
    }
    return Direction(deg2rad(th), deg2rad(azimuth_deg));
}

std::complex<double> pattern_product(const FieldPattern& rx, const PolarizationMatrix& m,
                                     const FieldPattern& tx)
{
    return rx.f_theta * (m.m_tt * tx.f_theta + m.m_tp * tx.f_phi) +
           rx.f_phi * (m.m_pt * tx.f_theta + m.m_pp * tx.f_phi);
}

void rotate_pattern(FieldPattern& f, double psi)
{
    const double c = std::cos(psi), s = std::sin(psi);
    const double ft = c * f.f_theta - s * f.f_phi;
    const double fp = s * f.f_theta + c * f.f_phi;
    f.f_theta = ft;
    f.f_phi = fp;
}

void check_dim(bool ok, const char* axis)
{
    if (!ok)
        throw std::invalid_argument(std::string("assemble_coefficients: dimension mismatch on ") +
                                    axis);
}

} // namespace

FieldPattern BsPatternProvider::evaluate(int, const Direction& d_gcs) const
{
    FieldPattern f = bs_element_pattern(gcs_to_lcs(sector_, d_gcs), slant_deg_);
    rotate_pattern(f, polarization_rotation_angle(sector_, d_gcs));
    return f;
}

FieldPattern UtPatternProvider::evaluate(int idx, const Direction& d_gcs) const
{
    const Orientation& o = orientations_.at(idx);
    FieldPattern f = ut_reference_pattern(gcs_to_lcs(o, d_gcs));
    rotate_pattern(f, polarization_rotation_angle(o, d_gcs));
    return f;
}

double doppler_phase(const Vec3& velocity_mps, const Direction& arrival, double fc_ghz, double t_s)
{
    const Vec3 r = spherical_unit_vector(arrival);
    return 2.0 * kPi * r.dot(velocity_mps) * fc_ghz * 1e9 / kSpeedOfLight * t_s;
}

ChannelRealization assemble_coefficients(const AssemblyInputs& in, const TimeGrid& grid,
                                         const AssemblyOptions& options)
{
    const int n_clusters = static_cast<int>(in.powers.size());
    const int n_bs = static_cast<int>(in.bs_elements.size());
    const int n_ut = static_cast<int>(in.ut_elements.size());
    const int n_t = grid.n_samples;

    check_dim(n_bs > 0, "bs_elements");
    check_dim(n_ut > 0, "ut_elements");
    check_dim(n_t > 0, "time");
    check_dim(in.delays_s.size() == in.powers.size(), "delays");
    check_dim(in.rays.size() == in.powers.size(), "rays");
    check_dim(in.pol.size() == in.powers.size(), "pol");
    check_dim(in.angles.aod_deg.size() == in.powers.size(), "angles");
    if (!in.bs_pattern || !in.ut_pattern)
        throw std::invalid_argument("assemble_coefficients: pattern providers required");
    for (int n = 0; n < n_clusters; ++n)
        check_dim(static_cast<int>(in.pol[n].size()) == in.rays[n].m, "pol rays");
    if (options.nearfield) {
        check_dim(in.nf_aux != nullptr && in.nf_aux->size() == in.powers.size(), "nf_aux");
    }
    if (in.sns_amp) {
        check_dim(in.sns_amp->size() == in.powers.size(), "sns clusters");
        for (const auto& a : *in.sns_amp)
            check_dim(static_cast<int>(a.size()) == n_bs, "sns elements");
    }
    if (!in.ut_element_gain_db.empty())
        check_dim(static_cast<int>(in.ut_element_gain_db.size()) == n_ut, "ut gains");

    const double lambda = kSpeedOfLight / (in.fc_ghz * 1e9);
    const double two_pi_over_lambda = 2.0 * kPi / lambda;

    std::vector<double> ut_gain(n_ut, 1.0);
    for (int u = 0; u < n_ut && !in.ut_element_gain_db.empty(); ++u)
        ut_gain[u] = std::pow(10.0, in.ut_element_gain_db[u] / 20.0);

    // LOS: the specular share is embedded in powers[0]; split it back out so
    // the direct ray is deterministic and cluster 0's diffuse rays carry only
    // the remainder.
    const double k_lin = in.los ? std::pow(10.0, std::min(in.k_db, 40.0) / 10.0) : 0.0;
    const double specular = in.los ? std::min(k_lin / (k_lin + 1.0), in.powers[0]) : 0.0;

    ChannelRealization h;
    h.n_clusters = n_clusters;
    h.n_times = n_t;
    h.n_bs = n_bs;
    h.n_ut = n_ut;
    h.h.assign(static_cast<size_t>(n_clusters) * n_t * n_bs * n_ut, {0.f, 0.f});
    h.delays_s = in.delays_s;

#pragma omp parallel for schedule(dynamic) if (options.parallel)
    for (int n = 0; n < n_clusters; ++n) {
        const RayBundle& rb = in.rays[n];
        const double p_diffuse = (n == 0 && in.los) ? std::max(in.powers[0] - specular, 0.0)
                                                    : in.powers[n];
        const double ray_amp = std::sqrt(p_diffuse / rb.m);

        std::vector<std::complex<double>> acc(static_cast<size_t>(n_t) * n_bs * n_ut, 0.0);

        for (int m = 0; m < rb.m; ++m) {
            const double off_aod = in.c_asd_deg * rb.offsets[m];
            const double off_aoa = in.c_asa_deg * rb.offsets[rb.coupling_aoa[m]];
            const double off_zod = in.c_zsd_deg * rb.offsets[rb.coupling_cross[m]];
            const double off_zoa = in.c_zsa_deg * rb.offsets[rb.coupling_zoa[m]];
            const std::complex<double> pol_amp = ray_amp;

            if (!options.nearfield) {
                const Direction dep =
                    direction_deg(in.angles.zod_deg[n] + off_zod, in.angles.aod_deg[n] + off_aod);
                const Direction arr =
                    direction_deg(in.angles.zoa_deg[n] + off_zoa, in.angles.aoa_deg[n] + off_aoa);
                const Vec3 r_tx = spherical_unit_vector(dep);
                const Vec3 r_rx = spherical_unit_vector(arr);
                const FieldPattern ftx = in.bs_pattern->evaluate(0, dep);

                std::vector<std::complex<double>> tx_term(n_bs);
                for (int s = 0; s < n_bs; ++s) {
                    double amp = 1.0;
                    if (in.sns_amp)
                        amp = (*in.sns_amp)[n][s];
                    const double ph = two_pi_over_lambda * r_tx.dot(in.bs_elements[s] -
                                                                    in.bs_center);
                    tx_term[s] = std::polar(amp, ph);
                }
                std::vector<std::complex<double>> rx_term(n_ut);
                for (int u = 0; u < n_ut; ++u) {
                    const FieldPattern frx = in.ut_pattern->evaluate(u, arr);
                    const double ph = two_pi_over_lambda * r_rx.dot(in.ut_elements[u] -
                                                                    in.ut_center);
                    rx_term[u] = pattern_product(frx, in.pol[n][m], ftx) *
                                 std::polar(ut_gain[u], ph);
                }
                const double omega =
                    2.0 * kPi * r_rx.dot(in.ut_velocity) * in.fc_ghz * 1e9 / kSpeedOfLight;
                for (int t = 0; t < n_t; ++t) {
                    const std::complex<double> w =
                        pol_amp * std::polar(1.0, omega * t * grid.dt_s);
                    for (int s = 0; s < n_bs; ++s) {
                        const std::complex<double> ws = w * tx_term[s];
                        std::complex<double>* row =
                            acc.data() + (static_cast<size_t>(t) * n_bs + s) * n_ut;
                        for (int u = 0; u < n_ut; ++u)
                            row[u] += ws * rx_term[u];
                    }
                }
            } else {
                const auto& aux = (*in.nf_aux)[n];
                const double d_bs0 = (aux.p_bs - in.bs_center).norm();
                const double d_ut0 = (aux.p_ut - in.ut_center).norm();
                std::vector<std::complex<double>> tx_term(n_bs);
                std::vector<FieldPattern> ftx(n_bs);
                std::vector<Direction> dep(n_bs);
                for (int s = 0; s < n_bs; ++s) {
                    const Vec3 seg = aux.p_bs - in.bs_elements[s];
                    const double d = seg.norm();
                    const Direction d0 = direction_of(seg);
                    dep[s] = direction_deg(rad2deg(d0.theta) + off_zod,
                                           rad2deg(d0.phi) + off_aod);
                    ftx[s] = in.bs_pattern->evaluate(s, dep[s]);
                    double amp = 1.0;
                    if (in.sns_amp)
                        amp = (*in.sns_amp)[n][s];
                    // Phase relative to the reference center so the far-field
                    // limit reproduces the planar factor exactly.
                    tx_term[s] = std::polar(amp, -two_pi_over_lambda * (d - d_bs0));
                }
                for (int u = 0; u < n_ut; ++u) {
                    const Vec3 seg = aux.p_ut - in.ut_elements[u];
                    const double d = seg.norm();
                    const Direction a0 = direction_of(seg);
                    const Direction arr = direction_deg(rad2deg(a0.theta) + off_zoa,
                                                        rad2deg(a0.phi) + off_aoa);
                    const FieldPattern frx = in.ut_pattern->evaluate(u, arr);
                    const std::complex<double> rx =
                        std::polar(ut_gain[u], -two_pi_over_lambda * (d - d_ut0));
                    const double omega = 2.0 * kPi * spherical_unit_vector(arr).dot(
                                             in.ut_velocity) * in.fc_ghz * 1e9 / kSpeedOfLight;
                    for (int t = 0; t < n_t; ++t) {
                        const std::complex<double> w =
                            pol_amp * rx * std::polar(1.0, omega * t * grid.dt_s);
                        for (int s = 0; s < n_bs; ++s)
                            acc[(static_cast<size_t>(t) * n_bs + s) * n_ut + u] +=
                                w * pattern_product(frx, in.pol[n][m], ftx[s]) * tx_term[s];
                    }
                }
            }
        }

        // Deterministic direct ray on cluster 0 for LOS links.
        if (n == 0 && in.los && specular > 0) {
            const double amp0 = std::sqrt(specular);
            PolarizationMatrix los_pol;
            los_pol.m_tt = 1.0;
            los_pol.m_tp = 0.0;
            los_pol.m_pt = 0.0;
            los_pol.m_pp = -1.0;
            los_pol.kappa = std::numeric_limits<double>::infinity();
            const double d_c = (in.ut_center - in.bs_center).norm();
            for (int s = 0; s < n_bs; ++s)
                for (int u = 0; u < n_ut; ++u) {
                    const Vec3 seg = in.ut_elements[u] - in.bs_elements[s];
                    const double d = seg.norm();
                    const Direction dep = direction_of(seg);
                    const Direction arr = direction_of(seg * -1.0);
                    const FieldPattern ftx = in.bs_pattern->evaluate(s, dep);
                    const FieldPattern frx = in.ut_pattern->evaluate(u, arr);
                    double amp = amp0 * ut_gain[u];
                    if (in.sns_amp)
                        amp *= (*in.sns_amp)[0][s];
                    const std::complex<double> base =
                        pattern_product(frx, los_pol, ftx) *
                        std::polar(amp, -two_pi_over_lambda * (d - d_c)) *
                        std::polar(1.0, -std::fmod(two_pi_over_lambda * d_c, 2.0 * kPi));
                    const double omega = 2.0 * kPi * spherical_unit_vector(arr).dot(
                                             in.ut_velocity) * in.fc_ghz * 1e9 / kSpeedOfLight;
                    for (int t = 0; t < n_t; ++t)
                        acc[(static_cast<size_t>(t) * n_bs + s) * n_ut + u] +=
                            base * std::polar(1.0, omega * t * grid.dt_s);
                }
        }

        for (int t = 0; t < n_t; ++t)
            for (int s = 0; s < n_bs; ++s)
                for (int u = 0; u < n_ut; ++u) {
                    const auto v = acc[(static_cast<size_t>(t) * n_bs + s) * n_ut + u];
                    h.at(n, t, s, u) = {static_cast<float>(v.real()),
                                        static_cast<float>(v.imag())};
                }
    }

    return h;
}

double apply_absolute_toa(ChannelRealization& h, bool los, double d3d_m,
                          const AbsoluteToaParams& params, double field_value)
{
    if (d3d_m <= 0)
        throw std::invalid_argument("apply_absolute_toa: d3d must be positive");
    double abs_delay = d3d_m / kSpeedOfLight;
    if (!los)
        abs_delay += std::pow(10.0, params.mu_lg + params.sigma_lg * field_value);
    for (auto& d : h.delays_s)
        d += abs_delay;
    h.absolute_first_delay_s = abs_delay;
    return abs_delay;
}

namespace {

template <typename T>
void put(std::ostream& os, const T& v)
{
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void get(std::istream& is, T& v)
{
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
}

} // namespace

void write_tensor(const std::string& path, const ChannelRealization& h,
                  const std::string& metadata)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open " + path + " for writing");
    os.write("GSCM", 4);
    put(os, static_cast<std::uint32_t>(1)); // version
    put(os, static_cast<std::uint32_t>(h.n_clusters));
    put(os, static_cast<std::uint32_t>(h.n_times));
    put(os, static_cast<std::uint32_t>(h.n_bs));
    put(os, static_cast<std::uint32_t>(h.n_ut));
    put(os, h.absolute_first_delay_s);
    put(os, static_cast<std::uint32_t>(h.delays_s.size()));
    for (double d : h.delays_s)
        put(os, d);
    put(os, static_cast<std::uint32_t>(metadata.size()));
    os.write(metadata.data(), static_cast<std::streamsize>(metadata.size()));
    os.write(reinterpret_cast<const char*>(h.h.data()),
             static_cast<std::streamsize>(h.h.size() * sizeof(std::complex<float>)));
    if (!os)
        throw std::runtime_error("write failed for " + path);
}

ChannelRealization read_tensor(const std::string& path, std::string* metadata)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (std::memcmp(magic, "GSCM", 4) != 0)
        throw std::runtime_error(path + ": bad magic");
    std::uint32_t version = 0;
    get(is, version);
    if (version != 1)
        throw std::runtime_error(path + ": unsupported version");
    std::uint32_t n, t, s, u, nd, ml;
    ChannelRealization h;
    get(is, n);
    get(is, t);
    get(is, s);
    get(is, u);
    get(is, h.absolute_first_delay_s);
    get(is, nd);
    h.delays_s.resize(nd);
    for (auto& d : h.delays_s)
        get(is, d);
    get(is, ml);
    std::string meta(ml, '\0');
    is.read(meta.data(), ml);
    if (metadata)
        *metadata = meta;
    h.n_clusters = static_cast<int>(n);
    h.n_times = static_cast<int>(t);
    h.n_bs = static_cast<int>(s);
    h.n_ut = static_cast<int>(u);
    h.h.resize(static_cast<size_t>(n) * t * s * u);
    is.read(reinterpret_cast<char*>(h.h.data()),
            static_cast<std::streamsize>(h.h.size() * sizeof(std::complex<float>)));
    if (!is)
        throw std::runtime_error(path + ": truncated tensor");
    return h;
}

} // namespace gscm
