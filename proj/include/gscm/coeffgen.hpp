// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gscm/antenna.hpp"
#include "gscm/geometry.hpp"
#include "gscm/nearfield.hpp"
#include "gscm/polarization.hpp"
#include "gscm/rng.hpp"
#include "gscm/smallscale.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace gscm {

struct TimeGrid
{
    int n_samples = 1;
    double dt_s = 0.0;
};

/// Field-pattern provider in the global frame, one per end of the link.
/// Implementations wrap the element patterns plus orientation bookkeeping.
class PatternProvider
{
  public:
    virtual ~PatternProvider() = default;
    /// (F_theta, F_phi) of element `idx` for a global-frame direction.
    virtual FieldPattern evaluate(int idx, const Direction& d_gcs) const = 0;
};

/// BS panel: one shared sector orientation and element pattern with slant.
class BsPatternProvider final : public PatternProvider
{
  public:
    BsPatternProvider(Orientation sector, double slant_deg)
        : sector_(sector), slant_deg_(slant_deg)
    {
    }
    FieldPattern evaluate(int, const Direction& d_gcs) const override;

  private:
    Orientation sector_;
    double slant_deg_;
};

/// UT device: per-element orientation (device orientation composed with the
/// per-location element orientation), reference directional pattern.
class UtPatternProvider final : public PatternProvider
{
  public:
    UtPatternProvider(std::vector<Orientation> element_orientations)
        : orientations_(std::move(element_orientations))
    {
    }
    FieldPattern evaluate(int idx, const Direction& d_gcs) const override;

  private:
    std::vector<Orientation> orientations_;
};

/// Everything the per-link assembly needs, all from one drop.
struct AssemblyInputs
{
    // Geometry (global frame).
    Vec3 bs_center, ut_center;
    std::vector<Vec3> bs_elements, ut_elements;
    const PatternProvider* bs_pattern = nullptr;
    const PatternProvider* ut_pattern = nullptr;

    // Cluster structure (post-pruning).
    bool los = false;
    double k_db = 0.0;
    std::vector<double> powers;   // sum 1 (LOS: specular share embedded in cluster 0)
    std::vector<double> delays_s; // excess delays
    ClusterAngles angles;         // mean angles, degrees, global frame
    std::vector<RayBundle> rays;  // per cluster
    double c_asd_deg = 0, c_asa_deg = 0, c_zsd_deg = 0, c_zsa_deg = 0;
    std::vector<std::vector<PolarizationMatrix>> pol; // [cluster][ray]

    // Optional feature inputs.
    const std::vector<AuxiliaryPointPair>* nf_aux = nullptr;   // per cluster
    const std::vector<std::vector<double>>* sns_amp = nullptr; // [cluster][bs element]
    std::vector<double> ut_element_gain_db; // imbalance + grip, per UT element

    Vec3 ut_velocity; // m/s
    double fc_ghz = 7.0;
};

struct AssemblyOptions
{
    bool nearfield = false;
    bool parallel = true; // OpenMP over clusters; serial path is the test reference
};

struct ChannelRealization
{
    int n_clusters = 0, n_times = 0, n_bs = 0, n_ut = 0;
    /// Flattened as ((n * T + t) * S + s) * U + u.
    std::vector<std::complex<float>> h;
    std::vector<double> delays_s;
    double absolute_first_delay_s = 0.0;

    std::complex<float>& at(int n, int t, int s, int u)
    {
        return h[(((static_cast<size_t>(n) * n_times + t) * n_bs) + s) * n_ut + u];
    }
    std::complex<float> at(int n, int t, int s, int u) const
    {
        return h[(((static_cast<size_t>(n) * n_times + t) * n_bs) + s) * n_ut + u];
    }
};

/// Sum-over-rays coefficient assembly (TR 38.901 Step 11 shape). When
/// `options.nearfield` is set, per-element angles and phases come from the
/// auxiliary-point geometry; otherwise the planar-wavefront approximation is
/// used. Output is identical between parallel and serial modes.
ChannelRealization assemble_coefficients(const AssemblyInputs& in, const TimeGrid& grid,
                                         const AssemblyOptions& options = {});

/// 2 pi (r_hat(arrival) . v) fc / c * t
double doppler_phase(const Vec3& velocity_mps, const Direction& arrival, double fc_ghz,
                     double t_s);

struct AbsoluteToaParams
{
    double mu_lg = -7.5;
    double sigma_lg = 0.0;
    double corr_dist_m = 15.0;
};

/// LOS: d3d/c. NLOS/O2I: d3d/c + dtau, lg(dtau) drawn N(mu, sigma) with the
/// spatially correlated unit-normal `field_value` supplied by the caller (same
/// kernel machinery as the LSP fields). Shifts realization delays in place.
double apply_absolute_toa(ChannelRealization& h, bool los, double d3d_m,
                          const AbsoluteToaParams& params, double field_value);

/// Binary dump: magic "GSCM", version 1, dims, length-prefixed UTF-8 metadata
/// descriptor, then little-endian complex64 payload.
void write_tensor(const std::string& path, const ChannelRealization& h,
                  const std::string& metadata);
ChannelRealization read_tensor(const std::string& path, std::string* metadata = nullptr);

} // namespace gscm
