// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gscm/geometry.hpp"
#include "gscm/rng.hpp"
#include "gscm/tables.hpp"

#include <cstdint>
#include <vector>

namespace gscm {

struct ScenarioConfig
{
    Scenario scenario = Scenario::UMa;
    double fc_ghz = 7.0;
    double isd_m = 500.0;
    double bs_height_m = 25.0;
    double downtilt_deg = 102.0;     // mechanical, measured from zenith (> 90 points down)
    double indoor_ratio = 0.8;
    double min_2d_distance_m = 35.0;
    double outdoor_ut_height_m = 1.5;
    bool single_site = false;        // degenerate 1-site layout for small runs
    bool outdoor_in_car = false;     // apply in-car penetration to outdoor UTs
    // SMa LOS probability: P_LOS = exp(-d2d / k_sma). The TR names the model
    // family but not its constants, so this ships as a config parameter.
    double k_sma_m = 150.0;          // PLACEHOLDER
    std::uint64_t seed = 0;

    void validate() const;

    /// Table 1 defaults for the SMa scenario (ISD midpoint 1500 m).
    static ScenarioConfig sma_defaults();
    /// Canonical layout defaults per scenario (ISD, BS height, indoor ratio).
    static ScenarioConfig defaults_for(Scenario s);
};

struct Sector
{
    int site_id = 0;
    int sector_id = 0;  // global sector index
    Vec3 position;
    Orientation orientation; // bearing from {30, 150, 270} deg + downtilt
};

struct Layout
{
    std::vector<Vec3> site_positions;
    std::vector<Sector> sectors;
};

enum class BuildingType { None, Residential, Commercial };

struct UT
{
    int id = 0;
    Vec3 position;
    bool indoor = false;
    BuildingType building = BuildingType::None;
    double indoor_depth_m = 0;
    bool in_car = false;
    double speed_mps = 0;
    Orientation orientation;
};

struct Link
{
    int bs_id = 0;
    int sector_id = 0;
    int ut_id = 0;
    double d2d = 0;
    double d3d = 0;
    LinkState state = LinkState::NLOS;
    double indoor_depth_m = 0; // present iff state == O2I
    bool in_car = false;
};

/// 19-site hexagonal grid (or 1 site with single_site), 3 sectors per site with
/// bearings 30/150/270 deg and the configured downtilt.
Layout generate_layout(const ScenarioConfig& cfg);

/// Drops UTs uniformly over the layout coverage area, respecting the minimum 2D
/// distance to every site. Indoor UTs get a building type (90% residential with
/// floors {1.5, 4.5} m, 10% commercial with floors {1.5,...,13.5} m) and a
/// floor-uniform height; outdoor UTs are at 1.5 m, in-car, moving at 40 km/h.
std::vector<UT> drop_uts(const Layout& layout, const ScenarioConfig& cfg, int n_uts,
                         RandomStream& rng);

/// LOS probability as a function of 2D distance. SMa uses exp(-d/k_sma); the
/// legacy scenarios use their canonical closed forms.
double los_probability(Scenario s, double d2d_m, double k_sma_m = 150.0);

/// Free-space path loss, dB (Friis).
double friis_fspl_db(double fc_ghz, double d_m);

/// Path loss in dB from the shipped coefficient tables. NLOS (and O2I outdoor
/// loss) is lower-bounded by the LOS value at the same geometry. d3d below 10 m
/// is clamped to 10 m.
double path_loss_db(const ParameterTables& tables, Scenario s, LinkState st, double d3d_m,
                    double fc_ghz, double h_bs_m, double h_ut_m);

enum class PenetrationModel { SMaLowLoss, LegacyLow, LegacyHigh, InCar };

struct PenetrationOptions
{
    bool variation_enabled = true;
    // Plywood material loss L = a + b*fc; PLACEHOLDER pending the TR table.
    double plywood_a_db = 4.85;
    double plywood_b_db_per_ghz = 0.12;
    double in_car_mu_db = 9.0;
    double in_car_sigma_db = 5.0;
};

/// O2I building penetration (material composite + 0.5 dB/m indoor-depth loss +
/// lognormal variation) or in-car loss.
double o2i_and_car_loss_db(PenetrationModel model, double fc_ghz, double indoor_depth_m,
                           RandomStream& rng, const PenetrationOptions& opt = {});

/// Builds links between every sector of the nearest site and each UT, assigning
/// the link state (indoor UTs are O2I; outdoor drawn against los_probability).
std::vector<Link> build_links(const Layout& layout, const std::vector<UT>& uts,
                              const ScenarioConfig& cfg, RandomStream& rng);

} // namespace gscm
