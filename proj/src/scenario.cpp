// SPDX-License-Identifier: Apache-2.0
#include "gscm/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace gscm {

void ScenarioConfig::validate() const
{
    if (fc_ghz < 0.5 || fc_ghz > 100.0)
        throw std::invalid_argument("fc must be in [0.5, 100] GHz");
    if (isd_m <= 0)
        throw std::invalid_argument("isd must be positive");
    if (indoor_ratio < 0 || indoor_ratio > 1)
        throw std::invalid_argument("indoor_ratio must be in [0,1]");
    if (min_2d_distance_m < 0)
        throw std::invalid_argument("min_2d_distance must be >= 0");
    if (k_sma_m <= 0)
        throw std::invalid_argument("k_sma must be positive");
    if (scenario == Scenario::InH && indoor_ratio > 0)
        throw std::invalid_argument("InH has no O2I state; indoor_ratio must be 0");
    if (scenario == Scenario::RMa && indoor_ratio > 0)
        throw std::invalid_argument("RMa tables ship no O2I column; indoor_ratio must be 0");
}

ScenarioConfig ScenarioConfig::sma_defaults()
{
    ScenarioConfig cfg;
    cfg.scenario = Scenario::SMa;
    cfg.isd_m = 1500.0;
    cfg.bs_height_m = 35.0;
    cfg.downtilt_deg = 93.0;
    cfg.min_2d_distance_m = 35.0;
    cfg.indoor_ratio = 0.8;
    cfg.outdoor_in_car = true;
    return cfg;
}

ScenarioConfig ScenarioConfig::defaults_for(Scenario s)
{
    ScenarioConfig cfg;
    cfg.scenario = s;
    switch (s) {
    case Scenario::UMi:
        cfg.isd_m = 200.0;
        cfg.bs_height_m = 10.0;
        cfg.min_2d_distance_m = 10.0;
        break;
    case Scenario::UMa:
        cfg.isd_m = 500.0;
        cfg.bs_height_m = 25.0;
        cfg.min_2d_distance_m = 35.0;
        break;
    case Scenario::SMa:
        return sma_defaults();
    case Scenario::RMa:
        cfg.isd_m = 1732.0;
        cfg.bs_height_m = 35.0;
        cfg.min_2d_distance_m = 35.0;
        // the shipped tables carry no RMa O2I column; rural UTs are outdoor
        // in cars instead
        cfg.indoor_ratio = 0.0;
        cfg.outdoor_in_car = true;
        break;
    case Scenario::InH:
        cfg.isd_m = 20.0;
        cfg.bs_height_m = 3.0;
        cfg.downtilt_deg = 110.0;
        cfg.min_2d_distance_m = 0.0;
        cfg.indoor_ratio = 0.0; // no O2I state indoors
        cfg.outdoor_ut_height_m = 1.0;
        break;
    }
    return cfg;
}

Layout generate_layout(const ScenarioConfig& cfg)
{
    cfg.validate();
    Layout layout;

    // Hexagonal lattice basis vectors.
    const Vec3 a1{cfg.isd_m, 0, 0};
    const Vec3 a2{cfg.isd_m * 0.5, cfg.isd_m * std::sqrt(3.0) / 2.0, 0};
    std::vector<std::pair<int, int>> cells = {{0, 0}};
    if (!cfg.single_site) {
        for (int i = -2; i <= 2; ++i)
            for (int j = -2; j <= 2; ++j) {
                const int ring = std::max({std::abs(i), std::abs(j), std::abs(i + j)});
                if (ring == 1 || ring == 2)
                    cells.emplace_back(i, j);
            }
    }
    if (!cfg.single_site && cells.size() != 19)
        throw std::logic_error("hex grid construction produced wrong site count");

    int sector_id = 0;
    for (int site = 0; site < static_cast<int>(cells.size()); ++site) {
        const auto [i, j] = cells[site];
        const Vec3 pos = a1 * static_cast<double>(i) + a2 * static_cast<double>(j) +
                         Vec3{0, 0, cfg.bs_height_m};
        layout.site_positions.push_back(pos);
        for (const double bearing_deg : {30.0, 150.0, 270.0}) {
            Sector s;
            s.site_id = site;
            s.sector_id = sector_id++;
            s.position = pos;
            // Downtilt measured from zenith; beta = downtilt - 90 tilts below horizon.
            s.orientation =
                Orientation(deg2rad(bearing_deg), deg2rad(cfg.downtilt_deg - 90.0), 0.0);
            layout.sectors.push_back(s);
        }
    }
    return layout;
}

std::vector<UT> drop_uts(const Layout& layout, const ScenarioConfig& cfg, int n_uts,
                         RandomStream& rng)
{
    cfg.validate();
    if (n_uts < 0)
        throw std::invalid_argument("n_uts must be >= 0");

    double extent = 0;
    for (const auto& p : layout.site_positions)
        extent = std::max(extent, std::hypot(p.x, p.y));
    const double radius = extent + cfg.isd_m / 2.0;
    if (radius <= cfg.min_2d_distance_m)
        throw std::runtime_error("feasible drop region is empty (min 2D distance >= coverage)");

    std::vector<UT> uts;
    uts.reserve(n_uts);
    for (int id = 0; id < n_uts; ++id) {
        Vec3 pos;
        bool ok = false;
        for (int attempt = 0; attempt < 1000; ++attempt) {
            const double r = radius * std::sqrt(rng.uniform());
            const double ang = rng.uniform(-kPi, kPi);
            pos = {r * std::cos(ang), r * std::sin(ang), 0};
            ok = true;
            for (const auto& sp : layout.site_positions)
                if (std::hypot(pos.x - sp.x, pos.y - sp.y) < cfg.min_2d_distance_m) {
                    ok = false;
                    break;
                }
            if (ok)
                break;
        }
        if (!ok)
            throw std::runtime_error("feasible drop region is empty");

        UT ut;
        ut.id = id;
        ut.indoor = rng.uniform() < cfg.indoor_ratio;
        if (ut.indoor) {
            ut.building =
                rng.uniform() < 0.9 ? BuildingType::Residential : BuildingType::Commercial;
            const int floors = ut.building == BuildingType::Residential ? 2 : 5;
            const int floor = rng.uniform_int(0, floors - 1);
            pos.z = 1.5 + 3.0 * floor;
            ut.indoor_depth_m = rng.uniform(0.0, 25.0);
            ut.speed_mps = 3.0 / 3.6;
        } else {
            pos.z = cfg.outdoor_ut_height_m;
            ut.in_car = cfg.outdoor_in_car;
            ut.speed_mps = (cfg.scenario == Scenario::InH ? 3.0 : 40.0) / 3.6;
        }
        ut.position = pos;
        ut.orientation = Orientation(rng.uniform(-kPi, kPi), 0.0, 0.0);
        uts.push_back(ut);
    }
    return uts;
}

double los_probability(Scenario s, double d2d_m, double k_sma_m)
{
    if (d2d_m < 0)
        throw std::invalid_argument("los_probability: negative distance");
    switch (s) {
    case Scenario::SMa:
        return std::exp(-d2d_m / k_sma_m);
    case Scenario::UMi: {
        if (d2d_m <= 18)
            return 1.0;
        return 18 / d2d_m + std::exp(-d2d_m / 36) * (1 - 18 / d2d_m);
    }
    case Scenario::UMa: {
        if (d2d_m <= 18)
            return 1.0;
        return 18 / d2d_m + std::exp(-d2d_m / 63) * (1 - 18 / d2d_m);
    }
    case Scenario::RMa:
        if (d2d_m <= 10)
            return 1.0;
        return std::exp(-(d2d_m - 10) / 1000);
    case Scenario::InH:
        if (d2d_m <= 1.2)
            return 1.0;
        if (d2d_m < 6.5)
            return std::exp(-(d2d_m - 1.2) / 4.7);
        return std::exp(-(d2d_m - 6.5) / 32.6) * 0.32;
    }
    return 0;
}

double friis_fspl_db(double fc_ghz, double d_m)
{
    return 32.45 + 20 * std::log10(fc_ghz) + 20 * std::log10(d_m);
}

double path_loss_db(const ParameterTables& tables, Scenario s, LinkState st, double d3d_m,
                    double fc_ghz, double h_bs_m, double h_ut_m)
{
    if (d3d_m < 1.0)
        throw std::invalid_argument("path_loss: d3d must be >= 1 m");
    const PathLossCoeffs& pc = tables.pathloss(s, st);
    if (fc_ghz < pc.fc_min || fc_ghz > pc.fc_max)
        throw std::invalid_argument("path_loss: fc=" + std::to_string(fc_ghz) +
                                    " GHz outside validity [" + std::to_string(pc.fc_min) + ", " +
                                    std::to_string(pc.fc_max) + "] for " + to_string(s));
    if (d3d_m < 10.0) {
        static bool warned = false;
        if (!warned) {
            std::cerr << "gscm: path_loss clamping d3d < 10 m to 10 m\n";
            warned = true;
        }
        d3d_m = 10.0;
    }

    const auto eval = [&](const PathLossCoeffs& p) {
        return p.c + p.log_d * std::log10(d3d_m) + p.log_fc * std::log10(fc_ghz) +
               p.log_hbs * std::log10(h_bs_m) +
               p.log_hbs_log_d * std::log10(h_bs_m) * std::log10(d3d_m) +
               p.hut_lin * (h_ut_m - 1.5);
    };

    const double pl_los = eval(tables.pathloss(s, LinkState::LOS));
    if (st == LinkState::LOS)
        return pl_los;
    return std::max(pl_los, eval(pc));
}

double o2i_and_car_loss_db(PenetrationModel model, double fc_ghz, double indoor_depth_m,
                           RandomStream& rng, const PenetrationOptions& opt)
{
    if (indoor_depth_m < 0)
        throw std::invalid_argument("o2i loss: negative indoor depth");

    if (model == PenetrationModel::InCar) {
        const double sigma = opt.variation_enabled ? opt.in_car_sigma_db : 0.0;
        return rng.normal(opt.in_car_mu_db, sigma);
    }

    const double l_glass = 2.0 + 0.2 * fc_ghz;
    const double l_irr_glass = 23.0 + 0.3 * fc_ghz;
    const double l_concrete = 5.0 + 4.0 * fc_ghz;
    const double l_plywood = opt.plywood_a_db + opt.plywood_b_db_per_ghz * fc_ghz;

    double l_a = l_glass, l_b = l_concrete, sigma = 4.4;
    switch (model) {
    case PenetrationModel::SMaLowLoss:
        l_b = l_plywood; // plywood/glass composite for suburban residential walls
        break;
    case PenetrationModel::LegacyLow:
        break;
    case PenetrationModel::LegacyHigh:
        l_a = l_irr_glass;
        sigma = 6.5;
        break;
    default:
        break;
    }
    const double material =
        5.0 - 10.0 * std::log10(0.3 * std::pow(10.0, -l_a / 10) + 0.7 * std::pow(10.0, -l_b / 10));
    const double depth = 0.5 * indoor_depth_m;
    const double variation = opt.variation_enabled ? rng.normal(0.0, sigma) : 0.0;
    return material + depth + variation;
}

std::vector<Link> build_links(const Layout& layout, const std::vector<UT>& uts,
                              const ScenarioConfig& cfg, RandomStream& rng)
{
    std::vector<Link> links;
    links.reserve(uts.size());
    for (const auto& ut : uts) {
        int best = 0;
        double best_d = std::numeric_limits<double>::max();
        for (int i = 0; i < static_cast<int>(layout.site_positions.size()); ++i) {
            const auto& sp = layout.site_positions[i];
            const double d = std::hypot(ut.position.x - sp.x, ut.position.y - sp.y);
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        Link link;
        link.bs_id = best;
        link.sector_id = best * 3; // first sector of the serving site
        link.ut_id = ut.id;
        link.d2d = best_d;
        const auto& sp = layout.site_positions[best];
        link.d3d = std::sqrt(best_d * best_d +
                             (sp.z - ut.position.z) * (sp.z - ut.position.z));
        if (ut.indoor) {
            link.state = LinkState::O2I;
            link.indoor_depth_m = ut.indoor_depth_m;
        } else {
            const double p = los_probability(cfg.scenario, link.d2d, cfg.k_sma_m);
            link.state = rng.uniform() < p ? LinkState::LOS : LinkState::NLOS;
            link.in_car = ut.in_car;
        }
        links.push_back(link);
    }
    return links;
}

} // namespace gscm
