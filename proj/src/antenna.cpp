// SPDX-License-Identifier: Apache-2.0
#include "gscm/antenna.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gscm {

namespace {

// UT reference element: main-lobe cutoff and back-lobe floor. The floor is
// fixed at -15 dBi and the cutoff solved so the pattern integrates to unit
// average gain over the sphere.
constexpr double kUtPeakDbi = 5.3;
constexpr double kUtHpbwDeg = 125.0;
constexpr double kUtCutoffDeg = 96.02854718254;
constexpr double kUtFloorDbi = -15.0;

constexpr double kBsPeakDbi = 8.0;
constexpr double kBsHpbwDeg = 65.0;
constexpr double kBsFrontBackDb = 30.0;

} // namespace

std::string to_string(DeviceKind k)
{
    return k == DeviceKind::Handheld ? "Handheld" : "CPE";
}

std::string to_string(GripScenario g)
{
    switch (g) {
    case GripScenario::FreeSpace: return "FreeSpace";
    case GripScenario::OneHand: return "OneHand";
    case GripScenario::DualHand: return "DualHand";
    case GripScenario::HeadAndHand: return "HeadAndHand";
    }
    return "?";
}

DeviceModel DeviceModel::make(DeviceKind kind, const ParameterTables& tables,
                              std::vector<int> selected)
{
    DeviceModel d;
    d.kind = kind;
    if (kind == DeviceKind::Handheld) {
        d.width_m = 0.15;
        d.height_m = 0.07;
    } else {
        d.width_m = 0.20;
        d.height_m = 0.20;
    }
    d.candidates = tables.device_locations(to_string(kind));
    const int expected = kind == DeviceKind::Handheld ? 8 : 9;
    if (static_cast<int>(d.candidates.size()) != expected)
        throw std::runtime_error("device_locations: expected " + std::to_string(expected) +
                                 " candidates for " + to_string(kind));
    if (selected.empty()) {
        for (int i = 0; i < expected; ++i)
            selected.push_back(i);
    }
    for (int i : selected)
        if (i < 0 || i >= expected)
            throw std::invalid_argument("selected location " + std::to_string(i) +
                                        " outside candidate set");
    d.selected = std::move(selected);
    return d;
}

double ut_reference_gain_dbi(double psi_rad)
{
    const double psi_deg = rad2deg(std::abs(psi_rad));
    if (psi_deg > kUtCutoffDeg)
        return kUtFloorDbi;
    const double r = psi_deg / kUtHpbwDeg;
    return kUtPeakDbi - 12.0 * r * r;
}

FieldPattern ut_reference_pattern(const Direction& d_local)
{
    const Vec3 u = spherical_unit_vector(d_local);
    const double psi = std::acos(std::clamp(u.x, -1.0, 1.0)); // angle off boresight +x
    FieldPattern f;
    f.f_theta = std::pow(10.0, ut_reference_gain_dbi(psi) / 20.0);
    f.f_phi = 0.0;
    return f;
}

std::vector<UtAntenna> place_ut_antennas(const DeviceModel& device)
{
    if (device.selected.empty())
        throw std::invalid_argument("place_ut_antennas: no locations selected");
    std::vector<UtAntenna> out;
    out.reserve(device.selected.size());
    for (int idx : device.selected) {
        const auto& loc = device.candidates.at(idx);
        UtAntenna a;
        a.location = loc.index;
        a.position = {loc.x, loc.y, 0.0};
        // Boresight from device center to the location; the center location
        // (CPE) radiates along the device normal instead.
        const Vec3 b = loc.edge == "center" ? Vec3{0, 0, 1} : a.position;
        a.orientation = orientation_toward(b);
        out.push_back(a);
    }
    return out;
}

std::vector<double> draw_port_imbalance(int n_ports, bool enabled, RandomStream& rng,
                                        double db_min, double db_max)
{
    if (n_ports < 0)
        throw std::invalid_argument("draw_port_imbalance: negative port count");
    if (db_min > db_max)
        throw std::invalid_argument("draw_port_imbalance: empty range");
    std::vector<double> out(n_ports, 0.0);
    if (enabled && db_max > db_min)
        for (auto& v : out)
            v = rng.uniform(db_min, db_max);
    return out;
}

GripState draw_grip_and_attenuation(const GripProbTable& probs, const ParameterTables& tables,
                                    int n_locations, double fc_ghz, RandomStream& rng)
{
    const double total =
        probs.free_space + probs.one_hand + probs.dual_hand + probs.head_and_hand;
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("grip probabilities must sum to 1");
    const double u = rng.uniform();
    GripState g;
    if (u < probs.free_space)
        g.scenario = GripScenario::FreeSpace;
    else if (u < probs.free_space + probs.one_hand)
        g.scenario = GripScenario::OneHand;
    else if (u < probs.free_space + probs.one_hand + probs.dual_hand)
        g.scenario = GripScenario::DualHand;
    else
        g.scenario = GripScenario::HeadAndHand;

    g.attenuation_db.assign(n_locations, 0.0);
    if (g.scenario != GripScenario::FreeSpace)
        for (int i = 0; i < n_locations; ++i)
            g.attenuation_db[i] = tables.grip_attenuation_db(to_string(g.scenario), i, fc_ghz);
    return g;
}

double bs_element_gain_dbi(const Direction& d_local)
{
    // TR 38.901 Table 7.3-1 style element, boresight remapped to local +x.
    const double theta_deg = rad2deg(d_local.theta);
    const double phi_deg = rad2deg(d_local.phi);
    const double av =
        std::min(12.0 * std::pow((theta_deg - 90.0) / kBsHpbwDeg, 2), kBsFrontBackDb);
    const double ah = std::min(12.0 * std::pow(phi_deg / kBsHpbwDeg, 2), kBsFrontBackDb);
    return kBsPeakDbi - std::min(av + ah, kBsFrontBackDb);
}

FieldPattern bs_element_pattern(const Direction& d_local, double slant_deg)
{
    const double amp = std::pow(10.0, bs_element_gain_dbi(d_local) / 20.0);
    const double z = deg2rad(slant_deg);
    return {amp * std::cos(z), amp * std::sin(z)};
}

std::vector<Vec3> bs_panel_positions(const PanelConfig& cfg, double fc_ghz)
{
    if (cfg.rows < 1 || cfg.cols < 1)
        throw std::invalid_argument("bs_panel_positions: rows/cols must be >= 1");
    if (cfg.dv_lambda <= 0 || cfg.dh_lambda <= 0)
        throw std::invalid_argument("bs_panel_positions: spacing must be positive");
    const double lambda = kSpeedOfLight / (fc_ghz * 1e9);
    const double dv = cfg.dv_lambda * lambda;
    const double dh = cfg.dh_lambda * lambda;
    std::vector<Vec3> out;
    out.reserve(static_cast<size_t>(cfg.rows) * cfg.cols);
    const double y0 = -0.5 * (cfg.cols - 1) * dh;
    const double z0 = -0.5 * (cfg.rows - 1) * dv;
    for (int r = 0; r < cfg.rows; ++r)
        for (int c = 0; c < cfg.cols; ++c)
            out.push_back({0.0, y0 + c * dh, z0 + r * dv});
    return out;
}

} // namespace gscm
