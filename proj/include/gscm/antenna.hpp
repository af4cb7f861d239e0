// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gscm/geometry.hpp"
#include "gscm/rng.hpp"
#include "gscm/tables.hpp"

#include <string>
#include <vector>

namespace gscm {

enum class DeviceKind { Handheld, CPE };
enum class GripScenario { FreeSpace, OneHand, DualHand, HeadAndHand };

std::string to_string(DeviceKind k);
std::string to_string(GripScenario g);

/// Real-valued (f_theta, f_phi) field amplitudes in some frame.
struct FieldPattern
{
    double f_theta = 0;
    double f_phi = 0;

    double power() const { return f_theta * f_theta + f_phi * f_phi; }
};

/// UT device with its fixed candidate antenna locations. Coordinates are in the
/// device frame: the device lies in the local x-y plane, x along the long edge.
/// Element positions are physical (meters), independent of carrier frequency.
struct DeviceModel
{
    DeviceKind kind = DeviceKind::Handheld;
    double width_m = 0.15, height_m = 0.07;
    std::vector<DeviceLocation> candidates;
    std::vector<int> selected; // indices into candidates
    Orientation orientation;   // device frame -> global

    static DeviceModel make(DeviceKind kind, const ParameterTables& tables,
                            std::vector<int> selected = {});
};

/// One placed UT antenna, in device-frame coordinates.
struct UtAntenna
{
    int location = 0;
    Vec3 position;           // m, device frame
    Orientation orientation; // element frame -> device frame, boresight = local +x
};

/// Directional gain (dBi) of the UT reference element at angle psi off
/// boresight: parabolic main lobe 5.3 - 12 (psi/125 deg)^2 out to the cutoff,
/// then a constant back-lobe floor tuned so total radiated power integrates
/// to 1 (isotropic average).
double ut_reference_gain_dbi(double psi_rad);

/// Field pattern of the UT reference element in its local frame. Boresight is
/// the local +x axis; all gain is carried by the theta component.
FieldPattern ut_reference_pattern(const Direction& d_local);

/// Each selected candidate gets boresight along the unit vector from the device
/// center to its location (center location: device normal +z).
std::vector<UtAntenna> place_ut_antennas(const DeviceModel& device);

/// Per-port amplitude imbalance in dB. Disabled: all zeros. Enabled: i.i.d.
/// uniform over [db_min, db_max].
std::vector<double> draw_port_imbalance(int n_ports, bool enabled, RandomStream& rng,
                                        double db_min = -2.0, double db_max = 3.0);

struct GripProbTable
{
    double free_space = 0.10;
    double one_hand = 0.45;
    double dual_hand = 0.27;
    double head_and_hand = 0.18;
};

struct GripState
{
    GripScenario scenario = GripScenario::FreeSpace;
    std::vector<double> attenuation_db; // indexed by candidate location
};

/// Samples a grip scenario and looks up the per-location attenuations for the
/// carrier band. Probabilities must sum to 1 within 1e-9.
GripState draw_grip_and_attenuation(const GripProbTable& probs, const ParameterTables& tables,
                                    int n_locations, double fc_ghz, RandomStream& rng);

/// Canonical sectored BS element: 65 deg HPBW in both cuts, 8 dBi peak, 30 dB
/// front-to-back limit. Boresight is the local +x axis.
double bs_element_gain_dbi(const Direction& d_local);
FieldPattern bs_element_pattern(const Direction& d_local, double slant_deg = 0.0);

/// Uniform rectangular BS panel, rows stacked in z and columns in y of the
/// sector frame (broadside +x). Spacings are in wavelengths at fc.
struct PanelConfig
{
    int rows = 4;        // M, vertical
    int cols = 4;        // N, horizontal
    double dv_lambda = 0.5;
    double dh_lambda = 0.5;
    double slant_deg = 0.0;
};

/// Element positions in the sector frame (m), row-major (row*cols + col),
/// centered on the panel origin.
std::vector<Vec3> bs_panel_positions(const PanelConfig& cfg, double fc_ghz);

} // namespace gscm
