// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gscm {

enum class Scenario { UMi, UMa, SMa, RMa, InH };
enum class LinkState { LOS, NLOS, O2I };

std::string to_string(Scenario s);
std::string to_string(LinkState s);
Scenario scenario_from_string(const std::string& s);
LinkState state_from_string(const std::string& s);

/// Large-scale parameters in the canonical cross-correlation order.
enum class LspParam { SF = 0, K = 1, DS = 2, ASD = 3, ASA = 4, ZSD = 5, ZSA = 6 };
inline constexpr int kNumLsp = 7;
std::string to_string(LspParam p);

/// One parameter's log-domain distribution, expressed as affine terms in
/// log10(fc), log10(1+fc), d2d and h_ut.
struct LspEntry
{
    double mu_c = 0, mu_lgfc = 0, mu_lg1pfc = 0, mu_d2d_km = 0, mu_hut = 0;
    std::optional<double> mu_floor;
    double sigma_c = 0, sigma_lgfc = 0, sigma_lg1pfc = 0;
    double corr_dist = 0; // m, horizontal decorrelation distance
    std::string provenance;

    double mu(double fc_ghz, double d2d_m = 0, double h_ut_m = 1.5) const;
    double sigma(double fc_ghz) const;
};

/// Per-(scenario, state) distribution set: the seven log-domain marginals plus
/// their 7x7 cross-correlation matrix.
struct LspDistributions
{
    Scenario scenario;
    LinkState state;
    std::array<LspEntry, kNumLsp> params;
    std::array<std::array<double, kNumLsp>, kNumLsp> cross_corr; // unit diagonal, PSD
    std::string cross_corr_provenance;

    const LspEntry& entry(LspParam p) const { return params[static_cast<int>(p)]; }
};

/// Cluster/ray level parameters (TR 38.901 Table 7.5-6 style, shipped as data).
struct SmallScaleParams
{
    int n_clusters = 0;         // fixed legacy cluster count
    int d_min = 0, d_max = 0;   // variable-cluster interval
    double r_tau = 0;           // delay scaling factor (> 1)
    double zeta_db = 0;         // per-cluster shadowing std
    double xpr_mu_db = 0, xpr_sigma_db = 0;
    double c_asd_deg = 0, c_asa_deg = 0, c_zsa_deg = 0;
    std::string provenance;
};

struct ToaParams
{
    double mu_lg = 0;     // log10(dtau / 1s)
    double sigma_lg = 0;
    double corr_dist = 0; // m
    std::string provenance;
};

/// Path-loss coefficient row; PL(dB) = const + log_d*log10(d3d)
/// + log_fc*log10(fc) + log_hbs*log10(h_bs) + log_hbs_log_d*log10(h_bs)*log10(d3d)
/// + hut_lin*(h_ut - 1.5). NLOS is lower-bounded by the LOS value.
struct PathLossCoeffs
{
    double c = 0, log_d = 0, log_fc = 0, log_hbs = 0, log_hbs_log_d = 0, hut_lin = 0;
    double fc_min = 0.5, fc_max = 100.0;
    double d_min_2d = 1.0;
    std::string provenance;
};

struct RayCountRow
{
    Scenario scenario;
    double fc_min = 0, fc_max = 0;
    int m = 20;
};

struct DeviceLocation
{
    int index = 0;
    double x = 0, y = 0; // device-frame coordinates, m
    std::string edge;    // corner|top|bottom|left|right|center
};

/// All parameter tables, loaded from CSV files in a data directory.
class ParameterTables
{
  public:
    /// Loads all tables from `dir`; throws on missing files, malformed rows or
    /// non-PSD cross-correlation matrices.
    static ParameterTables load(const std::string& dir);
    /// Loads from the directory baked in at build time.
    static ParameterTables load_default();

    const LspDistributions& lsp(Scenario s, LinkState st) const;
    const SmallScaleParams& smallscale(Scenario s, LinkState st) const;
    const ToaParams& toa(Scenario s) const; // NLOS excess-delay stats
    const PathLossCoeffs& pathloss(Scenario s, LinkState st) const;
    /// Ray count for (scenario, fc); returns 20 when no row covers fc.
    int ray_count(Scenario s, double fc_ghz) const;
    const std::vector<DeviceLocation>& device_locations(const std::string& kind) const;
    /// Grip attenuation in dB for (grip, candidate location, fc); the fc band
    /// boundary between simulation- and measurement-derived columns is 8.4 GHz.
    double grip_attenuation_db(const std::string& grip, int location, double fc_ghz) const;

    /// Dumps every loaded table row as `table,scenario,state,param,term,value,provenance`.
    std::string dump() const;

  private:
    std::map<std::pair<Scenario, LinkState>, LspDistributions> lsp_;
    std::map<std::pair<Scenario, LinkState>, SmallScaleParams> smallscale_;
    std::map<Scenario, ToaParams> toa_;
    std::map<std::pair<Scenario, LinkState>, PathLossCoeffs> pathloss_;
    std::vector<RayCountRow> ray_counts_;
    std::map<std::string, std::vector<DeviceLocation>> device_locations_;
    // (grip, location) -> {low band dB, high band dB}
    std::map<std::pair<std::string, int>, std::pair<double, double>> grip_;
};

/// Parses a CSV file into rows of fields. Skips blank lines; no quoting support
/// (the shipped tables don't need it).
std::vector<std::vector<std::string>> read_csv(const std::string& path);

} // namespace gscm
