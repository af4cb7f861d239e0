// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gscm/antenna.hpp"
#include "gscm/coeffgen.hpp"
#include "gscm/scenario.hpp"
#include "gscm/sns.hpp"
#include "gscm/tables.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace gscm {

struct FeatureFlags
{
    bool nearfield = false;
    SnsMode sns = SnsMode::Off;
    bool pol_variability = false;
    bool imbalance = false;
    bool grip = false;
    bool variable_clusters = false;
    bool variable_rays = false;
};

struct RunConfig
{
    ScenarioConfig scenario;
    FeatureFlags features;
    int n_drops = 1;
    int n_uts = 1;
    std::uint64_t master_seed = 1;
    std::string out_dir = "out";
    std::string data_dir; // empty = compiled-in default

    PanelConfig bs_panel;
    DeviceKind device = DeviceKind::Handheld;
    std::vector<int> selected_locations; // empty = all candidates
    TimeGrid time;
    double bandwidth_hz = 100e6; // for the variable-ray-count trigger
    double sns_visibility_prob = 0.7;
    StochasticSnsConfig sns_config;

    bool assemble = true;      // false: LSP/cluster statistics only (fast stats runs)
    bool write_tensors = true; // tensor dumps in the output bundle
    int threads = 0;           // 0 = library default

    void validate() const;
    static RunConfig from_json_file(const std::string& path);
    static RunConfig from_json_text(const std::string& text);
    std::string to_json() const;
};

/// One realized link, as recorded in the bundle's summary CSV.
struct LinkRecord
{
    int drop = 0, ut = 0, sector = 0;
    LinkState state = LinkState::NLOS;
    double d2d = 0, d3d = 0;
    double pl_db = 0;
    bool indoor = false;
    int building = 0; // 0 none, 1 residential, 2 commercial
    double h_ut = 1.5;
    double ut_x = 0, ut_y = 0;
    // Log-domain LSP realizations (lg = log10).
    double lg_ds = 0, lg_asd = 0, lg_asa = 0, lg_zsd = 0, lg_zsa = 0;
    double sf_db = 0, k_db = 0;
    int n_clusters = 0, m_rays = 0;
    double realized_ds_s = 0; // rms delay spread of the generated clusters
    double first_delay_s = 0;
    double lg_dtau = 0; // log10 NLOS excess delay; 0 for LOS
    int grip = 0;       // GripScenario as int
    double pol_tt_db_std = 0; // std of 20 log10 |m_tt| over this link's rays
};

struct RunResult
{
    std::vector<LinkRecord> records;
    std::string manifest_json;
};

/// Full pipeline for one configuration: layout, drops, links, LSPs, clusters,
/// optional coefficient tensors. Writes summary.csv, manifest.json and (when
/// enabled) one tensor file per link into cfg.out_dir; returns the records.
RunResult run_simulation(const RunConfig& cfg);

/// Reads a bundle's summary.csv back into records.
std::vector<LinkRecord> read_summary(const std::string& path);
void write_summary(const std::string& path, const std::vector<LinkRecord>& records);

struct Moments
{
    std::size_t n = 0;
    double mean = 0, stddev = 0;
};

Moments moments_of(const std::vector<double>& xs);

/// Named empirical sample sets per (scenario-independent) statistic, grouped by
/// link state where that matters, e.g. "NLOS.lg_ds", "O2I.n_clusters",
/// "grip_fraction.FreeSpace".
std::map<std::string, std::vector<double>> empirical_stats(const std::vector<LinkRecord>& records);

/// One-sample Kolmogorov-Smirnov statistic against a CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
/// Asymptotic KS p-value for statistic d with n samples.
double ks_pvalue(double d, std::size_t n);

struct StatCheck
{
    std::string name;
    std::string kind; // mean | std | median | fraction | support | ks
    double target = 0, empirical = 0, tolerance = 0;
    bool pass = false;
};

struct ValidationReport
{
    std::vector<StatCheck> checks;

    bool all_pass() const;
    std::string table() const; // human-readable
    std::string json() const;  // structured
};

struct ValidationTolerances
{
    double lsp_mean = 0.01;   // log-domain
    double lsp_std = 0.01;
    double toa_median_rel = 0.05;
    double fraction = 0.01;
    double ks_alpha = 0.01;
};

/// Checks realized statistics against the same distribution objects the
/// generator consumed. Every enabled feature contributes at least one check.
ValidationReport validate(const RunConfig& cfg, const std::vector<LinkRecord>& records,
                          const ParameterTables& tables,
                          const ValidationTolerances& tol = {});

} // namespace gscm
