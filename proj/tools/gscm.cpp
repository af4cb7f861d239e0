// SPDX-License-Identifier: Apache-2.0
#include "gscm/harness.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace gscm;
namespace fs = std::filesystem;

struct CommonFlags
{
    std::string config_path;
    std::string scenario;
    double fc = -1;
    int drops = -1;
    int uts = -1;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out;
    bool nf = false;
    std::string sns;
    bool pol_var = false;
    bool grip = false;
    bool imbalance = false;
    bool variable_clusters = false;
    bool variable_rays = false;
};

void add_common(CLI::App* app, CommonFlags& f)
{
    app->add_option("--config", f.config_path, "JSON run configuration");
    app->add_option("--scenario", f.scenario, "Scenario: UMi|UMa|SMa|RMa|InH");
    app->add_option("--fc", f.fc, "Carrier frequency, GHz");
    app->add_option("--drops", f.drops, "Number of drops");
    app->add_option("--uts", f.uts, "UTs per drop");
    app->add_option("--seed", f.seed, "Master seed")->each([&](const std::string&) {
        f.seed_set = true;
    });
    app->add_option("--out", f.out, "Output bundle directory");
    app->add_flag("--nf", f.nf, "Enable near-field synthesis");
    app->add_option("--sns", f.sns, "SNS mode: off|physical|stochastic");
    app->add_flag("--pol-var", f.pol_var, "Enable polarization power variability");
    app->add_flag("--grip", f.grip, "Enable UT grip blockage");
    app->add_flag("--imbalance", f.imbalance, "Enable UT port imbalance");
    app->add_flag("--variable-clusters", f.variable_clusters, "Draw cluster counts from intervals");
    app->add_flag("--variable-rays", f.variable_rays, "Frequency-dependent ray counts");
}

RunConfig build_config(const CommonFlags& f)
{
    RunConfig cfg;
    if (!f.config_path.empty())
        cfg = RunConfig::from_json_file(f.config_path);
    if (!f.scenario.empty())
        cfg.scenario = ScenarioConfig::defaults_for(scenario_from_string(f.scenario));
    if (f.fc > 0)
        cfg.scenario.fc_ghz = f.fc;
    if (f.drops > 0)
        cfg.n_drops = f.drops;
    if (f.uts > 0)
        cfg.n_uts = f.uts;
    if (f.seed_set)
        cfg.master_seed = f.seed;
    if (!f.out.empty())
        cfg.out_dir = f.out;
    if (f.nf)
        cfg.features.nearfield = true;
    if (!f.sns.empty()) {
        if (f.sns == "off")
            cfg.features.sns = SnsMode::Off;
        else if (f.sns == "physical")
            cfg.features.sns = SnsMode::Physical;
        else if (f.sns == "stochastic")
            cfg.features.sns = SnsMode::Stochastic;
        else
            throw CLI::ValidationError("--sns must be off|physical|stochastic");
    }
    if (f.pol_var)
        cfg.features.pol_variability = true;
    if (f.grip)
        cfg.features.grip = true;
    if (f.imbalance)
        cfg.features.imbalance = true;
    if (f.variable_clusters)
        cfg.features.variable_clusters = true;
    if (f.variable_rays)
        cfg.features.variable_rays = true;
    return cfg;
}

int cmd_run(const CommonFlags& f)
{
    RunConfig cfg = build_config(f);
    const RunResult res = run_simulation(cfg);
    std::cout << "wrote " << res.records.size() << " link records to " << cfg.out_dir << "\n";
    return 0;
}

int cmd_stats(const CommonFlags& f, const std::string& bundle)
{
    std::vector<LinkRecord> records;
    if (!bundle.empty()) {
        records = read_summary((fs::path(bundle) / "summary.csv").string());
    } else {
        RunConfig cfg = build_config(f);
        cfg.assemble = false;
        cfg.write_tensors = false;
        records = run_simulation(cfg).records;
    }
    const auto stats = empirical_stats(records);
    std::cout << "statistic                      n        mean         std\n";
    for (const auto& [name, xs] : stats) {
        const Moments m = moments_of(xs);
        std::cout.setf(std::ios::left);
        std::cout.width(30);
        std::cout << name;
        std::cout.unsetf(std::ios::left);
        std::cout.width(8);
        std::cout << m.n;
        std::cout.precision(6);
        std::cout.width(13);
        std::cout << m.mean;
        std::cout.width(12);
        std::cout << m.stddev << "\n";
    }
    return 0;
}

int cmd_validate(const CommonFlags& f, const std::string& bundle, const std::string& report_path)
{
    RunConfig cfg;
    std::vector<LinkRecord> records;
    if (!bundle.empty()) {
        std::ifstream mf(fs::path(bundle) / "manifest.json");
        if (!mf)
            throw std::runtime_error("bundle has no manifest.json: " + bundle);
        std::stringstream ss;
        ss << mf.rdbuf();
        const auto manifest = nlohmann::json::parse(ss.str());
        cfg = RunConfig::from_json_text(manifest.at("config").dump());
        records = read_summary((fs::path(bundle) / "summary.csv").string());
    } else {
        cfg = build_config(f);
        cfg.assemble = false;
        cfg.write_tensors = false;
        records = run_simulation(cfg).records;
    }
    const ParameterTables tables =
        cfg.data_dir.empty() ? ParameterTables::load_default() : ParameterTables::load(cfg.data_dir);
    const ValidationReport rep = validate(cfg, records, tables);
    std::cout << rep.table();
    if (!report_path.empty()) {
        std::ofstream os(report_path);
        os << rep.json() << "\n";
    }
    std::cout << (rep.all_pass() ? "VALIDATION PASS" : "VALIDATION FAIL") << "\n";
    return rep.all_pass() ? 0 : 1;
}

int cmd_tables(const std::string& data_dir)
{
    const ParameterTables tables =
        data_dir.empty() ? ParameterTables::load_default() : ParameterTables::load(data_dir);
    std::cout << tables.dump();
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Geometry-based stochastic channel model simulator (TR 38.901 family)"};
    app.require_subcommand(1);

    CommonFlags run_flags, stats_flags, val_flags;
    std::string stats_bundle, val_bundle, report_path, tables_dir;

    CLI::App* run = app.add_subcommand("run", "Generate a channel bundle");
    add_common(run, run_flags);

    CLI::App* stats = app.add_subcommand("stats", "Empirical statistics of a bundle or fresh run");
    add_common(stats, stats_flags);
    stats->add_option("--bundle", stats_bundle, "Existing bundle directory");

    CLI::App* val = app.add_subcommand("validate", "Self-validation against configured targets");
    add_common(val, val_flags);
    val->add_option("--bundle", val_bundle, "Existing bundle directory");
    val->add_option("--report", report_path, "Write JSON report here");

    CLI::App* tab = app.add_subcommand("tables", "Dump active parameter tables with provenance");
    tab->add_option("--data-dir", tables_dir, "Table directory (default: built-in)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(run_flags);
        if (stats->parsed())
            return cmd_stats(stats_flags, stats_bundle);
        if (val->parsed())
            return cmd_validate(val_flags, val_bundle, report_path);
        if (tab->parsed())
            return cmd_tables(tables_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
