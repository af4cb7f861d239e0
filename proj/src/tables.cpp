// SPDX-License-Identifier: Apache-2.0
#include "gscm/tables.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef GSCM_DATA_DIR
#define GSCM_DATA_DIR "data"
#endif

namespace gscm {

std::string to_string(Scenario s)
{
    switch (s) {
    case Scenario::UMi: return "UMi";
    case Scenario::UMa: return "UMa";
    case Scenario::SMa: return "SMa";
    case Scenario::RMa: return "RMa";
    case Scenario::InH: return "InH";
    }
    return "?";
}

std::string to_string(LinkState s)
{
    switch (s) {
    case LinkState::LOS: return "LOS";
    case LinkState::NLOS: return "NLOS";
    case LinkState::O2I: return "O2I";
    }
    return "?";
}

Scenario scenario_from_string(const std::string& s)
{
    if (s == "UMi") return Scenario::UMi;
    if (s == "UMa") return Scenario::UMa;
    if (s == "SMa") return Scenario::SMa;
    if (s == "RMa") return Scenario::RMa;
    if (s == "InH") return Scenario::InH;
    throw std::invalid_argument("unknown scenario '" + s + "' (expected UMi|UMa|SMa|RMa|InH)");
}

LinkState state_from_string(const std::string& s)
{
    if (s == "LOS") return LinkState::LOS;
    if (s == "NLOS") return LinkState::NLOS;
    if (s == "O2I") return LinkState::O2I;
    throw std::invalid_argument("unknown link state '" + s + "' (expected LOS|NLOS|O2I)");
}

std::string to_string(LspParam p)
{
    static const char* names[] = {"SF", "K", "DS", "ASD", "ASA", "ZSD", "ZSA"};
    return names[static_cast<int>(p)];
}

namespace {

LspParam lsp_param_from_string(const std::string& s)
{
    static const char* names[] = {"SF", "K", "DS", "ASD", "ASA", "ZSD", "ZSA"};
    for (int i = 0; i < kNumLsp; ++i)
        if (s == names[i])
            return static_cast<LspParam>(i);
    throw std::invalid_argument("unknown LSP parameter '" + s + "'");
}

double to_double(const std::string& s)
{
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size())
        throw std::invalid_argument("malformed number '" + s + "'");
    return v;
}

} // namespace

double LspEntry::mu(double fc_ghz, double d2d_m, double h_ut_m) const
{
    double m = mu_c + mu_lgfc * std::log10(fc_ghz) + mu_lg1pfc * std::log10(1 + fc_ghz) +
               mu_d2d_km * (d2d_m / 1000.0) + mu_hut * (h_ut_m - 1.5);
    if (mu_floor)
        m = std::max(m, *mu_floor);
    return m;
}

double LspEntry::sigma(double fc_ghz) const
{
    const double s =
        sigma_c + sigma_lgfc * std::log10(fc_ghz) + sigma_lg1pfc * std::log10(1 + fc_ghz);
    if (s < 0)
        throw std::runtime_error("LSP sigma negative at fc=" + std::to_string(fc_ghz));
    return s;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open table file: " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ','))
            fields.push_back(f);
        rows.push_back(std::move(fields));
    }
    return rows;
}

ParameterTables ParameterTables::load_default()
{
    return load(GSCM_DATA_DIR);
}

ParameterTables ParameterTables::load(const std::string& dir)
{
    ParameterTables t;

    // --- lsp_tables.csv: scenario,state,param,term,value,provenance
    for (size_t i = 1; auto& r : read_csv(dir + "/lsp_tables.csv")) {
        if (r[0] == "scenario")
            continue;
        if (r.size() != 6)
            throw std::runtime_error("lsp_tables.csv: bad row " + std::to_string(i));
        const auto key = std::make_pair(scenario_from_string(r[0]), state_from_string(r[1]));
        auto& dist = t.lsp_[key];
        dist.scenario = key.first;
        dist.state = key.second;
        const std::string& term = r[3];
        const double v = to_double(r[4]);
        if (r[2] == "XC") {
            // term format xc_<A>_<B>
            const auto p1 = term.find('_'), p2 = term.rfind('_');
            const int a = static_cast<int>(lsp_param_from_string(term.substr(p1 + 1, p2 - p1 - 1)));
            const int b = static_cast<int>(lsp_param_from_string(term.substr(p2 + 1)));
            dist.cross_corr[a][b] = dist.cross_corr[b][a] = v;
            dist.cross_corr_provenance = r[5];
            continue;
        }
        auto& e = dist.params[static_cast<int>(lsp_param_from_string(r[2]))];
        e.provenance = r[5];
        if (term == "mu_c") e.mu_c = v;
        else if (term == "mu_lgfc") e.mu_lgfc = v;
        else if (term == "mu_lg1pfc") e.mu_lg1pfc = v;
        else if (term == "mu_d2d_km") e.mu_d2d_km = v;
        else if (term == "mu_hut") e.mu_hut = v;
        else if (term == "mu_floor") e.mu_floor = v;
        else if (term == "sigma_c") e.sigma_c = v;
        else if (term == "sigma_lgfc") e.sigma_lgfc = v;
        else if (term == "sigma_lg1pfc") e.sigma_lg1pfc = v;
        else if (term == "cd") e.corr_dist = v;
        else throw std::runtime_error("lsp_tables.csv: unknown term '" + term + "'");
        ++i;
    }
    for (auto& [key, dist] : t.lsp_) {
        for (int i = 0; i < kNumLsp; ++i)
            dist.cross_corr[i][i] = 1.0;
        Eigen::Matrix<double, 7, 7> m;
        for (int i = 0; i < kNumLsp; ++i)
            for (int j = 0; j < kNumLsp; ++j)
                m(i, j) = dist.cross_corr[i][j];
        const double min_eig = m.selfadjointView<Eigen::Lower>().eigenvalues().minCoeff();
        if (min_eig < -1e-9)
            throw std::runtime_error("cross-correlation matrix for " + to_string(key.first) +
                                     "/" + to_string(key.second) + " is not PSD (min eig " +
                                     std::to_string(min_eig) + ")");
    }

    // --- smallscale_tables.csv: scenario,state,term,value,provenance
    for (auto& r : read_csv(dir + "/smallscale_tables.csv")) {
        if (r[0] == "scenario")
            continue;
        auto& p = t.smallscale_[{scenario_from_string(r[0]), state_from_string(r[1])}];
        const double v = to_double(r[3]);
        const std::string& term = r[2];
        if (term == "n_clusters") p.n_clusters = static_cast<int>(v);
        else if (term == "d_min") p.d_min = static_cast<int>(v);
        else if (term == "d_max") p.d_max = static_cast<int>(v);
        else if (term == "r_tau") p.r_tau = v;
        else if (term == "zeta") p.zeta_db = v;
        else if (term == "xpr_mu") p.xpr_mu_db = v;
        else if (term == "xpr_sigma") p.xpr_sigma_db = v;
        else if (term == "c_asd") p.c_asd_deg = v;
        else if (term == "c_asa") p.c_asa_deg = v;
        else if (term == "c_zsa") p.c_zsa_deg = v;
        else throw std::runtime_error("smallscale_tables.csv: unknown term '" + term + "'");
        p.provenance = r[4];
    }

    // --- toa_tables.csv: scenario,state,term,value,provenance (NLOS rows)
    for (auto& r : read_csv(dir + "/toa_tables.csv")) {
        if (r[0] == "scenario")
            continue;
        auto& p = t.toa_[scenario_from_string(r[0])];
        const double v = to_double(r[3]);
        if (r[2] == "mu_lg") p.mu_lg = v;
        else if (r[2] == "sigma_lg") p.sigma_lg = v;
        else if (r[2] == "cd") p.corr_dist = v;
        else throw std::runtime_error("toa_tables.csv: unknown term '" + r[2] + "'");
        p.provenance = r[4];
    }

    // --- pathloss_tables.csv: scenario,state,term,value,provenance
    for (auto& r : read_csv(dir + "/pathloss_tables.csv")) {
        if (r[0] == "scenario")
            continue;
        auto& p = t.pathloss_[{scenario_from_string(r[0]), state_from_string(r[1])}];
        const double v = to_double(r[3]);
        const std::string& term = r[2];
        if (term == "const") p.c = v;
        else if (term == "log_d") p.log_d = v;
        else if (term == "log_fc") p.log_fc = v;
        else if (term == "log_hbs") p.log_hbs = v;
        else if (term == "log_hbs_log_d") p.log_hbs_log_d = v;
        else if (term == "hut_lin") p.hut_lin = v;
        else if (term == "fc_min") p.fc_min = v;
        else if (term == "fc_max") p.fc_max = v;
        else if (term == "d_min_2d") p.d_min_2d = v;
        else throw std::runtime_error("pathloss_tables.csv: unknown term '" + term + "'");
        p.provenance = r[4];
    }

    // --- ray_counts.csv: scenario,fc_min,fc_max,m,provenance
    for (auto& r : read_csv(dir + "/ray_counts.csv")) {
        if (r[0] == "scenario")
            continue;
        t.ray_counts_.push_back({scenario_from_string(r[0]), to_double(r[1]), to_double(r[2]),
                                 static_cast<int>(to_double(r[3]))});
    }

    // --- device_locations.csv: kind,index,x,y,edge
    for (auto& r : read_csv(dir + "/device_locations.csv")) {
        if (r[0] == "kind")
            continue;
        t.device_locations_[r[0]].push_back(
            {static_cast<int>(to_double(r[1])), to_double(r[2]), to_double(r[3]), r[4]});
    }
    if (t.device_locations_["Handheld"].size() != 8)
        throw std::runtime_error("device_locations.csv: Handheld must have 8 candidate locations");
    if (t.device_locations_["CPE"].size() != 9)
        throw std::runtime_error("device_locations.csv: CPE must have 9 candidate locations");

    // --- grip_attenuation.csv: grip,location,fc_band,atten_db,provenance
    for (auto& r : read_csv(dir + "/grip_attenuation.csv")) {
        if (r[0] == "grip")
            continue;
        auto& g = t.grip_[{r[0], static_cast<int>(to_double(r[1]))}];
        const double v = to_double(r[3]);
        if (v < 0)
            throw std::runtime_error("grip_attenuation.csv: negative attenuation");
        if (r[2] == "low") g.first = v;
        else if (r[2] == "high") g.second = v;
        else throw std::runtime_error("grip_attenuation.csv: unknown band '" + r[2] + "'");
    }

    return t;
}

namespace {

[[noreturn]] void unsupported(const std::string& what, Scenario s, LinkState st)
{
    throw std::invalid_argument("no " + what + " entry for " + to_string(s) + "/" +
                                to_string(st) +
                                " (supported pairs are listed by the `tables` subcommand)");
}

} // namespace

const LspDistributions& ParameterTables::lsp(Scenario s, LinkState st) const
{
    const auto it = lsp_.find({s, st});
    if (it == lsp_.end())
        unsupported("LSP", s, st);
    return it->second;
}

const SmallScaleParams& ParameterTables::smallscale(Scenario s, LinkState st) const
{
    const auto it = smallscale_.find({s, st});
    if (it == smallscale_.end())
        unsupported("small-scale", s, st);
    return it->second;
}

const ToaParams& ParameterTables::toa(Scenario s) const
{
    const auto it = toa_.find(s);
    if (it == toa_.end())
        throw std::invalid_argument("no absolute-ToA entry for " + to_string(s));
    return it->second;
}

const PathLossCoeffs& ParameterTables::pathloss(Scenario s, LinkState st) const
{
    // O2I links use the NLOS outdoor loss; penetration is added separately.
    const auto it = pathloss_.find({s, st == LinkState::O2I ? LinkState::NLOS : st});
    if (it == pathloss_.end())
        unsupported("path-loss", s, st);
    return it->second;
}

int ParameterTables::ray_count(Scenario s, double fc_ghz) const
{
    for (const auto& r : ray_counts_)
        if (r.scenario == s && fc_ghz >= r.fc_min && fc_ghz < r.fc_max)
            return r.m;
    return 20;
}

const std::vector<DeviceLocation>& ParameterTables::device_locations(const std::string& kind) const
{
    const auto it = device_locations_.find(kind);
    if (it == device_locations_.end())
        throw std::invalid_argument("unknown device kind '" + kind + "'");
    return it->second;
}

double ParameterTables::grip_attenuation_db(const std::string& grip, int location,
                                            double fc_ghz) const
{
    if (grip == "FreeSpace")
        return 0.0;
    const auto it = grip_.find({grip, location});
    if (it == grip_.end())
        throw std::invalid_argument("no grip attenuation for " + grip + "/location " +
                                    std::to_string(location));
    return fc_ghz < 8.4 ? it->second.first : it->second.second;
}

std::string ParameterTables::dump() const
{
    std::ostringstream os;
    os << "table,scenario,state,param,term,value,provenance\n";
    auto put = [&](const char* tab, const std::string& scn, const std::string& st,
                   const std::string& par, const std::string& term, double v,
                   const std::string& prov) {
        os << tab << ',' << scn << ',' << st << ',' << par << ',' << term << ',' << v << ','
           << prov << '\n';
    };
    for (const auto& [key, d] : lsp_) {
        const auto scn = to_string(key.first), st = to_string(key.second);
        for (int i = 0; i < kNumLsp; ++i) {
            const auto& e = d.params[i];
            const auto par = to_string(static_cast<LspParam>(i));
            put("lsp", scn, st, par, "mu_c", e.mu_c, e.provenance);
            put("lsp", scn, st, par, "sigma_c", e.sigma_c, e.provenance);
            put("lsp", scn, st, par, "cd", e.corr_dist, e.provenance);
        }
    }
    for (const auto& [key, p] : smallscale_) {
        const auto scn = to_string(key.first), st = to_string(key.second);
        put("smallscale", scn, st, "", "n_clusters", p.n_clusters, p.provenance);
        put("smallscale", scn, st, "", "d_min", p.d_min, p.provenance);
        put("smallscale", scn, st, "", "d_max", p.d_max, p.provenance);
        put("smallscale", scn, st, "", "r_tau", p.r_tau, p.provenance);
    }
    for (const auto& [scn, p] : toa_) {
        put("toa", to_string(scn), "NLOS", "", "mu_lg", p.mu_lg, p.provenance);
        put("toa", to_string(scn), "NLOS", "", "sigma_lg", p.sigma_lg, p.provenance);
        put("toa", to_string(scn), "NLOS", "", "cd", p.corr_dist, p.provenance);
    }
    for (const auto& [key, p] : pathloss_) {
        const auto scn = to_string(key.first), st = to_string(key.second);
        put("pathloss", scn, st, "", "const", p.c, p.provenance);
        put("pathloss", scn, st, "", "log_d", p.log_d, p.provenance);
        put("pathloss", scn, st, "", "log_fc", p.log_fc, p.provenance);
    }
    return os.str();
}

} // namespace gscm
